import numpy as np
import pytest

from g3pd.image import (
    ImageFormatError,
    as_mask,
    crop,
    load_grayscale,
    load_mask,
    mirror_pad,
    read_pgm,
    save_grayscale,
    save_mask,
    to_bytes,
    write_pgm,
)


def test_pgm_round_trip_keeps_orientation(tmp_path, rng):
    # FVC2000 DB1 size: 388 wide, 374 tall
    raw = rng.integers(0, 256, size=(374, 388), dtype=np.uint8)
    write_pgm(tmp_path / "a.pgm", raw)
    img = load_grayscale(tmp_path / "a.pgm")
    assert img.shape == (374, 388)
    np.testing.assert_array_equal(to_bytes(img), raw)
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5\n388 374\n255\n")


def test_pgm_header_comments(tmp_path):
    (tmp_path / "c.pgm").write_bytes(b"P5 # made by hand\n2 # width\n1\n255\n\x00\xff")
    np.testing.assert_array_equal(read_pgm(tmp_path / "c.pgm"), [[0, 255]])


@pytest.mark.parametrize(
    "payload,msg",
    [
        (b"P6\n1 1\n255\n\x00\x00\x00", "single-channel"),
        (b"P2\n1 1\n255\n0\n", "ASCII"),
        (b"P5\n2 2\n65535\n" + b"\x00" * 8, "8-bit"),
        (b"P5\n4 4\n255\n\x00", "header promises"),
    ],
)
def test_pgm_rejections(tmp_path, payload, msg):
    (tmp_path / "x.pgm").write_bytes(payload)
    with pytest.raises(ImageFormatError, match=msg):
        read_pgm(tmp_path / "x.pgm")


def test_png_grayscale_and_rgb(tmp_path):
    Image = pytest.importorskip("PIL.Image")
    Image.fromarray(np.array([[0, 128]], np.uint8), mode="L").save(tmp_path / "g.png")
    np.testing.assert_allclose(load_grayscale(tmp_path / "g.png"), [[0.0, 128 / 255]])
    Image.fromarray(np.zeros((2, 2, 3), np.uint8)).save(tmp_path / "c.png")
    with pytest.raises(ImageFormatError):
        load_grayscale(tmp_path / "c.png")


def test_quantization_rounds_and_clamps():
    np.testing.assert_array_equal(to_bytes(np.array([[-0.2, 0.5, 1.7, 1 / 510]])), [[0, 128, 255, 1]])


def test_mask_round_trip(tmp_path):
    m = np.array([[0, 1], [1, 0]], np.uint8)
    save_mask(m, tmp_path / "m.pgm")
    assert set(np.unique(read_pgm(tmp_path / "m.pgm"))) == {0, 255}
    np.testing.assert_array_equal(load_mask(tmp_path / "m.pgm"), m)
    with pytest.raises(ValueError):
        as_mask(np.array([[0, 2]]))


def test_mirror_pad_excludes_edge_and_crop_inverts(rng):
    x = rng.random((20, 30))
    p = mirror_pad(x, 15)
    assert p.shape == (50, 60)
    np.testing.assert_array_equal(p[14, 15:-15], x[1])  # reflection skips the edge row
    np.testing.assert_array_equal(crop(p, 15), x)
    with pytest.raises(ValueError):
        mirror_pad(np.zeros((10, 10)), 10)


def test_save_grayscale_round_trip(tmp_path):
    x = np.linspace(0, 1, 64).reshape(8, 8)
    save_grayscale(x, tmp_path / "r.pgm")
    assert np.max(np.abs(load_grayscale(tmp_path / "r.pgm") - x)) <= 0.5 / 255 + 1e-12
