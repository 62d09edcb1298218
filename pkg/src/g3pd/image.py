"""Grayscale image I/O, mirror padding and mask helpers.

Images are plain 2-D ``float64`` numpy arrays (row = first axis), masks are
2-D ``uint8`` arrays holding only 0 and 1.
"""
from pathlib import Path

import numpy as np


class ImageFormatError(ValueError):
    """Raised when an image file cannot be read as 8-bit grayscale."""


def as_image(data, name="image"):
    """Validate and return ``data`` as a finite 2-D float64 array."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_mask(data, name="mask"):
    arr = np.asarray(data)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.dtype == bool:
        return arr.astype(np.uint8)
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError(f"{name} must only hold 0 and 1")
    return arr.astype(np.uint8)


def _read_token(buf, pos):
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c == b"#":
            while pos < n and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos : pos + 1].isspace() and buf[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ImageFormatError("truncated PGM header")
    return buf[start:pos], pos


def read_pgm(path):
    """Read a binary (P5) 8-bit PGM file and return the raw ``uint8`` array."""
    buf = Path(path).read_bytes()
    magic = buf[:2]
    if magic != b"P5":
        if magic in (b"P6", b"P3"):
            raise ImageFormatError(f"{path}: colour PPM ({magic.decode()}) is not single-channel")
        if magic == b"P2":
            raise ImageFormatError(f"{path}: ASCII PGM (P2) is not supported, expected binary P5")
        raise ImageFormatError(f"{path}: bad magic {magic!r}, expected P5")
    pos = 2
    fields = []
    for _ in range(3):
        tok, pos = _read_token(buf, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise ImageFormatError(f"{path}: malformed header field {tok!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"{path}: maxval {maxval} is not 8-bit (expected 255)")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    raster = buf[pos : pos + width * height]
    if len(raster) != width * height:
        raise ImageFormatError(
            f"{path}: raster has {len(raster)} bytes, header promises {width * height}"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, data):
    data = np.asarray(data, dtype=np.uint8)
    h, w = data.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(data).tobytes())


def _read_png(path):
    from PIL import Image

    with Image.open(path) as im:
        if im.mode != "L":
            raise ImageFormatError(
                f"{path}: PNG mode {im.mode!r} is not 8-bit single-channel grayscale"
            )
        return np.asarray(im, dtype=np.uint8).copy()


def load_grayscale(path):
    """Load an 8-bit grayscale PGM (or PNG) as floats in [0, 1]."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head.startswith(b"\x89PNG"):
        raw = _read_png(path)
    else:
        raw = read_pgm(path)
    return raw.astype(np.float64) / 255.0


def to_bytes(img):
    """Quantize [0, 1] floats to bytes, clamping and rounding half away from zero."""
    scaled = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0) * 255.0
    return np.floor(scaled + 0.5).astype(np.uint8)


def save_grayscale(img, path):
    write_pgm(path, to_bytes(as_image(img)))


def load_mask(path):
    raw = load_grayscale(path)
    return (raw >= 0.5).astype(np.uint8)


def save_mask(mask, path):
    write_pgm(path, as_mask(mask) * np.uint8(255))


def mirror_pad(img, margin):
    """Reflect ``margin`` pixels about each edge without repeating the edge pixel."""
    img = as_image(img)
    margin = int(margin)
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    if margin >= min(img.shape):
        raise ValueError(f"margin {margin} too large for image of shape {img.shape}")
    if margin == 0:
        return img.copy()
    return np.pad(img, margin, mode="reflect")


def crop(img, margin):
    img = np.asarray(img)
    margin = int(margin)
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    if 2 * margin >= min(img.shape):
        raise ValueError(f"cannot crop {margin} pixels from each side of shape {img.shape}")
    if margin == 0:
        return img.copy()
    return img[margin:-margin, margin:-margin].copy()
