"""Tight-frame digital curvelet transform via frequency wrapping.

The frequency plane is tiled by a smooth lowpass window, concentric
Cartesian coronae, and an isotropic finest (wavelet) band. Each corona is
split into angular wedges whose count doubles every other scale. Windows are
chosen so that the sum of their squares is exactly one everywhere, hence the
frame is tight: ``curvelet_adjoint(curvelet_forward(x)) == x`` and energy is
preserved.

Each wedge's frequency samples are wrapped periodically onto a small
rectangle: the rectangle is as long as the wedge's radial extent and as wide
as its widest cross-section, which makes the wrap injective. An inverse FFT
of that rectangle gives the band's spatial coefficients.

Coefficients are real. A wedge and its antipode carry conjugate information
for a real image, so only half the wedges are computed and each is stored as
two real bands (``sqrt(2) * Re`` and ``sqrt(2) * Im``), as in CurveLab.
"""
import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def _nu(x):
    x = np.clip(x, 0.0, 1.0)
    return x**4 * (35.0 - 84.0 * x + 70.0 * x**2 - 20.0 * x**3)


def _smooth_step(x):
    """cos(pi/2 * nu(x)) with exact 1 below 0 and exact 0 above 1."""
    out = np.cos(0.5 * np.pi * _nu(x))
    out[x >= 1.0] = 0.0
    out[x <= 0.0] = 1.0
    return out


def _lowpass_1d(r, a):
    """1 for r <= a, 0 for r >= 2a, smooth in between."""
    return _smooth_step(np.asarray(r / a - 1.0, dtype=np.float64))


def _angular(t, eps=0.25):
    """Angular profile; integer translates form a partition of unity in the square."""
    return _smooth_step((np.abs(t) - 0.5 + eps) / (2.0 * eps))


def angles_per_scale(scales, angles_scale2):
    """Orientation counts, coarsest first; first and last scale are isotropic."""
    counts = [1]
    for j in range(1, scales - 1):
        counts.append(angles_scale2 * 2 ** int(np.ceil((j - 1) / 2)))
    counts.append(1)
    return counts


@dataclass(frozen=True)
class _Band:
    scale: int
    angle: int
    shape: tuple
    src: np.ndarray  # flat indices into the full spectrum
    tgt: np.ndarray  # flat indices into the wrapped rectangle
    window: np.ndarray
    complex_pair: bool  # True: this wedge produces (Re, Im) real bands


class CurveletFrame:
    """Band geometry for one (image shape, scales, angles) configuration."""

    def __init__(self, shape, scales=5, angles_scale2=16):
        n1, n2 = (int(s) for s in shape)
        if scales < 2:
            raise ValueError("scales must be >= 2")
        if angles_scale2 < 4 or angles_scale2 % 4:
            raise ValueError("angles_scale2 must be a positive multiple of 4")
        if min(n1, n2) < 2**scales:
            raise ValueError(
                f"image shape {shape} too small for {scales} scales (need >= {2**scales})"
            )
        self.shape = (n1, n2)
        self.scales = int(scales)
        self.angles_scale2 = int(angles_scale2)
        self.angle_counts = angles_per_scale(self.scales, self.angles_scale2)
        self.size = n1 * n2
        self._build()

    def _build(self):
        n1, n2 = self.shape
        k1 = np.rint(np.fft.fftfreq(n1) * n1)
        k2 = np.rint(np.fft.fftfreq(n2) * n2)
        xi1 = (k1 / (n1 / 2.0))[:, None]
        xi2 = (k2 / (n2 / 2.0))[None, :]
        r1, r2 = np.abs(xi1), np.abs(xi2)
        kk1 = np.broadcast_to(k1[:, None], self.shape).astype(np.int64)
        kk2 = np.broadcast_to(k2[None, :], self.shape).astype(np.int64)

        levels = self.scales - 1
        a = [(1.0 / 3.0) * 2.0 ** (j - (levels - 1)) for j in range(levels)]
        phi = [_lowpass_1d(r1, aj) * _lowpass_1d(r2, aj) for aj in a]
        theta = np.arctan2(np.broadcast_to(xi2, self.shape), np.broadcast_to(xi1, self.shape))

        bands = []
        bands.append(self._box_band(0, 0, phi[0], kk1, kk2))
        for j in range(1, levels):
            corona = np.sqrt(np.maximum(phi[j] ** 2 - phi[j - 1] ** 2, 0.0))
            n = self.angle_counts[j]
            width = 2.0 * np.pi / n
            for l in range(n // 2):
                center = (l + 0.5) * width
                t = (theta - center) / width
                t = (t + n / 2.0) % n - n / 2.0
                wedge = corona * _angular(t)
                bands.append(self._wrapped_band(j, l, wedge, kk1, kk2, center))
        finest = np.sqrt(np.maximum(1.0 - phi[-1] ** 2, 0.0))
        bands.append(
            _Band(
                levels,
                0,
                self.shape,
                np.arange(self.size),
                np.arange(self.size),
                finest.ravel().copy(),
                False,
            )
        )
        self._bands = bands

        layout = []  # (scale, angle index, shape) for every stored real band
        for j in range(self.scales):
            members = [b for b in bands if b.scale == j]
            if members[0].complex_pair:
                layout.extend((j, b.angle, b.shape) for b in members)
                half = len(members)
                layout.extend((j, b.angle + half, b.shape) for b in members)
            else:
                layout.append((j, 0, members[0].shape))
        self.layout = layout
        sizes = [s[0] * s[1] for _, _, s in layout]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        self.coeff_count = int(self.offsets[-1])
        # storage slots for each computed band: (first real band, second or None)
        slots = []
        pos = 0
        for j in range(self.scales):
            members = [i for i, b in enumerate(bands) if b.scale == j]
            if bands[members[0]].complex_pair:
                half = len(members)
                for m, _ in enumerate(members):
                    slots.append((pos + m, pos + m + half))
                pos += 2 * half
            else:
                slots.append((pos, None))
                pos += 1
        self._slots = slots

    def _box_band(self, scale, angle, window, kk1, kk2):
        support = window > 0
        m1 = int(np.abs(kk1[support]).max())
        m2 = int(np.abs(kk2[support]).max())
        # odd box centred on DC: the wrapped spectrum stays Hermitian
        l1, l2 = 2 * m1 + 1, 2 * m2 + 1
        src = np.flatnonzero(support)
        tgt = (kk1.ravel()[src] % l1) * l2 + (kk2.ravel()[src] % l2)
        return _Band(scale, angle, (l1, l2), src, tgt, window.ravel()[src].copy(), False)

    def _wrapped_band(self, scale, angle, window, kk1, kk2, center):
        support = window > 0
        src = np.flatnonzero(support)
        a1 = kk1.ravel()[src]
        a2 = kk2.ravel()[src]
        if abs(np.cos(center)) < abs(np.sin(center)):
            radial, across, swap = a2, a1, True
        else:
            radial, across, swap = a1, a2, False
        lr = int(radial.max() - radial.min() + 1)
        order = np.argsort(radial, kind="stable")
        rs = radial[order]
        cs = across[order]
        starts = np.flatnonzero(np.r_[True, rs[1:] != rs[:-1]])
        lo = np.minimum.reduceat(cs, starts)
        hi = np.maximum.reduceat(cs, starts)
        la = int((hi - lo).max() + 1)
        tr = radial % lr
        ta = across % la
        if swap:
            shape = (la, lr)
            tgt = ta * lr + tr
        else:
            shape = (lr, la)
            tgt = tr * la + ta
        if np.unique(tgt).size != tgt.size:
            raise AssertionError("wedge wrap is not injective")
        return _Band(scale, angle, shape, src, tgt, window.ravel()[src].copy(), True)

    @property
    def band_shapes(self):
        return [s for _, _, s in self.layout]

    def band_slices(self):
        return [slice(int(a), int(b)) for a, b in zip(self.offsets[:-1], self.offsets[1:])]

    def forward(self, img):
        x = np.asarray(img, dtype=np.float64)
        if x.shape != self.shape:
            raise ValueError(f"image shape {x.shape} does not match frame shape {self.shape}")
        spec = np.fft.fft2(x).ravel()
        out = np.empty(self.coeff_count, dtype=np.float64)
        root2 = np.sqrt(2.0)
        for band, (first, second) in zip(self._bands, self._slots):
            l1, l2 = band.shape
            z = np.zeros(l1 * l2, dtype=np.complex128)
            z[band.tgt] = spec[band.src] * band.window
            c = np.fft.ifft2(z.reshape(l1, l2)) * np.sqrt(l1 * l2 / self.size)
            o = self.offsets
            if second is None:
                out[o[first] : o[first + 1]] = c.real.ravel()
            else:
                out[o[first] : o[first + 1]] = root2 * c.real.ravel()
                out[o[second] : o[second + 1]] = root2 * c.imag.ravel()
        return out

    def adjoint(self, data):
        data = np.asarray(data, dtype=np.float64)
        if data.shape != (self.coeff_count,):
            raise ValueError(
                f"coefficient vector of length {data.size} does not match frame ({self.coeff_count})"
            )
        acc = np.zeros(self.size, dtype=np.complex128)
        root2 = np.sqrt(2.0)
        o = self.offsets
        for band, (first, second) in zip(self._bands, self._slots):
            l1, l2 = band.shape
            if second is None:
                c = data[o[first] : o[first + 1]].astype(np.complex128)
                scale = 1.0
            else:
                c = data[o[first] : o[first + 1]] + 1j * data[o[second] : o[second + 1]]
                scale = root2
            z = np.fft.fft2(c.reshape(l1, l2)).ravel() / np.sqrt(self.size * l1 * l2)
            acc[band.src] += scale * band.window * z[band.tgt]
        return (np.fft.ifft2(acc.reshape(self.shape)) * self.size).real


@lru_cache(maxsize=16)
def get_frame(shape, scales=5, angles_scale2=16):
    return CurveletFrame(tuple(shape), scales, angles_scale2)


class CurveletCoeffs:
    """Flat coefficient vector plus the frame that produced it."""

    def __init__(self, data, frame):
        data = np.asarray(data, dtype=np.float64)
        if data.shape != (frame.coeff_count,):
            raise ValueError("coefficient count does not match frame geometry")
        self.data = data
        self.frame = frame

    def __len__(self):
        return self.data.size

    def bands(self):
        """Nested list ``[scale][angle] -> 2-D view``."""
        out = [[] for _ in range(self.frame.scales)]
        for (j, _, shape), sl in zip(self.frame.layout, self.frame.band_slices()):
            out[j].append(self.data[sl].reshape(shape))
        return out

    def to_bytes(self):
        """Length-prefixed dump: band count, then per band (rows, cols, doubles)."""
        parts = [struct.pack("<I", len(self.frame.layout))]
        for (_, _, shape), sl in zip(self.frame.layout, self.frame.band_slices()):
            parts.append(struct.pack("<II", *shape))
            parts.append(self.data[sl].astype("<f8").tobytes())
        return b"".join(parts)

    @staticmethod
    def from_bytes(buf, frame):
        (count,) = struct.unpack_from("<I", buf, 0)
        if count != len(frame.layout):
            raise ValueError(f"band count {count} does not match frame ({len(frame.layout)})")
        pos = 4
        chunks = []
        for _, _, shape in frame.layout:
            rows, cols = struct.unpack_from("<II", buf, pos)
            pos += 8
            if (rows, cols) != tuple(shape):
                raise ValueError(f"band shape {(rows, cols)} does not match frame {shape}")
            n = rows * cols
            chunks.append(np.frombuffer(buf, dtype="<f8", count=n, offset=pos))
            pos += 8 * n
        return CurveletCoeffs(np.concatenate(chunks), frame)


def curvelet_forward(img, scales=5, angles_scale2=16):
    x = np.asarray(img, dtype=np.float64)
    frame = get_frame(x.shape, scales, angles_scale2)
    return CurveletCoeffs(frame.forward(x), frame)


def curvelet_adjoint(coeffs):
    return coeffs.frame.adjoint(coeffs.data)
