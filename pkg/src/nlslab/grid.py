"""Periodic Fourier grid and sampled fields.

All computations live on a uniform grid of ``n`` points over ``[-L/2, L/2)``
with the continuum Fourier convention

.. math::

    \\hat f(\\xi) = \\int e^{-i x \\xi} f(x)\\, dx, \\qquad
    f(x) = \\frac{1}{2\\pi} \\int e^{i x \\xi} \\hat f(\\xi)\\, d\\xi,

so Plancherel reads ``||fhat||_2^2 = 2 pi ||f||_2^2`` and convolution maps to
a plain product of transforms (no stray 2 pi).  Discretely the forward map is
``spacing * (-1)^k * FFT`` -- the alternating sign is the phase of the
``-L/2`` domain offset -- and the inverse is its exact inverse, so round
trips are lossless to rounding.

Fields carry a representation tag.  Physical-space samples sit on ``x_j =
-L/2 + j dx``; frequency-space samples sit on ``xi_k = 2 pi k / L`` stored in
increasing order of ``k in [-n/2, n/2)``.

Pointwise products of band-limited samples alias; they are formed on a
spectrally zero-padded fine grid (factor 2 for quadratic, 3 for cubic
expressions) and projected back.  Convolutions are products of spectra and
cannot alias, so they take the plain spectral path.
"""

from __future__ import annotations

import csv
import io
import struct
from dataclasses import dataclass

import numpy as np

PHYSICAL = "physical"
FREQUENCY = "frequency"

_HEADER = struct.Struct("<QdB")  # n_points, length, representation tag


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid; constructed through :func:`make_grid`."""

    n_points: int
    length: float

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def x(self) -> np.ndarray:
        """Physical nodes -L/2 + j dx, j = 0..n-1."""
        return -0.5 * self.length + self.spacing * np.arange(self.n_points)

    @property
    def frequencies(self) -> np.ndarray:
        """xi_k = 2 pi k / length for k = -n/2 .. n/2 - 1, increasing."""
        k = np.arange(-self.n_points // 2, self.n_points // 2)
        return 2.0 * np.pi * k / self.length

    @property
    def wavenumbers_fft(self) -> np.ndarray:
        """Integer mode numbers in FFT storage order."""
        return np.fft.fftfreq(self.n_points, d=1.0 / self.n_points).astype(int)

    @property
    def frequencies_fft(self) -> np.ndarray:
        """xi_k in FFT storage order (matches numpy fft output)."""
        return 2.0 * np.pi * self.wavenumbers_fft / self.length

    @property
    def offset_phase(self) -> np.ndarray:
        """(-1)^k in FFT order: transform phase of the -L/2 domain offset."""
        return np.where(self.wavenumbers_fft % 2 == 0, 1.0, -1.0)

    @property
    def nyquist(self) -> float:
        return np.pi / self.spacing


def make_grid(n_points: int, length: float) -> Grid:
    if n_points < 16 or (n_points & (n_points - 1)) != 0:
        raise GridError(f"n_points must be a power of two >= 16, got {n_points}")
    if not (length > 0.0) or not np.isfinite(length):
        raise GridError(f"length must be positive and finite, got {length}")
    return Grid(int(n_points), float(length))


@dataclass
class Field:
    """Complex samples on a grid, tagged physical or frequency."""

    grid: Grid
    samples: np.ndarray
    representation: str = PHYSICAL

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.shape != (self.grid.n_points,):
            raise GridError(
                f"samples shape {self.samples.shape} does not match grid "
                f"n_points {self.grid.n_points}"
            )
        if self.representation not in (PHYSICAL, FREQUENCY):
            raise GridError(f"unknown representation {self.representation!r}")

    def copy(self) -> "Field":
        return Field(self.grid, self.samples.copy(), self.representation)

    @property
    def coordinates(self) -> np.ndarray:
        return self.grid.x if self.representation == PHYSICAL else self.grid.frequencies

    def __add__(self, other: "Field") -> "Field":
        _check_same_layout(self, other)
        return Field(self.grid, self.samples + other.samples, self.representation)

    def __sub__(self, other: "Field") -> "Field":
        _check_same_layout(self, other)
        return Field(self.grid, self.samples - other.samples, self.representation)

    def __mul__(self, scalar: complex) -> "Field":
        return Field(self.grid, self.samples * scalar, self.representation)

    __rmul__ = __mul__


def _check_same_layout(a: Field, b: Field) -> None:
    if a.grid != b.grid:
        raise GridError("fields live on different grids")
    if a.representation != b.representation:
        raise GridError(
            f"representation mismatch: {a.representation} vs {b.representation}"
        )


def _require(field: Field, representation: str, op: str) -> None:
    if field.representation != representation:
        raise GridError(f"{op} expects a {representation}-space field, "
                        f"got {field.representation}")


# -- transforms ---------------------------------------------------------------

def forward_transform(field: Field) -> Field:
    """Physical -> frequency, approximating the continuum integral.

    Output samples are ordered like ``grid.frequencies`` (increasing k).
    """
    _require(field, PHYSICAL, "forward_transform")
    g = field.grid
    spec = g.spacing * g.offset_phase * np.fft.fft(field.samples)
    return Field(g, np.fft.fftshift(spec), FREQUENCY)


def inverse_transform(field: Field) -> Field:
    """Frequency -> physical; exact inverse of :func:`forward_transform`."""
    _require(field, FREQUENCY, "inverse_transform")
    g = field.grid
    spec = np.fft.ifftshift(field.samples)
    return Field(g, np.fft.ifft(spec * g.offset_phase) / g.spacing, PHYSICAL)


def spectrum_fft_order(field: Field) -> np.ndarray:
    """Continuum-normalized spectrum of a physical field, FFT storage order."""
    _require(field, PHYSICAL, "spectrum_fft_order")
    g = field.grid
    return g.spacing * g.offset_phase * np.fft.fft(field.samples)


def field_from_spectrum_fft_order(grid: Grid, spec: np.ndarray) -> Field:
    return Field(grid, np.fft.ifft(spec * grid.offset_phase) / grid.spacing, PHYSICAL)


# -- norms --------------------------------------------------------------------

def lp_norm(field: Field, p: float) -> float:
    """Continuum-weighted L^p norm; quadrature weight follows representation.

    Physical fields use dx, frequency fields use dxi = 2 pi / length (so the
    grid Plancherel identity ||fhat||_2^2 = 2 pi ||f||_2^2 is exact).
    """
    if p < 1.0:
        raise GridError(f"lp_norm requires p >= 1, got {p}")
    mags = np.abs(field.samples)
    if np.isinf(p):
        return float(mags.max())
    if field.representation == PHYSICAL:
        weight = field.grid.spacing
    else:
        weight = 2.0 * np.pi / field.grid.length
    return float((weight * np.sum(mags ** p)) ** (1.0 / p))


# -- convolution and dealiased products ---------------------------------------

def convolve(f: Field, g: Field) -> Field:
    """Continuum convolution (f * g)(x) = int f(x - y) g(y) dy.

    Computed as a product of continuum-normalized spectra; exact for the
    periodized samples (products of band-limited spectra stay in band).
    """
    _check_same_layout(f, g)
    _require(f, PHYSICAL, "convolve")
    spec = spectrum_fft_order(f) * spectrum_fft_order(g)
    # the squared offset phases cancel, so the inverse map's single phase
    # must be applied explicitly
    gr = f.grid
    return Field(gr, np.fft.ifft(spec * gr.offset_phase) / gr.spacing, PHYSICAL)


def _pad_spectrum(spec: np.ndarray, n: int, m: int) -> np.ndarray:
    out = np.zeros(m, dtype=np.complex128)
    half = n // 2
    out[:half] = spec[:half]
    out[m - half + 1:] = spec[half + 1:]
    # unpaired Nyquist bin: split across +/- n/2 to keep real fields real
    out[half] = 0.5 * spec[half]
    out[m - half] = 0.5 * spec[half]
    return out


def _truncate_spectrum(spec: np.ndarray, m: int, n: int) -> np.ndarray:
    out = np.empty(n, dtype=np.complex128)
    half = n // 2
    out[:half] = spec[:half]
    out[half + 1:] = spec[m - half + 1:]
    out[half] = spec[half] + spec[m - half]
    return out


def dealiased_product(*fields: Field) -> Field:
    """Pointwise product of physical fields on a zero-padded fine grid.

    The padding factor equals the number of factors (2 for quadratic, 3 for
    cubic products), so the product is formed alias-free and then projected
    back onto the band of the original grid.
    """
    if len(fields) < 2:
        raise GridError("dealiased_product needs at least two factors")
    first = fields[0]
    for f in fields[1:]:
        _check_same_layout(first, f)
    _require(first, PHYSICAL, "dealiased_product")
    n = first.grid.n_points
    m = len(fields) * n
    fine = np.ones(m, dtype=np.complex128)
    for f in fields:
        fine *= np.fft.ifft(_pad_spectrum(np.fft.fft(f.samples), n, m)) * (m / n)
    coarse = _truncate_spectrum(np.fft.fft(fine), m, n) * (n / m)
    return Field(first.grid, np.fft.ifft(coarse), PHYSICAL)


def smooth_indicator(x: np.ndarray, lo: float, hi: float, shoulder: float) -> np.ndarray:
    """Erf-shouldered version of the indicator of [lo, hi].

    ``shoulder`` is the transition scale; keep it at a few grid spacings so
    the cutoff stays resolved.
    """
    from scipy.special import erf

    if not hi > lo:
        raise GridError("smooth_indicator needs hi > lo")
    if not shoulder > 0:
        raise GridError("smooth_indicator needs a positive shoulder scale")
    return 0.5 * (erf((x - lo) / shoulder) - erf((x - hi) / shoulder))


# -- serialization ------------------------------------------------------------

def field_to_bytes(field: Field) -> bytes:
    tag = 0 if field.representation == PHYSICAL else 1
    buf = io.BytesIO()
    buf.write(_HEADER.pack(field.grid.n_points, field.grid.length, tag))
    inter = np.empty(2 * field.grid.n_points, dtype="<f8")
    inter[0::2] = field.samples.real
    inter[1::2] = field.samples.imag
    buf.write(inter.tobytes())
    return buf.getvalue()


def field_from_bytes(data: bytes) -> Field:
    if len(data) < _HEADER.size:
        raise GridError("field blob too short for header")
    n_points, length, tag = _HEADER.unpack_from(data, 0)
    if tag not in (0, 1):
        raise GridError(f"unknown representation tag {tag}")
    expected = _HEADER.size + 16 * n_points
    if len(data) != expected:
        raise GridError(f"field blob length {len(data)} != expected {expected}")
    inter = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    samples = inter[0::2] + 1j * inter[1::2]
    return Field(make_grid(n_points, length), samples,
                 PHYSICAL if tag == 0 else FREQUENCY)


def write_field(field: Field, path) -> None:
    with open(path, "wb") as fh:
        fh.write(field_to_bytes(field))


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        return field_from_bytes(fh.read())


def write_field_csv(field: Field, path) -> None:
    """Debug form: rows of coordinate, re, im (header ``x,re,im``)."""
    coords = field.coordinates
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "re", "im"])
        for xj, sj in zip(coords, field.samples):
            writer.writerow([repr(float(xj)), repr(float(sj.real)), repr(float(sj.imag))])


def read_field_csv(path, grid: Grid, representation: str = PHYSICAL) -> Field:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x", "re", "im"]:
            raise GridError(f"unexpected field CSV header {header}")
        for row in reader:
            rows.append(complex(float(row[1]), float(row[2])))
    return Field(grid, np.asarray(rows), representation)
