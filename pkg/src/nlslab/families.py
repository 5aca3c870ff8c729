"""Reference data families shared by the solver diagnostics and experiments.

Sharp cutoffs would pollute every spectral computation with Gibbs ripples,
so all truncations here use erf shoulders (width about one unit, and never
below a few grid spacings).  The measured asymptotic exponents are
insensitive to the shoulder profile.
"""

from __future__ import annotations

import numpy as np

from .grid import PHYSICAL, Field, Grid, GridError, lp_norm, smooth_indicator


def gaussian(grid: Grid, amplitude: float = 1.0, width: float = 1.0,
             center: float = 0.0, momentum: float = 0.0) -> Field:
    """amplitude * exp(-(x - center)^2 / width) * exp(i momentum x)."""
    x = grid.x
    env = amplitude * np.exp(-((x - center) ** 2) / width)
    if momentum != 0.0:
        env = env * np.exp(1j * momentum * x)
    return Field(grid, env, PHYSICAL)


def plane_wave(grid: Grid, amplitude: complex, mode: int) -> Field:
    """A e^{ikx} with k = 2 pi mode / length exactly on the lattice."""
    k = 2.0 * np.pi * mode / grid.length
    return Field(grid, amplitude * np.exp(1j * k * grid.x), PHYSICAL)


def chirped_cutoff(grid: Grid, width: float, t0: float,
                   shoulder: float = 1.0) -> Field:
    """e^{-i x^2 / 4 t0} times a smooth cutoff of half-width ``width``.

    The quadratic phase focuses under the free flow near time t0; the
    caller must keep the chirp frequency width/2t0 under the grid Nyquist
    rate (checked by the experiment, not here).
    """
    if t0 <= 0:
        raise GridError(f"chirped_cutoff needs t0 > 0, got {t0}")
    x = grid.x
    env = smooth_indicator(x, -width, width, shoulder)
    return Field(grid, env * np.exp(-0.25j * x * x / t0), PHYSICAL)


def truncated_homogeneous(grid: Grid, a: float, cut_fraction: float = 0.4,
                          shoulder: float = 1.0) -> Field:
    """|x|^{-a} smoothly truncated at cut_fraction * length.

    The x = 0 node takes the cell average of |x|^{-a} over its own cell,
    (dx/2)^{-a} / (1 - a), so refinement deepens the resolved spike at the
    rate the continuum profile dictates instead of clipping it arbitrarily.
    """
    if not 0 < a < 1:
        raise GridError(f"homogeneity exponent a must lie in (0, 1), got {a}")
    x = grid.x
    cut = cut_fraction * grid.length
    with np.errstate(divide="ignore"):
        vals = np.abs(x) ** (-a)
    center = np.argmin(np.abs(x))
    vals[center] = (0.5 * grid.spacing) ** (-a) / (1.0 - a)
    vals = vals * smooth_indicator(x, -cut, cut, shoulder)
    return Field(grid, vals, PHYSICAL)


def random_fourier_sum(grid: Grid, rng: np.random.Generator,
                       n_modes: int = 33, base_length: float | None = None,
                       envelope_width: float | None = None,
                       scale: float = 1.0) -> Field:
    """Seeded band-limited field, reproducible across grids.

    Draws one complex Gaussian coefficient per mode 2 pi k / base_length,
    |k| <= n_modes//2, tapered by exp(-(2k/K)^2), and evaluates the sum
    pointwise under a Gaussian envelope (default width base_length/8) so
    the field decays inside the box.  The draw count depends only on
    n_modes, so the same rng state yields the same continuum field on any
    refinement or enlargement of the box.
    """
    if n_modes < 1:
        raise GridError(f"n_modes must be positive, got {n_modes}")
    base = grid.length if base_length is None else float(base_length)
    width = base / 8.0 if envelope_width is None else float(envelope_width)
    half = n_modes // 2
    k = np.arange(-half, half + 1)
    draws = rng.standard_normal(2 * k.size)
    coeffs = (draws[::2] + 1j * draws[1::2]) * np.exp(-((2.0 * k / max(half, 1)) ** 2))
    x = grid.x
    phases = np.exp(1j * np.outer(2.0 * np.pi * k / base, x))
    samples = scale * (coeffs @ phases) * np.exp(-((x / width) ** 2))
    return Field(grid, samples, PHYSICAL)


def scale_to_lp(f: Field, p: float, target: float) -> Field:
    """Rescale so lp_norm(result, p) == target (exact homogeneity)."""
    current = lp_norm(f, p)
    if current == 0.0:
        raise GridError("cannot rescale the zero field to a positive norm")
    return f * (target / current)
