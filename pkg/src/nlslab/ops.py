"""Free Schrödinger group and its chirp/dilation factorization.

Under the transform convention of :mod:`nlslab.grid` the group is the
frequency multiplier U(t) = exp(-i t xi^2).  Completing the square in the
kernel form gives

    U(t)f(x) = (4 pi i t)^{-1/2} int exp(i (x - y)^2 / 4t) f(y) dy
             = (4 pi i t)^{-1/2} e^{i x^2 / 4t} (F M_t f)(x / 2t),

i.e. the group factors into chirp multipliers M_t = e^{i x^2 / 4t}, one
Fourier transform, and a real-argument dilation by 1/2t.  The dilated
points x_j / 2t fall off the frequency lattice, so the factorized path
evaluates F M_t f there with a chirp-z transform.  (4 pi i t)^{-1/2} is the
principal branch; the same branch is correct for both signs of t.

The twisted cubic nonlinearity U(-t)[u1 conj(u2) u3] has an equivalent
convolution form

    (c / |t|) M_t^{-1} [ (M_t U(-t)u1) * R conj(M_t U(-t)u2) * (M_t U(-t)u3) ]

with R the reflection about x = 0 and c an absolute constant (1/4 pi for
this transform convention; the 1/|t| scale is sign-free because the
conjugated factor contributes |4 pi i t|^{-1} rather than (4 pi i t)^{-1}).
c is
calibrated once per process on a Gaussian triple at t = 1 against the
direct form and then frozen; the calibration residual is kept so a
convention regression cannot pass silently.

Chirp factors e^{i x^2 / 4t} steepen as t -> 0 and alias once their local
frequency x / 2t passes the grid Nyquist rate.  Factorized evaluations
enforce the resolution floor t_chirp_min; the plain multiplier path has no
such restriction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import czt

from .grid import (
    FREQUENCY,
    PHYSICAL,
    Field,
    Grid,
    GridError,
    _check_same_layout,
    _require,
    convolve,
    dealiased_product,
    lp_norm,
    make_grid,
)


class UnresolvedChirpWarning(UserWarning):
    """A chirp multiplier was requested below the grid's resolution floor."""


def propagate(f: Field, t: float) -> Field:
    """Apply the free group U(t), any sign of t, as the exact multiplier."""
    _require(f, PHYSICAL, "propagate")
    if t == 0.0:
        return f.copy()
    xi = f.grid.frequencies_fft
    out = np.fft.ifft(np.exp(-1j * t * xi * xi) * np.fft.fft(f.samples))
    return Field(f.grid, out, PHYSICAL)


def conjugate(f: Field) -> Field:
    return Field(f.grid, np.conj(f.samples), f.representation)


def reflect(f: Field) -> Field:
    """Samples of x -> f(-x) on the periodic lattice (works in either
    representation; the unpaired Nyquist node is its own mirror)."""
    return Field(f.grid, np.roll(f.samples[::-1], 1), f.representation)


def t_chirp_min(grid: Grid) -> float:
    """Smallest |t| whose chirp e^{i x^2/4t} the grid resolves.

    The chirp's instantaneous frequency at the box edge is x_max / 2|t|;
    requiring it to stay below 0.8 of the Nyquist rate pi / spacing gives
    |t| >= 0.625 x_max spacing / pi.
    """
    x_max = 0.5 * grid.length
    return 0.625 * x_max * grid.spacing / np.pi


def chirp(f: Field, t: float, sign: int = 1) -> Field:
    """Multiply by e^{sign * i x^2 / 4t}; sign = -1 inverts exactly."""
    _require(f, PHYSICAL, "chirp")
    if t == 0.0:
        raise GridError("chirp is undefined at t = 0")
    if sign not in (1, -1):
        raise GridError(f"chirp sign must be +1 or -1, got {sign}")
    if abs(t) < t_chirp_min(f.grid):
        warnings.warn(
            f"chirp at |t| = {abs(t):.3g} below the resolution floor "
            f"{t_chirp_min(f.grid):.3g} for this grid",
            UnresolvedChirpWarning,
            stacklevel=2,
        )
    x = f.grid.x
    return Field(f.grid, np.exp(sign * 0.25j * x * x / t) * f.samples, PHYSICAL)


def _check_chirp_resolved(grid: Grid, t: float, op: str) -> None:
    if t == 0.0:
        raise GridError(f"{op} is undefined at t = 0")
    floor = t_chirp_min(grid)
    if abs(t) < floor:
        raise GridError(
            f"{op} at |t| = {abs(t):.3g} is below the chirp resolution "
            f"floor {floor:.3g}; use the direct multiplier path instead"
        )


def _czt_nodes_eval(samples: np.ndarray, y0: float, dy: float,
                    eta0: float, deta: float, m: int, sign: int) -> np.ndarray:
    """sum_n samples[n] e^{sign i y_n eta_k} for y_n = y0 + n dy and
    eta_k = eta0 + k deta, k = 0..m-1, via one chirp-z transform."""
    phase = 1j * sign
    n = samples.size
    inner = samples * np.exp(phase * dy * eta0 * np.arange(n))
    out = czt(inner, m, np.exp(phase * dy * deta))
    etas = eta0 + deta * np.arange(m)
    return out * np.exp(phase * y0 * etas)


def factorized_propagate(f: Field, t: float) -> Field:
    """U(t)f through the chirp / transform / dilation chain.

    Agrees with :func:`propagate` on chirp-resolved t; the transform factor
    is evaluated at the off-lattice points x_j / 2t by chirp-z transform
    with trapezoidal (endpoint-periodic) quadrature weights dx.
    """
    _require(f, PHYSICAL, "factorized_propagate")
    _check_chirp_resolved(f.grid, t, "factorized_propagate")
    g = f.grid
    x = g.x
    mt = np.exp(0.25j * x * x / t) * f.samples
    eta0 = x[0] / (2.0 * t)
    deta = g.spacing / (2.0 * t)
    fmt = g.spacing * _czt_nodes_eval(mt, x[0], g.spacing, eta0, deta,
                                      g.n_points, -1)
    pref = (4.0j * np.pi * t) ** -0.5
    return Field(g, pref * np.exp(0.25j * x * x / t) * fmt, PHYSICAL)


# -- twisted cubic nonlinearity ------------------------------------------------

@dataclass(frozen=True)
class FactorizationCalibration:
    """The absolute constant of the convolution form, fixed empirically."""

    c_factor: complex
    calibration_residual: float


_calibration_cache: FactorizationCalibration | None = None


def _factorized_core(u1: Field, u2: Field, u3: Field, t: float) -> Field:
    """Constant-free right-hand side M_t^{-1}[w1 * R conj(w2) * w3]."""
    w = [chirp(propagate(u, -t), t, 1) for u in (u1, u2, u3)]
    core = convolve(convolve(w[0], reflect(conjugate(w[1]))), w[2])
    return chirp(core, t, -1)


def _direct_twisted(u1: Field, u2: Field, u3: Field, t: float) -> Field:
    return propagate(dealiased_product(u1, conjugate(u2), u3), -t)


def factorization_calibration() -> FactorizationCalibration:
    """Calibrate c on a Gaussian triple at t = 1; cached for the process."""
    global _calibration_cache
    if _calibration_cache is not None:
        return _calibration_cache
    g = make_grid(2048, 40.0)
    x = g.x
    data = [
        Field(g, np.exp(-x * x), PHYSICAL),
        Field(g, 0.7 * np.exp(-0.5 * x * x), PHYSICAL),
        Field(g, np.exp(-((x - 1.0) ** 2) / 3.0), PHYSICAL),
    ]
    t = 1.0
    u = [propagate(f, t) for f in data]
    direct = _direct_twisted(u[0], u[1], u[2], t)
    base = _factorized_core(u[0], u[1], u[2], t).samples / t
    c = complex(np.vdot(base, direct.samples) / np.vdot(base, base))
    residual = float(
        np.linalg.norm(c * base - direct.samples)
        / np.linalg.norm(direct.samples)
    )
    if residual > 1e-8:
        raise GridError(
            f"factorization calibration residual {residual:.3g} exceeds 1e-8; "
            "transform conventions are inconsistent"
        )
    if c == 0:
        raise GridError("factorization calibration produced c = 0")
    _calibration_cache = FactorizationCalibration(c, residual)
    return _calibration_cache


def twisted_cubic(u1: Field, u2: Field, u3: Field, t: float,
                  mode: str = "direct") -> Field:
    """U(-t)[u1 conj(u2) u3] for snapshots u_j at common time t.

    ``direct`` forms the dealiased pointwise product and applies U(-t);
    it is regular at t = 0.  ``factorized`` evaluates the convolution form
    with the calibrated constant and requires chirp-resolved t != 0.
    """
    _check_same_layout(u1, u2)
    _check_same_layout(u1, u3)
    _require(u1, PHYSICAL, "twisted_cubic")
    if mode == "direct":
        return _direct_twisted(u1, u2, u3, t)
    if mode != "factorized":
        raise GridError(f"unknown twisted_cubic mode {mode!r}")
    _check_chirp_resolved(u1.grid, t, "twisted_cubic[factorized]")
    c = factorization_calibration().c_factor
    core = _factorized_core(u1, u2, u3, t)
    return Field(u1.grid, (c / abs(t)) * core.samples, PHYSICAL)


def modulus_identity_pair(f: Field, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of |U(t)f(x)| = sqrt(pi/|t|) |U(1/4t)(F^{-1} conj f)(x/2t)|.

    The left side is the plain multiplier route.  The right side evaluates
    the quarter-time evolution of F^{-1} conj(f) at the dilated points
    x_j / 2t by chirp-z quadrature, so the two sides share no propagator
    code path.  Returns (lhs, rhs) as modulus samples on the grid.
    """
    _require(f, PHYSICAL, "modulus_identity_pair")
    _check_chirp_resolved(f.grid, t, "modulus_identity_pair")
    lhs = np.abs(propagate(f, t).samples)
    g = f.grid
    x = g.x
    # U(1/4t)(F^{-1} conj f)(eta) = (2 pi)^{-1} int e^{i eta xi - i xi^2/4t}
    # conj(f)(xi) d xi, quadratured over f's own lattice as the xi domain.
    h = np.exp(-0.25j * x * x / t) * np.conj(f.samples)
    eta0 = x[0] / (2.0 * t)
    deta = g.spacing / (2.0 * t)
    vals = (g.spacing / (2.0 * np.pi)) * _czt_nodes_eval(
        h, x[0], g.spacing, eta0, deta, g.n_points, 1)
    rhs = np.sqrt(np.pi / abs(t)) * np.abs(vals)
    return lhs, rhs
