"""Strang split-step integrator used as an independent cross-check.

The cubic flow splits into two pieces that are each exact: the dispersion
half-step is a Fourier multiplier e^{-i (dt/2) xi^2}, and the nonlinear
step is the pointwise phase rotation u -> u e^{i |u|^2 dt} (the modulus is
conserved along that flow, so the rotation angle is constant in time).
Composing half/full/half gives a second-order one-step map.

This module deliberately builds its dispersion multiplier from the raw FFT
rather than sharing the Duhamel-side operator code, so agreement between
the two solvers checks the analysis pipeline rather than a common routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import PHYSICAL, Field, GridError, _require, lp_norm
from .spaces import PhysicalTrajectory, SpaceError, TimeGrid

_REL_TOL = 1e-9


@dataclass(frozen=True)
class SplitStepParams:
    """dt: base step size; horizon_T: final time; order: scheme name.

    horizon_T must be an integer number of steps (within roundoff); only
    the Strang scheme is implemented.
    """

    dt: float
    horizon_T: float
    order: str = "strang"

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise SpaceError(f"dt must be positive, got {self.dt}")
        if not self.horizon_T > 0:
            raise SpaceError(f"horizon_T must be positive, got {self.horizon_T}")
        if self.dt > self.horizon_T * (1 + _REL_TOL):
            raise SpaceError(
                f"dt={self.dt} exceeds the horizon {self.horizon_T}")
        steps = self.horizon_T / self.dt
        if abs(steps - round(steps)) > _REL_TOL * max(1.0, steps):
            raise SpaceError(
                f"horizon_T/dt = {steps} is not an integer step count")
        if self.order != "strang":
            raise SpaceError(f"unknown scheme {self.order!r}")

    @property
    def n_steps(self) -> int:
        return round(self.horizon_T / self.dt)


def _strang_steps(u: np.ndarray, xi2: np.ndarray, h: float, n_sub: int) -> np.ndarray:
    half = np.exp(-0.5j * h * xi2)
    for _ in range(n_sub):
        u = np.fft.ifft(half * np.fft.fft(u))
        u = u * np.exp(1j * h * np.abs(u) ** 2)
        u = np.fft.ifft(half * np.fft.fft(u))
    return u


def splitstep_solve(phi: Field, params: SplitStepParams,
                    sample_times: np.ndarray | None = None) -> PhysicalTrajectory:
    """Evolve phi and sample the solution at the requested times.

    Default sampling is every step.  With explicit sample_times each
    segment is covered by ceil(segment/dt) equal sub-steps, so samples
    land exactly on the requested times with steps never longer than dt.
    The result carries no analytic derivative payload.
    """
    _require(phi, PHYSICAL, "splitstep_solve")
    grid = phi.grid
    if sample_times is None:
        k = params.n_steps
        times = np.linspace(0.0, params.horizon_T, k + 1)
    else:
        times = np.asarray(sample_times, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise SpaceError("sample_times must hold at least two times")
        if times[0] != 0.0:
            raise SpaceError("sample_times must start at 0")
        if np.any(np.diff(times) <= 0):
            raise SpaceError("sample_times must increase strictly")
        if times[-1] > params.horizon_T * (1 + _REL_TOL):
            raise SpaceError(
                f"last sample {times[-1]} exceeds horizon {params.horizon_T}")
    xi2 = grid.frequencies_fft ** 2
    u = phi.samples.copy()
    out = [Field(grid, u, PHYSICAL)]
    for a, b in zip(times[:-1], times[1:]):
        seg = float(b - a)
        n_sub = max(1, math.ceil(seg / params.dt - _REL_TOL))
        u = _strang_steps(u, xi2, seg / n_sub, n_sub)
        out.append(Field(grid, u, PHYSICAL))
    tg = TimeGrid(float(times[-1]), times)
    return PhysicalTrajectory(tg, tuple(out))


def _values_at(traj: PhysicalTrajectory, t: float) -> np.ndarray:
    """Sample (exactly at a node, else linear in t between nodes)."""
    nodes = traj.timegrid.nodes
    tol = 1e-12 * max(1.0, nodes[-1])
    hits = np.nonzero(np.abs(nodes - t) <= tol)[0]
    if hits.size:
        return traj.u_samples[hits[0]].samples
    if t < nodes[0] - tol or t > nodes[-1] + tol:
        raise SpaceError(f"time {t} outside the sampled range")
    i = int(np.searchsorted(nodes, t)) - 1
    w = (t - nodes[i]) / (nodes[i + 1] - nodes[i])
    return (1 - w) * traj.u_samples[i].samples + w * traj.u_samples[i + 1].samples


def compare(a: PhysicalTrajectory, b: PhysicalTrajectory,
            norms: tuple[float, ...] = (2.0,)) -> dict[float, dict[str, float]]:
    """Per-norm sup and final-time distances, sampled at a's nodes.

    b is evaluated at each node of a (exact match preferred, linear
    interpolation otherwise, which is fine for second-order comparisons).
    """
    ga = a.u_samples[0].grid
    gb = b.u_samples[0].grid
    if ga != gb:
        raise GridError("compare needs both trajectories on the same grid")
    report: dict[float, dict[str, float]] = {}
    dists = []
    for m, t in enumerate(a.timegrid.nodes):
        diff = Field(ga, a.u_samples[m].samples - _values_at(b, float(t)), PHYSICAL)
        dists.append(diff)
    for p in norms:
        vals = [lp_norm(d, p) for d in dists]
        report[p] = {"sup": max(vals), "final": vals[-1]}
    return report
