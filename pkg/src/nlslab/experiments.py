"""Configuration-driven experiment runners with CSV/JSON persistence.

Every runner is a pure function of its config: records come back in a
deterministic order, randomness is seeded per parameter tuple, and float
formatting uses repr, so identical configs produce byte-identical CSV
files regardless of thread count.  Pass/fail is always judged against the
thresholds carried in the config, never against numbers baked in here.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import __version__
from .duhamel import SolverParams, picard_solve, tmax_scan
from .families import (chirped_cutoff, gaussian, random_fourier_sum,
                       scale_to_lp, truncated_homogeneous)
from .grid import (PHYSICAL, Field, Grid, forward_transform, lp_norm,
                   make_grid)
from .ops import propagate
from .spaces import (PhysicalTrajectory, SpaceError, StrichartzSpec, TimeGrid,
                     sobolev_norm, weighted_spacetime_norm)

CSV_HEADER = ("experiment", "param_json", "value_name", "value", "drift_pct",
              "fit_exponent", "fit_halfwidth", "pass")

EXPERIMENTS = ("strichartz", "wellposed", "illposed-chirp", "homogeneous",
               "strichartz-reg", "tmax-scan")


class ConfigError(ValueError):
    """Rejected experiment configuration."""


_DEFAULT_THRESHOLDS = {
    "strichartz": {
        "drift_max_pct": 2.0,
        "lambda_spread_max_pct": 2.0,
    },
    "wellposed": {
        "contraction_max": 0.5,
        "sobolev_drift_max_pct": 5.0,
        "lipschitz_max": 100.0,
    },
    "illposed-chirp": {
        "exponent_tol": 0.1,
    },
    "homogeneous": {
        "membership_drift_max_pct": 2.0,
        "smoothing_drift_max_pct": 5.0,
        "data_growth_min_pct": 2.0,
        "singularity_growth_min_pct": 2.0,
        "farfield_drift_max_pct": 2.0,
    },
    "strichartz-reg": {
        "drift_max_pct": 2.0,
    },
    "tmax-scan": {
        "slope_rel_tol": 0.2,
        "formula_rel_tol": 1e-12,
    },
}

# per-experiment field overrides applied on top of the dataclass defaults
_DEFAULT_OVERRIDES = {
    "strichartz": {"p": 2.0, "grid_sizes": (1024, 2048), "length": 80.0,
                   "time_grid_sizes": (48, 96)},
    "wellposed": {"p": 2.5, "s": -0.3, "grid_sizes": (1024, 2048),
                  "time_grid_sizes": (32, 64), "length": 80.0},
    "illposed-chirp": {"p": 3.0, "s": 0.0, "t0": 0.25,
                       "N_values": (8.0, 16.0, 32.0, 64.0),
                       "grid_sizes": (32768, 65536), "length": 320.0},
    "homogeneous": {"p": 2.5, "s": 0.0, "a": 0.45, "t0": 1e-6, "delta": 1.0,
                    "grid_sizes": (4096, 8192, 16384, 32768), "length": 40.0,
                    "domain_lengths": (320.0, 640.0, 1280.0),
                    "smoothing_lengths": (80.0, 160.0, 320.0),
                    "time_grid_sizes": (32,)},
    "strichartz-reg": {"p": 3.0, "grid_sizes": (1024, 2048),
                       "time_grid_sizes": (32, 64), "length": 80.0},
    "tmax-scan": {"p": 3.0, "M_values": (2.0, 4.0, 8.0, 16.0, 32.0),
                  "grid_sizes": (4096,), "length": 20.0,
                  "time_grid_sizes": (32,)},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment's full parameterization.

    Threshold values live in `thresholds`; runners read them by name.
    `p_values`/`a_values` drive the membership sweep (the solver exponent
    `p` keeps its [2, 4) range; membership is a pure norm computation and
    sweeps wider).
    """

    experiment: str
    p: float = 2.0
    s: float = 0.0
    a: float = 0.45
    N_values: tuple = (4.0, 8.0, 16.0, 32.0)
    t0: float = 1.0
    delta: float = 1.0
    rho: float | None = None
    r: float | None = None
    alpha: float | None = None
    lambda_values: tuple = (0.25, 0.5, 1.0, 2.0, 4.0)
    M_values: tuple = (1.0,)
    epsilon: float = 0.01
    grid_sizes: tuple = (1024, 2048)
    time_grid_sizes: tuple = (32, 64)
    seed: int = 0
    output_path: str | None = None
    # spatial box and sweep extensions
    length: float = 80.0
    T_box: float = 1.0
    a_values: tuple = (0.3, 0.45, 0.6)
    p_values: tuple = (1.5, 2.5, 3.999)
    domain_lengths: tuple = (320.0, 640.0, 1280.0)
    smoothing_lengths: tuple = (80.0, 160.0, 320.0)
    allow_offdiagonal_endpoint: bool = False
    thresholds: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose one of {', '.join(EXPERIMENTS)}")
        if not 2 <= self.p < 4:
            raise ConfigError(f"p must lie in [2, 4), got {self.p}")
        if not 0 < self.a < 1:
            raise ConfigError(f"a must lie in (0, 1), got {self.a}")
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if not self.t0 > 0:
            raise ConfigError(f"t0 must be positive, got {self.t0}")
        for name in ("N_values", "lambda_values", "M_values", "grid_sizes",
                     "time_grid_sizes", "a_values", "p_values",
                     "domain_lengths", "smoothing_lengths"):
            vals = getattr(self, name)
            if not isinstance(vals, tuple):
                object.__setattr__(self, name, tuple(vals))
                vals = getattr(self, name)
            if len(vals) == 0:
                raise ConfigError(f"{name} must not be empty")
        merged = dict(_DEFAULT_THRESHOLDS[self.experiment])
        merged.update(self.thresholds)
        object.__setattr__(self, "thresholds", merged)

    def threshold(self, name: str) -> float:
        try:
            return float(self.thresholds[name])
        except KeyError:
            raise ConfigError(f"config lacks threshold {name!r}") from None


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    base = dict(_DEFAULT_OVERRIDES.get(experiment, {}))
    base.update(overrides)
    return ExperimentConfig(experiment=experiment, **base)


def config_from_dict(data: dict) -> ExperimentConfig:
    if "experiment" not in data:
        raise ConfigError("config must name its experiment")
    unknown = set(data) - _FIELD_NAMES
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")
    merged = dict(_DEFAULT_OVERRIDES.get(data["experiment"], {}))
    merged.update(data)
    return ExperimentConfig(**merged)


def config_to_dict(config: ExperimentConfig) -> dict:
    out = {}
    for f in fields(ExperimentConfig):
        v = getattr(config, f.name)
        out[f.name] = list(v) if isinstance(v, tuple) else v
    return out


@dataclass(frozen=True)
class ResultRecord:
    """One measured value with the parameters that produced it and its verdict."""

    experiment: str
    params: dict
    value_name: str
    value: float
    drift_pct: float = 0.0
    fit_exponent: float | None = None
    fit_halfwidth: float | None = None
    passed: bool = True

    def to_csv_row(self) -> list[str]:
        def num(v):
            return repr(float(v))

        return [
            self.experiment,
            json.dumps(self.params, sort_keys=True, separators=(",", ":")),
            self.value_name,
            num(self.value),
            num(self.drift_pct),
            "" if self.fit_exponent is None else num(self.fit_exponent),
            "" if self.fit_halfwidth is None else num(self.fit_halfwidth),
            "true" if self.passed else "false",
        ]


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(rec.to_csv_row())


def write_manifest(path, runs: list[dict]) -> None:
    doc = {"software_version": __version__,
           "runs": sorted(runs, key=lambda r: r["experiment"])}
    with open(path, "w") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=2))
        fh.write("\n")


def drift_pct(old: float, new: float) -> float:
    if old == 0.0:
        return 0.0 if new == 0.0 else float("inf")
    return 100.0 * abs(new - old) / abs(old)


def growth_pct(old: float, new: float) -> float:
    if old == 0.0:
        return float("inf") if new > 0 else 0.0
    return 100.0 * (new - old) / abs(old)


def fit_loglog(xs, ys, weights=None) -> tuple[float, float, float]:
    """Weighted least squares in log-log; returns (slope, halfwidth,
    intercept) with halfwidth = 2 standard errors of the slope."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    w = np.ones_like(lx) if weights is None else np.asarray(weights, float)
    sw = np.sqrt(w)
    A = np.vstack([lx, np.ones_like(lx)]).T * sw[:, None]
    b = ly * sw
    coef, _, _, _ = np.linalg.lstsq(A, b, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = b - A @ coef
    dof = len(lx) - 2
    if dof > 0:
        s2 = float(resid @ resid) / dof
        xm = np.average(lx, weights=w)
        sxx = float(np.sum(w * (lx - xm) ** 2))
        half = 2.0 * math.sqrt(s2 / sxx) if sxx > 0 else float("inf")
    else:
        half = float("inf")
    return slope, half, intercept


def downweight_drifting_tail(drifts, gate_pct: float, n: int) -> np.ndarray:
    """Weights for fit_loglog: the two largest ladder points drop to 1/4
    weight when their own refinement drift exceeds the gate."""
    w = np.ones(n)
    for i in (n - 2, n - 1):
        if 0 <= i < len(drifts) and drifts[i] is not None and drifts[i] > gate_pct:
            w[i] = 0.25
    return w


def _map_ordered(fn, items, threads: int):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _windowed_lp(f: Field, p: float, lo: float, hi: float) -> float:
    mask = (f.grid.x >= lo) & (f.grid.x <= hi)
    vals = np.abs(f.samples[mask])
    if p == math.inf:
        return float(vals.max()) if vals.size else 0.0
    return float((np.sum(vals ** p) * f.grid.spacing) ** (1.0 / p))


def _sobolev_field(f: Field, s: float) -> Field:
    """(1 + xi^2)^{s/2} smoothing applied in place (physical in/out)."""
    if s == 0.0:
        return f
    spec = np.fft.fft(f.samples)
    xi = f.grid.frequencies_fft
    out = np.fft.ifft(spec * (1.0 + xi * xi) ** (s / 2.0))
    return Field(f.grid, out, PHYSICAL)


# -- strichartz (homogeneous-weight, diagonal 3p' form) -----------------------

def _strichartz_battery(config: ExperimentConfig):
    """Data shared across box/grid refinements: closed forms and
    base-box-anchored random sums."""
    entries = [("gaussian", lambda g: gaussian(g)),
               ("chirped_gaussian",
                lambda g: Field(g, np.exp(-g.x ** 2 - 0.25j * g.x ** 2 / config.t0),
                                PHYSICAL))]
    for i in range(3):
        def maker(g, i=i):
            rng = np.random.default_rng([config.seed, i])
            return random_fourier_sum(g, rng, base_length=config.length)
        entries.append((f"random_{i}", maker))
    return entries


def _free_ratio(phi_maker, p: float, spec, n: int, length: float,
                t_box: float, n_segments: int) -> float:
    g = make_grid(n, length)
    phi = phi_maker(g)
    tg = TimeGrid.graded(t_box, n_segments, 1.0)
    traj = PhysicalTrajectory.free_flow(phi, tg)
    num = weighted_spacetime_norm(traj, spec)
    den = lp_norm(forward_transform(phi), p)
    return num / den


def run_strichartz_verify(config: ExperimentConfig, threads: int = 1):
    """Space-time norm of U(t)phi against the L^p norm of the data's
    transform, with the diagonal exponent 3p' and weight t^0.

    Reports, per datum: the ratio, its drift under box doubling (L x2 at
    fixed spacing), grid doubling (spacing /2), and horizon doubling
    (informational: slowly decaying time tails make the global-time limit
    converge much more slowly than the spatial truncation).  Then the
    scaling ladder phi(lambda x) on co-scaled boxes, whose ratio is an
    exact invariant of the diagonal exponent, and the exact weight
    identity 2/(3p') = (1 - theta)/3 for theta = -(1 - 2/p).
    """
    p = config.p
    if config.rho is not None or config.r is not None:
        spec = StrichartzSpec(rho=config.rho, r=config.r, p=p,
                              alpha=config.alpha or 0.0)
        ok, reason = spec.offdiagonal_admissible(
            allow_endpoint=config.allow_offdiagonal_endpoint)
        if not ok:
            raise ConfigError(f"inadmissible exponents: {reason}")
    else:
        spec = StrichartzSpec.diagonal(p)
    n0 = config.grid_sizes[0]
    nt0 = config.time_grid_sizes[0]
    L0, T0 = config.length, config.T_box
    thr = config.threshold("drift_max_pct")
    base_params = {"p": p, "rho": float(spec.rho), "r": float(spec.r),
                   "alpha": float(spec.alpha), "n_points": n0, "length": L0,
                   "T_box": T0, "n_time_segments": nt0, "seed": config.seed}

    def one_datum(item):
        name, maker = item
        base = _free_ratio(maker, p, spec, n0, L0, T0, nt0)
        boxed = _free_ratio(maker, p, spec, 2 * n0, 2 * L0, T0, nt0)
        refined = _free_ratio(maker, p, spec, 2 * n0, L0, T0, 2 * nt0)
        timed = _free_ratio(maker, p, spec, n0, L0, 2 * T0, 2 * nt0)
        params = dict(base_params, datum=name)
        return [
            ResultRecord(config.experiment, params, "ratio", base,
                         drift_pct(base, refined), passed=True),
            ResultRecord(config.experiment, params, "box_doubling_drift_pct",
                         drift_pct(base, boxed),
                         drift_pct(base, boxed),
                         passed=drift_pct(base, boxed) < thr),
            ResultRecord(config.experiment, params, "grid_doubling_drift_pct",
                         drift_pct(base, refined),
                         drift_pct(base, refined),
                         passed=drift_pct(base, refined) < thr),
            ResultRecord(config.experiment, params, "tbox_doubling_drift_pct",
                         drift_pct(base, timed),
                         drift_pct(base, timed),
                         passed=True),
        ]

    records = []
    for recs in _map_ordered(one_datum, _strichartz_battery(config), threads):
        records.extend(recs)

    # scaling ladder: phi_lambda(x) = phi(lambda x) on the co-scaled box
    def ladder_ratio(lam: float) -> float:
        return _free_ratio(lambda g: gaussian(g, width=1.0 / lam ** 2),
                           p, spec, n0, L0 / lam, T0 / lam ** 2, nt0)

    lams = [float(v) for v in config.lambda_values]
    vals = _map_ordered(ladder_ratio, lams, threads)
    spread = 100.0 * (max(vals) - min(vals)) / min(vals)
    thr_l = config.threshold("lambda_spread_max_pct")
    records.append(ResultRecord(
        config.experiment,
        dict(base_params, lambda_values=lams, datum="gaussian"),
        "lambda_spread_pct", spread, spread, passed=spread < thr_l))
    for lam, v in zip(lams, vals):
        records.append(ResultRecord(
            config.experiment, dict(base_params, datum="gaussian", lam=lam),
            "lambda_ratio", v, 0.0, passed=True))

    # 2/(3p') against (1 - theta)/3, theta = -(1 - 2/p): equal identically
    lhs = 2.0 * (1.0 - 1.0 / p) / 3.0
    rhs = (1.0 - (-(1.0 - 2.0 / p))) / 3.0
    gap = abs(lhs - rhs)
    records.append(ResultRecord(
        config.experiment, dict(base_params), "weight_exponent_gap", gap,
        0.0, passed=gap == 0.0))
    return records


# -- wellposed ----------------------------------------------------------------

def _wellposed_battery(config: ExperimentConfig, g: Grid):
    rng = np.random.default_rng([config.seed, 0])
    return [
        ("gaussian", gaussian(g)),
        ("homogeneous_spike", truncated_homogeneous(g, config.a)),
        ("random_0", random_fourier_sum(g, rng, base_length=config.length)),
    ]


def _solve_battery_entry(config: ExperimentConfig, datum: Field, p: float,
                         M: float, n: int, nt: int):
    params = SolverParams(p=p, M=M, epsilon=config.epsilon,
                          n_points=n, length=config.length,
                          n_time_segments=nt)
    phi = scale_to_lp(datum, p, M)
    report = picard_solve(phi, params)
    traj = PhysicalTrajectory.from_twisted(report.final_trajectory)
    sup_sob = max(sobolev_norm(u, config.s, p) for u in traj.u_samples)
    return report, sup_sob


def run_wellposed(config: ExperimentConfig, threads: int = 1):
    """Solver battery scaled to the M-ball, with the regularity readout
    sup_t of the H^{s,p} norm for s below the persistence threshold
    -(1 - 2/p), plus paired-data Lipschitz ratios over 10 seeds.
    """
    p, s = config.p, config.s
    bound = -(1.0 - 2.0 / p)
    if not s < bound:
        raise ConfigError(
            f"persistence readout needs s < -(1 - 2/p) = {bound}, got s={s}")
    M = float(config.M_values[0])
    n0, n1 = config.grid_sizes[0], config.grid_sizes[-1]
    nt0, nt1 = config.time_grid_sizes[0], config.time_grid_sizes[-1]
    thr_c = config.threshold("contraction_max")
    thr_d = config.threshold("sobolev_drift_max_pct")
    thr_l = config.threshold("lipschitz_max")
    base_params = {"p": p, "s": s, "M": M, "n_points": n0,
                   "length": config.length, "n_time_segments": nt0,
                   "seed": config.seed}

    def one_datum(item):
        name, _ = item
        coarse = _wellposed_battery(config, make_grid(n0, config.length))
        fine = _wellposed_battery(config, make_grid(n1, config.length))
        datum_c = dict(coarse)[name]
        datum_f = dict(fine)[name]
        rep, sob = _solve_battery_entry(config, datum_c, p, M, n0, nt0)
        _, sob_f = _solve_battery_entry(config, datum_f, p, M, n1, nt1)
        params = dict(base_params, datum=name)
        ratio_last = rep.contraction_ratios[-1] if rep.contraction_ratios else 0.0
        d = drift_pct(sob, sob_f)
        return [
            ResultRecord(config.experiment, params, "converged",
                         1.0 if rep.converged else 0.0,
                         passed=rep.converged),
            ResultRecord(config.experiment, params, "contraction_ratio_last",
                         ratio_last, passed=ratio_last < thr_c),
            ResultRecord(config.experiment, params, "final_y_norm",
                         rep.final_y_norm, passed=True),
            ResultRecord(config.experiment, params, "residual",
                         rep.residual, passed=True),
            ResultRecord(config.experiment, params, "sup_sobolev", sob,
                         d, passed=d < thr_d),
        ]

    records = []
    for recs in _map_ordered(one_datum, _wellposed_battery(
            config, make_grid(n0, config.length)), threads):
        records.extend(recs)

    # Lipschitz data-to-solution ratios:10 seeded perturbation pairs
    def lipschitz(seed_idx: int):
        out = []
        for n, nt in ((n0, nt0), (n1, nt1)):
            g = make_grid(n, config.length)
            phi1 = scale_to_lp(gaussian(g), p, M)
            rng = np.random.default_rng([config.seed, 100 + seed_idx])
            eta = random_fourier_sum(g, rng, base_length=config.length)
            phi2 = phi1 + scale_to_lp(eta, p, 0.05 * M)
            pars = SolverParams(p=p, M=1.1 * M, epsilon=config.epsilon,
                                n_points=n, length=config.length,
                                n_time_segments=nt)
            rep1 = picard_solve(phi1, pars)
            rep2 = picard_solve(phi2, pars)
            t1 = PhysicalTrajectory.from_twisted(rep1.final_trajectory)
            t2 = PhysicalTrajectory.from_twisted(rep2.final_trajectory)
            num = max(sobolev_norm(a - b, s, p)
                      for a, b in zip(t1.u_samples, t2.u_samples))
            out.append(num / lp_norm(phi1 - phi2, p))
        return out

    ratios = _map_ordered(lipschitz, list(range(10)), threads)
    for i, (coarse, fine) in enumerate(ratios):
        d = drift_pct(coarse, fine)
        records.append(ResultRecord(
            config.experiment, dict(base_params, pair_seed=i),
            "lipschitz_ratio", coarse, d, passed=coarse <= thr_l))
    worst = max(r[0] for r in ratios)
    records.append(ResultRecord(
        config.experiment, dict(base_params, n_pairs=10), "lipschitz_max",
        worst, passed=worst <= thr_l))
    return records


# -- illposed chirp -----------------------------------------------------------

def _chirp_growth(config: ExperimentConfig, n: int, N: float) -> float:
    g = make_grid(n, config.length)
    phi = chirped_cutoff(g, N, config.t0)
    den = lp_norm(phi, config.p)
    times = np.linspace(0.5 * config.t0, 1.5 * config.t0, 25)
    times = np.unique(np.append(times, config.t0))
    best = 0.0
    for t in times:
        u = propagate(phi, float(t))
        best = max(best, sobolev_norm(u, config.s, config.p))
    return best / den


def run_illposed_chirp(config: ExperimentConfig, threads: int = 1):
    """Growth of sup_t H^{s,p} along the focused chirp ladder.

    G(N) follows N^(s + 1 - 2/p): growth above the persistence threshold
    s = -(1 - 2/p), flat at it, decay below.  The focused spike's spectral
    extent is N/(2 t0), so t0 must be small enough that the weight
    (1 + xi^2)^(s/2) acts as a power law across the ladder — otherwise the
    negative-s exponents sit well above their asymptotes.  Ladder points
    whose chirp frequency (N + 3)/(2 t0) exceeds 80% of Nyquist are
    flagged and dropped from the fit; the two largest refinement-drifting
    points are down-weighted.
    """
    p, s = config.p, config.s
    if not 2 < p <= 3:
        raise ConfigError(f"chirp experiment needs p in (2, 3], got {p}")
    Ns = [float(N) for N in config.N_values]
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ConfigError("N_values must increase strictly")
    n0 = config.grid_sizes[0]
    n1 = config.grid_sizes[-1]
    nyq = make_grid(n0, config.length).nyquist
    base_params = {"p": p, "s": s, "t0": config.t0, "n_points": n0,
                   "length": config.length, "seed": config.seed}

    def one_N(N: float):
        resolved = (N + 3.0) / (2.0 * config.t0) <= 0.8 * nyq
        if not resolved:
            return N, float("nan"), None, False
        base = _chirp_growth(config, n0, N)
        fine = _chirp_growth(config, n1, N)
        return N, base, drift_pct(base, fine), True

    results = _map_ordered(one_N, Ns, threads)
    records = []
    kept_N, kept_G, kept_drift = [], [], []
    for N, val, d, resolved in results:
        params = dict(base_params, N=N)
        if not resolved:
            records.append(ResultRecord(
                config.experiment, params, "growth_unresolved", float("nan"),
                0.0, passed=False))
            continue
        records.append(ResultRecord(
            config.experiment, params, "growth", val, d, passed=True))
        kept_N.append(N)
        kept_G.append(val)
        kept_drift.append(d)
    tol = config.threshold("exponent_tol")
    predicted = s + 1.0 - 2.0 / p
    if len(kept_N) >= 2:
        w = downweight_drifting_tail(kept_drift, 2.0, len(kept_N))
        slope, half, _ = fit_loglog(kept_N, kept_G, w)
        records.append(ResultRecord(
            config.experiment,
            dict(base_params, N_values=kept_N, predicted=predicted),
            "growth_exponent", slope, 0.0, fit_exponent=slope,
            fit_halfwidth=half, passed=abs(slope - predicted) <= tol))
    threshold_s = -(1.0 - 2.0 / p)
    if s < threshold_s - 1e-9 and len(kept_G) >= 2:
        monotone = all(b <= a * (1 + 1e-3)
                       for a, b in zip(kept_G[1:], kept_G[2:]))
        records.append(ResultRecord(
            config.experiment, dict(base_params), "monotone_decay",
            1.0 if monotone else 0.0, passed=monotone))
    return records


# -- homogeneous --------------------------------------------------------------

def _membership_norms(a: float, p_values, domain_lengths) -> list[list[float]]:
    """Nested-window norms of one evolved field.

    The data truncation and spacing stay fixed while the measurement
    window doubles, so the ladder sees pure tail behavior: both the
    surviving data tail |x|^(-a) and its frequency image |x|^(a-1) must be
    integrable for the window norms to settle.  Geometry: the box is 4x
    the largest window radius (data truncated at 0.4 box covers every
    window), and the spacing is fine enough that the frequency image
    2 * Nyquist reaches 30% past the largest window; the power-of-two
    round-up keeps the image short of box - r_max, so its wrap-around
    lands outside all windows.
    """
    r_max = max(domain_lengths) / 2.0
    box = 4.0 * r_max
    n = 2 ** math.ceil(math.log2(1.3 * box * r_max / (2.0 * math.pi)))
    g = make_grid(max(4096, n), box)
    u = propagate(truncated_homogeneous(g, a), 1.0)
    au = np.abs(u.samples)
    dx = g.spacing
    out = []
    for p in p_values:
        out.append([float((np.sum(au[np.abs(g.x) <= L / 2.0] ** p) * dx)
                          ** (1.0 / p)) for L in domain_lengths])
    return out


def run_homogeneous(config: ExperimentConfig, threads: int = 1):
    """Three views of the |x|^(-a) family.

    (i) membership: window-ladder L^p norms of U(1) psi_a saturate exactly
    when p > max(1/a, 1/(1-a)), with the threshold case (1-a)p = 1
    diverging logarithmically; (ii) smoothing: the Duhamel correction
    stays put in L^2 across domain doubling while the data norm grows at
    its tail rate 2^(1/2 - a) per doubling; (iii) singularity route: the
    windowed norm at a tiny positive time grows without saturation under
    grid refinement when a >= 1/p - s, while the far-field window stays
    flat.
    """
    records = []
    thr_mem = config.threshold("membership_drift_max_pct")

    # (i) membership sweep over (a, p) cells, one evolution per a
    lengths = [float(L) for L in config.domain_lengths]
    all_norms = _map_ordered(
        lambda a: _membership_norms(a, config.p_values, lengths),
        list(config.a_values), threads)
    for a, per_p in zip(config.a_values, all_norms):
        for p, norms in zip(config.p_values, per_p):
            member = p > max(1.0 / a, 1.0 / (1.0 - a)) + 1e-9
            d = drift_pct(norms[-2], norms[-1])
            saturated = d < thr_mem
            monotone = all(hi >= lo * (1 - 1e-12)
                           for lo, hi in zip(norms, norms[1:]))
            params = {"a": a, "p": p, "domain_lengths": lengths,
                      "member_predicted": bool(member), "seed": config.seed}
            records.append(ResultRecord(
                config.experiment, params, "membership_norm", norms[-1], d,
                passed=(saturated == member) and monotone))

    # (ii) smoothing: a in (1/p, 1/2) required for this route
    p, a = config.p, config.a
    if not (1.0 / p < a < 0.5):
        raise ConfigError(
            f"smoothing route needs a in (1/p, 1/2) = ({1.0/p}, 0.5), got {a}")
    thr_sm = config.threshold("smoothing_drift_max_pct")
    thr_gr = config.threshold("data_growth_min_pct")
    nt = config.time_grid_sizes[0]

    def smoothing_entry(L: float):
        n = max(2048, 2 ** math.ceil(math.log2(25.6 * L)))
        g = make_grid(n, L)
        phi = truncated_homogeneous(g, a)
        M = lp_norm(phi, p)
        pars = SolverParams(p=p, M=M, epsilon=config.epsilon, n_points=n,
                            length=L, n_time_segments=nt)
        rep = picard_solve(phi, pars)
        dist = max(lp_norm(v - phi, 2.0) for v in rep.final_trajectory.v_samples)
        return dist, lp_norm(phi, 2.0), M, rep.converged

    sm = _map_ordered(smoothing_entry, list(config.smoothing_lengths), threads)
    prev = None
    for L, (dist, data_l2, M, conv) in zip(config.smoothing_lengths, sm):
        params = {"a": a, "p": p, "length": float(L), "M": M,
                  "seed": config.seed, "converged": bool(conv)}
        if prev is None:
            records.append(ResultRecord(
                config.experiment, params, "duhamel_l2", dist, 0.0,
                passed=conv))
            records.append(ResultRecord(
                config.experiment, params, "data_l2", data_l2, 0.0,
                passed=True))
        else:
            d = drift_pct(prev[0], dist)
            gr = growth_pct(prev[1], data_l2)
            records.append(ResultRecord(
                config.experiment, params, "duhamel_l2", dist, d,
                passed=conv and d < thr_sm))
            records.append(ResultRecord(
                config.experiment, params, "data_l2", data_l2, gr,
                passed=gr >= thr_gr))
        prev = (dist, data_l2)

    # (iii) singularity route at a tiny positive time
    s = config.s
    if config.a < 1.0 / p - s:
        raise ConfigError(
            f"singularity route needs a >= 1/p - s = {1.0/p - s}, got {config.a}")
    thr_sg = config.threshold("singularity_growth_min_pct")
    thr_ff = config.threshold("farfield_drift_max_pct")
    win = config.delta / 4.0

    def singularity_entry(n: int):
        g = make_grid(n, config.length)
        u = propagate(truncated_homogeneous(g, a), config.t0)
        u = _sobolev_field(u, s)
        near = _windowed_lp(u, p, -win, win)
        far = _windowed_lp(u, p, config.delta, 4.0 * config.delta)
        return near, far

    sizes = [int(n) for n in config.grid_sizes]
    sg = _map_ordered(singularity_entry, sizes, threads)
    nears = [v[0] for v in sg]
    fars = [v[1] for v in sg]
    spacings = [config.length / n for n in sizes]
    prev_near = None
    for n, near, far in zip(sizes, nears, fars):
        params = {"a": a, "p": p, "s": s, "t0": config.t0, "n_points": n,
                  "length": config.length, "delta": config.delta,
                  "seed": config.seed}
        if prev_near is None:
            records.append(ResultRecord(
                config.experiment, params, "singular_window_norm", near, 0.0,
                passed=True))
        else:
            gr = growth_pct(prev_near, near)
            records.append(ResultRecord(
                config.experiment, params, "singular_window_norm", near, gr,
                passed=gr >= thr_sg))
        prev_near = near
    slope, half, _ = fit_loglog(spacings, nears)
    records.append(ResultRecord(
        config.experiment,
        {"a": a, "p": p, "s": s, "t0": config.t0,
         "grid_sizes": sizes, "length": config.length, "seed": config.seed},
        "singular_rate_vs_spacing", slope, 0.0, fit_exponent=slope,
        fit_halfwidth=half, passed=True))
    d_far = drift_pct(fars[-2], fars[-1])
    records.append(ResultRecord(
        config.experiment,
        {"a": a, "p": p, "s": s, "t0": config.t0, "delta": config.delta,
         "length": config.length, "seed": config.seed},
        "farfield_norm", fars[-1], d_far, passed=d_far < thr_ff))
    return records


# -- strichartz regularity family ---------------------------------------------

_DEFAULT_RHO = {2.0: 6.0, 2.5: 5.0, 3.0: 5.0}


def _regularity_spec(config: ExperimentConfig) -> StrichartzSpec:
    p = config.p
    if config.rho is not None and config.r is not None:
        spec = StrichartzSpec(rho=config.rho, r=config.r, p=p,
                              alpha=config.alpha
                              if config.alpha is not None
                              else 1.0 / p - 0.5)
    else:
        rho = config.rho if config.rho is not None else _DEFAULT_RHO.get(p, 5.0)
        spec = StrichartzSpec.regularity(p, rho)
    ok, reason = spec.regularity_admissible(
        allow_endpoint=config.allow_offdiagonal_endpoint)
    if not ok:
        raise ConfigError(f"inadmissible exponents: {reason}")
    return spec


def run_strichartz_regularity(config: ExperimentConfig, threads: int = 1):
    """Weighted space-time norms (weight t^(1/p - 1/2)) of the free flow
    and the solved trajectory over the contraction horizon, as ratios to
    the data's L^p norm, with refinement drift."""
    p = config.p
    spec = _regularity_spec(config)
    M = float(config.M_values[0])
    n0, n1 = config.grid_sizes[0], config.grid_sizes[-1]
    nt0, nt1 = config.time_grid_sizes[0], config.time_grid_sizes[-1]
    thr = config.threshold("drift_max_pct")
    base_pars = SolverParams(p=p, M=M, epsilon=config.epsilon, n_points=n0,
                             length=config.length, n_time_segments=nt0)
    T = base_pars.horizon_T
    base_params = {"p": p, "rho": float(spec.rho), "r": float(spec.r),
                   "alpha": float(spec.alpha), "M": M, "horizon_T": T,
                   "n_points": n0, "length": config.length,
                   "n_time_segments": nt0, "seed": config.seed}

    def battery(g: Grid):
        rng = np.random.default_rng([config.seed, 1])
        return [("gaussian", gaussian(g)),
                ("random_0", random_fourier_sum(g, rng,
                                                base_length=config.length)),
                ("random_1", random_fourier_sum(g, rng,
                                                base_length=config.length))]

    def measure(n: int, nt: int):
        g = make_grid(n, config.length)
        tg = TimeGrid.graded(T, nt, 2.0)
        out = {}
        for name, datum in battery(g):
            phi = scale_to_lp(datum, p, M)
            free = weighted_spacetime_norm(
                PhysicalTrajectory.free_flow(phi, tg), spec)
            pars = SolverParams(p=p, M=M, epsilon=config.epsilon, n_points=n,
                                length=config.length, n_time_segments=nt)
            rep = picard_solve(phi, pars)
            solved = weighted_spacetime_norm(
                PhysicalTrajectory.from_twisted(rep.final_trajectory), spec)
            out[name] = (free / M, solved / M, rep.converged)
        return out

    coarse, fine = _map_ordered(lambda args: measure(*args),
                                [(n0, nt0), (n1, nt1)], threads)
    records = []
    for name in coarse:
        params = dict(base_params, datum=name)
        for idx, vname in ((0, "free_ratio"), (1, "solved_ratio")):
            d = drift_pct(coarse[name][idx], fine[name][idx])
            records.append(ResultRecord(
                config.experiment, params, vname, coarse[name][idx], d,
                passed=d < thr and coarse[name][2]))
    return records


# -- tmax scan ----------------------------------------------------------------

def run_tmax_scan(config: ExperimentConfig, threads: int = 1):
    """Certified-horizon scan T*(M) against the -2p/(p-1) rate, plus the
    exact dyadic arithmetic of the default horizon formula."""
    p = config.p
    res = tmax_scan(p, [float(M) for M in config.M_values],
                    epsilon=config.epsilon,
                    n_points=config.grid_sizes[0], length=config.length,
                    n_time_segments=config.time_grid_sizes[0])
    base_params = {"p": p, "epsilon": config.epsilon,
                   "n_points": config.grid_sizes[0], "length": config.length,
                   "n_time_segments": config.time_grid_sizes[0],
                   "seed": config.seed}
    records = []
    for e in res.entries:
        records.append(ResultRecord(
            config.experiment, dict(base_params, M=e.M, status=e.status),
            "t_star", e.t_star, passed=e.status == "ok"))
    target = -2.0 * p / (p - 1.0)
    tol = config.threshold("slope_rel_tol")
    records.append(ResultRecord(
        config.experiment, dict(base_params, target=target),
        "t_star_slope", res.slope, 0.0, fit_exponent=res.slope,
        fit_halfwidth=res.slope_halfwidth,
        passed=math.isfinite(res.slope)
        and abs(res.slope - target) <= abs(target) * tol))
    M0 = float(config.M_values[0])
    h1 = SolverParams(p=p, M=M0, epsilon=config.epsilon).horizon_T
    h2 = SolverParams(p=p, M=2.0 * M0, epsilon=config.epsilon).horizon_T
    gap = abs(h2 - h1 * 2.0 ** target) / h1
    records.append(ResultRecord(
        config.experiment, dict(base_params, M=M0),
        "horizon_halving_gap", gap,
        passed=gap <= config.threshold("formula_rel_tol")))
    return records


RUNNERS = {
    "strichartz": run_strichartz_verify,
    "wellposed": run_wellposed,
    "illposed-chirp": run_illposed_chirp,
    "homogeneous": run_homogeneous,
    "strichartz-reg": run_strichartz_regularity,
    "tmax-scan": run_tmax_scan,
}


def run_experiment(config: ExperimentConfig, threads: int = 1):
    return RUNNERS[config.experiment](config, threads)
