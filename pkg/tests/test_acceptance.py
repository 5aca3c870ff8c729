"""End-to-end verification battery.

Each test exercises one headline guarantee of the package at desk scale,
with every tolerance stated inline.  Frozen expected values come from
closed-form solutions, independent solvers, or exact exponent arithmetic —
never from the code under test.
"""

import math

import numpy as np
import pytest

from nlslab.duhamel import (SolverParams, contraction_probe,
                            estimate_trilinear_constant, picard_solve)
from nlslab.experiments import (default_config, run_homogeneous,
                                run_illposed_chirp, run_strichartz_verify,
                                run_tmax_scan, run_wellposed)
from nlslab.families import (gaussian, plane_wave, random_fourier_sum,
                             scale_to_lp, truncated_homogeneous)
from nlslab.grid import PHYSICAL, Field, lp_norm, make_grid
from nlslab.ops import modulus_identity_pair, propagate, twisted_cubic
from nlslab.spaces import (PhysicalTrajectory, SpaceSpec, TimeGrid,
                           TwistedTrajectory, holder_modulus_check)
from nlslab.splitstep import SplitStepParams, compare, splitstep_solve


def test_01_free_propagator_closed_form_and_unitarity():
    # data e^{-x^2} evolves to e^{-x^2/(1+4it)} / sqrt(1+4it); the free
    # group must reproduce it to 1e-6 relative L2 and conserve mass to 1e-12
    g = make_grid(4096, 80.0)
    phi = gaussian(g)
    m0 = lp_norm(phi, 2.0)
    for t in (0.25, 0.5, 1.0, 2.0):
        u = propagate(phi, t)
        exact = np.exp(-g.x ** 2 / (1.0 + 4j * t)) / np.sqrt(1.0 + 4j * t)
        rel = (lp_norm(Field(g, u.samples - exact, PHYSICAL), 2.0)
               / lp_norm(Field(g, exact, PHYSICAL), 2.0))
        assert rel <= 1e-6, f"t={t}: closed-form mismatch {rel:.3e}"
        assert abs(lp_norm(u, 2.0) / m0 - 1.0) <= 1e-12


def test_02_twisted_cubic_factorization_on_holdout_data():
    # the convolution form's constant is calibrated once on one Gaussian
    # triple at t=1; these hold-out data (shifted, widened, modulated) and
    # times never enter the calibration
    g = make_grid(4096, 80.0)
    data = [gaussian(g, amplitude=0.8, width=1.3, center=0.7),
            gaussian(g, amplitude=1.1, width=0.7, center=-0.4, momentum=0.9),
            gaussian(g, amplitude=0.9, width=2.1, center=0.2, momentum=-0.5)]
    for t in (0.5, 2.0):
        u1, u2, u3 = (propagate(f, t) for f in data)
        direct = twisted_cubic(u1, u2, u3, t, mode="direct")
        factor = twisted_cubic(u1, u2, u3, t, mode="factorized")
        rel = (lp_norm(Field(g, direct.samples - factor.samples, PHYSICAL), 2.0)
               / lp_norm(direct, 2.0))
        assert rel <= 1e-6, f"t={t}: factorization mismatch {rel:.3e}"


def test_03_modulus_dilation_identity():
    # |U(t)f(x)| equals sqrt(pi/|t|)|U(1/4t)(F^-1 conj f)(x/2t)| pointwise;
    # the two sides share no propagator code path
    g = make_grid(4096, 80.0)
    f = gaussian(g)
    for t in (0.5, 1.0, 2.0):
        lhs, rhs = modulus_identity_pair(f, t)
        gap = float(np.max(np.abs(lhs - rhs)))
        assert gap <= 1e-8, f"t={t}: modulus identity gap {gap:.3e}"


def test_04_picard_matches_splitstep_and_plane_wave():
    # cross-check against the independent Strang integrator on a
    # medium-amplitude Gaussian over T = 0.5
    g = make_grid(1024, 80.0)
    phi = gaussian(g, amplitude=0.5)
    M = lp_norm(phi, 2.0)
    par = SolverParams(p=2.0, M=M, horizon_T=0.5, n_points=1024, length=80.0,
                       n_time_segments=64, tolerance=1e-12, max_iterations=30)
    rep = picard_solve(phi, par)
    assert rep.converged
    traj = PhysicalTrajectory.from_twisted(rep.final_trajectory)
    ss = splitstep_solve(phi, SplitStepParams(dt=2e-4, horizon_T=0.5),
                         sample_times=traj.timegrid.nodes)
    rel = compare(traj, ss, norms=(2.0,))[2.0]["sup"] / M
    assert rel <= 1e-4, f"sup-in-time L2 disagreement {rel:.3e}"

    # exact solution A e^{i(kx + (A^2 - k^2) t)} for plane-wave data
    g2 = make_grid(256, 16.0)
    A, mode = 0.1, 3
    phi2 = plane_wave(g2, A, mode)
    par2 = SolverParams(p=2.0, M=lp_norm(phi2, 2.0), horizon_T=0.2,
                        n_points=256, length=16.0, n_time_segments=48,
                        tolerance=1e-13, max_iterations=30)
    rep2 = picard_solve(phi2, par2)
    assert rep2.converged
    traj2 = PhysicalTrajectory.from_twisted(rep2.final_trajectory)
    k = 2.0 * math.pi * mode / g2.length
    den = lp_norm(phi2, 2.0)
    worst = max(
        lp_norm(Field(g2, u.samples
                      - A * np.exp(1j * (k * g2.x + (A * A - k * k) * t)),
                      PHYSICAL), 2.0) / den
        for u, t in zip(traj2.u_samples, traj2.timegrid.nodes))
    assert worst <= 1e-6, f"plane-wave disagreement {worst:.3e}"


def test_05_one_step_contraction_and_its_horizon_rate():
    # the one-step Lipschitz ratio must contract (< 1/2) at the sized
    # horizon, and its T-dependence must fit T^(1 - 1/p) within 20%;
    # only the scale-invariant |x|^(-1/p) spike saturates that rate
    for p in (2.0, 2.5, 3.0):
        g = make_grid(2048, 20.0)
        phi1 = scale_to_lp(truncated_homogeneous(g, 1.0 / p), p, 1.0)
        phi2 = phi1 * 0.999
        par = SolverParams(p=p, M=1.0, n_points=2048, length=20.0,
                           n_time_segments=32)
        ratio = contraction_probe(phi1, phi2, par)
        assert 0.0 < ratio < 0.5, f"p={p}: no contraction, ratio={ratio:.3f}"
        Ts = [0.0025 * 2 ** k for k in range(5)]
        ratios = [
            contraction_probe(
                phi1, phi2,
                SolverParams(p=p, M=1.0, horizon_T=T, n_points=2048,
                             length=20.0, n_time_segments=32))
            for T in Ts
        ]
        slope = float(np.polyfit(np.log(Ts), np.log(ratios), 1)[0])
        target = 1.0 - 1.0 / p
        assert abs(slope - target) <= 0.2 * target, (
            f"p={p}: ratio ~ T^{slope:.4f}, want {target:.4f} +- 20%")


def test_06_certified_horizon_scales_like_critical_rate():
    # bisected largest certified horizon T*(M) over a dyadic 5-point
    # M-ladder must fit M^(-2p/(p-1)) within 20%
    for p in (2.0, 3.0):
        records = run_tmax_scan(default_config("tmax-scan", p=p))
        by_name = {}
        for r in records:
            by_name.setdefault(r.value_name, []).append(r)
        assert all(r.passed for r in by_name["t_star"]), (
            f"p={p}: uncertified ladder points")
        slope_rec = by_name["t_star_slope"][0]
        assert slope_rec.passed, (
            f"p={p}: slope {slope_rec.value:.4f} outside 20% of "
            f"{-2.0 * p / (p - 1.0):.4f}")
        assert by_name["horizon_halving_gap"][0].passed


def test_07_spacetime_ratio_stable_under_refinement_and_scaling():
    # free-flow space-time/data ratios: < 2% drift under box and grid
    # doubling, < 2% spread along the dilation ladder lambda in [1/4, 4]
    gates = ("box_doubling_drift_pct", "grid_doubling_drift_pct",
             "lambda_spread_pct")
    for p in (2.0, 2.5, 3.0):
        records = run_strichartz_verify(default_config("strichartz", p=p))
        bad = [r for r in records if r.value_name in gates and not r.passed]
        assert not bad, (
            f"p={p}: " + "; ".join(
                f"{r.params.get('datum', '?')}/{r.value_name}={r.value:.3f}%"
                for r in bad))
        ratios = [r.value for r in records if r.value_name == "ratio"]
        assert ratios and all(math.isfinite(v) and v > 0 for v in ratios)
        gap = [r for r in records if r.value_name == "weight_exponent_gap"][0]
        assert gap.value == 0.0


def test_08_trilinear_bound_stable_under_refinement():
    # the empirical trilinear constant over 50 seeded triples must move
    # < 10% when every triple is re-evaluated on a doubled grid
    for p in (2.0, 3.0):
        coarse = estimate_trilinear_constant(p, n_triples=50, seed=11,
                                             n_points=256)
        fine = estimate_trilinear_constant(p, n_triples=50, seed=11,
                                           n_points=512)
        assert len(coarse["ratios"]) == 50
        assert all(math.isfinite(r) and r > 0 for r in coarse["ratios"])
        drift = abs(fine["c_est"] - coarse["c_est"]) / coarse["c_est"]
        assert drift <= 0.10, f"p={p}: constant drifted {100 * drift:.2f}%"


def test_09_chirp_growth_exponent_across_regimes():
    # sup_t H^{s,p}/L^p growth along the focusing-chirp ladder fits
    # N^(s + 1 - 2/p) +- 0.1 at p = 3: growth at s=0, flat at the
    # threshold s=-1/3, decay at s=-0.5
    for s in (0.0, -1.0 / 3.0, -0.5):
        records = run_illposed_chirp(default_config("illposed-chirp", s=s))
        exp_rec = [r for r in records if r.value_name == "growth_exponent"]
        assert len(exp_rec) == 1, f"s={s}: missing exponent fit"
        rec = exp_rec[0]
        assert rec.passed, (
            f"s={s}: slope {rec.value:.4f} not within 0.1 of "
            f"{rec.params['predicted']:.4f}")
        if s < -(1.0 - 2.0 / 3.0) - 1e-9:
            mono = [r for r in records if r.value_name == "monotone_decay"]
            assert mono and mono[0].passed


def test_10_subthreshold_persistence_and_lipschitz():
    # p = 2.5, s = -0.3 (below -(1-2/p) = -0.2): solver battery converges,
    # sup_t H^{s,p} finite with < 5% refinement drift, 10 paired-data
    # Lipschitz ratios bounded
    records = run_wellposed(default_config("wellposed"))
    assert records
    bad = [r for r in records if not r.passed]
    assert not bad, "; ".join(
        f"{r.params.get('datum', r.params.get('pair_seed', '?'))}/"
        f"{r.value_name}={r.value:.4g}" for r in bad)
    sup_rows = [r for r in records if r.value_name == "sup_sobolev"]
    assert len(sup_rows) == 3
    assert all(math.isfinite(r.value) and r.drift_pct < 5.0 for r in sup_rows)
    lip_rows = [r for r in records if r.value_name == "lipschitz_ratio"]
    assert len(lip_rows) == 10


@pytest.fixture(scope="module")
def homogeneous_records():
    return run_homogeneous(default_config("homogeneous"))


def test_11_duhamel_correction_flat_under_domain_doubling(homogeneous_records):
    # truncated |x|^(-0.45) data at p = 2.5: the L2 size of the nonlinear
    # correction must drift < 5% per domain doubling even though the data
    # itself leaves L2 in the infinite-volume limit
    rows = [r for r in homogeneous_records if r.value_name == "duhamel_l2"]
    assert len(rows) == 3
    assert all(r.passed for r in rows), (
        "correction drifted: " + "; ".join(
            f"L={r.params['length']}: {r.drift_pct:.2f}%" for r in rows))
    growth = [r for r in homogeneous_records if r.value_name == "data_l2"]
    assert all(r.drift_pct > 0 for r in growth[1:]), (
        "data norm must keep growing with the domain")


@pytest.mark.xfail(
    strict=True,
    reason="the tail integral of |x|^(-2a) over a doubled domain grows by "
           "2^(1-2a); at a = 0.45 that is 2^0.1 per L2-norm doubling pair, "
           "about 3.5% — a 25%-per-doubling gate cannot be met by this "
           "family at a = 0.45 (it would need a < 0.28)")
def test_11b_data_norm_growth_rate_gate(homogeneous_records):
    growth = [r.drift_pct for r in homogeneous_records
              if r.value_name == "data_l2"][1:]
    assert growth and all(g >= 25.0 for g in growth)


def test_12_window_norm_membership_grid(homogeneous_records):
    # windowed L^p norms of the evolved spike saturate (< 2% per window
    # doubling) exactly when p > max(1/a, 1/(1-a)); every (a, p) cell must
    # land on its predicted side
    rows = [r for r in homogeneous_records
            if r.value_name == "membership_norm"]
    assert len(rows) == 9
    bad = [r for r in rows if not r.passed]
    assert not bad, "; ".join(
        f"(a={r.params['a']}, p={r.params['p']}): drift {r.drift_pct:.2f}% "
        f"vs predicted member={r.params['member_predicted']}" for r in bad)


def test_13_holder_modulus_bound_on_random_trajectories():
    # ||v(t)-v(t')||_p against the weighted-seminorm Hoelder envelope on
    # 100 seeded band-limited trajectories with the canonical exponents
    T = 0.5
    tg = TimeGrid.graded(T, 12, 2.0)
    g = make_grid(256, 40.0)
    checked = 0
    for p in (2.0, 2.5, 3.0):
        spec = SpaceSpec.canonical(p, T)
        for seed in range(100):
            rng = np.random.default_rng([seed, int(10 * p)])
            A = random_fourier_sum(g, rng, n_modes=9, base_length=40.0)
            B = random_fourier_sum(g, rng, n_modes=9, base_length=40.0)
            C = random_fourier_sum(g, rng, n_modes=9, base_length=40.0)
            vs = tuple(A + B * float(t) + C * float(t * t) for t in tg.nodes)
            dvs = tuple(B + C * float(2.0 * t) for t in tg.nodes)
            v = TwistedTrajectory(tg, vs, dvs)
            for i, j in ((0, 6), (1, 11), (0, 11), (2, 5)):
                lhs, rhs = holder_modulus_check(v, spec, tg.nodes[i],
                                                tg.nodes[j])
                assert lhs <= rhs * (1.0 + 1e-6), (
                    f"p={p} seed={seed} nodes=({i},{j}): "
                    f"lhs={lhs:.6g} > rhs={rhs:.6g}")
                checked += 1
    assert checked == 3 * 100 * 4
