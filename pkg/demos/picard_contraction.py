"""Solving the cubic integral equation by Picard iteration, cross-checked
against an independent split-step integrator, then probing how the
contraction rate scales with the time horizon.

Run:  python3 demos/picard_contraction.py
"""

import numpy as np

from nlslab.duhamel import SolverParams, contraction_probe, picard_solve
from nlslab.families import gaussian, scale_to_lp, truncated_homogeneous
from nlslab.grid import lp_norm, make_grid
from nlslab.spaces import PhysicalTrajectory
from nlslab.splitstep import SplitStepParams, compare, splitstep_solve

# --- 1. Picard iteration on a medium-amplitude Gaussian ---------------------
g = make_grid(1024, 80.0)
phi = gaussian(g, amplitude=0.5)
M = lp_norm(phi, 2.0)
params = SolverParams(p=2.0, M=M, horizon_T=0.5, n_points=1024, length=80.0,
                      n_time_segments=64, tolerance=1e-12, max_iterations=30)
report = picard_solve(phi, params)

print(f"Picard solve: p=2, horizon T=0.5, ||data||_2 = {M:.4f}")
print(f"converged: {report.converged} after {len(report.iterate_distances)} iterations")
print("successive iterate distances (should decay geometrically):")
for i, d in enumerate(report.iterate_distances):
    bar = "#" * max(1, int(50 + np.log10(max(d, 1e-16)) * 3))
    print(f"  iter {i + 1:2d}: {d:10.3e}  {bar}")
print(f"final defect of the integral equation: {report.residual:.3e}")
print()

# --- 2. Cross-check against the split-step integrator -----------------------
traj = PhysicalTrajectory.from_twisted(report.final_trajectory)
ss = splitstep_solve(phi, SplitStepParams(dt=2e-4, horizon_T=0.5),
                     sample_times=traj.timegrid.nodes)
rel = compare(traj, ss, norms=(2.0,))[2.0]["sup"] / M
print("Independent check: strang split-step at dt = 2e-4 on the same data")
print(f"sup-in-time relative L2 disagreement: {rel:.3e}")
print("Two solvers, two discretizations of time, one trajectory.")
print()

# --- 3. How fast does the one-step map contract? -----------------------------
# On the scale-critical spike |x|^{-1/p}, the one-step Lipschitz ratio of the
# integral map scales like T^(1 - 1/p): shrink the horizon, win contraction.
print("One-step Lipschitz ratio vs horizon T on |x|^{-1/p} data:")
for p in (2.0, 2.5, 3.0):
    gg = make_grid(2048, 20.0)
    f1 = scale_to_lp(truncated_homogeneous(gg, 1.0 / p), p, 1.0)
    f2 = f1 * 0.999
    Ts = [0.0025 * 2 ** k for k in range(5)]
    ratios = [contraction_probe(
        f1, f2, SolverParams(p=p, M=1.0, horizon_T=T, n_points=2048,
                             length=20.0, n_time_segments=32)) for T in Ts]
    slope = float(np.polyfit(np.log(Ts), np.log(ratios), 1)[0])
    shown = "  ".join(f"{r:.4f}" for r in ratios)
    print(f"  p={p}: ratios {shown}")
    print(f"         fitted T-exponent {slope:.4f} (predicted {1 - 1 / p:.4f})")
print()
print("The exponent 1 - 1/p is what makes small horizons certifiable: the")
print("certified horizon then shrinks like M^(-2p/(p-1)) as data grows.")
