"""Photon statistics of the nonlinear coherent states as curvature grows."""
import numpy as np

from osc_circle import CurvatureContext, build_state, eigen_residual, photon_statistics

z = 3.0
print(f"z = {z}: vacuum probability and Mandel Q against lambda")
print(f"{'lambda':>8} {'n_max':>6} {'p(0)':>10} {'<n>':>10} {'Q':>10} {'residual':>10}")
for lam in (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0):
    state = build_state(CurvatureContext(lam), z)
    stats = photon_statistics(state)
    res = eigen_residual(state).residual
    print(f"{lam:8.2f} {state.n_max:6d} {stats.pn[0]:10.6f} {stats.mean_n:10.5f} "
          f"{stats.mandel_q:10.5f} {res:10.1e}")

# |Q| grows, peaks near lambda = 1, then relaxes towards zero
print("\nDistribution p(n) at lambda = 1 (first 10 entries)")
pn = photon_statistics(build_state(CurvatureContext(1.0), z)).pn
print(np.array2string(pn[:10], precision=5, suppress_small=True))
