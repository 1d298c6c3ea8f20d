"""The measure behind the resolution of identity, checked moment by moment."""
import numpy as np

from osc_circle import CurvatureContext, measure_density_canonical, verify_moments

x = np.array([0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
print("Density w(x) for a few curvatures (lambda -> 0 approaches exp(-x))")
print(f"{'x':>6} " + " ".join(f"{'lam=' + str(l):>12}" for l in (0.01, 0.5, 2.0)) + f" {'exp(-x)':>12}")
cols = [measure_density_canonical(CurvatureContext(l), x) for l in (0.01, 0.5, 2.0)]
for i, xi in enumerate(x):
    print(f"{xi:6.1f} " + " ".join(f"{c[i]:12.6f}" for c in cols) + f" {np.exp(-xi):12.6f}")

print("\nint w(x) x^n dx / rho(n) for n = 0..12")
for lam in (0.1, 1.0, 5.0):
    r = verify_moments(CurvatureContext(lam), n_max=12, tol=1e-10)
    print(f"lambda={lam:<4} passed={r.passed}  worst |ratio - 1| = {max(r.relative_errors):.1e}")
