"""Quadrature squeezing S1(phi), S2(phi) and the uncertainty product."""
import math

import numpy as np

from osc_circle import CurvatureContext, build_state, squeezing

for lam, z in ((0.0, 1.5), (0.5, 1.5), (1.5, 1.0)):
    state = build_state(CurvatureContext(lam), z)
    print(f"lambda={lam}, z={z}")
    print(f"  {'phi':>6} {'S1':>10} {'S2':>10} {'(1+S1)(1+S2)':>14}")
    for phi in np.linspace(0.0, math.pi, 7):
        r = squeezing(state, phi)
        print(f"  {phi:6.3f} {r.s1:10.5f} {r.s2:10.5f} {(1 + r.s1) * (1 + r.s2):14.8f}")
    print()

# S1 < 0 means the phi quadrature is squeezed below the vacuum level
