"""Tracing the wave branch from the bifurcation point toward stagnation.

Pseudo-arclength continuation leaves (Q*, H) along the cosine mode and follows
the nonlinear waves.  The branch stops when max h_p reaches the cap, that is,
when the fluid speed at the crest approaches the wave speed.
"""

import numpy as np

from rotwave import ContinuationParams, Grid, VorticityModel, branch_summary, continue_branch, find_lambda_star, laminar_distance
from rotwave.checks import reflect

P0, G = -1.0, 9.8
m = VorticityModel.constant(0.0, 1.0)
bp = find_lambda_star(m, P0, G)
grid = Grid(32, 30, P0)

branch = continue_branch(m, G, bp, "+", ContinuationParams(max_steps=400), grid)
print("K+ : %d points, stopped by %s (h_p cap %.2f)" % (len(branch.points), branch.termination, branch.hp_cap))
print("%8s %10s %10s %8s %6s" % ("s", "Q", "amplitude", "min_cu", "iters"))
for row in branch_summary(branch)[::15]:
    s, q, a, _, _, cu, it = row
    print("%8.4f %10.5f %10.5f %8.4f %6d" % (s, q, a, cu, it))

# the waves never come back to the flat flows
far = branch.points[10::10]
print("\nsmallest distance to a laminar flow: %.3e"
      % min(laminar_distance(pt.h, m, G, pt.q_head) for pt in far))

# K- is K+ shifted by half a period
minus = continue_branch(m, G, bp, "-", ContinuationParams(max_steps=20), grid)
gap = max(np.max(np.abs(reflect(a.h.values) - b.h.values)) for a, b in zip(branch.points, minus.points))
print("K+ reflected vs K- over %d points: %.1e" % (len(minus.points), gap))
