"""The trivial solutions: flat-surface shear flows H(p; lambda).

lambda is the squared relative speed at the surface.  Each laminar flow has
a Bernoulli head Q(lambda) = lambda + 2 g H(0); Q is convex in lambda, so a
given head is reached by at most two laminar flows.
"""

import math

import numpy as np

from rotwave import VorticityModel, bernoulli_head, build_laminar, laminar_height
from rotwave.continuation import laminar_lambdas, _head_minimum
from rotwave.laminar import lambda_floor, laminar_scan

P0, G = -1.0, 9.8
unit = VorticityModel.constant(1.0, 1.0)

# with gamma = 1, Gamma(p) = p, so the admissible range starts at lambda = 2
print("lambda floor for gamma = 1:", lambda_floor(unit, P0))
print("H(0; 4) =", laminar_height(unit, 4.0, 0.0, P0), " closed form 2 - sqrt 2 =", 2 - math.sqrt(2))
print("Q(4)    =", bernoulli_head(unit, 4.0, P0, G))

lf = build_laminar(VorticityModel.constant(-0.5, 1.0), 4.0, P0, G, 10)
print("\nsampled profile for gamma = -0.5, lambda = 4")
for p, h, hp in zip(lf.p, lf.h_profile, lf.hp_profile):
    print("  p=%5.2f  H=%.6f  H_p=%.6f" % (p, h, hp))

rows = np.array(laminar_scan(unit, P0, G, 2.05, 12.0, n=9))
print("\nlambda        Q          depth")
for lam, q, d in rows:
    print("%7.3f  %10.5f  %8.5f" % (lam, q, d))

floor, lam_c, q_min = _head_minimum(unit, P0, G)
print("\nminimum head %.5f at lambda %.5f" % (q_min, lam_c))
print("flows with head Q_min + 1:", laminar_lambdas(unit, P0, G, q_min + 1))
