"""Where do waves bifurcate from the laminar family?

Linearising about H and looking for a cosine mode m = M(p) cos q gives a
Sturm-Liouville problem with a lambda-dependent boundary condition at the
surface.  Shooting in p and bracketing the sign change of the boundary
mismatch gives lambda*.  Without vorticity it reduces to the classical
relation lambda = g tanh(|p0| / sqrt(lambda)).
"""

import math

from scipy.optimize import brentq

from rotwave import VorticityModel, find_lambda_star, sl_shoot

P0, G = -1.0, 9.8
zero = VorticityModel.constant(0.0, 1.0)

for lam in (2.0, 4.0, 6.0, 9.8):
    st = sl_shoot(zero, lam, P0, G, 200)
    print("lambda=%4.1f  mismatch=%+.5f  g tanh(1/sqrt(lambda)) - lambda=%+.5f"
          % (lam, st.mismatch, G * math.tanh(1 / math.sqrt(lam)) - lam))

bp = find_lambda_star(zero, P0, G)
oracle = brentq(lambda l: l - G * math.tanh(1 / math.sqrt(l)), 0.1, 20, xtol=1e-15)
print("\nirrotational lambda* = %.14f, closed-form root %.14f" % (bp.lambda_star, oracle))
print("Q* = %.6f, depth = %.6f" % (bp.q_star, bp.depth))

# RK4 shooting: the error in lambda* drops 16x per halving of dp
print("\nconvergence for gamma = -0.5:")
fav = VorticityModel.constant(-0.5, 1.0)
prev = None
for n in (16, 32, 64, 128):
    lam = find_lambda_star(fav, P0, G, n).lambda_star
    print("  np=%4d  lambda*=%.12f%s" % (n, lam, "" if prev is None else "  change %.2e" % (lam - prev)))
    prev = lam

# negative vorticity slows the surface current, and lambda* moves with it
for omega in (-1.0, -0.5, 0.0, 0.5, 1.0):
    bp = find_lambda_star(VorticityModel.constant(omega, 1.0), P0, G)
    print("omega=%+.1f  lambda*=%.6f  Q*=%.6f" % (omega, bp.lambda_star, bp.q_star))
