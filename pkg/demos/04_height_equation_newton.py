"""The height equation on the half-period rectangle and its Newton solver.

h(q, p) is discretised on q in [0, pi] (even reflection at both sides),
p in [p0, 0] with h = 0 at the bed.  The interior carries the quasilinear
elliptic operator, and the top row the Bernoulli condition.  The Jacobian
is assembled exactly from the discrete formulas.
"""

import numpy as np

from rotwave import Grid, HeightField, VorticityModel, build_laminar, find_lambda_star, jacobian, newton_solve, residual
from rotwave.checks import jacobian_fd_check
from rotwave.heightpde import nodal_derivatives

P0, G = -1.0, 9.8
m = VorticityModel.constant(-0.5, 1.0)
bp = find_lambda_star(m, P0, G)

# second-order truncation: the laminar residual drops about 4x per halving
for nq, n_p in ((16, 25), (32, 50), (64, 100)):
    grid = Grid(nq, n_p, P0)
    lf = build_laminar(m, 4.0, P0, G, n_p)
    r = residual(m, G, lf.q_head, HeightField.from_profile(grid, lf.h_profile))
    print("grid %3dx%3d  laminar residual %.3e" % (nq, n_p, np.max(np.abs(r))))

grid = Grid(32, 30, P0)
print("\nJacobian vs central differences: %.2e" % jacobian_fd_check(m, G, grid, bp.lambda_star))
lf = build_laminar(m, bp.lambda_star, P0, G, grid.np)
J = jacobian(m, G, lf.q_head, HeightField.from_profile(grid, lf.h_profile))
print("Jacobian: %d unknowns, %d nonzeros" % (J.shape[0], J.nnz))

# at Q* a small cosine bump relaxes back to the flat flow.  Q* is also where
# the Jacobian is (nearly) singular, and how nearly depends on how close the
# discrete bifurcation point falls to the continuous one; when the damped
# step cannot reduce the residual, the failure is reported, not hidden.
for nq, n_p in ((24, 20), (32, 30), (64, 60)):
    grid = Grid(nq, n_p, P0)
    lf = build_laminar(m, bp.lambda_star, P0, G, grid.np)
    phi = bp.phi_star(grid)
    phi[:, 0] = 0
    h0 = HeightField(grid, np.tile(lf.h_profile, (grid.nq + 1, 1)) + 1e-3 * phi)
    h, rep = newton_solve(m, G, bp.q_star, h0, max_iter=40)
    hq = np.max(np.abs(nodal_derivatives(h, ("q",))["q"]))
    print("grid %dx%d: converged=%s after %d iterations, residual %.1e, max |h_q| %.1e%s"
          % (nq, n_p, rep.converged, rep.iterations, rep.final_residual, hq,
             "" if rep.converged else " (%s)" % rep.failure))
