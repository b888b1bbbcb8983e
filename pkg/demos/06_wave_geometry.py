"""Physical shape of a computed wave.

From h we rebuild the surface eta, the velocities in the moving frame and
the streamlines, and then test the qualitative picture: the surface falls
monotonically from crest to trough with an odd number of inflection points,
v > 0 in the fluid, and for favorable vorticity each streamline's
crest-to-trough displacement shrinks with depth.
"""

import numpy as np

from rotwave import (ContinuationParams, Grid, VorticityModel, continue_branch, find_lambda_star, nodal_pattern,
                     reconstruct, surface_geometry)
from rotwave.fields import bernoulli_surface_residual

P0, G = -1.0, 9.8
m = VorticityModel.constant(-0.5, 1.0)
bp = find_lambda_star(m, P0, G)
branch = continue_branch(m, G, bp, "+", ContinuationParams(max_steps=25, fd_check_every=0), Grid(64, 60, P0))
pt = branch.points[-1]

ws = reconstruct(pt.h, c=2.5)
geo = surface_geometry(ws)
print("depth %.4f, amplitude %.4f (%.1f%% of depth)" % (ws.depth, ws.amplitude, 100 * ws.amplitude / ws.depth))
for key, val in geo.to_dict().items():
    print("  %-22s %s" % (key, val))

print("\nnodal sign pattern:")
for key, val in nodal_pattern(pt.h).items():
    print("  %-26s %s" % (key, val))

print("\nBernoulli residual on the surface: %.1e" % np.max(np.abs(bernoulli_surface_residual(ws, G, pt.q_head))))
print("displacement L(p) every 10 levels:", np.round(ws.displacement[::10], 5).tolist())
print("u at the crest with c = 2.5: %.4f" % ws.u_abs[0, -1])
