"""Which vorticity functions does the existence theory cover?

A vorticity function gamma(psi) is admissible when a certain weighted
integral of 2*Gamma - 2*Gamma_0 stays below g * p0^2.  It is *favorable*
when gamma <= 0 and gamma' <= 0; that is what the displacement
monotonicity property needs.
"""

import numpy as np

from rotwave import VorticityModel, big_gamma, check_amplitude_condition, gamma_extrema

P0, G = -1.0, 9.8

models = {
    "irrotational": VorticityModel.constant(0.0, 1.0),
    "uniform -0.5": VorticityModel.constant(-0.5, 1.0),
    "adverse 1 + 2 psi": VorticityModel.affine(1.0, 2.0, 1.0),
    "tabulated -psi^2": VorticityModel.tabulated([(s, -s * s) for s in np.linspace(0, 1, 6)], 1.0),
}

print("%-20s %9s %9s %9s %11s %10s" % ("model", "Gamma_0", "Gamma_1", "lhs", "admissible", "favorable"))
for name, m in models.items():
    rep = check_amplitude_condition(m, P0, G)
    print("%-20s %9.4f %9.4f %9.4f %11s %10s"
          % (name, rep.gamma0, rep.gamma1, rep.condition_lhs, rep.admissible, rep.favorable))

# Gamma(p) integrates gamma(-s) from 0 to p; the closed form and the quadrature agree
m = models["adverse 1 + 2 psi"]
p = np.linspace(P0, 0, 5)
print("\nGamma(p) for gamma = 1 + 2 psi")
for a, b, c in zip(p, big_gamma(m, p), big_gamma(m, p, method="quadrature")):
    print("  p=%5.2f  closed %.12f  quadrature %.12f" % (a, b, c))

# Scaling a strong adverse vorticity eventually breaks the smallness condition
print("\nuniform vorticity omega > 0:")
for omega in (1, 2, 4, 8):
    rep = check_amplitude_condition(VorticityModel.constant(omega, 1.0), P0, G)
    print("  omega=%d  lhs=%.3f  rhs=%.1f  admissible=%s" % (omega, rep.condition_lhs, rep.condition_rhs, rep.admissible))
print("extrema of Gamma for omega=4:", gamma_extrema(VorticityModel.constant(4.0, 1.0), P0))
