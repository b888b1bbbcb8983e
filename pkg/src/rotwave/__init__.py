"""Steady periodic gravity water waves with vorticity.

Height-function formulation on the half-period rectangle, laminar
trivial flows, the cosine-mode bifurcation point, pseudo-arclength
branch tracing and geometric diagnostics of the computed waves.
"""

from rotwave.vorticity import (
    VorticityModel,
    VorticityReport,
    big_gamma,
    check_amplitude_condition,
    gamma_at,
    gamma_extrema,
)
from rotwave.laminar import LaminarFlow, bernoulli_head, build_laminar, laminar_height
from rotwave.dispersion import (
    BifurcationPoint,
    SturmLiouvilleState,
    find_lambda_star,
    sl_shoot,
)
from rotwave.heightpde import (
    Grid,
    HeightField,
    NewtonReport,
    dq_residual,
    jacobian,
    linear_solve,
    newton_solve,
    residual,
)
from rotwave.continuation import (
    Branch,
    BranchPoint,
    ContinuationParams,
    branch_summary,
    continue_branch,
    initial_tangent,
    laminar_distance,
)
from rotwave.fields import (
    GeometryReport,
    WaveSolution,
    displacement_profile,
    nodal_pattern,
    reconstruct,
    surface_geometry,
)

__version__ = "0.1.0"
