"""Pseudo-arclength tracing of the two bifurcating branches.

The state is x = (u, Q) with u the unknown nodal heights.  Lengths use
the weighted norm ||x||^2 = w * |u|^2 + Q^2 with w = 1 / len(u), so the
arclength s measures the RMS change of h.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq, minimize_scalar

from rotwave.errors import SingularMatrixError
from rotwave.heightpde import (
    HeightField,
    NewtonReport,
    damped_newton,
    dq_residual,
    hp_min,
    jacobian,
    linear_solve,
    nodal_derivatives,
    residual,
)
from rotwave.laminar import EPS_LAMBDA, bernoulli_head, build_laminar, lambda_floor

log = logging.getLogger(__name__)

TERMINATIONS = ("stagnation_threshold", "left_O_delta", "step_limit", "solver_failure")


@dataclass(frozen=True)
class ContinuationParams:
    ds0: float = 1e-3
    ds_min: float = 1e-6
    ds_max: float = 1e-2
    max_steps: int = 200
    delta: float = 1e-3
    hp_cap: float = None  # None: 50 * H_p(0) at the bifurcation point
    newton_tol: float = 1e-10
    newton_max_iter: int = 25
    growth: float = 1.3
    fast_iterations: int = 3
    fd_check_every: int = 10

    def __post_init__(self):
        if not self.ds_min <= self.ds0 <= self.ds_max:
            raise ValueError("need ds_min <= ds0 <= ds_max")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")


@dataclass
class BranchPoint:
    s: float
    q_head: float
    h: HeightField
    amplitude: float
    min_hp: float
    max_hp: float
    min_cu: float
    newton: NewtonReport
    jac_fd_error: float = None


@dataclass
class Branch:
    nu: str
    points: list = field(default_factory=list)
    termination: str = None
    hp_cap: float = None


def _weight(grid):
    return 1.0 / grid.n_unknowns


def initial_tangent(bp, grid):
    """(Qdot, hdot) = (0, phi*) scaled to unit weighted norm."""
    phi = bp.phi_star(grid)
    phi[:, 0] = 0.0
    hdot = HeightField(grid, phi)
    norm = np.sqrt(_weight(grid) * np.sum(hdot.unknowns ** 2))
    hdot.values /= norm
    return 0.0, hdot


def _make_point(s, q_head, h, report, g, fd_error=None):
    hp = nodal_derivatives(h, ("p",))["p"]
    mx = float(np.max(hp))
    return BranchPoint(s=float(s), q_head=float(q_head), h=h,
                       amplitude=float(np.max(h.top) - np.min(h.top)),
                       min_hp=float(np.min(hp)), max_hp=mx, min_cu=1.0 / mx, newton=report,
                       jac_fd_error=fd_error)


def jacobian_fd_error(model, g, q_head, h, direction, eps=1e-6):
    """Relative sup-norm gap between J*d and a central difference of the residual."""
    grid = h.grid
    u = h.unknowns
    an = jacobian(model, g, q_head, h) @ direction
    fp = residual(model, g, q_head, HeightField.from_unknowns(grid, u + eps * direction))
    fm = residual(model, g, q_head, HeightField.from_unknowns(grid, u - eps * direction))
    fd = (fp - fm) / (2 * eps)
    return float(np.max(np.abs(fd - an)) / max(np.max(np.abs(an)), 1e-300))


def _bordered(model, g, grid, u, q_head, tan_u, tan_q, w):
    h = HeightField.from_unknowns(grid, u)
    jac = jacobian(model, g, q_head, h)
    col = dq_residual(model, g, q_head, h)[:, None]
    row = (w * tan_u)[None, :]
    return sp.bmat([[jac, sp.csr_matrix(col)], [sp.csr_matrix(row), np.array([[tan_q]])]], format="csc")


def continue_branch(model, g, bp, nu, params, grid, jacobian_check=None):
    """Trace K^nu from the bifurcation point; nu is '+' or '-'."""
    if nu in ("+", "plus", 1):
        nu, sign = "plus", 1.0
    elif nu in ("-", "minus", -1):
        nu, sign = "minus", -1.0
    else:
        raise ValueError("nu must be '+' or '-'")
    w = _weight(grid)
    n = grid.n_unknowns
    lam = build_laminar(model, bp.lambda_star, grid.p0, g, grid.np)
    hp_cap = params.hp_cap if params.hp_cap is not None else 50.0 * float(lam.hp_profile[-1])

    # points[0] is the sampled H at Q*; with vorticity it misses the discrete
    # equations by O(dp^2), which the first corrector absorbs
    h0 = HeightField.from_profile(grid, lam.h_profile)
    f0 = float(np.max(np.abs(residual(model, g, bp.q_star, h0))))
    branch = Branch(nu=nu, hp_cap=hp_cap)
    branch.points.append(_make_point(0.0, bp.q_star, h0, NewtonReport(0, f0, f0 <= params.newton_tol, False), g))

    qdot, hdot = initial_tangent(bp, grid)
    tan_u, tan_q = sign * hdot.unknowns, sign * qdot
    x = np.concatenate([h0.unknowns, [bp.q_star]])
    ds = params.ds0
    s = 0.0
    accepted = 0

    def admissible(y):
        return hp_min(HeightField.from_unknowns(grid, y[:n])) > 0

    while accepted < params.max_steps:
        pred = x + ds * np.concatenate([tan_u, [tan_q]])

        def fun(y, pred=pred, tan_u=tan_u, tan_q=tan_q):
            h = HeightField.from_unknowns(grid, y[:n])
            arc = w * tan_u @ (y[:n] - pred[:n]) + tan_q * (y[n] - pred[n])
            return np.concatenate([residual(model, g, y[n], h), [arc]])

        def jac(y, tan_u=tan_u, tan_q=tan_q):
            return _bordered(model, g, grid, y[:n], y[n], tan_u, tan_q, w)

        y, report = damped_newton(fun, jac, pred, params.newton_tol, params.newton_max_iter, admissible)
        if not report.converged:
            log.debug("corrector failed at ds=%g: %s", ds, report.failure)
            ds *= 0.5
            if ds < params.ds_min:
                branch.termination = "solver_failure"
                break
            continue

        h = HeightField.from_unknowns(grid, y[:n])
        q_head = y[n]
        fd_err = None
        if params.fd_check_every and (accepted + 1) % params.fd_check_every == 0:
            rng = np.random.default_rng(accepted + 1)
            fd_err = jacobian_fd_error(model, g, q_head, h, rng.standard_normal(n))
            if jacobian_check is not None:
                jacobian_check(fd_err)
            if fd_err > 1e-6:
                log.warning("Jacobian finite-difference mismatch %.2e at step %d", fd_err, accepted + 1)
        point = _make_point(s + sign * ds, q_head, h, report, g, fd_err)
        if point.min_hp <= params.delta or np.max(2 * g * h.top) >= q_head - params.delta:
            branch.termination = "left_O_delta"
            break

        try:
            z = linear_solve(_bordered(model, g, grid, y[:n], q_head, tan_u, tan_q, w),
                             np.concatenate([np.zeros(n), [1.0]]))
        except SingularMatrixError as exc:
            log.debug("tangent solve failed: %s", exc)
            ds *= 0.5
            if ds < params.ds_min:
                branch.termination = "solver_failure"
                break
            continue
        z /= np.sqrt(w * z[:n] @ z[:n] + z[n] ** 2)
        tan_u, tan_q = z[:n], z[n]

        x = y
        s = point.s
        accepted += 1
        branch.points.append(point)
        if point.max_hp >= hp_cap:
            branch.termination = "stagnation_threshold"
            break
        if report.iterations <= params.fast_iterations:
            ds = min(ds * params.growth, params.ds_max)
    else:
        branch.termination = "step_limit"
    return branch


@lru_cache(maxsize=32)
def _head_minimum(model, p0, g):
    """(lambda floor, lambda at min Q, min Q); Q(lambda) is convex."""
    floor = lambda_floor(model, p0)
    lo = floor + EPS_LAMBDA
    hi = floor + 1.0
    head = lambda lam: bernoulli_head(model, lam, p0, g)
    while head(hi * 2) < head(hi):
        hi *= 2
    res = minimize_scalar(head, bounds=(lo, 2 * hi), method="bounded", options={"xatol": 1e-12})
    return floor, float(res.x), float(res.fun)


def laminar_lambdas(model, p0, g, q_head):
    """All lambda > -2*Gamma_0 with Q(lambda) = q_head (at most two)."""
    floor, lam_c, q_min = _head_minimum(model, p0, g)
    if q_head < q_min:
        return []
    f = lambda lam: bernoulli_head(model, lam, p0, g) - q_head
    roots = []
    lo = floor + EPS_LAMBDA
    if f(lo) >= 0 and lo < lam_c:
        roots.append(brentq(f, lo, lam_c, xtol=1e-14, rtol=1e-14) if f(lam_c) < 0 else lam_c)
    hi = max(2 * lam_c, lam_c + 1.0)
    while f(hi) < 0:
        hi *= 2
    if f(lam_c) < 0:
        roots.append(brentq(f, lam_c, hi, xtol=1e-14, rtol=1e-14))
    elif not roots:
        roots.append(lam_c)
    return roots


def laminar_distance(h, model, g, q_head):
    """Sup-norm distance from h to the laminar flows with the same head Q."""
    lams = laminar_lambdas(model, h.grid.p0, g, q_head)
    if not lams:
        return np.inf
    best = np.inf
    for lam in lams:
        lf = build_laminar(model, lam, h.grid.p0, g, h.grid.np)
        best = min(best, float(np.max(np.abs(h.values - lf.h_profile[None, :]))))
    return best


SUMMARY_COLUMNS = ("s", "Q", "amplitude", "min_hp", "max_hp", "min_cu", "newton_iterations")


def branch_summary(branch):
    """One row per point: s, Q, amplitude, min_hp, max_hp, min_cu, Newton iterations."""
    return [(p.s, p.q_head, p.amplitude, p.min_hp, p.max_hp, p.min_cu, p.newton.iterations)
            for p in branch.points]
