"""Invariant suite behind ``rotwave check``."""

from dataclasses import dataclass

import numpy as np

from rotwave.continuation import ContinuationParams, continue_branch
from rotwave.dispersion import find_lambda_star
from rotwave.heightpde import Grid, HeightField, jacobian, residual
from rotwave.laminar import build_laminar

ROUNDOFF = 1e-10


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def jacobian_fd_check(model, g, grid, lam, jacobian_fn=jacobian, directions=5, seed=0, eps=1e-6):
    """Worst relative gap between J*d and a central difference over random d."""
    lf = build_laminar(model, lam, grid.p0, g, grid.np)
    base = HeightField.from_profile(grid, lf.h_profile)
    rng = np.random.default_rng(seed)
    u = base.unknowns * (1 + 1e-2 * rng.standard_normal(grid.n_unknowns))
    h = HeightField.from_unknowns(grid, u)
    jac = jacobian_fn(model, g, lf.q_head, h)
    worst = 0.0
    for _ in range(directions):
        d = rng.standard_normal(grid.n_unknowns)
        fd = (residual(model, g, lf.q_head, HeightField.from_unknowns(grid, u + eps * d))
              - residual(model, g, lf.q_head, HeightField.from_unknowns(grid, u - eps * d))) / (2 * eps)
        an = jac @ d
        worst = max(worst, float(np.max(np.abs(fd - an)) / np.max(np.abs(an))))
    return worst


def laminar_residual_norms(model, g, lam, p0, sizes):
    """Sup-norm of the residual of the sampled laminar flow on each (nq, np)."""
    out = []
    for nq, n_p in sizes:
        grid = Grid(nq, n_p, p0)
        lf = build_laminar(model, lam, p0, g, n_p)
        out.append(float(np.max(np.abs(residual(model, g, lf.q_head, HeightField.from_profile(grid, lf.h_profile))))))
    return out


def reflect(values):
    """q -> pi - q on the half-period grid."""
    return values[::-1, :]


def duality_gap(model, g, bp, grid, steps=5):
    params = ContinuationParams(max_steps=steps, fd_check_every=0)
    plus = continue_branch(model, g, bp, "+", params, grid)
    minus = continue_branch(model, g, bp, "-", params, grid)
    n = min(len(plus.points), len(minus.points))
    field_gap = max(float(np.max(np.abs(reflect(a.h.values) - b.h.values)))
                    for a, b in zip(plus.points[:n], minus.points[:n]))
    col_gap = max(max(abs(a.q_head - b.q_head), abs(a.amplitude - b.amplitude))
                  for a, b in zip(plus.points[:n], minus.points[:n]))
    return field_gap, col_gap, n


def run_checks(cfg, jacobian_fn=jacobian):
    model, g, p0 = cfg.vorticity, cfg.g, cfg.p0
    grid = Grid(cfg.nq, cfg.np, p0)
    bp = find_lambda_star(model, p0, g, cfg.shoot_np)
    results = []

    err = jacobian_fd_check(model, g, grid, bp.lambda_star, jacobian_fn)
    results.append(CheckResult("jacobian_fd", err < 1e-6, "max relative error %.3e" % err))

    coarse, fine = laminar_residual_norms(model, g, bp.lambda_star, p0,
                                          [(cfg.nq, cfg.np), (2 * cfg.nq, 2 * cfg.np)])
    if coarse < ROUNDOFF:
        ok, detail = fine < ROUNDOFF, "residual at round-off (%.2e, %.2e)" % (coarse, fine)
    else:
        ratio = coarse / fine
        ok, detail = 3.0 <= ratio <= 5.0, "reduction factor %.3f" % ratio
    results.append(CheckResult("laminar_residual_order", ok, detail))

    n0 = 16
    lams = [find_lambda_star(model, p0, g, n0 * 2**k).lambda_star for k in range(3)]
    d1, d2 = abs(lams[0] - lams[1]), abs(lams[1] - lams[2])
    if d1 < 1e-12 * abs(lams[0]):
        ok, detail = True, "shooting converged to round-off"
    else:
        ratio = d1 / max(d2, 1e-300)
        ok, detail = 8.0 <= ratio <= 32.0, "Richardson ratio %.2f" % ratio
    results.append(CheckResult("sl_richardson", ok, detail))

    fgap, cgap, n = duality_gap(model, g, bp, grid)
    results.append(CheckResult("branch_duality", fgap <= 1e-8 and cgap <= 1e-10,
                               "%d points, field gap %.2e, column gap %.2e" % (n, fgap, cgap)))
    return results
