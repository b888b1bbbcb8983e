import numpy as np
import pytest

from conftest import G, P0
from rotwave import (ContinuationParams, Grid, HeightField, build_laminar, branch_summary, continue_branch,
                     initial_tangent, laminar_distance)
from rotwave.checks import reflect
from rotwave.continuation import SUMMARY_COLUMNS, laminar_lambdas, _head_minimum


def test_initial_tangent(bp_favorable, small_grid):
    qdot, hdot = initial_tangent(bp_favorable, small_grid)
    assert qdot == 0.0
    assert hdot.values[0, -1] > 0
    np.testing.assert_allclose(hdot.values[-1], -hdot.values[0], atol=1e-14)
    assert small_grid.n_unknowns ** -1 * np.sum(hdot.unknowns ** 2) == pytest.approx(1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        ContinuationParams(ds0=1.0, ds_max=0.1)
    with pytest.raises(ValueError):
        ContinuationParams(delta=0.0)


def test_branch_starts_at_bifurcation(short_branches, bp_favorable):
    plus, _ = short_branches
    p0 = plus.points[0]
    assert p0.s == 0.0 and p0.q_head == bp_favorable.q_star and p0.amplitude == 0.0
    assert p0.newton.iterations == 0
    assert plus.termination == "step_limit" and len(plus.points) == 13


def tangency_defect(model, bp, grid):
    br = continue_branch(model, G, bp, "+", ContinuationParams(max_steps=1), grid)
    pt = br.points[1]
    assert pt.s == pytest.approx(1e-3)
    _, phi = initial_tangent(bp, grid)
    slope = (pt.h.values - br.points[0].h.values) / pt.s
    return np.max(np.abs(slope - phi.values)) / np.max(np.abs(phi.values))


def test_first_point_tangency(irrotational, bp_irrotational):
    # the defect is O(s) plus O(dp^2)/s from the continuous lambda*; it shrinks with the grid
    coarse = tangency_defect(irrotational, bp_irrotational, Grid(24, 20, P0))
    fine = tangency_defect(irrotational, bp_irrotational, Grid(48, 40, P0))
    assert fine < coarse < 0.05


def test_phase_shift_duality(short_branches):
    plus, minus = short_branches
    assert len(plus.points) == len(minus.points)
    for a, b in zip(plus.points, minus.points):
        assert a.s == -b.s
        assert np.max(np.abs(reflect(a.h.values) - b.h.values)) <= 1e-8
        assert abs(a.q_head - b.q_head) <= 1e-10 and abs(a.amplitude - b.amplitude) <= 1e-10


def test_amplitude_grows_near_start(short_branches):
    amp = [row[2] for row in branch_summary(short_branches[0])]
    assert amp[0] == 0.0
    assert np.all(np.diff(amp) > 0)


def test_summary_layout(short_branches):
    rows = branch_summary(short_branches[0])
    assert len(SUMMARY_COLUMNS) == 7 and all(len(r) == 7 for r in rows)
    assert all(r[5] == pytest.approx(1 / r[4]) for r in rows)


def test_zero_steps(favorable, bp_favorable, small_grid):
    br = continue_branch(favorable, G, bp_favorable, "-", ContinuationParams(max_steps=0), small_grid)
    assert len(br.points) == 1 and br.termination == "step_limit"


def test_solver_failure_is_reported(favorable, bp_favorable, small_grid):
    params = ContinuationParams(ds0=1e-2, ds_min=5e-3, newton_max_iter=0, max_steps=5)
    br = continue_branch(favorable, G, bp_favorable, "+", params, small_grid)
    assert br.termination == "solver_failure" and len(br.points) == 1


def test_hp_cap_stops_branch(favorable, bp_favorable, small_grid):
    lf = build_laminar(favorable, bp_favorable.lambda_star, P0, G, small_grid.np)
    cap = 1.02 * np.max(lf.hp_profile)
    params = ContinuationParams(max_steps=200, hp_cap=cap, fd_check_every=0)
    br = continue_branch(favorable, G, bp_favorable, "+", params, small_grid)
    assert br.termination == "stagnation_threshold"
    assert br.points[-1].max_hp >= cap > br.points[-2].max_hp


def test_fd_check_runs_along_branch(favorable, bp_favorable, small_grid):
    seen = []
    params = ContinuationParams(max_steps=10, fd_check_every=5)
    br = continue_branch(favorable, G, bp_favorable, "+", params, small_grid, jacobian_check=seen.append)
    assert len(seen) == 2 and max(seen) < 1e-6
    assert br.points[5].jac_fd_error == seen[0]


def test_laminar_distance_examples(favorable, small_grid):
    lf = build_laminar(favorable, 4.0, P0, G, small_grid.np)
    h = HeightField.from_profile(small_grid, lf.h_profile)
    assert laminar_distance(h, favorable, G, lf.q_head) < 1e-12
    _, _, q_min = _head_minimum(favorable, P0, G)
    assert laminar_distance(h, favorable, G, q_min - 1.0) == np.inf


def test_laminar_lambdas_two_roots(favorable):
    floor, lam_c, q_min = _head_minimum(favorable, P0, G)
    roots = laminar_lambdas(favorable, P0, G, q_min + 1.0)
    assert len(roots) == 2 and roots[0] < lam_c < roots[1]
    lo = build_laminar(favorable, roots[0], P0, G, 10).q_head
    hi = build_laminar(favorable, roots[1], P0, G, 10).q_head
    assert lo == pytest.approx(q_min + 1.0) and hi == pytest.approx(q_min + 1.0)


def test_laminar_distance_on_wave(mid_waves):
    for model, pt in mid_waves.values():
        assert laminar_distance(pt.h, model, G, pt.q_head) >= pt.amplitude / 2
