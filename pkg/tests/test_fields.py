import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import G, P0
from rotwave import Grid, HeightField, build_laminar, displacement_profile, nodal_pattern, reconstruct, surface_geometry
from rotwave.errors import StagnationError
from rotwave.fields import TAU_GEOM, bernoulli_surface_residual, inflection_points, surface_slope_curvature
from rotwave.vorticity import big_gamma


def laminar(model, lam, grid):
    lf = build_laminar(model, lam, P0, G, grid.np)
    return lf, HeightField.from_profile(grid, lf.h_profile)


def test_laminar_reconstruction(favorable):
    grid = Grid(16, 200, P0)
    lf, h = laminar(favorable, 4.0, grid)
    ws = reconstruct(h, c=3.0)
    assert np.max(np.abs(ws.eta)) < 1e-14 and np.all(ws.v == 0)
    speed = -np.sqrt(4.0 + 2 * big_gamma(favorable, grid.p))
    np.testing.assert_allclose(ws.u_rel, np.tile(speed, (grid.nq + 1, 1)), rtol=1e-4)
    np.testing.assert_allclose(ws.u_abs, 3.0 + ws.u_rel)
    assert ws.depth == pytest.approx(lf.depth, rel=1e-13)
    L, mono = displacement_profile(ws, favorable=True)
    assert np.all(L == 0)


def test_laminar_is_trivial_and_unclassifiable(favorable):
    grid = Grid(16, 20, P0)
    _, h = laminar(favorable, 4.0, grid)
    pattern = nodal_pattern(h)
    assert pattern["trivial"] and not any(v for k, v in pattern.items() if k != "trivial")
    rep = surface_geometry(reconstruct(h))
    assert not rep.classifiable and rep.indeterminate == ["amplitude too small to classify"]


def test_reconstruct_rejects_stagnation():
    grid = Grid(8, 8, P0)
    vals = np.tile(grid.p - P0, (9, 1))
    vals[3, 5] = vals[3, 4] - 0.5
    with pytest.raises(StagnationError):
        reconstruct(HeightField(grid, vals))


def brute_force_inflections(eps, n):
    q = np.linspace(0, np.pi, n + 1)
    curv = -eps * (np.cos(q) + 1.2 * np.cos(2 * q))
    k = np.nonzero(np.sign(curv[:-1]) != np.sign(curv[1:]))[0]
    return q[k] + (q[k + 1] - q[k]) * curv[k] / (curv[k] - curv[k + 1])


@pytest.mark.parametrize("nq", [32, 64, 128])
def test_synthetic_inflections_match_fine_scan(nq):
    eps = 1e-2
    q = np.linspace(0, np.pi, nq + 1)
    eta = eps * (np.cos(q) + 0.3 * np.cos(2 * q))
    _, curv = surface_slope_curvature(eta, np.pi / nq)
    locs = inflection_points(curv, q)
    oracle = brute_force_inflections(eps, 10 * nq)
    assert len(locs) == len(oracle) == 2
    np.testing.assert_allclose(locs, oracle, atol=np.pi / nq)
    np.testing.assert_allclose(np.cos(oracle), np.roots([2.4, 1.0, -1.2])[::-1], atol=1e-3)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-4, 1.0), st.floats(-0.2, 0.2))
def test_single_mode_surfaces_have_one_inflection(eps, b):
    # with |b| < 1/4 the curvature -eps (cos q + 4 b cos 2q) changes sign exactly once
    nq = 64
    q = np.linspace(0, np.pi, nq + 1)
    _, curv = surface_slope_curvature(eps * (np.cos(q) + b * np.cos(2 * q)), np.pi / nq)
    assert len(inflection_points(curv, q)) == 1
    assert curv[0] < -TAU_GEOM < TAU_GEOM < curv[-1]


@pytest.mark.parametrize("name", ["irrotational", "favorable"])
def test_mid_branch_geometry(mid_waves, name):
    model, pt = mid_waves[name]
    ws = reconstruct(pt.h)
    assert ws.amplitude >= 0.05 * ws.depth
    rep = surface_geometry(ws)
    assert rep.classifiable and rep.eta_monotone and rep.v_positive and rep.nodal_hq
    assert rep.inflection_parity == "odd"
    assert rep.crest_curvature < -TAU_GEOM and rep.trough_curvature > TAU_GEOM
    if name == "favorable":
        assert rep.displacement_monotone


@pytest.mark.parametrize("name", ["irrotational", "favorable"])
def test_mid_branch_nodal_pattern(mid_waves, name):
    _, pt = mid_waves[name]
    pattern = nodal_pattern(pt.h)
    assert not pattern.pop("trivial")
    assert all(pattern.values()), pattern


@pytest.mark.parametrize("name", ["irrotational", "favorable"])
def test_mid_branch_bernoulli_and_slope(mid_waves, name):
    _, pt = mid_waves[name]
    ws = reconstruct(pt.h)
    assert np.max(np.abs(bernoulli_surface_residual(ws, G, pt.q_head))) < 1e-9
    slope, _ = surface_slope_curvature(ws.eta, ws.grid.dq)
    kinematic = ws.v[:, -1] / ws.u_rel[:, -1]
    assert np.max(np.abs(slope - kinematic)) < 10 * ws.grid.dq**2 * np.max(np.abs(slope))
