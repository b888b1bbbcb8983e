import math

import numpy as np
import pytest
from scipy.optimize import brentq

from rotwave import ContinuationParams, Grid, VorticityModel, continue_branch, find_lambda_star

G = 9.8
P0 = -1.0


def tanh_dispersion_root(g, p0):
    """Irrotational lambda*: root of lambda = g tanh(|p0| / sqrt(lambda)), by plain bisection."""
    f = lambda lam: lam - g * math.tanh(abs(p0) / math.sqrt(lam))
    return brentq(f, 1e-6, 10 * g + 10, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


@pytest.fixture(scope="session")
def irrotational():
    return VorticityModel.constant(0.0, -P0)


@pytest.fixture(scope="session")
def favorable():
    return VorticityModel.constant(-0.5, -P0)


@pytest.fixture(scope="session")
def bp_irrotational(irrotational):
    return find_lambda_star(irrotational, P0, G)


@pytest.fixture(scope="session")
def bp_favorable(favorable):
    return find_lambda_star(favorable, P0, G)


@pytest.fixture(scope="session")
def small_grid():
    return Grid(24, 20, P0)


@pytest.fixture(scope="session")
def wave_grid():
    return Grid(64, 60, P0)


@pytest.fixture(scope="session")
def short_branches(favorable, bp_favorable, small_grid):
    params = ContinuationParams(max_steps=12, fd_check_every=0)
    return (continue_branch(favorable, G, bp_favorable, "+", params, small_grid),
            continue_branch(favorable, G, bp_favorable, "-", params, small_grid))


def first_wave(branch, fraction=0.05):
    """First point whose crest-trough amplitude reaches ``fraction`` of the mean depth."""
    for pt in branch.points:
        top = pt.h.top
        depth = np.trapezoid(top, pt.h.grid.q) / np.pi
        if pt.amplitude >= fraction * depth:
            return pt
    raise AssertionError("branch never reached amplitude %.3g of depth" % fraction)


@pytest.fixture(scope="session")
def mid_waves(irrotational, favorable, bp_irrotational, bp_favorable, wave_grid):
    """Branch points with amplitude >= 5% of depth on the 64x60 grid, keyed by vorticity."""
    params = ContinuationParams(max_steps=15, fd_check_every=0)
    out = {}
    for name, model, bp in (("irrotational", irrotational, bp_irrotational),
                            ("favorable", favorable, bp_favorable)):
        br = continue_branch(model, G, bp, "+", params, wave_grid)
        out[name] = (model, first_wave(br))
    return out


# (criterion, part, passed, detail) rows appended by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit, part, ok, detail in ACCEPTANCE:
        tr.write_line("  %-4s criterion %-2d %-34s %s" % ("PASS" if ok else "FAIL", crit, part, detail))
    tr.write_line("")
    for crit in sorted({row[0] for row in ACCEPTANCE}):
        rows = [r for r in ACCEPTANCE if r[0] == crit]
        bad = [r[1] for r in rows if not r[2]]
        tr.write_line("%s criterion %d%s" % ("FAIL" if bad else "PASS", crit,
                                             "  (failed: %s)" % ", ".join(bad) if bad else ""))
