"""Finite-difference height equation on the half-period rectangle.

Nodes (q_i, p_j), q_i = i*pi/nq, p_j = p0 + j*|p0|/np.  The bottom row
j = 0 is the Dirichlet condition h = 0 and is not an unknown; rows
1..np-1 carry the interior equation F1 and row np the Bernoulli
condition F2.  Even reflection across q = 0 and q = pi is built into the
difference operators, so every field represents an even 2*pi-periodic
function.  Unknowns and equations are ordered p-level major.
"""

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from rotwave.errors import SingularMatrixError
from rotwave.vorticity import VorticityModel, gamma_at

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Grid:
    nq: int
    np: int
    p0: float

    def __post_init__(self):
        if self.nq < 8 or self.np < 8:
            raise ValueError("grid needs nq >= 8 and np >= 8")
        if not self.p0 < 0:
            raise ValueError("p0 must be negative")

    @property
    def dq(self):
        return np.pi / self.nq

    @property
    def dp(self):
        return -self.p0 / self.np

    @property
    def q(self):
        return np.linspace(0.0, np.pi, self.nq + 1)

    @property
    def p(self):
        return np.linspace(self.p0, 0.0, self.np + 1)

    @property
    def n_unknowns(self):
        return (self.nq + 1) * self.np


@dataclass
class HeightField:
    """Nodal values h[i, j] = h(q_i, p_j), shape (nq + 1, np + 1)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        shape = (self.grid.nq + 1, self.grid.np + 1)
        if self.values.shape != shape:
            raise ValueError("values must have shape %s, got %s" % (shape, self.values.shape))
        if np.any(self.values[:, 0] != 0.0):
            raise ValueError("bottom row must be identically zero")

    @classmethod
    def from_unknowns(cls, grid, u):
        full = np.concatenate([np.zeros(grid.nq + 1), np.asarray(u, dtype=float)])
        return cls(grid, full.reshape(grid.np + 1, grid.nq + 1).T.copy())

    @classmethod
    def from_profile(cls, grid, profile):
        """q-independent field from a p-profile sampled at the grid levels."""
        profile = np.array(profile, dtype=float)
        profile[0] = 0.0
        return cls(grid, np.tile(profile, (grid.nq + 1, 1)))

    @property
    def unknowns(self):
        return self.values.T.ravel()[self.grid.nq + 1:].copy()

    @property
    def top(self):
        return self.values[:, -1]

    def copy(self):
        return HeightField(self.grid, self.values.copy())


@dataclass(frozen=True)
class NewtonReport:
    iterations: int
    final_residual: float
    converged: bool
    damping_used: bool
    failure: str = None


class _Operators:
    """Sparse difference operators on the full node vector (p-major)."""

    def __init__(self, grid):
        nq1, np1 = grid.nq + 1, grid.np + 1
        dq, dp = grid.dq, grid.dp

        dq1 = sp.lil_matrix((nq1, nq1))
        dqq1 = sp.lil_matrix((nq1, nq1))
        for i in range(1, nq1 - 1):
            dq1[i, i - 1], dq1[i, i + 1] = -0.5 / dq, 0.5 / dq
            dqq1[i, i - 1], dqq1[i, i], dqq1[i, i + 1] = 1 / dq**2, -2 / dq**2, 1 / dq**2
        # reflection ghosts: h[-1] = h[1], h[nq+1] = h[nq-1]
        dqq1[0, 0], dqq1[0, 1] = -2 / dq**2, 2 / dq**2
        dqq1[nq1 - 1, nq1 - 1], dqq1[nq1 - 1, nq1 - 2] = -2 / dq**2, 2 / dq**2

        dp1 = sp.lil_matrix((np1, np1))
        dpp1 = sp.lil_matrix((np1, np1))
        for j in range(1, np1 - 1):
            dp1[j, j - 1], dp1[j, j + 1] = -0.5 / dp, 0.5 / dp
            dpp1[j, j - 1], dpp1[j, j], dpp1[j, j + 1] = 1 / dp**2, -2 / dp**2, 1 / dp**2
        dp1[0, 0], dp1[0, 1], dp1[0, 2] = -1.5 / dp, 2.0 / dp, -0.5 / dp
        dp1[np1 - 1, np1 - 1], dp1[np1 - 1, np1 - 2], dp1[np1 - 1, np1 - 3] = 1.5 / dp, -2.0 / dp, 0.5 / dp

        iq, ip = sp.identity(nq1, format="csr"), sp.identity(np1, format="csr")
        self.full = {
            "q": sp.kron(ip, dq1.tocsr(), format="csr"),
            "qq": sp.kron(ip, dqq1.tocsr(), format="csr"),
            "p": sp.kron(dp1.tocsr(), iq, format="csr"),
            "pp": sp.kron(dpp1.tocsr(), iq, format="csr"),
            "pq": sp.kron(dp1.tocsr(), dq1.tocsr(), format="csr"),
            "qqp": sp.kron(dp1.tocsr(), dqq1.tocsr(), format="csr"),
        }
        unk = slice(nq1, nq1 * np1)
        self.unk = {k: v[unk, unk].tocsr() for k, v in self.full.items()}
        self.top = np.zeros(grid.n_unknowns, dtype=bool)
        self.top[-nq1:] = True
        # p of each unknown row
        self.p_rows = np.repeat(grid.p[1:], nq1)


@lru_cache(maxsize=16)
def operators(grid):
    return _Operators(grid)


def nodal_derivatives(h, which=("q", "p", "qq", "pp", "pq")):
    """Discrete derivatives of ``h`` at every node, each shaped like ``h.values``."""
    ops = operators(h.grid)
    flat = h.values.T.ravel()
    shape = (h.grid.np + 1, h.grid.nq + 1)
    return {k: (ops.full[k] @ flat).reshape(shape).T for k in which}


def _derivs(ops, u):
    return {k: ops.unk[k] @ u for k in ("q", "p", "qq", "pp", "pq")}


def _gamma_rows(model, ops):
    return gamma_at(model, -ops.p_rows)


def residual(model, g, q_head, h):
    """Discrete F1 at interior nodes and F2 at top nodes, unknown ordering."""
    ops = operators(h.grid)
    u = h.unknowns
    d = _derivs(ops, u)
    hq, hp, hqq, hpp, hpq = d["q"], d["p"], d["qq"], d["pp"], d["pq"]
    f1 = (1 + hq**2) * hpp - 2 * hp * hq * hpq + hp**2 * hqq + _gamma_rows(model, ops) * hp**3
    f2 = 1 + hq**2 + (2 * g * u - q_head) * hp**2
    return np.where(ops.top, f2, f1)


def jacobian(model, g, q_head, h):
    """Exact derivative of ``residual`` with respect to the unknowns (CSR)."""
    ops = operators(h.grid)
    u = h.unknowns
    d = _derivs(ops, u)
    hq, hp, hqq, hpp, hpq = d["q"], d["p"], d["qq"], d["pp"], d["pq"]
    top = ops.top
    gam = _gamma_rows(model, ops)
    coef = {
        "pp": np.where(top, 0.0, 1 + hq**2),
        "pq": np.where(top, 0.0, -2 * hp * hq),
        "qq": np.where(top, 0.0, hp**2),
        "q": np.where(top, 2 * hq, 2 * (hq * hpp - hp * hpq)),
        "p": np.where(top, 2 * (2 * g * u - q_head) * hp, 2 * hp * hqq - 2 * hq * hpq + 3 * gam * hp**2),
    }
    jac = sp.diags(np.where(top, 2 * g * hp**2, 0.0))
    for k, c in coef.items():
        jac = jac + sp.diags(c) @ ops.unk[k]
    return jac.tocsr()


def dq_residual(model, g, q_head, h):
    """d(residual)/dQ: zero on interior rows, -h_p^2 on the top row."""
    ops = operators(h.grid)
    hp = ops.unk["p"] @ h.unknowns
    return np.where(ops.top, -hp**2, 0.0)


def linear_solve(op, rhs, backward_tol=1e-12):
    """Sparse LU (partial pivoting) solve with one step of iterative refinement."""
    op = sp.csc_matrix(op)
    rhs = np.asarray(rhs, dtype=float)
    if op.shape[0] != op.shape[1] or op.shape[0] != rhs.shape[0]:
        raise ValueError("operator must be square and match the right-hand side")
    try:
        lu = splu(op)
    except RuntimeError as exc:
        raise SingularMatrixError("factorization failed: %s" % exc, condition=np.inf) from None
    piv = np.abs(lu.U.diagonal())
    ratio = piv.min() / piv.max() if piv.max() > 0 else 0.0
    if ratio <= 1e-15:
        raise SingularMatrixError("numerically singular matrix (pivot ratio %.3e)" % ratio,
                                  condition=1.0 / ratio if ratio > 0 else np.inf)
    x = lu.solve(rhs)
    norm_a = abs(op).sum(axis=0).max()

    def backward(x):
        r = rhs - op @ x
        return r, np.max(np.abs(r)) / (norm_a * np.max(np.abs(x)) + np.max(np.abs(rhs)) + 1e-300)

    r, err = backward(x)
    if err > backward_tol:
        x = x + lu.solve(r)
        r, err = backward(x)
    if not np.all(np.isfinite(x)) or err > backward_tol:
        raise SingularMatrixError("linear solve lost accuracy (backward error %.3e, pivot ratio %.3e)"
                                  % (err, ratio), condition=1.0 / ratio)
    return x


def hp_min(h):
    return float(np.min(nodal_derivatives(h, ("p",))["p"]))


def damped_newton(fun, jac, x0, tol, max_iter, admissible=None, max_halvings=8):
    """Newton iteration with step halving on residual-norm increase.

    ``fun``/``jac`` act on a flat vector.  ``admissible(x)`` rejects trial
    iterates (treated like a norm increase).  Returns (x, NewtonReport).
    """
    x = np.array(x0, dtype=float)
    r = fun(x)
    norm = float(np.max(np.abs(r)))
    damped = False
    for it in range(max_iter + 1):
        if norm <= tol:
            return x, NewtonReport(it, norm, True, damped)
        if it == max_iter:
            break
        try:
            step = linear_solve(jac(x), -r)
        except SingularMatrixError as exc:
            return x, NewtonReport(it, norm, False, damped, failure="linear solve: %s" % exc)
        t = 1.0
        breached = False
        for _ in range(max_halvings + 1):
            trial = x + t * step
            if admissible is None or admissible(trial):
                r_trial = fun(trial)
                n_trial = float(np.max(np.abs(r_trial)))
                if np.isfinite(n_trial) and n_trial < norm:
                    break
            else:
                breached = True
            t *= 0.5
            damped = True
        else:
            reason = "stagnation breach" if breached else "no decrease after %d halvings" % max_halvings
            return x, NewtonReport(it, norm, False, damped, failure=reason)
        x, r, norm = trial, r_trial, n_trial
    return x, NewtonReport(max_iter, norm, False, damped, failure="max iterations")


def newton_solve(model, g, q_head, h0, tol=1e-10, max_iter=25):
    """Solve F(Q, h) = 0 at fixed Q.  Returns (HeightField, NewtonReport)."""
    grid = h0.grid
    if not np.isfinite(tol):
        return h0.copy(), NewtonReport(0, float(np.max(np.abs(residual(model, g, q_head, h0)))), True, False)
    if hp_min(h0) <= 0:
        return h0.copy(), NewtonReport(0, np.inf, False, False, failure="stagnation breach")

    def fun(u):
        return residual(model, g, q_head, HeightField.from_unknowns(grid, u))

    def jac(u):
        return jacobian(model, g, q_head, HeightField.from_unknowns(grid, u))

    def admissible(u):
        return hp_min(HeightField.from_unknowns(grid, u)) > 0

    u, report = damped_newton(fun, jac, h0.unknowns, tol, max_iter, admissible)
    return HeightField.from_unknowns(grid, u), report


def save_heightfield(path, h, q_head, g, model, extra=None):
    """CSV matrix (rows p-levels bottom to top) behind a one-line JSON header."""
    header = {"nq": h.grid.nq, "np": h.grid.np, "p0": h.grid.p0, "Q": q_head, "g": g,
              "vorticity": model.to_dict()}
    if extra:
        header.update(extra)
    lines = ["# " + json.dumps(header, sort_keys=True)]
    for row in h.values.T:
        lines.append(",".join("%.17g" % v for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_heightfield(path):
    """Inverse of ``save_heightfield``: returns (HeightField, header, model)."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise ValueError("missing JSON header line")
        header = json.loads(first[2:])
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    grid = Grid(int(header["nq"]), int(header["np"]), float(header["p0"]))
    model = VorticityModel.from_dict(header["vorticity"], -grid.p0)
    return HeightField(grid, data.T), header, model
