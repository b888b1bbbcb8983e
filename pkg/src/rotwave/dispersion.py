"""Bifurcation point of the linearised height equation.

Substituting m(q, p) = M(p) cos(q) into the linearisation at a laminar
flow gives the Sturm-Liouville problem

    (a^3 M')' = a M,   a(p) = (lambda + 2 Gamma(p))^(1/2),
    M(p0) = 0,         g M(0) = lambda^(3/2) M'(0).

It is integrated as the first-order system M' = P / a^3, P' = a M with
classical RK4 on a uniform p-grid.  Since a(0)^3 = lambda^(3/2), the top
condition reads g M(0) - P(0) = 0.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from rotwave.errors import NoBifurcationError, NumericError, ParameterError
from rotwave.laminar import EPS_LAMBDA, bernoulli_head, laminar_height, lambda_floor
from rotwave.vorticity import big_gamma

log = logging.getLogger(__name__)

_RESCALE = 1e100


@dataclass(frozen=True)
class SturmLiouvilleState:
    lam: float
    p: np.ndarray
    m_profile: np.ndarray
    mismatch: float


def _gamma_samples(model, p0, n_p):
    """Gamma at the nodes and cell midpoints of the uniform p-grid."""
    p = np.linspace(p0, 0.0, 2 * n_p + 1)
    return big_gamma(model, p)


def _integrate(lams, gam, dp, keep_profile=False):
    """RK4 march from p0 to 0 for every lambda in ``lams`` at once.

    Returns (M, P) at p = 0 divided by exp(log_scale), the log scales and,
    if requested, the (rescaled-back) profile M at the nodes.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    a = np.sqrt(lams[:, None] + 2.0 * gam[None, :])
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise NumericError("lambda + 2*Gamma must stay positive on [p0, 0]")
    a3 = a ** 3
    n_p = (gam.size - 1) // 2
    m = np.zeros(lams.size)
    pv = a3[:, 0].copy()  # M'(p0) = 1
    log_scale = np.zeros(lams.size)
    profile = np.empty((lams.size, n_p + 1)) if keep_profile else None
    if keep_profile:
        profile[:, 0] = 0.0
    for j in range(n_p):
        a0, am, a1 = a[:, 2 * j], a[:, 2 * j + 1], a[:, 2 * j + 2]
        c0, cm, c1 = a3[:, 2 * j], a3[:, 2 * j + 1], a3[:, 2 * j + 2]
        k1m, k1p = pv / c0, a0 * m
        m2, p2 = m + 0.5 * dp * k1m, pv + 0.5 * dp * k1p
        k2m, k2p = p2 / cm, am * m2
        m3, p3 = m + 0.5 * dp * k2m, pv + 0.5 * dp * k2p
        k3m, k3p = p3 / cm, am * m3
        m4, p4 = m + dp * k3m, pv + dp * k3p
        k4m, k4p = p4 / c1, a1 * m4
        m = m + dp / 6.0 * (k1m + 2 * k2m + 2 * k3m + k4m)
        pv = pv + dp / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        big = np.maximum(np.abs(m), np.abs(pv))
        over = big > _RESCALE
        if np.any(over):
            m[over] /= big[over]
            pv[over] /= big[over]
            log_scale[over] += np.log(big[over])
        if keep_profile:
            profile[:, j + 1] = m * np.exp(log_scale)
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(pv))):
        raise NumericError("non-finite shooting state")
    return m, pv, log_scale, profile


def _reduced_mismatch(m, pv, g):
    """Scale-free mismatch (g M - P) / (g |M| + |P|); same zeros, bounded by 1."""
    return (g * m - pv) / (g * np.abs(m) + np.abs(pv))


def sl_shoot(model, lam, p0, g, n_p):
    """Shoot the cosine-mode problem at one lambda."""
    if n_p < 16:
        raise ParameterError("shooting needs at least 16 steps")
    floor = lambda_floor(model, p0)
    if not lam > floor:
        raise ParameterError("lambda=%g must exceed -2*Gamma_0=%g" % (lam, floor))
    gam = _gamma_samples(model, p0, n_p)
    m, pv, log_scale, profile = _integrate([lam], gam, -p0 / n_p, keep_profile=True)
    if log_scale[0] > 700 or not np.all(np.isfinite(profile)):
        raise NumericError("shooting solution overflows at lambda=%g" % lam)
    scale = math.exp(log_scale[0])
    mismatch = (g * m[0] - pv[0]) * scale
    return SturmLiouvilleState(lam=float(lam), p=np.linspace(p0, 0.0, n_p + 1),
                               m_profile=profile[0], mismatch=float(mismatch))


@dataclass(frozen=True)
class BifurcationPoint:
    lambda_star: float
    q_star: float
    depth: float
    p0: float
    g: float
    p: np.ndarray
    eigen_m: np.ndarray
    model: object = field(repr=False)
    other_roots: tuple = ()

    def m_on(self, n_p, resolution=400):
        """M(p) at the n_p + 1 nodes of a uniform p-grid, sup-normalised."""
        sub = max(1, -(-resolution // n_p))
        gam = _gamma_samples(self.model, self.p0, n_p * sub)
        _, _, _, prof = _integrate([self.lambda_star], gam, -self.p0 / (n_p * sub), keep_profile=True)
        prof = prof[0, ::sub]
        return prof / np.max(np.abs(prof))

    def phi_star(self, grid):
        """phi*(q_i, p_j) = M(p_j) cos(q_i), shape (nq + 1, np + 1)."""
        return np.outer(np.cos(grid.q), self.m_on(grid.np))


def _refine(f, lo, hi, flo, fhi, rtol=1e-13, max_iter=200):
    """Bisection down to a narrow bracket, then safeguarded secant steps."""
    while (hi - lo) > 1e-4 * abs(hi):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    x0, x1, f0, f1 = lo, hi, flo, fhi
    for _ in range(max_iter):
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0) if f1 != f0 else 0.5 * (lo + hi)
        if not lo < x2 < hi:
            x2 = 0.5 * (lo + hi)
        f2 = f(x2)
        if f2 == 0 or abs(x2 - x1) <= rtol * abs(x2):
            return x2
        if np.sign(f2) == np.sign(flo):
            lo, flo = x2, f2
        else:
            hi, fhi = x2, f2
        x0, f0, x1, f1 = x1, f1, x2, f2
    return x1


def find_lambda_star(model, p0, g, n_p=400, eps_lambda=EPS_LAMBDA, growth=1.5, cap=1e8):
    """Smallest lambda > -2*Gamma_0 where the cosine-mode mismatch vanishes."""
    if n_p < 16:
        raise ParameterError("shooting needs at least 16 steps")
    floor = lambda_floor(model, p0)
    gam = _gamma_samples(model, p0, n_p)
    dp = -p0 / n_p
    ladder = floor + eps_lambda * growth ** np.arange(int(math.log(cap / eps_lambda, growth)) + 1)
    m, pv, _, _ = _integrate(ladder, gam, dp)
    r = _reduced_mismatch(m, pv, g)
    flips = np.nonzero(np.sign(r[:-1]) * np.sign(r[1:]) <= 0)[0]
    if flips.size == 0:
        raise NoBifurcationError("no sign change of the mismatch on (%g, %g]" % (ladder[0], ladder[-1]))
    k = int(flips[0])

    def f(lam):
        mm, pp, _, _ = _integrate([lam], gam, dp)
        return float(_reduced_mismatch(mm, pp, g)[0])

    lam_star = ladder[k] if r[k] == 0 else _refine(f, ladder[k], ladder[k + 1], r[k], r[k + 1])
    others = tuple(float(0.5 * (ladder[i] + ladder[i + 1])) for i in flips[1:])
    if others:
        log.info("additional mismatch sign changes near lambda = %s", others)

    state = sl_shoot(model, lam_star, p0, g, n_p)
    eigen = state.m_profile / np.max(np.abs(state.m_profile))
    depth = laminar_height(model, lam_star, 0.0, p0)
    return BifurcationPoint(lambda_star=float(lam_star), q_star=float(bernoulli_head(model, lam_star, p0, g)),
                            depth=float(depth), p0=float(p0), g=float(g), p=state.p, eigen_m=eigen,
                            model=model, other_roots=others)
