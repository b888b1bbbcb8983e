"""Composite Gauss-Legendre quadrature with panel doubling."""

import numpy as np
from scipy import integrate

from rotwave.errors import NumericError

_ORDER = 10
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(_ORDER)


def _composite(f, a, b, panels):
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return float(np.sum(half[:, None] * _WEIGHTS[None, :] * fx))


def gauss_legendre(f, a, b, rtol=1e-12, atol=1e-15, panels=1, max_panels=4096):
    """Integrate a vectorised ``f`` over [a, b].

    The panel count doubles until two successive results agree to ``rtol``
    (relative) or ``atol`` (absolute). Integrands with endpoint singularities
    that do not converge by ``max_panels`` are handed to adaptive QUADPACK.
    """
    if a == b:
        return 0.0
    prev = _composite(f, a, b, panels)
    while panels < max_panels:
        panels *= 2
        cur = _composite(f, a, b, panels)
        if not np.isfinite(cur):
            raise NumericError("non-finite integrand on [%g, %g]" % (a, b))
        if abs(cur - prev) <= max(rtol * abs(cur), atol):
            return cur
        prev = cur
    val, _ = integrate.quad(lambda t: float(f(np.array([t]))[0]), a, b, limit=400,
                            epsabs=atol, epsrel=rtol)
    if not np.isfinite(val):
        raise NumericError("non-finite integrand on [%g, %g]" % (a, b))
    return float(val)


def cumulative_gauss_legendre(f, nodes, rtol=1e-13, max_sub=64):
    """Running integral of ``f`` from ``nodes[0]`` to every node.

    Each cell is split into ``sub`` Gauss-Legendre panels, ``sub`` doubling
    until the largest change of any cell integral is below ``rtol`` times the
    total.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.size < 2:
        return np.zeros_like(nodes)

    def cells(sub):
        a, b = nodes[:-1], nodes[1:]
        t = np.linspace(0.0, 1.0, sub + 1)
        lo = a[:, None] + (b - a)[:, None] * t[None, :-1]
        hi = a[:, None] + (b - a)[:, None] * t[None, 1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[..., None] + half[..., None] * _NODES
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
        return np.sum(half[..., None] * _WEIGHTS * fx, axis=(1, 2))

    sub = 1
    prev = cells(sub)
    while sub < max_sub:
        sub *= 2
        cur = cells(sub)
        if not np.all(np.isfinite(cur)):
            raise NumericError("non-finite integrand in cumulative quadrature")
        scale = max(np.sum(np.abs(cur)), 1e-300)
        if np.max(np.abs(cur - prev)) <= rtol * scale:
            prev = cur
            break
        prev = cur
    return np.concatenate([[0.0], np.cumsum(prev)])
