"""Laminar (flat-surface) trivial solutions H(p; lambda) and the head Q(lambda)."""

import logging
from dataclasses import dataclass

import numpy as np

from rotwave.errors import ParameterError
from rotwave.quadrature import cumulative_gauss_legendre, gauss_legendre
from rotwave.vorticity import big_gamma, gamma_extrema

log = logging.getLogger(__name__)

EPS_LAMBDA = 1e-8


@dataclass(frozen=True)
class LaminarFlow:
    lam: float
    q_head: float
    depth: float
    p: np.ndarray
    h_profile: np.ndarray
    hp_profile: np.ndarray


def lambda_floor(model, p0):
    """-2*Gamma_0, the lower end of the admissible lambda range."""
    g0, _ = gamma_extrema(model, p0)
    return -2.0 * g0


def _check_lambda(model, lam, p0, eps=0.0):
    floor = lambda_floor(model, p0)
    if not lam > floor + eps:
        raise ParameterError("lambda=%g must exceed -2*Gamma_0=%g" % (lam, floor + eps))


def _speed_sq(model, lam, p):
    return lam + 2.0 * big_gamma(model, p)


def laminar_height(model, lam, p, p0=None):
    """H(p; lambda) = int_{p0}^p (lambda + 2 Gamma(s))^(-1/2) ds."""
    p0 = -model.psi_max if p0 is None else p0
    _check_lambda(model, lam, p0)
    if not p0 - 1e-12 <= p <= 1e-12:
        raise ParameterError("p outside [p0, 0]")
    return gauss_legendre(lambda s: _speed_sq(model, lam, s) ** -0.5, p0, min(p, 0.0))


def bernoulli_head(model, lam, p0, g):
    """Q(lambda) = lambda + 2 g H(0; lambda)."""
    return lam + 2.0 * g * laminar_height(model, lam, 0.0, p0)


def build_laminar(model, lam, p0, g, n_p, eps_lambda=EPS_LAMBDA):
    _check_lambda(model, lam, p0, eps_lambda)
    p = np.linspace(p0, 0.0, n_p + 1)
    h = cumulative_gauss_legendre(lambda s: _speed_sq(model, lam, s) ** -0.5, p)
    h[0] = 0.0
    depth = laminar_height(model, lam, 0.0, p0)
    hp = _speed_sq(model, lam, p) ** -0.5
    return LaminarFlow(lam=float(lam), q_head=float(lam + 2.0 * g * depth), depth=float(depth),
                       p=p, h_profile=h, hp_profile=hp)


def laminar_scan(model, p0, g, lam_min=None, lam_max=None, n=200):
    """Rows (lambda, Q(lambda), d(lambda)) over a uniform lambda grid."""
    floor = lambda_floor(model, p0)
    lam_min = floor + EPS_LAMBDA if lam_min is None else lam_min
    lam_max = floor + 20.0 if lam_max is None else lam_max
    rows = []
    for lam in np.linspace(lam_min, lam_max, n):
        d = laminar_height(model, lam, 0.0, p0)
        rows.append((float(lam), float(lam + 2.0 * g * d), float(d)))
    qs = np.array([r[1] for r in rows])
    slope_changes = int(np.count_nonzero(np.diff(np.sign(np.diff(qs)))))
    log.debug("dQ/dlambda changes sign %d time(s) on [%g, %g]", slope_changes, lam_min, lam_max)
    return rows
