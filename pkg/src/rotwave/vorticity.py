"""Vorticity function gamma(psi) and its antiderivative calculus.

The model is parameterised in the stream-function variable psi in
[0, |p0|].  Everything expressed in the height-function variable p in
[p0, 0] goes through ``big_gamma``, which owns the sign flip
Gamma(p) = int_0^p gamma(-s) ds.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from rotwave.errors import DomainError, NumericError, ParameterError
from rotwave.quadrature import gauss_legendre

KINDS = ("constant", "affine", "polynomial", "tabulated")

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class VorticityModel:
    """gamma as a function of psi on [0, psi_max].

    ``coefficients`` holds ascending polynomial coefficients for the
    ``constant``/``affine``/``polynomial`` kinds, and ``(psi, gamma)`` sample
    pairs for ``tabulated`` (monotone cubic interpolation).
    """

    kind: str
    coefficients: tuple
    psi_max: float
    _pchip: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError("unknown vorticity kind %r" % (self.kind,))
        if not self.psi_max > 0:
            raise ParameterError("psi_max must be positive")
        if self.kind == "tabulated":
            pairs = tuple(tuple(float(v) for v in pair) for pair in self.coefficients)
            if len(pairs) < 2 or any(len(pair) != 2 for pair in pairs):
                raise ParameterError("tabulated vorticity needs at least two (psi, gamma) pairs")
            psi = np.array([pair[0] for pair in pairs])
            if np.any(np.diff(psi) <= 0):
                raise ParameterError("tabulated psi samples must be strictly increasing")
            if psi[0] > _DOMAIN_SLACK or psi[-1] < self.psi_max * (1 - _DOMAIN_SLACK):
                raise ParameterError("tabulated samples must cover [0, psi_max]")
            object.__setattr__(self, "coefficients", pairs)
            object.__setattr__(self, "_pchip", PchipInterpolator(psi, [pair[1] for pair in pairs]))
        else:
            coeffs = tuple(float(c) for c in self.coefficients)
            expected = {"constant": 1, "affine": 2}.get(self.kind)
            if expected is not None and len(coeffs) != expected:
                raise ParameterError("%s vorticity takes %d coefficient(s)" % (self.kind, expected))
            if not coeffs:
                raise ParameterError("polynomial vorticity needs coefficients")
            object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def constant(cls, omega, psi_max):
        return cls("constant", (omega,), psi_max)

    @classmethod
    def affine(cls, a, b, psi_max):
        return cls("affine", (a, b), psi_max)

    @classmethod
    def polynomial(cls, coefficients, psi_max):
        return cls("polynomial", tuple(coefficients), psi_max)

    @classmethod
    def tabulated(cls, pairs: Sequence[Sequence[float]], psi_max):
        return cls("tabulated", tuple(tuple(p) for p in pairs), psi_max)

    def to_dict(self):
        if self.kind == "tabulated":
            coeffs = [list(pair) for pair in self.coefficients]
        else:
            coeffs = list(self.coefficients)
        return {"kind": self.kind, "coefficients": coeffs}

    @classmethod
    def from_dict(cls, spec, psi_max):
        return cls(spec["kind"], tuple(tuple(c) if isinstance(c, (list, tuple)) else c
                                       for c in spec["coefficients"]), psi_max)

    @property
    def is_polynomial(self):
        return self.kind != "tabulated"

    def _check_psi(self, psi):
        psi = np.asarray(psi, dtype=float)
        slack = _DOMAIN_SLACK * self.psi_max
        if np.any(psi < -slack) or np.any(psi > self.psi_max + slack) or np.any(np.isnan(psi)):
            raise DomainError("psi outside [0, %g]" % self.psi_max)
        return np.clip(psi, 0.0, self.psi_max)

    def __call__(self, psi):
        return gamma_at(self, psi)


@dataclass(frozen=True)
class VorticityReport:
    gamma0: float
    gamma1: float
    condition_lhs: float
    condition_rhs: float
    admissible: bool
    favorable: bool


def gamma_at(model, psi):
    """gamma(psi); vectorised over ``psi``."""
    x = model._check_psi(psi)
    if model.kind == "tabulated":
        out = model._pchip(x)
    else:
        out = np.polynomial.polynomial.polyval(x, model.coefficients)
    return float(out) if np.ndim(out) == 0 else out


def gamma_prime(model, psi):
    x = model._check_psi(psi)
    if model.kind == "tabulated":
        out = model._pchip.derivative()(x)
    else:
        dc = np.polynomial.polynomial.polyder(model.coefficients)
        out = np.polynomial.polynomial.polyval(x, dc) * np.ones_like(x)
    return float(out) if np.ndim(out) == 0 else out


def _check_p(model, p):
    p = np.asarray(p, dtype=float)
    slack = _DOMAIN_SLACK * model.psi_max
    if np.any(p > slack) or np.any(p < -model.psi_max - slack) or np.any(np.isnan(p)):
        raise DomainError("p outside [%g, 0]" % -model.psi_max)
    return np.clip(p, -model.psi_max, 0.0)


def big_gamma(model, p, method="closed"):
    """Gamma(p) = int_0^p gamma(-s) ds for p in [p0, 0].

    ``method="closed"`` uses the exact antiderivative (polynomial kinds, and
    the piecewise-cubic antiderivative of the tabulated interpolant);
    ``method="quadrature"`` integrates numerically and serves as a check.
    """
    p = _check_p(model, p)
    if method == "quadrature":
        vals = np.vectorize(lambda b: -gauss_legendre(model, 0.0, -b) if b != 0 else 0.0)(p)
        return float(vals) if np.ndim(vals) == 0 else vals
    if method != "closed":
        raise ValueError("method must be 'closed' or 'quadrature'")
    psi = -p
    if model.kind == "tabulated":
        anti = model._pchip.antiderivative()
        out = -(anti(psi) - anti(0.0))
    else:
        ic = np.polynomial.polynomial.polyint(model.coefficients)
        out = -np.polynomial.polynomial.polyval(psi, ic)
    out = np.where(p == 0.0, 0.0, out)
    return float(out) if np.ndim(out) == 0 else out


def gamma_extrema(model, p0, samples=2001):
    """(Gamma_0, Gamma_1): min and max of Gamma over [p0, 0]."""
    if not p0 < 0:
        raise ParameterError("p0 must be negative")
    p = np.linspace(p0, 0.0, samples)
    vals = big_gamma(model, p)
    found = []
    for sign in (1.0, -1.0):
        k = int(np.argmin(sign * vals))
        best_p, best = p[k], sign * vals[k]
        lo, hi = p[max(k - 1, 0)], p[min(k + 1, samples - 1)]
        if hi > lo:
            res = minimize_scalar(lambda t: sign * big_gamma(model, t), bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-14 * abs(p0)})
            if res.fun < best:
                best_p, best = res.x, res.fun
        found.append(sign * best)
    g0 = min(found[0], 0.0)  # Gamma(0) = 0 is always a candidate
    g1 = max(found[1], 0.0)
    return float(g0), float(g1)


def check_amplitude_condition(model, p0, g):
    """Integral smallness condition on gamma and the favorable-vorticity test."""
    if not p0 < 0:
        raise ParameterError("p0 must be negative")
    if not g > 0:
        raise ParameterError("g must be positive")
    if -p0 > model.psi_max * (1 + _DOMAIN_SLACK):
        raise DomainError("|p0| exceeds the vorticity domain")
    g0, g1 = gamma_extrema(model, p0)

    def integrand(p):
        excess = np.maximum(2.0 * big_gamma(model, p) - 2.0 * g0, 0.0)
        return (p - p0) ** 2 * np.sqrt(excess) + excess ** 1.5

    lhs = gauss_legendre(integrand, p0, 0.0)
    if not np.isfinite(lhs):
        raise NumericError("amplitude-condition integral is not finite")
    rhs = g * p0 ** 2
    psi = np.linspace(0.0, -p0, 2001)
    favorable = bool(np.all(gamma_at(model, psi) <= 0.0) and np.all(gamma_prime(model, psi) <= 0.0))
    return VorticityReport(gamma0=g0, gamma1=g1, condition_lhs=float(lhs), condition_rhs=float(rhs),
                           admissible=bool(lhs < rhs), favorable=favorable)
