"""Physical reconstruction of a computed wave and its geometric diagnostics.

With q = x, p = -psi and h(q, p) = y + d, the velocities in the moving
frame are u - c = -1/h_p and v = -h_q/h_p.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from rotwave.errors import StagnationError
from rotwave.heightpde import nodal_derivatives

TAU_GEOM = 1e-8


@dataclass
class WaveSolution:
    grid: object
    depth: float
    eta: np.ndarray
    u_rel: np.ndarray
    v: np.ndarray
    streamlines: np.ndarray
    displacement: np.ndarray
    hq: np.ndarray = field(repr=False)
    hp: np.ndarray = field(repr=False)
    u_abs: np.ndarray = field(default=None, repr=False)

    @property
    def amplitude(self):
        return float(self.eta[0] - self.eta[-1])


@dataclass
class GeometryReport:
    eta_monotone: bool
    v_positive: bool
    inflection_count: int
    inflection_locations: list
    crest_curvature: float
    trough_curvature: float
    displacement_monotone: bool
    nodal_hq: bool
    classifiable: bool = True
    indeterminate: list = field(default_factory=list)

    @property
    def inflection_parity(self):
        return "odd" if self.inflection_count % 2 else "even"

    def to_dict(self):
        out = asdict(self)
        out["inflection_parity"] = self.inflection_parity
        return out


def reconstruct(h, c=None):
    """Surface, velocities, streamlines and vertical displacement of ``h``."""
    d = nodal_derivatives(h, ("q", "p"))
    hq, hp = d["q"], d["p"]
    if np.any(hp <= 0):
        raise StagnationError("h_p <= 0 at %d node(s)" % int(np.sum(hp <= 0)))
    top = h.values[:, -1]
    depth = float(np.trapezoid(top, h.grid.q) / np.pi)
    u_rel = -1.0 / hp
    return WaveSolution(grid=h.grid, depth=depth, eta=top - depth, u_rel=u_rel, v=-hq / hp,
                        streamlines=h.values - depth, displacement=h.values[0, :] - h.values[-1, :],
                        hq=hq, hp=hp, u_abs=None if c is None else c + u_rel)


def surface_slope_curvature(eta, dq):
    """Central differences of an even, pi-reflected surface: (eta', eta'')."""
    ext = np.concatenate([[eta[1]], eta, [eta[-2]]])
    slope = (ext[2:] - ext[:-2]) / (2 * dq)
    slope[0] = slope[-1] = 0.0
    curv = (ext[2:] - 2 * ext[1:-1] + ext[:-2]) / dq**2
    return slope, curv


def inflection_points(curv, q, tau=TAU_GEOM):
    """Sign changes of eta'' on (0, pi), located by linear interpolation.

    Values within ``tau`` of zero are skipped; the bracketing significant
    nodes are interpolated instead.
    """
    sig = np.nonzero(np.abs(curv) > tau)[0]
    locs = []
    for a, b in zip(sig[:-1], sig[1:]):
        if np.sign(curv[a]) != np.sign(curv[b]):
            locs.append(float(q[a] + (q[b] - q[a]) * curv[a] / (curv[a] - curv[b])))
    return locs


def nodal_pattern(h, tau=TAU_GEOM):
    """Sign pattern of h_q and its derivatives on the sides of the half-rectangle."""
    d = nodal_derivatives(h, ("q", "qq", "pq", "qqp"))
    hq, hqq, hqp, hqqp = d["q"], d["qq"], d["pq"], d["qqp"]
    if np.max(np.abs(hq)) <= tau:
        return {"trivial": True, "hq_negative_interior_top": False, "hqp_negative_bottom": False,
                "hqq_negative_left": False, "hqq_positive_right": False,
                "hqqp_bottom_left": False, "hqqp_bottom_right": False,
                "corner_top_right": False, "corner_top_left": False}
    return {
        "trivial": False,
        "hq_negative_interior_top": bool(np.all(hq[1:-1, 1:] < -tau)),
        "hqp_negative_bottom": bool(np.all(hqp[1:-1, 0] < -tau)),
        "hqq_negative_left": bool(np.all(hqq[0, 1:-1] < -tau)),
        "hqq_positive_right": bool(np.all(hqq[-1, 1:-1] > tau)),
        "hqqp_bottom_left": bool(hqqp[0, 0] < -tau),
        "hqqp_bottom_right": bool(hqqp[-1, 0] > tau),
        "corner_top_right": bool(hqq[-1, -1] > tau or hqqp[-1, -1] < -tau),
        "corner_top_left": bool(hqq[0, -1] < -tau or hqqp[0, -1] > tau),
    }


def displacement_profile(ws, favorable, tau=TAU_GEOM):
    """L(p) = h(0, p) - h(pi, p) and whether it increases strictly with p.

    ``favorable`` does not change the computation; the caller uses it to
    decide whether the flag is a requirement or only informational.
    """
    L = ws.displacement
    return L, bool(np.all(np.diff(L) > tau))


def surface_geometry(ws, tau=TAU_GEOM, h=None):
    grid = ws.grid
    slope, curv = surface_slope_curvature(ws.eta, grid.dq)
    if np.ptp(ws.eta) < 10 * tau:
        return GeometryReport(eta_monotone=False, v_positive=False, inflection_count=0,
                              inflection_locations=[], crest_curvature=float(curv[0]),
                              trough_curvature=float(curv[-1]), displacement_monotone=False,
                              nodal_hq=False, classifiable=False,
                              indeterminate=["amplitude too small to classify"])
    indeterminate = []
    inner = slope[1:-1]
    if np.any(np.abs(inner) <= tau):
        indeterminate.append("eta' within noise floor at %d node(s)" % int(np.sum(np.abs(inner) <= tau)))
    if np.any(np.abs(curv) <= tau):
        indeterminate.append("eta'' within noise floor at %d node(s)" % int(np.sum(np.abs(curv) <= tau)))
    v_in = ws.v[1:-1, 1:]
    locs = inflection_points(curv, grid.q, tau)
    _, mono = displacement_profile(ws, favorable=True, tau=tau)
    return GeometryReport(
        eta_monotone=bool(np.all(inner < -tau)),
        v_positive=bool(np.all(v_in > tau)),
        inflection_count=len(locs),
        inflection_locations=locs,
        crest_curvature=float(curv[0]),
        trough_curvature=float(curv[-1]),
        displacement_monotone=mono,
        nodal_hq=bool(np.all(ws.hq[1:-1, 1:] < -tau)),
        indeterminate=indeterminate,
    )


def bernoulli_surface_residual(ws, g, q_head):
    """u_rel^2 + v^2 + 2 g (eta + d) - Q along the surface."""
    return ws.u_rel[:, -1] ** 2 + ws.v[:, -1] ** 2 + 2 * g * (ws.eta + ws.depth) - q_head
