"""Run configuration: one JSON document."""

import json
from dataclasses import asdict, dataclass, field, fields

from rotwave.continuation import ContinuationParams
from rotwave.errors import RotwaveError
from rotwave.vorticity import VorticityModel


class ConfigError(RotwaveError):
    """Malformed configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    vorticity: VorticityModel
    p0: float
    g: float
    nq: int
    np: int
    continuation: ContinuationParams = field(default_factory=ContinuationParams)
    output_dir: str = "out"
    snapshot_stride: int = 10
    c: float = None
    shoot_np: int = 400
    laminar_scan: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "vorticity": self.vorticity.to_dict(),
            "p0": self.p0,
            "g": self.g,
            "grid": {"nq": self.nq, "np": self.np},
            "continuation": asdict(self.continuation),
            "outputs": {"directory": self.output_dir, "snapshot_stride": self.snapshot_stride},
            "shoot_np": self.shoot_np,
            "laminar_scan": dict(self.laminar_scan),
        }
        if self.c is not None:
            out["c"] = self.c
        return out

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _get(doc, key, where, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise ConfigError("missing field %r%s" % (key, " in " + where if where else ""))
    val = doc[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool):
        raise ConfigError("field %r%s has the wrong type" % (key, " in " + where if where else ""))
    return val


def from_dict(doc):
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    number = (int, float)
    p0 = float(_get(doc, "p0", "", number))
    g = float(_get(doc, "g", "", number))
    if not p0 < 0:
        raise ConfigError("field 'p0' must be negative")
    if not g > 0:
        raise ConfigError("field 'g' must be positive")
    vort = _get(doc, "vorticity", "", dict)
    _get(vort, "kind", "vorticity", str)
    _get(vort, "coefficients", "vorticity", list)
    try:
        model = VorticityModel.from_dict(vort, -p0)
    except (ValueError, TypeError) as exc:
        raise ConfigError("field 'vorticity': %s" % exc) from None
    grid = _get(doc, "grid", "", dict)
    nq = _get(grid, "nq", "grid", int)
    n_p = _get(grid, "np", "grid", int)
    if nq < 8 or n_p < 8:
        raise ConfigError("field 'grid': nq and np must be >= 8")
    cont = doc.get("continuation", {})
    if not isinstance(cont, dict):
        raise ConfigError("field 'continuation' must be an object")
    known = {f.name for f in fields(ContinuationParams)}
    unknown = set(cont) - known
    if unknown:
        raise ConfigError("unknown field(s) in 'continuation': %s" % ", ".join(sorted(unknown)))
    try:
        params = ContinuationParams(**cont)
    except (ValueError, TypeError) as exc:
        raise ConfigError("field 'continuation': %s" % exc) from None
    outputs = doc.get("outputs", {})
    c = doc.get("c")
    if c is not None and not (isinstance(c, number) and c > 0):
        raise ConfigError("field 'c' must be a positive number")
    return RunConfig(vorticity=model, p0=p0, g=g, nq=nq, np=n_p, continuation=params,
                     output_dir=str(outputs.get("directory", "out")),
                     snapshot_stride=int(outputs.get("snapshot_stride", 10)),
                     c=None if c is None else float(c), shoot_np=int(doc.get("shoot_np", 400)),
                     laminar_scan=dict(doc.get("laminar_scan", {})))


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("invalid JSON at line %d column %d: %s" % (exc.lineno, exc.colno, exc.msg)) from None
    return from_dict(doc)


def load(path):
    with open(path) as fh:
        return loads(fh.read())
