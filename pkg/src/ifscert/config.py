"""System configuration files.

The config is JSON with a versioned schema.  Top-level keys:

    schema_version  int, currently 1
    dim             ambient dimension d >= 1
    working_box     {"min": [..d..], "max": [..d..]}
    mode            "pc" | "orbital" | "unverified"
    default_c       weight for the code-space metric (default 0.5)
    phi             comparison function, see below
    maps            {"explicit": [map, ...]}
                    or {"template": {"exprs": [..d..], "n": N,
                                     "delta_tail": optional float}}

Comparison functions:

    {"kind": "linear", "c": 0.5}
    {"kind": "power_affine", "c": 0.5, "p": 2.0, "r0": 1.0}
    {"kind": "custom", "expr": "r/(1+r)",
     "tail": {"geometric": {"q": 0.5, "r0": 1.0, "n0": 0}},
     "right_continuous": true}

Maps:

    {"kind": "affine", "matrix": [[...]], "offset": [...]}
    {"kind": "similarity", "scale": 0.5, "offset": [...], "angles": [...]}
    {"kind": "piecewise", "pieces": [{"box": {"min": [...], "max": [...]},
                                      "map": <affine>}]}
    {"kind": "expr", "exprs": ["x1/3"]}

Expressions in templates use x1..xd plus the 0-based family index i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import comparison
from .errors import ConfigError
from .jsonio import canonical_dumps
from .system import (
    AffineMap,
    Box,
    ExprMap,
    IndexFamily,
    IteratedSystem,
    PiecewiseAffineMap,
    SimilarityMap,
    expr_map,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SystemConfig:
    """Parsed configuration; ``normalized`` is the canonical dict form used
    for equality and serialization."""

    dim: int
    working_box: Box
    mode: str
    default_c: float
    phi: comparison.ComparisonFn
    family: IndexFamily
    normalized: dict

    def __eq__(self, other):
        return isinstance(other, SystemConfig) and self.normalized == other.normalized

    def build_system(self) -> IteratedSystem:
        return IteratedSystem(
            working_box=self.working_box,
            family=self.family,
            phi=self.phi,
            mode=self.mode,
        )


_SENTINEL = object()


def _expect(mapping, key, path, types, default=_SENTINEL):
    if key not in mapping:
        if default is not _SENTINEL:
            return default
        raise ConfigError("missing required field", path=f"{path}.{key}" if path else key)
    value = mapping[key]
    if not isinstance(value, types):
        names = types.__name__ if isinstance(types, type) else "/".join(t.__name__ for t in types)
        raise ConfigError(
            f"expected {names}, got {type(value).__name__}",
            path=f"{path}.{key}" if path else key,
        )
    return value


def _vector(value, dim, path):
    if not isinstance(value, list) or len(value) != dim:
        raise ConfigError(f"expected a list of {dim} numbers", path=path)
    out = []
    for idx, v in enumerate(value):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ConfigError("expected a number", path=f"{path}[{idx}]")
        out.append(float(v))
    return out


def _parse_phi(spec, path) -> comparison.ComparisonFn:
    if not isinstance(spec, dict):
        raise ConfigError("expected an object", path=path)
    kind = _expect(spec, "kind", path, str)
    try:
        if kind == "linear":
            return comparison.linear(_expect(spec, "c", path, (int, float)))
        if kind == "power_affine":
            return comparison.power_affine(
                _expect(spec, "c", path, (int, float)),
                _expect(spec, "p", path, (int, float)),
                _expect(spec, "r0", path, (int, float)),
            )
        if kind == "custom":
            expr = _expect(spec, "expr", path, str)
            tail_spec = _expect(spec, "tail", path, dict, default=None)
            tail = None
            if tail_spec is not None:
                geo = _expect(tail_spec, "geometric", f"{path}.tail", dict)
                tail = comparison.GeometricEnvelope(
                    q=_expect(geo, "q", f"{path}.tail.geometric", (int, float)),
                    threshold=_expect(geo, "r0", f"{path}.tail.geometric", (int, float), default=None),
                    n0=int(_expect(geo, "n0", f"{path}.tail.geometric", int, default=0)),
                )
            return comparison.custom(
                expr,
                tail=tail,
                right_continuous=bool(
                    _expect(spec, "right_continuous", path, bool, default=True)
                ),
            )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(str(exc), path=path) from exc
    raise ConfigError(f"unknown comparison kind {kind!r}", path=f"{path}.kind")


def _parse_map(spec, dim, path):
    if not isinstance(spec, dict):
        raise ConfigError("expected an object", path=path)
    kind = _expect(spec, "kind", path, str)
    try:
        if kind == "affine":
            matrix = _expect(spec, "matrix", path, list)
            rows = [tuple(_vector(row, dim, f"{path}.matrix[{k}]")) for k, row in enumerate(matrix)]
            if len(rows) != dim:
                raise ConfigError(f"matrix needs {dim} rows", path=f"{path}.matrix")
            return AffineMap(tuple(rows), tuple(_vector(_expect(spec, "offset", path, list), dim, f"{path}.offset")))
        if kind == "similarity":
            angles = spec.get("angles")
            if angles is None and "angle" in spec:
                angles = [spec["angle"]]
            return SimilarityMap(
                scale=float(_expect(spec, "scale", path, (int, float))),
                offset=tuple(_vector(_expect(spec, "offset", path, list), dim, f"{path}.offset")),
                angles=tuple(float(a) for a in (angles or [])),
            )
        if kind == "piecewise":
            pieces = []
            for k, piece in enumerate(_expect(spec, "pieces", path, list)):
                ppath = f"{path}.pieces[{k}]"
                box_spec = _expect(piece, "box", ppath, dict)
                box = Box(
                    lo=tuple(_vector(_expect(box_spec, "min", f"{ppath}.box", list), dim, f"{ppath}.box.min")),
                    hi=tuple(_vector(_expect(box_spec, "max", f"{ppath}.box", list), dim, f"{ppath}.box.max")),
                )
                inner = _parse_map(_expect(piece, "map", ppath, dict), dim, f"{ppath}.map")
                if not isinstance(inner, AffineMap):
                    raise ConfigError("piecewise pieces must be affine", path=f"{ppath}.map")
                pieces.append((box, inner))
            return PiecewiseAffineMap(tuple(pieces))
        if kind == "expr":
            exprs = _expect(spec, "exprs", path, list)
            if len(exprs) != dim or not all(isinstance(e, str) for e in exprs):
                raise ConfigError(f"expected {dim} expression strings", path=f"{path}.exprs")
            return expr_map(exprs)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(str(exc), path=path) from exc
    raise ConfigError(f"unknown map kind {kind!r}", path=f"{path}.kind")


def _parse_maps(spec, dim, path) -> IndexFamily:
    if not isinstance(spec, dict):
        raise ConfigError("expected an object", path=path)
    if ("explicit" in spec) == ("template" in spec):
        raise ConfigError("give exactly one of 'explicit' or 'template'", path=path)
    delta_tail = None
    if "explicit" in spec:
        entries = _expect(spec, "explicit", path, list)
        if not entries:
            raise ConfigError("at least one map is required", path=f"{path}.explicit")
        maps = tuple(_parse_map(m, dim, f"{path}.explicit[{k}]") for k, m in enumerate(entries))
        return IndexFamily.explicit(maps)
    template = _expect(spec, "template", path, dict)
    tpath = f"{path}.template"
    exprs = _expect(template, "exprs", tpath, list)
    if len(exprs) != dim or not all(isinstance(e, str) for e in exprs):
        raise ConfigError(f"expected {dim} expression strings", path=f"{tpath}.exprs")
    n = _expect(template, "n", tpath, int)
    if isinstance(n, bool) or n < 1:
        raise ConfigError("truncation n must be an integer >= 1", path=f"{tpath}.n")
    raw_tail = _expect(template, "delta_tail", tpath, (int, float), default=None)
    if raw_tail is not None:
        delta_tail = float(raw_tail)
        if delta_tail < 0:
            raise ConfigError("delta_tail must be >= 0", path=f"{tpath}.delta_tail")
    try:
        return IndexFamily.parametric(tuple(exprs), n, delta_tail=delta_tail)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(str(exc), path=tpath) from exc


def _normalize(cfg: "SystemConfig") -> dict:
    phi = cfg.phi
    phi_dict: dict = {"kind": phi.kind}
    phi_dict.update(phi.params)
    if phi.kind == "custom":
        cert = phi.certificate
        if isinstance(cert, comparison.GeometricEnvelope):
            geo = {"q": cert.q, "n0": cert.n0}
            if cert.threshold is not None:
                geo["r0"] = cert.threshold
            phi_dict["tail"] = {"geometric": geo}
        phi_dict["right_continuous"] = phi.is_right_continuous
    family = cfg.family
    if family.parametric_template is not None:
        maps_dict: dict = {
            "template": {"exprs": list(family.parametric_template), "n": family.n}
        }
        if family.delta_tail is not None:
            maps_dict["template"]["delta_tail"] = family.delta_tail
    else:
        maps_dict = {"explicit": [m.to_config_dict() for m in family.maps]}
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": cfg.dim,
        "working_box": {"min": list(cfg.working_box.lo), "max": list(cfg.working_box.hi)},
        "mode": cfg.mode,
        "default_c": cfg.default_c,
        "phi": phi_dict,
        "maps": maps_dict,
    }


def parse_config(text: str) -> SystemConfig:
    """Parse config text; syntax errors carry line/column, semantic errors a
    dotted field path."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    version = _expect(raw, "schema_version", "", int, default=SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}", path="schema_version")
    dim = _expect(raw, "dim", "", int)
    if isinstance(dim, bool) or dim < 1:
        raise ConfigError("dim must be an integer >= 1", path="dim")
    box_spec = _expect(raw, "working_box", "", dict)
    box = Box(
        lo=tuple(_vector(_expect(box_spec, "min", "working_box", list), dim, "working_box.min")),
        hi=tuple(_vector(_expect(box_spec, "max", "working_box", list), dim, "working_box.max")),
    )
    mode = _expect(raw, "mode", "", str, default="unverified")
    default_c = float(_expect(raw, "default_c", "", (int, float), default=0.5))
    if not 0.0 <= default_c < 1.0:
        raise ConfigError("default_c must lie in [0, 1)", path="default_c")
    phi = _parse_phi(_expect(raw, "phi", "", dict), "phi")
    family = _parse_maps(_expect(raw, "maps", "", dict), dim, "maps")
    cfg = SystemConfig(
        dim=dim,
        working_box=box,
        mode=mode,
        default_c=default_c,
        phi=phi,
        family=family,
        normalized={},
    )
    object.__setattr__(cfg, "normalized", _normalize(cfg))
    # Surface mode/phi incompatibilities and dimension clashes at parse time.
    cfg.build_system()
    return cfg


def serialize_config(cfg: SystemConfig) -> str:
    return canonical_dumps(cfg.normalized)


def load_config(path) -> SystemConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    return parse_config(text)
