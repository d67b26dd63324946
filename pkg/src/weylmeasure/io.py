"""File formats: measure specifications, operator matrices and output headers.

Measure file (JSON)::

    {"n": 1, "measure": <node>}

    <node> = {"kind": "dirac",   "point": [x_1..x_n, y_1..y_n]}
           | {"kind": "smooth",  "curve": {"name": <catalog name>, ...params},
                                 "density": <density>, "quadrature": {"panels": P, "order": Q}}
           | {"kind": "reflect", "child": <node>}
           | {"kind": "tconv",   "children": [<node>, <node>, ...]}
           | {"kind": "sum",     "terms": [{"w": [re, im], "child": <node>}, ...]}

    <density> = {"kind": "constant", "value": v}
              | {"kind": "bump", "center": [...], "width": [...], "height": h}
              | {"kind": "polynomial", "coeffs": [...]}            (curves, ascending powers)
              | {"kind": "polynomial", "terms": [[[e_1..e_m], c], ...]}

``density`` and ``quadrature`` are optional (constant 1 and automatic rule).
Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import hashlib
import io as _io
import json
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import ConfigError
from .hermite import ORDERING_VERSION, BasisTruncation, OperatorMatrix
from .measures import (
    CATALOG, BumpDensity, ConstantDensity, Dirac, Measure, PolynomialDensity, Reflect, Smooth,
    SmoothMeasureSpec, TConv, WeightedSum, curve_catalog,
)
from .phase_space import PhasePoint

MATRIX_FORMAT = "weylmeasure-operator-v1"

_num = {"type": "number"}
_vec = {"type": "array", "items": _num, "minItems": 1}

MEASURE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["n", "measure"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "measure": {"$ref": "#/$defs/node"},
    },
    "$defs": {
        # dispatch on "kind" so validation errors point at the offending key
        "node": {
            "type": "object",
            "required": ["kind"],
            "properties": {"kind": {"enum": ["dirac", "smooth", "reflect", "tconv", "sum"]}},
            "allOf": [
                {"if": {"properties": {"kind": {"const": k}}}, "then": {"$ref": f"#/$defs/{k}"}}
                for k in ("dirac", "smooth", "reflect", "tconv", "sum")
            ],
        },
        "dirac": {"type": "object", "additionalProperties": False, "required": ["kind", "point"],
                  "properties": {"kind": {"const": "dirac"}, "point": _vec}},
        "smooth": {"type": "object", "additionalProperties": False, "required": ["kind", "curve"],
                   "properties": {
                       "kind": {"const": "smooth"},
                       "curve": {"type": "object", "required": ["name"],
                                 "properties": {"name": {"enum": sorted(CATALOG)}}},
                       "density": {"$ref": "#/$defs/density"},
                       "quadrature": {"type": "object", "additionalProperties": False,
                                      "properties": {"panels": {"type": "integer", "minimum": 1},
                                                     "order": {"type": "integer", "minimum": 1}}},
                   }},
        "reflect": {"type": "object", "additionalProperties": False, "required": ["kind", "child"],
                    "properties": {"kind": {"const": "reflect"}, "child": {"$ref": "#/$defs/node"}}},
        "tconv": {"type": "object", "additionalProperties": False, "required": ["kind", "children"],
                  "properties": {"kind": {"const": "tconv"},
                                 "children": {"type": "array", "minItems": 2,
                                              "items": {"$ref": "#/$defs/node"}}}},
        "sum": {"type": "object", "additionalProperties": False, "required": ["kind", "terms"],
                "properties": {"kind": {"const": "sum"},
                               "terms": {"type": "array", "minItems": 1, "items": {
                                   "type": "object", "additionalProperties": False,
                                   "required": ["w", "child"],
                                   "properties": {"w": {"type": "array", "items": _num,
                                                        "minItems": 2, "maxItems": 2},
                                                  "child": {"$ref": "#/$defs/node"}}}}}},
        "density": {
            "type": "object",
            "required": ["kind"],
            "properties": {"kind": {"enum": ["constant", "bump", "polynomial"]}},
            "allOf": [
                {"if": {"properties": {"kind": {"const": "constant"}}},
                 "then": {"additionalProperties": False,
                          "properties": {"kind": True, "value": _num}}},
                {"if": {"properties": {"kind": {"const": "bump"}}},
                 "then": {"additionalProperties": False, "required": ["center", "width"],
                          "properties": {"kind": True, "center": _vec, "width": _vec, "height": _num}}},
                {"if": {"properties": {"kind": {"const": "polynomial"}}},
                 "then": {"additionalProperties": False,
                          "oneOf": [{"required": ["coeffs"]}, {"required": ["terms"]}],
                          "properties": {"kind": True, "coeffs": _vec, "terms": {"type": "array"}}}},
            ],
        },
    },
}

_validator = jsonschema.Draft202012Validator(MEASURE_SCHEMA)


def _schema_error(data) -> str | None:
    errors = sorted(_validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if not errors:
        return None
    best = jsonschema.exceptions.best_match(errors)
    where = "/".join(str(p) for p in best.absolute_path) or "<root>"
    return f"schema error at {where}: {best.message}"


def _density_from_json(d):
    if d is None:
        return ConstantDensity()
    kind = d["kind"]
    if kind == "constant":
        return ConstantDensity(float(d.get("value", 1.0)))
    if kind == "bump":
        return BumpDensity(tuple(d["center"]), tuple(d["width"]), float(d.get("height", 1.0)))
    if "coeffs" in d:
        return PolynomialDensity.from_coeffs(d["coeffs"])
    return PolynomialDensity(tuple((tuple(e), c) for e, c in d["terms"]))


def _node_from_json(d, n: int, path: str) -> Measure:
    kind = d["kind"]
    if kind == "dirac":
        if len(d["point"]) != 2 * n:
            raise ConfigError(f"{path}: dirac point needs {2 * n} coordinates, got {len(d['point'])}")
        return Dirac(PhasePoint.from_array(d["point"]))
    if kind == "smooth":
        params = {k: v for k, v in d["curve"].items() if k != "name"}
        chart = curve_catalog(d["curve"]["name"], **params)
        if chart.n != n:
            raise ConfigError(f"{path}: curve {d['curve']['name']!r} lives in n={chart.n}, file says n={n}")
        q = d.get("quadrature", {})
        return Smooth(SmoothMeasureSpec(chart, _density_from_json(d.get("density")),
                                        q.get("panels"), q.get("order")))
    if kind == "reflect":
        return Reflect(_node_from_json(d["child"], n, path + "/child"))
    if kind == "tconv":
        return TConv(tuple(_node_from_json(c, n, f"{path}/children/{i}")
                           for i, c in enumerate(d["children"])))
    if kind == "sum":
        return WeightedSum(tuple((complex(t["w"][0], t["w"][1]),
                                  _node_from_json(t["child"], n, f"{path}/terms/{i}"))
                                 for i, t in enumerate(d["terms"])))
    raise ConfigError(f"{path}: unknown node kind {kind!r}")


def measure_from_json(data: dict) -> Measure:
    err = _schema_error(data)
    if err:
        raise ConfigError(err)
    return _node_from_json(data["measure"], data["n"], "measure")


def load_measure(path) -> Measure:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return measure_from_json(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _density_to_json(d):
    if hasattr(d, "to_json"):
        return d.to_json()
    raise ConfigError(f"density {d!r} has no file representation")


def _node_to_json(m: Measure) -> dict:
    if isinstance(m, Dirac):
        return {"kind": "dirac", "point": m.point.as_array().tolist()}
    if isinstance(m, Smooth):
        chart = m.spec.chart
        if chart.name not in CATALOG:
            raise ConfigError("only catalog charts can be serialised")
        node = {"kind": "smooth", "curve": {"name": chart.name, **chart.params},
                "density": _density_to_json(m.spec.density)}
        q = {k: v for k, v in (("panels", m.spec.panels), ("order", m.spec.order)) if v is not None}
        if q:
            node["quadrature"] = q
        return node
    if isinstance(m, Reflect):
        return {"kind": "reflect", "child": _node_to_json(m.child)}
    if isinstance(m, TConv):
        return {"kind": "tconv", "children": [_node_to_json(c) for c in m.children]}
    if isinstance(m, WeightedSum):
        return {"kind": "sum", "terms": [{"w": [w.real, w.imag], "child": _node_to_json(c)}
                                         for w, c in m.terms]}
    raise TypeError(f"not a measure expression: {m!r}")


def measure_to_json(m: Measure) -> dict:
    return {"n": m.n, "measure": _node_to_json(m)}


# ---------------------------------------------------------------------------
# Headers and operator matrices
# ---------------------------------------------------------------------------

def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def header_lines(config: dict | None = None, **extra) -> list[str]:
    """Provenance header: package/library versions and the config hash."""
    import scipy
    lines = [f"weylmeasure {__version__}", f"numpy {np.__version__}", f"scipy {scipy.__version__}"]
    if config is not None:
        lines.append(f"config_sha256 {config_hash(config)}")
    lines += [f"{k} {v}" for k, v in extra.items()]
    return lines


def operator_to_csv(M: OperatorMatrix, header: list[str] | None = None) -> str:
    """Row-major interleaved (re, im) CSV with a ``#`` header block."""
    buf = _io.StringIO()
    buf.write(f"# format {MATRIX_FORMAT}\n")
    buf.write(f"# n {M.trunc.n}\n# N {M.trunc.N}\n# ordering {ORDERING_VERSION}\n")
    for h in header or []:
        buf.write(f"# {h}\n")
    inter = np.empty((M.shape[0], 2 * M.shape[1]))
    inter[:, 0::2] = M.entries.real
    inter[:, 1::2] = M.entries.imag
    for row in inter:
        buf.write(",".join(repr(float(v)) for v in row) + "\n")
    return buf.getvalue()


def _parse_header(lines):
    meta = {}
    for line in lines:
        key, _, val = line[1:].strip().partition(" ")
        meta.setdefault(key, val)
    return meta


def operator_from_csv(text: str) -> OperatorMatrix:
    lines = text.splitlines()
    head = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if l and not l.startswith("#")]
    meta = _parse_header(head)
    if meta.get("format") != MATRIX_FORMAT:
        raise ConfigError("not an operator matrix file")
    if meta.get("ordering") != ORDERING_VERSION:
        raise ConfigError(f"unsupported basis ordering {meta.get('ordering')!r}")
    trunc = BasisTruncation(int(meta["n"]), int(meta["N"]))
    data = np.array([[float(v) for v in l.split(",")] for l in body])
    return OperatorMatrix(trunc, data[:, 0::2] + 1j * data[:, 1::2])


def save_operator(path, M: OperatorMatrix, header: list[str] | None = None):
    """Write ``.csv`` (text) or ``.npz`` (binary, entries plus header metadata)."""
    path = Path(path)
    if path.suffix == ".npz":
        np.savez(path, entries=M.entries, n=M.trunc.n, N=M.trunc.N, ordering=ORDERING_VERSION,
                 format=MATRIX_FORMAT, header="\n".join(header or []))
    else:
        path.write_text(operator_to_csv(M, header))


def load_operator(path) -> OperatorMatrix:
    path = Path(path)
    if path.suffix == ".npz":
        with np.load(path) as z:
            if str(z["ordering"]) != ORDERING_VERSION:
                raise ConfigError(f"unsupported basis ordering {z['ordering']!r}")
            return OperatorMatrix(BasisTruncation(int(z["n"]), int(z["N"])), z["entries"])
    return operator_from_csv(path.read_text())
