"""JSON encodings shared by the CLI and the report objects.

Complex numbers are ``[re, im]`` pairs, the point at infinity is the string
``"inf"``, polynomials are arrays of pairs in ascending powers.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .poly import ComplexPoly
from .rational import INF, RationalMap, reduce


def cjson(z) -> Any:
    if z is INF:
        return "inf"
    z = complex(z)
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def from_cjson(v):
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        return complex(v.replace(" ", ""))
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"cannot decode complex value {v!r}")


def poly_to_json(p) -> list:
    coeffs = p.coeffs if hasattr(p, "coeffs") else p
    return [cjson(c) for c in np.asarray(coeffs)]


def poly_from_json(data) -> np.ndarray:
    if not isinstance(data, list):
        raise ValueError("polynomial must be a JSON array")
    return np.array([from_cjson(v) for v in data], dtype=complex)


def map_to_json(phi: RationalMap) -> dict:
    out = {"num": poly_to_json(phi.num), "den": poly_to_json(phi.den)}
    if phi.name:
        out["name"] = phi.name
    return out


def map_from_json(doc: dict) -> RationalMap:
    if not isinstance(doc, dict) or "num" not in doc or "den" not in doc:
        raise ValueError('map JSON needs "num" and "den" arrays')
    num = ComplexPoly(poly_from_json(doc["num"]))
    den = ComplexPoly(poly_from_json(doc["den"]))
    return reduce(num, den, name=str(doc.get("name", "")))


class ReportEncoder(json.JSONEncoder):
    def default(self, o):
        if o is INF:
            return "inf"
        if isinstance(o, (complex, np.complexfloating)):
            return cjson(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.ndarray):
            return [self.default(x) if not isinstance(x, (float, int)) else x for x in o.tolist()]
        return super().default(o)


def dumps(obj, **kw) -> str:
    return json.dumps(obj, cls=ReportEncoder, sort_keys=True, **kw)
