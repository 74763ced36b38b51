"""JSON documents: map descriptions in, analysis reports out.

Complex numbers are ``[re, im]`` pairs, the point at infinity is the string
``"inf"``.  Floats are written with Python's shortest round-trip repr, so
serializing a parsed document reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
import os
from typing import Any, Union

from .analysis import AnalysisReport, FixedPointClass, FixedPointRecord, PeriodicReport
from .core import INF, ExtendedComplex, Polynomial, RationalMap, is_inf
from .errors import InvariantViolation, ParseError
from .geometry import GeometryVerdict, parse_shape

MapLike = Union[Polynomial, RationalMap]


def _num(x: float):
    x = float(x) + 0.0  # folds -0.0 into 0.0
    if not math.isfinite(x):
        return repr(x)
    return x


def complex_to_json(z: complex) -> list:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def complex_from_json(v) -> complex:
    if (
        not isinstance(v, (list, tuple))
        or len(v) != 2
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v)
    ):
        raise ParseError(f"expected a [re, im] pair, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def point_to_json(z: ExtendedComplex):
    return "inf" if is_inf(z) else complex_to_json(z)


def point_from_json(v) -> ExtendedComplex:
    if v == "inf":
        return INF
    return complex_from_json(v)


def _opt(v, fn):
    return None if v is None else fn(v)


def map_to_dict(m: MapLike) -> dict:
    if isinstance(m, Polynomial):
        return {"kind": "polynomial", "coeffs": [complex_to_json(a) for a in m.coeffs]}
    if m.is_polynomial:
        return map_to_dict(m.as_polynomial())
    return {
        "kind": "rational",
        "numerator": [complex_to_json(a) for a in m.numerator.coeffs],
        "denominator": [complex_to_json(a) for a in m.denominator.coeffs],
    }


def _coeff_list(doc: dict, key: str) -> list[complex]:
    raw = doc.get(key)
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"field {key!r} must be a non-empty list of [re, im] pairs")
    return [complex_from_json(v) for v in raw]


def map_from_dict(doc: Any) -> MapLike:
    if not isinstance(doc, dict):
        raise ParseError("map document must be a JSON object")
    kind = doc.get("kind")
    try:
        if kind == "polynomial":
            return Polynomial(_coeff_list(doc, "coeffs"))
        if kind == "rational":
            return RationalMap(
                Polynomial(_coeff_list(doc, "numerator")),
                Polynomial(_coeff_list(doc, "denominator")),
            )
    except InvariantViolation as exc:
        raise InvariantViolation(f"{exc.name}: {exc}") from exc
    raise ParseError(f"unknown map kind {kind!r}")


def parse_map(path) -> MapLike:
    """Load and validate a MapDocument file."""
    try:
        with open(os.fspath(path), encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return map_from_dict(doc)


def as_rational(m: MapLike) -> RationalMap:
    return RationalMap.from_polynomial(m) if isinstance(m, Polynomial) else m


def record_to_dict(r: FixedPointRecord) -> dict:
    return {
        "location": point_to_json(r.location),
        "multiplier": complex_to_json(r.multiplier),
        "multiplicity": r.multiplicity,
        "index": complex_to_json(r.index),
        "class": r.classification.value,
        "weakly_repelling": r.weakly_repelling,
    }


def record_from_dict(d: dict) -> FixedPointRecord:
    return FixedPointRecord(
        location=point_from_json(d["location"]),
        multiplier=complex_from_json(d["multiplier"]),
        multiplicity=int(d["multiplicity"]),
        index=complex_from_json(d["index"]),
        classification=FixedPointClass(d["class"]),
        weakly_repelling=bool(d["weakly_repelling"]),
    )


def verdict_to_dict(v: GeometryVerdict) -> dict:
    return {
        "equidistant": v.equidistant,
        "common_distance": _opt(v.common_distance, _num),
        "shape": str(v.shape),
        "all_real_part_one": v.all_real_part_one,
        "fixed_points": [complex_to_json(z) for z in v.fixed_points],
        "multipliers": [complex_to_json(z) for z in v.multipliers],
        "multiplicities": list(v.multiplicities),
        "real_part_theorem": v.real_part_theorem,
        "equidistance_theorem": v.equidistance_theorem,
        "reason": v.reason,
    }


def verdict_from_dict(d: dict) -> GeometryVerdict:
    return GeometryVerdict(
        equidistant=d["equidistant"],
        common_distance=d["common_distance"],
        shape=parse_shape(d["shape"]),
        all_real_part_one=d["all_real_part_one"],
        fixed_points=tuple(complex_from_json(z) for z in d["fixed_points"]),
        multipliers=tuple(complex_from_json(z) for z in d["multipliers"]),
        multiplicities=tuple(d["multiplicities"]),
        real_part_theorem=d["real_part_theorem"],
        equidistance_theorem=d["equidistance_theorem"],
        reason=d["reason"],
    )


def report_to_dict(m: MapLike, report: AnalysisReport, verdict: GeometryVerdict | None = None) -> dict:
    return {
        "map": map_to_dict(m),
        "degree": as_rational(m).degree,
        "fixed_points": [record_to_dict(r) for r in report.records],
        "rfpt_sum": complex_to_json(report.rfpt_sum),
        "rfpt_residual": _num(report.rfpt_residual),
        "finite_sum": _opt(report.finite_sum, complex_to_json),
        "rnfp_witness": _opt(report.rnfp_witness, point_to_json),
        "weakly_repelling_witness": _opt(report.weakly_repelling_witness, point_to_json),
        "geometry": _opt(verdict, verdict_to_dict),
    }


def report_from_dict(d: dict) -> tuple[AnalysisReport, GeometryVerdict | None]:
    report = AnalysisReport(
        records=tuple(record_from_dict(r) for r in d["fixed_points"]),
        rfpt_sum=complex_from_json(d["rfpt_sum"]),
        rfpt_residual=float(d["rfpt_residual"]),
        finite_sum=_opt(d["finite_sum"], complex_from_json),
        rnfp_witness=_opt(d["rnfp_witness"], point_from_json),
        weakly_repelling_witness=_opt(d["weakly_repelling_witness"], point_from_json),
    )
    return report, _opt(d.get("geometry"), verdict_from_dict)


def periodic_to_dict(m: MapLike, rep: PeriodicReport) -> dict:
    P = m if isinstance(m, Polynomial) else m.as_polynomial()
    dP = P.derivative()
    mults = []
    for cyc in rep.cycles:
        lam = 1 + 0j
        for z in cyc:
            lam *= dP(z)
        mults.append(complex_to_json(lam))
    return {
        "map": map_to_dict(m),
        "period": rep.period,
        "points": [record_to_dict(r) for r in rep.records],
        "cycles": [[complex_to_json(z) for z in cyc] for cyc in rep.cycles],
        "cycle_multipliers": mults,
        "rnfp_witness": _opt(rep.rnfp_witness, point_to_json),
        "has_rnfp_witness": rep.has_rnfp_witness,
    }


def _format(v, depth: int) -> str:
    pad = "  " * (depth + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_format(x, depth + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
        items = [pad + _format(x, depth + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + "  " * depth + "]"
    return json.dumps(v, allow_nan=False)


def dumps(doc: dict) -> str:
    """Indented JSON with scalar lists (the [re, im] pairs) kept on one line."""
    return _format(doc, 0) + "\n"
