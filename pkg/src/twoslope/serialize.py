"""Deterministic JSON and CSV output with floats at 17 significant digits."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass

import numpy as np

from .profile import GapConfiguration, ProblemParams, TwoSlopeProfile

__all__ = [
    "format_float",
    "dumps",
    "to_csv",
    "params_to_dict",
    "params_from_dict",
    "profile_to_dict",
    "profile_from_dict",
    "gaps_to_dict",
    "gaps_from_dict",
]


def format_float(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


def _plain(obj):
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if is_dataclass(obj):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        # JSON has no infinities; an unbounded quantity is reported as null
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _emit(_plain(obj), indent, 0)


def to_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, float) or isinstance(v, np.floating):
                cells.append(format_float(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def params_to_dict(p: ProblemParams) -> dict:
    return {"s": p.s, "Lambda": p.Lambda, "delta": p.delta, "L": p.L, "T": p.T}


def params_from_dict(d: dict) -> ProblemParams:
    return ProblemParams(float(d["s"]), float(d["Lambda"]), float(d["delta"]), int(d["L"]), d.get("T"))


def gaps_to_dict(g: GapConfiguration) -> dict:
    return {"gaps": list(g.gaps)}


def gaps_from_dict(d: dict) -> GapConfiguration:
    return GapConfiguration(tuple(float(x) for x in d["gaps"]))


def profile_to_dict(p: TwoSlopeProfile) -> dict:
    return {
        "params": params_to_dict(p.params),
        "neg_interval_right_endpoints": list(p.neg_interval_right_endpoints),
        "anchor_value": p.anchor_value,
    }


def profile_from_dict(d: dict) -> TwoSlopeProfile:
    return TwoSlopeProfile(
        params_from_dict(d["params"]),
        tuple(float(x) for x in d["neg_interval_right_endpoints"]),
        float(d["anchor_value"]),
    )
