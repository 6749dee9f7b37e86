"""Deterministic JSON/CSV writers and the published JSON schemas."""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np


def fmt(x: float) -> str:
    """17 significant digits: lossless for doubles."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x!r} cannot be serialized")
    if x == 0.0:
        x = 0.0     # drop the sign of -0.0
    return format(x, ".17g")


def to_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool)
               for v in seq):
            return "[" + ", ".join(to_json(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent, _level + 1) for v in seq) \
            + "\n" + end + "]"
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(header: tuple[str, str], rows) -> str:
    lines = [",".join(header)]
    for a, b in rows:
        left = str(int(a)) if header[0] == "n" else fmt(a)
        lines.append(f"{left},{fmt(b)}")
    return "\n".join(lines) + "\n"


_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_PROBS = {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1}

DISTRIBUTION_SCHEMA = {
    "type": "object",
    "required": ["nmax", "tail_bound", "p_n"],
    "properties": {"nmax": {"type": "integer", "minimum": 0},
                   "tail_bound": {"type": "number", "minimum": 0}, "p_n": _PROBS},
}

SCHEMAS = {
    "solve": {
        "type": "object",
        "required": ["command", "branch", "params", "distribution", "mean", "n2",
                     "mandel_q", "purity"],
        "properties": {
            "command": {"const": "solve"},
            "branch": {"enum": ["kummer", "vacuum"]},
            "params": {"type": "object", "required": ["nu", "s", "sigma", "r"]},
            "constants": {"type": "object"},
            "distribution": DISTRIBUTION_SCHEMA,
            "mean": _NUM, "n2": _NUM, "mandel_q": _NUM_OR_NULL, "purity": _NUM,
        },
    },
    "oracle": {
        "type": "object",
        "required": ["command", "method", "residual", "parity_weight", "distribution",
                     "mean", "purity"],
        "properties": {
            "command": {"const": "oracle"},
            "method": {"enum": ["nullspace", "evolve"]},
            "residual": {"type": "number", "minimum": 0},
            "parity_weight": _NUM_OR_NULL,
            "rates": {"type": "object"},
            "distribution": DISTRIBUTION_SCHEMA,
            "mean": _NUM, "purity": _NUM,
        },
    },
    "limits": {
        "type": "object",
        "required": ["command", "case", "params", "mean", "mandel_q", "distribution"],
        "properties": {
            "command": {"const": "limits"},
            "case": {"enum": ["negbin", "no2a"]},
            "params": {"type": "object"},
            "mean": _NUM, "mandel_q": _NUM_OR_NULL, "gamma": _NUM,
            "distribution": DISTRIBUTION_SCHEMA,
        },
    },
    "paeos": {
        "type": "object",
        "required": ["command", "beta", "r", "S", "mandel_q", "mandel_q_weak", "purity",
                     "sub_poisson_threshold", "distribution"],
        "properties": {
            "command": {"const": "paeos"},
            "beta": {"type": "number", "minimum": 0, "maximum": 1},
            "r": {"type": "number", "minimum": 0},
            "S": _NUM_OR_NULL, "mandel_q": _NUM_OR_NULL, "mandel_q_weak": _NUM_OR_NULL,
            "purity": _NUM, "sub_poisson_threshold": _NUM,
            "distribution": DISTRIBUTION_SCHEMA,
        },
    },
    "wigner": {
        "type": "object",
        "required": ["command", "beta", "r", "x", "W"],
        "properties": {
            "command": {"enum": ["wigner", "figure"]},
            "figure": {"enum": [1, 2, 3]},
            "beta": _NUM, "r": _NUM,
            "x": {"type": "array", "items": _NUM},
            "W": {"type": "array", "items": _NUM},
        },
    },
    "verify": {
        "type": "object",
        "required": ["command", "passed", "checks"],
        "properties": {
            "command": {"const": "verify"},
            "passed": {"type": "boolean"},
            "checks": {"type": "array", "items": {
                "type": "object", "required": ["name", "passed", "max_deviation", "tolerance"],
                "properties": {"name": {"type": "string"}, "passed": {"type": "boolean"},
                               "max_deviation": _NUM, "tolerance": _NUM}}},
        },
    },
}
SCHEMAS["figure"] = SCHEMAS["wigner"]
