"""Deterministic CSV/JSON emission.

Floats are written with 17 significant digits (round-trip safe), keys keep
insertion order, and nothing time-dependent enters a payload.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from typing import Any

import numpy as np

from .model import Params, State


def fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def to_jsonable(obj: Any) -> Any:
    """Convert library objects to plain dicts/lists/floats."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, State):
        return [obj.x, obj.y]
    if isinstance(obj, Params):
        return {"a": obj.a, "b": obj.b, "c": obj.c, "d": obj.d}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _encode_str(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch in '"\\':
            out.append("\\" + ch)
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _encode(obj: Any, indent: int, level: int) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return _encode_str(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_encode_str(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        # numeric rows stay on one line so trajectories remain readable
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """Serialize to JSON text ending in a newline. Non-finite floats become null."""
    return _encode(to_jsonable(obj), indent, 0) + "\n"


def trajectory_csv(traj, with_v: bool = False) -> str:
    cols = ["k", "t", "x", "y"] + (["V"] if with_v else [])
    lines = [",".join(cols)]
    for i in range(len(traj)):
        k = int(traj.k[i])
        row = [str(k), fmt_float(traj.h * k), fmt_float(traj.x[i]), fmt_float(traj.y[i])]
        if with_v:
            v = float(traj.v[i])
            row.append("" if math.isnan(v) else fmt_float(v))
        lines.append(",".join(row))
    if traj.truncated:
        lines.append(f"# truncated at k={traj.truncated_at}")
    return "\n".join(lines) + "\n"


def trajectory_rows(traj, with_v: bool = False) -> list:
    rows = []
    for i in range(len(traj)):
        k = int(traj.k[i])
        row = [k, traj.h * k, float(traj.x[i]), float(traj.y[i])]
        if with_v:
            row.append(float(traj.v[i]))
        rows.append(row)
    return rows
