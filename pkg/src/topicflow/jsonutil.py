"""Deterministic JSON serialization.

Floats are written with 17 significant digits so that parsing the output
recovers the exact IEEE-754 double, making serialized analyses byte-stable
and hash-friendly across runs.
"""

from __future__ import annotations

import json
import math
from typing import Any


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} cannot be serialized")
    return format(x, ".17g")


def _write(obj: Any, out: list[str]) -> None:
    if obj is None or obj is True or obj is False:
        out.append("null" if obj is None else ("true" if obj else "false"))
    elif isinstance(obj, bool):  # pragma: no cover - caught above
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if not isinstance(k, str):
                raise TypeError(f"JSON object keys must be str, got {type(k)}")
            if i:
                out.append(",")
            out.append(json.dumps(k, ensure_ascii=False))
            out.append(":")
            _write(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _write(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj)} to canonical JSON")


def dumps(obj: Any) -> str:
    """Serialize to compact JSON with exact-round-trip floats."""
    out: list[str] = []
    _write(obj, out)
    return "".join(out)


def dump_bytes(obj: Any) -> bytes:
    return dumps(obj).encode("utf-8")


def loads(text: str | bytes) -> Any:
    return json.loads(text)
