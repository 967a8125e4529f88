"""Canonical JSON serialization shared by all pipeline artifacts.

Artifacts must be byte-stable across runs, so objects are emitted with
sorted keys and floats formatted with 17 significant digits (enough for
exact float64 round-trips).
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any


def format_float(value: float) -> str:
    """Render a float with 17 significant digits, round-trip exact."""
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"non-finite float not representable in JSON: {value!r}")
    if value == int(value) and abs(value) < 1e16:
        # keep integral floats readable and unambiguous ("1.0", not "1")
        return f"{value:.1f}"
    return f"{value:.17g}"


def _emit(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        out.append("{")
        first = True
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _emit(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def canonical_dumps(obj: Any) -> str:
    """Serialize to a canonical JSON string (sorted keys, stable floats)."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out)


def write_canonical_json(obj: Any, path: Path | str) -> Path:
    """Write canonical JSON as UTF-8 with a trailing newline."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_dumps(obj) + "\n", encoding="utf-8")
    return path


def read_json(path: Path | str) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))
