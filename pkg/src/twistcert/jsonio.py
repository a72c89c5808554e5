"""Deterministic JSON artifact serialization.

Integers are emitted exactly; every real number is emitted as a decimal
string with 15 significant digits.  A 15-digit decimal determines a unique
double and prints back to the same string, so values that were normalized
through :func:`normalize_real` survive a write/parse cycle bit-exactly.
Keys are sorted and files are written atomically.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Any

TOOL_VERSION = "twistcert 0.1.0"


def format_real(x: float) -> str:
    return f"{float(x):.15g}"


def normalize_real(x: float) -> float:
    """Round a double to the value its 15-digit artifact string re-parses to."""
    return float(format_real(x))


def parse_real(s: str) -> float:
    return float(s)


def _jsonify(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    raise TypeError(f"cannot serialize value of type {type(value).__name__}")


def dumps_canonical(payload: dict) -> str:
    return json.dumps(_jsonify(payload), sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-artifact-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_artifact(path: str, payload: dict) -> None:
    write_atomic(path, dumps_canonical(payload))
