"""Canonical JSON: sorted keys, two-space indent, trailing newline."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any


class InputError(ValueError):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def canonical(obj: Any) -> str:
    """Compact canonical form, used for hashing and round-trip comparisons."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def load(path) -> Any:
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON ({exc.msg})") from None


def write(path, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def kind_of(data: Any) -> str:
    """Guess which schema a JSON document follows."""
    if not isinstance(data, dict):
        raise InputError("expected a JSON object")
    if "hV" in data and "rotation" in data:
        return "picture"
    if "ops" in data and "q" in data:
        return "assignment"
    if "phi" in data:
        return "cover"
    if "A" in data:
        return "system"
    if "incidence" in data:
        return "hypergraph"
    if "vertices" in data and "edges" in data:
        return "graph"
    if "rotation" in data and "pairing" in data:
        return "map"
    raise InputError("unrecognised JSON document")
