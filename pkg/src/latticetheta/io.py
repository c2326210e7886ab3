"""JSON files for lattices and automorphisms.

Lattice: ``{"label": "E8", "gram": [[2, 0, ...], ...]}``.
Automorphism: ``{"matrix": [[...], ...], "order": 7}``.
Entries must be JSON integers; floats and booleans are rejected.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .lattice import Lattice


class FormatError(ValueError):
    """Input document does not follow the file format."""


def _int_matrix(obj: Any, what: str) -> list[list[int]]:
    if not isinstance(obj, list) or not obj:
        raise FormatError(f"{what} must be a non-empty list of rows")
    rows = []
    for r in obj:
        if not isinstance(r, list):
            raise FormatError(f"{what} rows must be lists")
        for v in r:
            if isinstance(v, bool) or not isinstance(v, int):
                raise FormatError(f"{what} entries must be integers, got {v!r}")
        rows.append(list(r))
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise FormatError(f"{what} rows have unequal lengths")
    return rows


def lattice_from_json(doc: Any) -> Lattice:
    if not isinstance(doc, dict) or "gram" not in doc:
        raise FormatError('lattice file needs a "gram" field')
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise FormatError("label must be a string")
    gram = _int_matrix(doc["gram"], "gram")
    if len(gram) != len(gram[0]):
        raise FormatError("gram must be square")
    return Lattice(gram, label)


def lattice_to_json(lat: Lattice) -> dict:
    doc: dict = {}
    if lat.label is not None:
        doc["label"] = lat.label
    doc["gram"] = [list(r) for r in lat.gram]
    return doc


def automorphism_from_json(doc: Any) -> tuple[list[list[int]], int]:
    if not isinstance(doc, dict) or "matrix" not in doc or "order" not in doc:
        raise FormatError('automorphism file needs "matrix" and "order"')
    order = doc["order"]
    if isinstance(order, bool) or not isinstance(order, int):
        raise FormatError("order must be an integer")
    m = _int_matrix(doc["matrix"], "matrix")
    if len(m) != len(m[0]):
        raise FormatError("matrix must be square")
    return m, order


def automorphism_to_json(matrix, order: int) -> dict:
    return {"matrix": [list(map(int, r)) for r in matrix], "order": int(order)}


def _load(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from exc


def _reject_constant(name: str):
    raise FormatError(f"non-finite number {name} is not allowed")


def load_lattice(path: str | Path) -> Lattice:
    return lattice_from_json(_load(path))


def load_automorphism(path: str | Path) -> tuple[list[list[int]], int]:
    return automorphism_from_json(_load(path))


def dump(doc: Any, path: str | Path | None = None) -> str:
    text = json.dumps(doc, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
