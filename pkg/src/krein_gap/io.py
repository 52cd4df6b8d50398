"""JSON formats for matrices and splits.

Matrix: ``{"dim": n, "rows": [[...], ...]}``.
Split:  ``{"basisM": [[...], ...], "basisN": [[...], ...]}`` with each inner list
one basis vector (a column of the basis matrix).
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ValidationError
from .linalg import OrthoSplit, SymOperator, default_tol


def _numeric_rows(rows, what: str) -> np.ndarray:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{what}: expected a list of lists")
    try:
        a = np.array(rows, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{what}: ragged or non-numeric entries") from None
    return a


def matrix_from_json(obj, tol: float | None = None) -> SymOperator:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise ValidationError("matrix: expected an object with 'dim' and 'rows'")
    a = _numeric_rows(obj["rows"], "rows")
    dim = obj.get("dim", a.shape[0] if a.ndim else 0)
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"dim: expected a positive integer, got {dim!r}")
    if a.shape != (dim, dim):
        raise ValidationError(f"dim: rows have shape {a.shape}, expected ({dim}, {dim})")
    return SymOperator(a, default_tol() if tol is None else tol)


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=float)
    return {"dim": int(a.shape[0]), "rows": a.tolist()}


def split_from_json(obj, tol: float | None = None) -> OrthoSplit:
    if not isinstance(obj, dict) or "basisN" not in obj:
        raise ValidationError("split: expected an object with 'basisM' and 'basisN'")
    bn = _numeric_rows(obj["basisN"], "basisN")
    if bn.ndim != 2 or bn.shape[0] < 1:
        raise ValidationError("basisN: need at least one vector (d >= 1)")
    dim = bn.shape[1]
    bm_rows = obj.get("basisM", [])
    bm = _numeric_rows(bm_rows, "basisM") if bm_rows else np.zeros((0, dim))
    if bm.ndim != 2 or bm.shape[1] != dim:
        raise ValidationError(f"basisM: vectors must have length {dim}")
    return OrthoSplit(bm.T, bn.T, default_tol() if tol is None else tol)


def split_to_json(split: OrthoSplit) -> dict:
    return {"basisM": split.basisM.T.tolist(), "basisN": split.basisN.T.tolist()}


def load_json(path: str):
    """Read a JSON file; OSError and JSONDecodeError propagate to the caller."""
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
