"""Fractional (Cayley-type) transform between PSD operators and PSD contractions.

``A -> K = A (I + A)^-1`` maps non-negative operators onto non-negative
contractions that do not have 1 as an eigenvalue; ``K -> K (I - K)^-1`` inverts
it.  Both directions act on eigenvalues of a symmetric eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotAnOperatorError
from .linalg import SymOperator, _mat, as_sym, default_tol, psd_check


@dataclass(frozen=True)
class PsdContraction:
    """Wrapper certifying ``0 <= op <= I``."""

    op: SymOperator

    def __post_init__(self):
        op = as_sym(self.op)
        tol = op.tol
        if not psd_check(op, tol):
            raise DomainError("contraction: operator is not PSD")
        if not psd_check(np.eye(op.dim) - op.entries, tol):
            raise DomainError("contraction: I - operator is not PSD (norm exceeds 1)")
        object.__setattr__(self, "op", op)

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries

    @property
    def dim(self) -> int:
        return self.op.dim

    def __array__(self, dtype=None, copy=None):
        return self.op.__array__(dtype)


def as_contraction(K, tol: float | None = None) -> PsdContraction:
    if isinstance(K, PsdContraction):
        return K
    return PsdContraction(as_sym(K, tol))


def _spectral_map(a: np.ndarray, fn) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    out = (v * fn(w)) @ v.T
    return 0.5 * (out + out.T)


def to_contraction(A, tol: float | None = None) -> PsdContraction:
    """``A (I + A)^-1`` for PSD ``A``."""
    a = as_sym(A, tol)
    tol = a.tol
    if not psd_check(a, tol):
        raise DomainError("to_contraction: A is not PSD")
    k = _spectral_map(a.entries, lambda w: np.clip(w, 0.0, None) / (1.0 + np.clip(w, 0.0, None)))
    return PsdContraction(SymOperator(k, tol))


def to_operator(K, tol: float | None = None) -> SymOperator:
    """``K (I - K)^-1``; raises :class:`NotAnOperatorError` if 1 is an eigenvalue of K."""
    tol = default_tol() if tol is None else tol
    k = _mat(as_contraction(K, tol))
    w = np.linalg.eigvalsh(k)
    if np.any(np.abs(w - 1.0) < tol):
        raise NotAnOperatorError(
            f"to_operator: eigenvalue {w[-1]!r} within {tol:g} of 1; the extension is a relation"
        )
    a = _spectral_map(k, lambda w: np.clip(w, 0.0, 1.0) / (1.0 - np.clip(w, 0.0, 1.0)))
    return SymOperator(a, tol)


def resolvent_at_minus_one(A) -> np.ndarray:
    """``(I + A)^-1 = I - to_contraction(A)``."""
    a = _mat(A)
    return _spectral_map(a, lambda w: 1.0 / (1.0 + w))
