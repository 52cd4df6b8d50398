"""Dense symmetric linear algebra for the finite-dimensional extension models."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    DivergenceError,
    IndeterminateLimitError,
    InvertibilityError,
    ShapeError,
    ValidationError,
)

DEFAULT_TOL = 1e-10


def default_tol() -> float:
    """Package-wide tolerance; ``KREIN_GAP_TOL`` overrides the built-in 1e-10."""
    raw = os.environ.get("KREIN_GAP_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ValidationError(f"KREIN_GAP_TOL: not a number: {raw!r}") from None
    if not tol > 0:
        raise ValidationError(f"KREIN_GAP_TOL: must be positive, got {tol}")
    return tol


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SymOperator:
    """Real symmetric matrix with the tolerance used to certify its symmetry."""

    entries: np.ndarray
    tol: float = field(default_factory=default_tol)

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeError(f"square: expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ShapeError("dim: matrix must have dim >= 1")
        if not np.all(np.isfinite(a)):
            raise ValidationError("finite: matrix has non-finite entries")
        if not self.tol > 0:
            raise ValidationError(f"tol: must be positive, got {self.tol}")
        scale = max(1.0, float(np.abs(a).max()))
        asym = float(np.abs(a - a.T).max())
        if asym > self.tol * scale:
            i, j = np.unravel_index(np.argmax(np.abs(a - a.T)), a.shape)
            raise ValidationError(
                f"symmetry: entries[{i}][{j}] and entries[{j}][{i}] differ by {asym:.3g}"
            )
        object.__setattr__(self, "entries", _frozen(0.5 * (a + a.T)))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        a = self.entries
        return a.astype(dtype) if dtype is not None else a.copy()

    def __eq__(self, other):
        if not isinstance(other, SymOperator):
            return NotImplemented
        return self.tol == other.tol and np.array_equal(self.entries, other.entries)

    __hash__ = None


def as_sym(a, tol: float | None = None) -> SymOperator:
    if isinstance(a, SymOperator):
        return a if tol is None else SymOperator(a.entries, tol)
    a = np.asarray(a, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    return SymOperator(a, default_tol() if tol is None else tol)


def _mat(a) -> np.ndarray:
    if isinstance(a, SymOperator):
        return a.entries
    a = np.asarray(a, dtype=float)
    return a.reshape(1, 1) if a.ndim == 0 else a


@dataclass(frozen=True)
class OrthoSplit:
    """Orthonormal bases for ``H = M (+) N``; columns of ``basisM`` span M."""

    basisM: np.ndarray
    basisN: np.ndarray
    tol: float = field(default_factory=default_tol)

    def __post_init__(self):
        bn = np.asarray(self.basisN, dtype=float)
        if bn.ndim != 2 or bn.shape[1] < 1:
            raise ShapeError("d: basisN must be a dim x d array with d >= 1")
        dim = bn.shape[0]
        bm = np.asarray(self.basisM, dtype=float)
        if bm.size == 0:
            bm = np.zeros((dim, 0))
        if bm.ndim != 2 or bm.shape[0] != dim:
            raise ShapeError(f"dim: basisM has shape {bm.shape}, basisN has {bn.shape}")
        if bm.shape[1] + bn.shape[1] != dim:
            raise ValidationError(
                f"m + d == dim: {bm.shape[1]} + {bn.shape[1]} != {dim}"
            )
        full = np.hstack([bm, bn])
        dev = float(np.abs(full.T @ full - np.eye(dim)).max())
        if dev > 100 * self.tol:
            # which of the three orthogonality checks failed
            if bm.shape[1] and np.abs(bm.T @ bm - np.eye(bm.shape[1])).max() > 100 * self.tol:
                name = "basisM orthonormal"
            elif np.abs(bn.T @ bn - np.eye(bn.shape[1])).max() > 100 * self.tol:
                name = "basisN orthonormal"
            else:
                name = "M orthogonal to N"
            raise ValidationError(f"{name}: deviation {dev:.3g}")
        object.__setattr__(self, "basisM", _frozen(bm))
        object.__setattr__(self, "basisN", _frozen(bn))

    @property
    def dim(self) -> int:
        return self.basisN.shape[0]

    @property
    def m(self) -> int:
        return self.basisM.shape[1]

    @property
    def d(self) -> int:
        return self.basisN.shape[1]

    @property
    def proj_N(self) -> np.ndarray:
        return self.basisN @ self.basisN.T

    @property
    def proj_M(self) -> np.ndarray:
        return self.basisM @ self.basisM.T

    @classmethod
    def from_subspace(cls, vectors, dim: int | None = None, tol: float | None = None):
        """Split with M spanned by the columns of ``vectors`` and N its complement."""
        v = np.asarray(vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if dim is None:
            dim = v.shape[0]
        if v.size == 0:
            v = np.zeros((dim, 0))
        if v.shape[0] != dim:
            raise ShapeError(f"dim: vectors have length {v.shape[0]}, expected {dim}")
        u, s, _ = np.linalg.svd(v, full_matrices=True)
        rank = int(np.sum(s > 1e-12 * max(1.0, s.max(initial=0.0))))
        return cls(u[:, :rank], u[:, rank:], default_tol() if tol is None else tol)

    @classmethod
    def coordinate(cls, dim: int, m_indices, tol: float | None = None):
        """Split along standard basis vectors; ``m_indices`` are the M coordinates."""
        eye = np.eye(dim)
        m_idx = sorted(set(int(i) for i in m_indices))
        n_idx = [i for i in range(dim) if i not in m_idx]
        return cls(eye[:, m_idx], eye[:, n_idx], default_tol() if tol is None else tol)


@dataclass(frozen=True)
class EpsSchedule:
    """Geometric schedule ``eps0 * ratio**j`` used to realise limits eps -> 0+."""

    eps0: float = 1e-2
    ratio: float = 0.5
    steps: int = 30
    convergence_tol: float = 1e-8

    def __post_init__(self):
        if not self.eps0 > 0:
            raise ValidationError(f"eps0: must be positive, got {self.eps0}")
        if not 0 < self.ratio < 1:
            raise ValidationError(f"ratio: must lie in (0, 1), got {self.ratio}")
        if self.steps < 2:
            raise ValidationError(f"steps: need at least 2, got {self.steps}")
        if not self.convergence_tol > 0:
            raise ValidationError("convergence_tol: must be positive")
        if self.eps0 * self.ratio ** (self.steps - 1) <= 100 * np.finfo(float).eps:
            raise ValidationError("schedule: smallest eps is below 100 machine epsilon")

    def values(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.steps)


def _check_square_symmetric(a: np.ndarray, tol: float) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"square: expected a square matrix, got shape {a.shape}")
    if a.size and np.abs(a - a.T).max() > tol * max(1.0, np.abs(a).max()):
        raise ValidationError("symmetry: matrix is not symmetric")


def min_eigenvalue(a) -> float:
    a = _mat(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(a)[0])


def psd_check(S, tol: float | None = None) -> bool:
    """True iff the smallest eigenvalue of ``S`` is at least ``-tol * max(1, |S|)``."""
    tol = default_tol() if tol is None else tol
    a = _mat(S)
    _check_square_symmetric(a, max(tol, default_tol()))
    if a.size == 0:
        return True
    w = np.linalg.eigvalsh(0.5 * (a + a.T))
    return bool(w[0] >= -tol * max(1.0, abs(w[-1]), abs(w[0])))


def psd_leq(a, b, tol: float | None = None) -> bool:
    """PSD order ``a <= b``."""
    return psd_check(_mat(b) - _mat(a), tol)


def compressions(K, split: OrthoSplit):
    """Blocks ``T = BM' K BM``, ``Gamma = BN' K BM``, ``S0 = BN' K BN``."""
    k = _mat(K)
    if k.shape != (split.dim, split.dim):
        raise ShapeError(f"dim: operator is {k.shape}, split has dim {split.dim}")
    bm, bn = split.basisM, split.basisN
    t = bm.T @ k @ bm
    gamma = bn.T @ k @ bm
    s0 = bn.T @ k @ bn
    return 0.5 * (t + t.T), gamma, 0.5 * (s0 + s0.T)


def limit_extrapolate(
    family: Callable[[float], np.ndarray],
    schedule: EpsSchedule | None = None,
) -> np.ndarray:
    """Limit of ``family(eps)`` as eps decreases to 0 along ``schedule``.

    The family is evaluated at every point of the schedule.  Convergence is
    declared when the last two values differ by less than
    ``schedule.convergence_tol`` in max-norm (relative to ``max(1, |value|)``);
    the returned value is the last one with a one-step Richardson correction
    when the successive differences shrink geometrically at the schedule
    ratio (a family analytic at 0).  In that regime convergence is also
    accepted when the corrected values agree, since their error is second
    order in eps.

    Raises :class:`DivergenceError` if the norms grow monotonically beyond
    ``1 / convergence_tol`` and :class:`IndeterminateLimitError` otherwise.
    """
    schedule = schedule or EpsSchedule()
    values = [np.atleast_2d(np.asarray(family(float(e)), dtype=float))
              for e in schedule.values()]
    norms = np.array([np.abs(v).max(initial=0.0) for v in values])
    diffs = np.array([np.abs(values[i] - values[i - 1]).max(initial=0.0)
                      for i in range(1, len(values))])
    scale = max(1.0, norms[-1])
    tol = schedule.convergence_tol * scale
    r = schedule.ratio
    last, prev = values[-1], values[-2]
    # linear-in-eps regime: differences shrink by the schedule ratio
    geometric = diffs[-2] > 0 and abs(diffs[-1] / diffs[-2] - r) < 0.25 * r
    if geometric:
        rich = (last - r * prev) / (1.0 - r)
        rich_prev = (prev - r * values[-3]) / (1.0 - r) if len(values) > 2 else prev
        if diffs[-1] < tol or np.abs(rich - rich_prev).max() < tol:
            return rich
    elif diffs[-1] < tol:
        return last
    tail = norms[len(norms) // 2:]
    if np.all(np.diff(tail) > 0) and norms[-1] > 1.0 / schedule.convergence_tol:
        raise DivergenceError(
            f"limit: norms grow without bound (last {norms[-1]:.3g})", values=norms
        )
    raise IndeterminateLimitError(
        f"limit: no convergence, last successive difference {diffs[-1]:.3g}"
    )


def _pinv_sym(a: np.ndarray, tol: float) -> np.ndarray:
    if a.size == 0:
        return a.copy()
    w, v = np.linalg.eigh(a)
    cutoff = tol * max(np.abs(w).max(), 0.0)
    inv = np.where(np.abs(w) > cutoff, 1.0 / np.where(w == 0, 1.0, w), 0.0)
    return (v * inv) @ v.T


def schur_complement(K, split: OrthoSplit, schedule: EpsSchedule | None = None,
                     tol: float | None = None) -> SymOperator:
    """``S0 - lim Gamma (T + eps)^-1 Gamma^*`` for a PSD operator ``K``."""
    tol = default_tol() if tol is None else tol
    t, gamma, s0 = compressions(K, split)
    if t.size:
        w, v = np.linalg.eigh(t)
        gv = gamma @ v
    else:
        w, gv = np.zeros(0), np.zeros((split.d, 0))

    def family(eps):
        return (gv / (w + eps)) @ gv.T

    try:
        lim = limit_extrapolate(family, schedule)
    except IndeterminateLimitError as exc:
        raise DivergenceError(f"schur complement: {exc} (is the input PSD?)") from exc
    out = s0 - lim
    return SymOperator(0.5 * (out + out.T), tol)


def schur_complement_pinv(K, split: OrthoSplit, tol: float | None = None) -> np.ndarray:
    """``S0 - Gamma T^+ Gamma^*`` with a relative pseudo-inverse cutoff."""
    tol = default_tol() if tol is None else tol
    t, gamma, s0 = compressions(K, split)
    out = s0 - gamma @ _pinv_sym(t, tol) @ gamma.T
    return 0.5 * (out + out.T)


@dataclass(frozen=True)
class BlockInverseResidual:
    residual: float
    bound: float
    cond_L: float
    cond_R: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.bound


def block_inverse_residual(L, split: OrthoSplit, tol: float = 1e-9) -> BlockInverseResidual:
    """Compare ``R^-1 (+) 0`` with ``L^-1 - L^-1 P_N Lambda^-1 P_N L^-1``."""
    l = _mat(L)
    if l.shape != (split.dim, split.dim):
        raise ShapeError(f"dim: operator is {l.shape}, split has dim {split.dim}")
    cond_l = float(np.linalg.cond(l))
    if not np.isfinite(cond_l) or cond_l > 1e14:
        raise InvertibilityError(f"L: singular (condition number {cond_l:.3g})")
    bm, bn = split.basisM, split.basisN
    r = bm.T @ l @ bm
    cond_r = float(np.linalg.cond(r)) if r.size else 1.0
    if not np.isfinite(cond_r) or cond_r > 1e14:
        raise InvertibilityError(f"R: M-compression singular (condition number {cond_r:.3g})")
    l_inv = np.linalg.inv(l)
    lam = bn.T @ l_inv @ bn
    cond_lam = float(np.linalg.cond(lam))
    if not np.isfinite(cond_lam) or cond_lam > 1e14:
        raise InvertibilityError(f"Lambda: singular (condition number {cond_lam:.3g})")
    lhs = bm @ np.linalg.inv(r) @ bm.T if r.size else np.zeros_like(l)
    rhs = l_inv - l_inv @ bn @ np.linalg.solve(lam, bn.T @ l_inv)
    residual = float(np.abs(lhs - rhs).max())
    return BlockInverseResidual(residual, tol * float(np.abs(l_inv).max()), cond_l, cond_r)


def block_inverse_identity_check(L, split: OrthoSplit, tol: float = 1e-9) -> bool:
    return block_inverse_residual(L, split, tol).passed
