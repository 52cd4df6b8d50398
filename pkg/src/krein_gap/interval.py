"""All non-negative contractive extensions of a compressed contraction.

Given a PSD contraction ``K`` on ``H = M (+) N`` keep its M-M and M-N blocks and
ask which N-N blocks ``X`` still give a PSD contraction ``K_X``.  The answer is
the operator interval ``[S0 - G1, S0 + G2]`` where ``S0`` is the N-N block of
``K`` and

    G1 = lim_{eps->0} (P_N (K + eps)^-1 |_N)^-1
    G2 = lim_{eps->0} (P_N (I - K + eps)^-1 |_N)^-1.

Each gap is also a Schur complement (of ``K`` and ``I - K`` respectively);
:func:`gap_operators` computes both routes and insists they agree.
:func:`is_admissible` tests the definition directly and serves as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cayley import PsdContraction, as_contraction
from .errors import ConsistencyError, ShapeError, ValidationError
from .linalg import (
    EpsSchedule,
    OrthoSplit,
    _mat,
    compressions,
    default_tol,
    limit_extrapolate,
    psd_check,
    schur_complement,
)

CONSISTENCY_TOL = 1e-6


@dataclass(frozen=True)
class BlockForm:
    T: np.ndarray
    Gamma: np.ndarray
    S0: np.ndarray


@dataclass(frozen=True)
class GapPair:
    G1: np.ndarray
    G2: np.ndarray


@dataclass(frozen=True)
class IntervalReport:
    Xmin: np.ndarray
    Xmax: np.ndarray
    unique: bool
    gaps: GapPair
    S0: np.ndarray

    def to_json(self) -> dict:
        return {
            "G1": self.gaps.G1.tolist(),
            "G2": self.gaps.G2.tolist(),
            "Xmin": self.Xmin.tolist(),
            "Xmax": self.Xmax.tolist(),
            "unique": bool(self.unique),
        }


def decompose(K, split: OrthoSplit, tol: float | None = None) -> BlockForm:
    tol = default_tol() if tol is None else tol
    k = as_contraction(K, tol)
    t, gamma, s0 = compressions(k, split)
    if not psd_check(t, tol):
        raise ValidationError("BlockForm: T is not PSD")
    if t.size and not psd_check(np.eye(split.m) - t @ t - gamma.T @ gamma, 10 * tol):
        raise ValidationError("BlockForm: T^2 + Gamma^* Gamma exceeds I")
    return BlockForm(t, gamma, s0)


def _compressed_inverse_limit(k: np.ndarray, split: OrthoSplit, schedule) -> np.ndarray:
    """``lim (P_N (k + eps)^-1 |_N)^-1`` via an eigendecomposition of ``k``."""
    w, v = np.linalg.eigh(k)
    wn = v.T @ split.basisN

    def family(eps):
        # (BN' (k+eps)^-1 BN)^-1 = (F'F)^-1 with F = D^{1/2} V' BN; SVD keeps it accurate
        f = wn / np.sqrt(np.clip(w, 0.0, None) + eps)[:, None]
        _, s, vt = np.linalg.svd(f, full_matrices=False)
        return (vt.T / s**2) @ vt

    out = limit_extrapolate(family, schedule)
    return 0.5 * (out + out.T)


def gap_operators(K, split: OrthoSplit, schedule: EpsSchedule | None = None,
                  tol: float | None = None) -> GapPair:
    tol = default_tol() if tol is None else tol
    k = _mat(as_contraction(K, tol))
    if k.shape[0] != split.dim:
        raise ShapeError(f"dim: operator is {k.shape}, split has dim {split.dim}")
    eye = np.eye(split.dim)
    g1 = _compressed_inverse_limit(k, split, schedule)
    g2 = _compressed_inverse_limit(eye - k, split, schedule)
    s1 = schur_complement(k, split, schedule, tol).entries
    s2 = schur_complement(eye - k, split, schedule, tol).entries
    for name, a, b in (("G1", g1, s1), ("G2", g2, s2)):
        gap = float(np.abs(a - b).max())
        if gap > CONSISTENCY_TOL * max(1.0, float(np.abs(b).max())):
            raise ConsistencyError(
                f"{name}: compressed-inverse and Schur-complement routes differ by {gap:.3g}"
            )
    return GapPair(g1, g2)


def admissible_interval(K, split: OrthoSplit, schedule: EpsSchedule | None = None,
                        tol: float | None = None) -> IntervalReport:
    tol = default_tol() if tol is None else tol
    gaps = gap_operators(K, split, schedule, tol)
    _, _, s0 = compressions(as_contraction(K, tol), split)
    xmin = s0 - gaps.G1
    xmax = s0 + gaps.G2
    unique = float(np.abs(xmax - xmin).max()) <= 10 * tol
    return IntervalReport(xmin, xmax, unique, gaps, s0)


def assemble(K, split: OrthoSplit, X) -> np.ndarray:
    """``K`` with its N-N block replaced by ``X``, in the original basis."""
    k = _mat(K.op if isinstance(K, PsdContraction) else K)
    x = np.atleast_2d(np.asarray(_mat(X), dtype=float))
    if k.shape != (split.dim, split.dim):
        raise ShapeError(f"dim: operator is {k.shape}, split has dim {split.dim}")
    if x.shape != (split.d, split.d):
        raise ShapeError(f"X: expected shape {(split.d, split.d)}, got {x.shape}")
    bn = split.basisN
    s0 = bn.T @ k @ bn
    out = k + bn @ (x - s0) @ bn.T
    return 0.5 * (out + out.T)


def is_admissible(K, split: OrthoSplit, X, tol: float | None = None) -> bool:
    """Direct test: is ``assemble(K, split, X)`` a PSD contraction?"""
    tol = default_tol() if tol is None else tol
    kx = assemble(K, split, X)
    return psd_check(kx, tol) and psd_check(np.eye(split.dim) - kx, tol)


def in_interval(report: IntervalReport, X, tol: float | None = None) -> bool:
    """``Xmin <= X <= Xmax`` in the PSD order, at ten times ``tol``."""
    tol = default_tol() if tol is None else tol
    x = np.atleast_2d(np.asarray(_mat(X), dtype=float))
    return psd_check(x - report.Xmin, 10 * tol) and psd_check(report.Xmax - x, 10 * tol)

