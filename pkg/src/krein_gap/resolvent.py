"""Non-negative singular perturbations ``A_Y`` and their resolvents.

A perturbation is parametrised by a symmetric ``Y`` on N with ``-G1 <= Y <= G2``;
it is defined through its resolvent at -1,

    (I + A_Y)^-1 = (I + A)^-1 - Y_hat,     Y_hat = BN Y BN^*,

i.e. ``A_Y`` is the inverse Cayley image of ``K + Y_hat``.  Its resolvent at a
general point ``z`` follows from a rank-d Krein-type correction of ``(A - z)^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cayley import resolvent_at_minus_one, to_contraction, to_operator
from .errors import DomainError, NotAnOperatorError, ShapeError, SpectralPointError
from .interval import GapPair, gap_operators
from .linalg import (
    EpsSchedule,
    OrthoSplit,
    SymOperator,
    _mat,
    as_sym,
    default_tol,
    psd_check,
    psd_leq,
)


@dataclass(frozen=True)
class PerturbationParam:
    """``Y`` together with the gaps that bound it.

    With ``nonnegative_only`` the admissible set is further cut down to
    ``0 <= Y <= G2``.
    """

    Y: np.ndarray
    gaps: GapPair
    tol: float = field(default_factory=default_tol)
    nonnegative_only: bool = False

    def __post_init__(self):
        y = np.atleast_2d(np.asarray(_mat(self.Y), dtype=float))
        d = self.gaps.G1.shape[0]
        if y.shape != (d, d):
            raise ShapeError(f"Y: expected shape {(d, d)}, got {y.shape}")
        if np.abs(y - y.T).max() > self.tol * max(1.0, np.abs(y).max()):
            raise DomainError("Y: not symmetric")
        y = 0.5 * (y + y.T)
        lower = np.zeros_like(y) if self.nonnegative_only else -self.gaps.G1
        if not psd_leq(lower, y, 10 * self.tol):
            raise DomainError("Y: violates lower bound -G1 <= Y" if not self.nonnegative_only
                              else "Y: not PSD (nonnegative_only)")
        if not psd_leq(y, self.gaps.G2, 10 * self.tol):
            raise DomainError("Y: violates upper bound Y <= G2")
        object.__setattr__(self, "Y", y)

    @classmethod
    def for_model(cls, A, split: OrthoSplit, Y, schedule: EpsSchedule | None = None,
                  tol: float | None = None, nonnegative_only: bool = False):
        tol = default_tol() if tol is None else tol
        gaps = gap_operators(to_contraction(A, tol), split, schedule, tol)
        return cls(Y, gaps, tol, nonnegative_only)


def _as_param(A, split, Y, tol) -> PerturbationParam:
    if isinstance(Y, PerturbationParam):
        return Y
    return PerturbationParam.for_model(A, split, Y, tol=tol)


def lift(split: OrthoSplit, Y) -> np.ndarray:
    """``Y`` on N extended by zero on M, in the ambient basis."""
    y = np.atleast_2d(np.asarray(_mat(Y), dtype=float))
    return split.basisN @ y @ split.basisN.T


def build_perturbation(A, split: OrthoSplit, Y, tol: float | None = None) -> SymOperator:
    """``A_Y`` for an admissible ``Y`` (array or :class:`PerturbationParam`).

    Raises :class:`NotAnOperatorError` at endpoints where ``K + Y_hat`` has
    eigenvalue 1.
    """
    a = as_sym(A, tol)
    tol = a.tol
    param = _as_param(a, split, Y, tol)
    k = to_contraction(a, tol).entries
    return to_operator(k + lift(split, param.Y), tol)


def _spectral_point(z, tol) -> complex:
    z = complex(z)
    if abs(z.imag) <= tol and z.real > -tol:
        raise SpectralPointError(f"z={z}: on the half-axis [0, inf)")
    return z


def resolvent_direct(A_Y, z, tol: float | None = None) -> np.ndarray:
    """``(A_Y - z)^-1`` by a direct linear solve."""
    tol = default_tol() if tol is None else tol
    a = _mat(A_Y)
    z = complex(z)
    w = np.linalg.eigvalsh(a)
    if np.min(np.abs(w - z)) < tol:
        raise SpectralPointError(f"z={z}: within {tol:g} of an eigenvalue")
    return np.linalg.solve(a - z * np.eye(a.shape[0]), np.eye(a.shape[0], dtype=complex))


def krein_resolvent(A, split: OrthoSplit, Y, z, tol: float | None = None,
                    literal: bool = False) -> np.ndarray:
    """Resolvent of ``A_Y`` at ``z`` from the resolvent of ``A``.

    Evaluates

        (A - z)^-1 - Q Y_hat [I + (1+z) P_N Q Y_hat]^-1 P_N Q,   Q = (A + I)(A - z)^-1.

    ``literal=True`` multiplies the correction by an extra factor ``(1 + z)``;
    that variant does not reproduce ``(A_Y - z)^-1`` and is kept only so the
    discrepancy can be demonstrated.
    """
    a = as_sym(A, tol)
    tol = a.tol
    z = _spectral_point(z, tol)
    param = _as_param(a, split, Y, tol)
    n = a.dim
    eye = np.eye(n)
    r_a = resolvent_direct(a, z, tol)
    q = (a.entries + eye) @ r_a
    y_hat = lift(split, param.Y)
    p_n = split.proj_N
    w = 1.0 + z
    bracket = eye + w * p_n @ q @ y_hat
    if np.linalg.cond(bracket) > 1e13:
        raise SpectralPointError(f"z={z}: Krein bracket is singular (eigenvalue of A_Y)")
    corr = q @ y_hat @ np.linalg.solve(bracket, p_n @ q)
    if literal:
        corr = w * corr
    return r_a - corr


@dataclass(frozen=True)
class Endpoint:
    """Extreme perturbation; ``operator`` is None when the endpoint is a relation."""

    Y: np.ndarray
    operator: np.ndarray | None

    @property
    def is_relation(self) -> bool:
        return self.operator is None


@dataclass(frozen=True)
class ExtremePerturbations:
    minimal: Endpoint
    maximal: Endpoint
    gaps: GapPair


def extreme_perturbations(A, split: OrthoSplit, schedule: EpsSchedule | None = None,
                          tol: float | None = None) -> ExtremePerturbations:
    """Perturbations at ``Y = -G1`` (minimal) and ``Y = G2`` (maximal)."""
    a = as_sym(A, tol)
    tol = a.tol
    k = to_contraction(a, tol).entries
    gaps = gap_operators(k, split, schedule, tol)
    ends = []
    for y in (-gaps.G1, gaps.G2):
        try:
            op = to_operator(k + lift(split, y), tol).entries
        except NotAnOperatorError:
            op = None
        ends.append(Endpoint(y, op))
    return ExtremePerturbations(ends[0], ends[1], gaps)


def resolvent_order_holds(ext: ExtremePerturbations, split: OrthoSplit, A, Y,
                          tol: float = 1e-9) -> bool:
    """``(I + A_M)^-1 <= (I + A_Y)^-1 <= (I + A_mu)^-1``.

    Works on resolvents at -1, so relation endpoints (where the operator does
    not exist) are handled through ``(I + A)^-1 - Y_hat`` directly.
    """
    base = resolvent_at_minus_one(A)
    r_y = base - lift(split, Y)
    r_max = base - lift(split, ext.maximal.Y)
    r_min = base - lift(split, ext.minimal.Y)
    return psd_leq(r_max, r_y, tol) and psd_leq(r_y, r_min, tol)


def is_nonnegative(A_Y, tol: float | None = None) -> bool:
    return psd_check(A_Y, default_tol() if tol is None else tol)
