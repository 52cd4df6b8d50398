"""Uniqueness criterion for point restrictions of multiplication operators.

``A`` multiplies by ``phi(k) = k**(2l)`` in ``L2(R^n)`` and ``A0`` is its restriction
to functions with vanishing integral.  The defect space is spanned by
``e(k) = 1 / (1 + phi(k))`` and the two rank-one gaps are

    G1 = |e|^2 / ((I + A) A^-1 e, e) = |e|^2 / (w_n int k^(n-1) / (phi (1 + phi)) dk)
    G2 = |e|^2 / ((I + A) e, e)      = |e|^2 / (w_n int k^(n-1) / (1 + phi) dk)

with a gap set to zero when its denominator diverges.  ``w_n`` is the area of
the unit sphere in R^n; it cancels from the ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, InvalidModelError, QuadratureError, ValidationError
from .quadrature import (
    IntegralVerdict,
    adaptive_integrate,
    classify_increments,
    improper_integral,
    kind_from_ends,
    monomial,
    two_point,
)

UNIQUE = "unique"
A_IS_MINIMAL = "A_is_minimal"
A_IS_MAXIMAL = "A_is_maximal"
INTERIOR = "interior"

GAP_TOL = 1e-12


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class CriterionSpec:
    n: int
    l: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.l) != self.l or self.n < 1 or self.l < 1:
            raise ValidationError(f"(n, l): need positive integers, got ({self.n}, {self.l})")

    @property
    def valid(self) -> bool:
        return self.n < 4 * self.l

    def require_valid(self):
        if not self.valid:
            raise InvalidModelError(
                f"cond1: n={self.n} >= 4l={4 * self.l}, the defect vector is not square integrable"
            )


def classify_exponents(spec: CriterionSpec, which: str) -> str:
    """Convergence kind of ``I1``, ``I2`` or ``cond1`` from power counting alone."""
    n, l = spec.n, spec.l
    if which == "I1":
        # k^(n-1-2l) at 0, k^(n-1-4l) at infinity
        return kind_from_ends(n > 2 * l, n < 4 * l)
    if which == "I2":
        return kind_from_ends(True, n < 2 * l)
    if which == "cond1":
        return kind_from_ends(True, n < 4 * l)
    raise ValueError(f"which must be 'I1', 'I2' or 'cond1', got {which!r}")


def integrand(spec: CriterionSpec, which: str, scale: float = 1.0):
    """Radial integrand of ``I1``, ``I2`` or ``cond1`` (the squared defect norm)."""
    n, l = spec.n, spec.l
    if which == "I1":
        return monomial(scale, n - 1 - 2 * l, 2 * l, 1)
    if which == "I2":
        return monomial(scale, n - 1, 2 * l, 1)
    if which == "cond1":
        return monomial(scale, n - 1, 2 * l, 2)
    raise ValueError(f"which must be 'I1', 'I2' or 'cond1', got {which!r}")


def improper_quadrature(f, spec: CriterionSpec | None = None, which: str | None = None,
                        backend=None) -> IntegralVerdict:
    """Numerical verdict for ``int_0^inf f``; cross-checked against power counting.

    When ``spec`` and ``which`` are given the numerical kind must equal
    :func:`classify_exponents`, otherwise :class:`ConsistencyError` is raised.
    """
    verdict = improper_integral(f, backend=backend)
    if spec is not None and which is not None:
        expected = classify_exponents(spec, which)
        if verdict.kind != expected:
            raise ConsistencyError(
                f"{which}(n={spec.n}, l={spec.l}): quadrature says {verdict.kind}, "
                f"exponent rule says {expected}"
            )
    return verdict


def verdict_from_gaps(g1: float, g2: float, tol: float = GAP_TOL) -> str:
    z1, z2 = abs(g1) <= tol, abs(g2) <= tol
    if z1 and z2:
        return UNIQUE
    if z1:
        return A_IS_MINIMAL
    if z2:
        return A_IS_MAXIMAL
    return INTERIOR


def verdict_from_kinds(i1_kind: str, i2_kind: str) -> str:
    """Verdict implied by which of the two pairing integrals diverge."""
    return verdict_from_gaps(0.0 if i1_kind != IntegralVerdict.CONVERGENT else 1.0,
                             0.0 if i2_kind != IntegralVerdict.CONVERGENT else 1.0)


@dataclass
class CriterionReport:
    spec: CriterionSpec
    norm: IntegralVerdict
    I1: IntegralVerdict
    I2: IntegralVerdict
    G1_scalar: float
    G2_scalar: float
    verdict: str
    omega_n: float

    def to_json(self) -> dict:
        return {
            "n": self.spec.n,
            "l": self.spec.l,
            "omega_n": self.omega_n,
            "norm_sq": self.norm.to_json(),
            "I1": self.I1.to_json(),
            "I2": self.I2.to_json(),
            "G1": self.G1_scalar,
            "G2": self.G2_scalar,
            "verdict": self.verdict,
        }


def delta_restriction_gaps(spec: CriterionSpec, backend=None) -> CriterionReport:
    """Rank-one gaps and verdict for the point restriction of ``k**(2l)`` in R^n.

    Integral values carry the sphere area ``omega_n`` explicitly.
    """
    spec.require_valid()
    w = sphere_area(spec.n)
    norm = improper_quadrature(integrand(spec, "cond1", w), spec, "cond1", backend)
    i1 = improper_quadrature(integrand(spec, "I1", w), spec, "I1", backend)
    i2 = improper_quadrature(integrand(spec, "I2", w), spec, "I2", backend)
    g1 = norm.value / i1.value if i1.convergent else 0.0
    g2 = norm.value / i2.value if i2.convergent else 0.0
    verdict = verdict_from_gaps(g1, g2)
    if verdict != verdict_from_kinds(i1.kind, i2.kind):  # pragma: no cover - guards the rule
        raise ConsistencyError("criterion: gap values and integral kinds disagree")
    return CriterionReport(spec, norm, i1, i2, g1, g2, verdict, w)


def polyharmonic_classify(n: int, l: int) -> str:
    """Trichotomy for point perturbations of ``(-Laplacian)**l`` in R^n."""
    spec = CriterionSpec(n, l)
    spec.require_valid()
    if n < 2 * l:
        return A_IS_MINIMAL
    if n == 2 * l:
        return UNIQUE
    return A_IS_MAXIMAL


def trichotomy_table(max_n: int, max_l: int, backend=None) -> list[dict]:
    """One row per valid ``(n, l)`` with ``n <= max_n``, ``l <= max_l``."""
    rows = []
    for l in range(1, max_l + 1):
        for n in range(1, min(max_n, 4 * l - 1) + 1):
            rep = delta_restriction_gaps(CriterionSpec(n, l), backend)
            rule = polyharmonic_classify(n, l)
            if rep.verdict != rule:
                raise ConsistencyError(
                    f"(n={n}, l={l}): quadrature verdict {rep.verdict} vs rule {rule}"
                )
            rows.append({
                "n": n, "l": l,
                "I1": rep.I1.kind, "I2": rep.I2.kind,
                "G1": rep.G1_scalar, "G2": rep.G2_scalar,
                "verdict": rep.verdict,
            })
    return rows


# --------------------------------------------------------------------------
# discretised cross-check
# --------------------------------------------------------------------------

def discretized_gaps(n: int, l: int, phi_min: float, phi_max: float, size: int = 32,
                     seed: int = 0) -> tuple[float, float]:
    """Gaps of a Galerkin model of the multiplication operator.

    The radial half-line is truncated to ``phi_min <= k**(2l) <= phi_max`` and discretised by
    Gauss-Legendre in ``log k``; the defect vector spans N and a random
    orthonormal basis is used for its complement.  Returns ``(G1, G2)`` from
    :func:`krein_gap.interval.gap_operators`.
    """
    from .interval import gap_operators
    from .linalg import EpsSchedule, OrthoSplit

    x, wq = np.polynomial.legendre.leggauss(size)
    lo, hi = math.log(phi_min) / (2 * l), math.log(phi_max) / (2 * l)
    logk = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    k = np.exp(logk)
    weights = 0.5 * (hi - lo) * wq * k * sphere_area(n) * k ** (n - 1)
    phi = k ** (2 * l)
    kmat = np.diag(phi / (1.0 + phi))
    e = np.sqrt(weights) / (1.0 + phi)
    e_hat = e / np.linalg.norm(e)
    rng = np.random.default_rng(seed)
    basis = np.column_stack([e_hat, rng.standard_normal((size, size - 1))])
    q, _ = np.linalg.qr(basis)
    q[:, 0] *= np.sign(q[:, 0] @ e_hat)
    split = OrthoSplit(q[:, 1:], q[:, :1])
    # the spectrum reaches down to phi(k_min), so run eps further towards 0
    gaps = gap_operators(kmat, split, EpsSchedule(steps=39, convergence_tol=1e-6))
    return float(gaps.G1[0, 0]), float(gaps.G2[0, 0])


# --------------------------------------------------------------------------
# two-point planar example
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoPointSpec:
    """Planar defect ``e0(k) = (1 - exp(-i k.x0)) / (1 + k^2)`` with ``|x0| = x0``."""

    x0: float
    cutoff_R: float = 200.0
    doublings: int = 4

    def __post_init__(self):
        if not self.x0 > 0:
            raise ValidationError(f"x0: must be positive, got {self.x0}")
        if not self.cutoff_R > 0:
            raise ValidationError(f"cutoff_R: must be positive, got {self.cutoff_R}")
        if self.doublings < 2:
            raise ValidationError("doublings: need at least 2")


# (name, power of k in the denominator, power of (1 + k^2)); weight 2 pi from the angle
TWO_POINT_INTEGRALS = (
    ("norm_sq", 0, 2),
    ("pairing_inv", 2, 1),
    ("pairing", 0, 1),
)


@dataclass
class TwoPointIntegral:
    name: str
    cutoffs: list
    partials: list
    increments: list
    convergent: bool
    value: float | None
    stability: float | None
    divergence_rate: str | None
    coefficient: float | None

    def to_json(self) -> dict:
        return {
            "verdict": "finite" if self.convergent else "divergent",
            "value": self.value,
            "stability": self.stability,
            "cutoffs": self.cutoffs,
            "partials": self.partials,
            "increments": self.increments,
            "divergence_rate": self.divergence_rate,
            "log_coefficient": self.coefficient,
        }


def _tail_estimate(a: int, b: int, R: float) -> float:
    """``2 pi int_R^inf 2 k / (k^a (1+k^2)^b) dk``: the tail with the circle mean at its limit 2."""
    if (a, b) == (0, 2):
        return 2.0 * math.pi / (1.0 + R * R)
    if (a, b) == (2, 1):
        return 2.0 * math.pi * math.log1p(1.0 / (R * R))
    return math.inf


def _two_point_integral(spec: TwoPointSpec, name: str, a: int, b: int, rtol: float,
                        backend) -> TwoPointIntegral:
    f = two_point(2.0 * math.pi, spec.x0, a, b)
    cuts = spec.cutoff_R * 2.0 ** np.arange(spec.doublings + 1)
    head = adaptive_integrate(f, 0.0, cuts[0], rtol=rtol, backend=backend).value
    incs = [adaptive_integrate(f, cuts[j], cuts[j + 1], rtol=rtol, atol=0.0,
                               backend=backend).value for j in range(spec.doublings)]
    partials = list(head + np.concatenate([[0.0], np.cumsum(incs)]))
    divergent, rate, coef, _ = classify_increments(incs, cuts[:-1])
    if divergent:
        return TwoPointIntegral(name, cuts.tolist(), partials, incs, False, None, None,
                                rate, coef)
    stability = abs(partials[-1] - partials[-2]) / abs(partials[-1])
    value = partials[-1] + _tail_estimate(a, b, cuts[-1])
    return TwoPointIntegral(name, cuts.tolist(), partials, incs, True, value, stability,
                            None, None)


@dataclass
class TwoPointReport:
    spec: TwoPointSpec
    integrals: dict
    G1: float
    G2: float

    def to_json(self) -> dict:
        return {
            "x0": self.spec.x0,
            "cutoff_R": self.spec.cutoff_R,
            "integrals": {k: v.to_json() for k, v in self.integrals.items()},
            "G1": self.G1,
            "G2": self.G2,
            "verdict": verdict_from_gaps(self.G1, self.G2),
        }


def two_point_report(spec: TwoPointSpec, rtol: float = 1e-8, backend=None) -> TwoPointReport:
    """Integrals, divergence rates and gaps for the two-point planar defect.

    ``G1`` uses the ``(I + A) A^-1`` pairing, ``G2`` the ``(I + A)`` pairing; a
    divergent pairing makes its gap zero.
    """
    ints = {name: _two_point_integral(spec, name, a, b, rtol, backend)
            for name, a, b in TWO_POINT_INTEGRALS}
    norm = ints["norm_sq"]
    if not norm.convergent:
        raise QuadratureError("two-point: squared defect norm did not converge")
    p1, p2 = ints["pairing_inv"], ints["pairing"]
    g1 = norm.value / p1.value if p1.convergent else 0.0
    g2 = norm.value / p2.value if p2.convergent else 0.0
    return TwoPointReport(spec, ints, g1, g2)
