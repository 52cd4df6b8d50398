"""Adaptive Gauss-Kronrod quadrature and improper-integral divergence probing.

Integrands are either plain vectorised callables or :class:`FamilyIntegrand`
instances; the latter run through the compiled panel kernel when the numba
backend is active.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._backend import resolve
from .errors import QuadratureError

RTOL = 1e-8
ATOL = 1e-14
MAX_PANELS = 200_000


@dataclass(frozen=True)
class FamilyIntegrand:
    """Built-in integrand identified by a kernel family code (see :mod:`kernels`)."""

    code: int
    params: tuple
    mode: int = 0

    def __call__(self, x):
        return kernels.family_values_np(self.code, self.params, self.mode, x)

    def substituted(self) -> "FamilyIntegrand":
        """Same integrand after ``k = 1/t`` (maps ``[1, inf)`` onto ``(0, 1]``)."""
        if self.mode:
            raise ValueError("already substituted")
        return FamilyIntegrand(self.code, self.params, 1)

    def panels(self, a, b, backend=None):
        if resolve(backend) == "numba":
            p = np.asarray(self.params, dtype=float)
            return kernels.gk15_family_nb(self.code, p, self.mode, a, b)
        return kernels.gk15_np(self, a, b)


def monomial(scale: float, p: float, b: float, c: float) -> FamilyIntegrand:
    """``scale * k**p / (1 + k**b)**c``."""
    return FamilyIntegrand(kernels.MONO, (float(scale), float(p), float(b), float(c)))


def two_point(scale: float, x0: float, a: float, b: float) -> FamilyIntegrand:
    """``scale * k * m(k x0) / (k**a (1 + k**2)**b)`` with ``m`` the circle mean of 4 sin^2."""
    return FamilyIntegrand(kernels.TWO_POINT, (float(scale), float(x0), float(a), float(b)))


def _substitute(f):
    if isinstance(f, FamilyIntegrand):
        return f.substituted()
    return lambda t: np.asarray(f(1.0 / t), dtype=float) / (t * t)


def _panels(f, a, b, backend):
    if isinstance(f, FamilyIntegrand):
        return f.panels(a, b, backend)
    return kernels.gk15_np(f, a, b)


@dataclass
class QuadResult:
    value: float
    error: float
    panels: int
    converged: bool = True


def adaptive_integrate(f, a: float, b: float, rtol: float = RTOL, atol: float = ATOL,
                       max_panels: int = MAX_PANELS, initial: int = 8,
                       backend=None, raise_on_fail: bool = True) -> QuadResult:
    """Globally adaptive G7/K15 quadrature of ``f`` over ``[a, b]``.

    Each sweep bisects every panel whose error estimate exceeds its equal share
    of the remaining budget ``max(atol, rtol |I|)``; panels already within their
    share are retired, so their contribution is fixed.
    """
    if not b > a:
        if a == b:
            return QuadResult(0.0, 0.0, 0)
        raise ValueError("adaptive_integrate needs a < b")
    edges = np.linspace(a, b, initial + 1)
    lo, hi = edges[:-1], edges[1:]
    done_val = 0.0
    done_err = 0.0
    total_panels = 0
    while True:
        val, err = _panels(f, lo, hi, backend)
        total_panels += lo.size
        if not (np.all(np.isfinite(val)) and np.all(np.isfinite(err))):
            raise QuadratureError("integrand returned non-finite values")
        estimate = done_val + float(val.sum())
        budget = max(atol, rtol * abs(estimate))
        total_err = done_err + float(err.sum())
        if total_err <= budget:
            return QuadResult(estimate, total_err, total_panels)
        share = (budget - done_err) / lo.size if budget > done_err else 0.0
        refine = err > max(share, 0.0)
        # retire accurate panels; leave a little slack for the rest of the budget
        keep = ~refine & (err <= 0.5 * max(share, 0.0))
        done_val += float(val[keep].sum())
        done_err += float(err[keep].sum())
        rest = ~keep
        lo, hi = lo[rest], hi[rest]
        if total_panels + 2 * lo.size > max_panels:
            if raise_on_fail:
                raise QuadratureError(
                    f"adaptive_integrate: no convergence on [{a}, {b}] "
                    f"(error {total_err:.3g} > {budget:.3g})"
                )
            return QuadResult(estimate, total_err, total_panels, converged=False)
        mid = 0.5 * (lo + hi)
        if np.any(mid <= lo) or np.any(mid >= hi):
            raise QuadratureError("adaptive_integrate: panels underflow double precision")
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])


# --------------------------------------------------------------------------
# divergence probing
# --------------------------------------------------------------------------

@dataclass
class EndProbe:
    """Cutoff-doubling increments of an integral at one end of ``(0, inf)``."""

    end: str
    cutoffs: np.ndarray
    increments: np.ndarray
    divergent: bool
    rate: str | None = None
    coefficient: float | None = None
    exponent: float | None = None

    def describe(self) -> str | None:
        if not self.divergent:
            return None
        if self.rate == "logarithmic":
            return f"logarithmic, coefficient {self.coefficient:.6g} (per unit ln cutoff)"
        return f"power, exponent {self.exponent:.3g}, coefficient {self.coefficient:.6g}"


def classify_increments(incs, sizes=None) -> tuple[bool, str | None, float | None, float | None]:
    """Decide divergence from partial-integral increments over doubled cutoffs.

    ``incs[j] = I(2 R_j) - I(R_j)`` with ``R_j = sizes[j]`` (for the zero end
    ``R`` is the reciprocal of the lower limit).  Returns ``(divergent, rate,
    coefficient, exponent)``.  Increments that keep their size (ratio ~1)
    signal logarithmic growth ``c ln R``; growing ones a power ``C R^s``;
    increments shrinking by at least 3/4 per doubling signal a convergent tail.
    """
    incs = np.asarray(incs, dtype=float)
    mags = np.abs(incs)
    if np.all(mags <= 1e-300):
        return False, None, None, None
    if np.any(mags <= 1e-300):
        raise QuadratureError("probe: increments vanish intermittently")
    ratios = mags[1:] / mags[:-1]
    if np.all(ratios <= 0.75):
        return False, None, None, None
    if np.all(ratios >= 0.8):
        j = np.arange(mags.size)
        slope = float(np.polyfit(j, np.log2(mags), 1)[0])
        if abs(slope) < 0.1:
            return True, "logarithmic", float(np.mean(incs) / math.log(2.0)), 0.0
        # partial integral ~ C R^s  =>  increment = C R^s (2^s - 1)
        size = 1.0 if sizes is None else float(sizes[-1])
        return True, "power", float(incs[-1] / ((2.0**slope - 1.0) * size**slope)), slope
    raise QuadratureError(f"probe: inconclusive increment ratios {ratios}")


def probe_end(f, end: str, start: float | None = None, doublings: int = 4,
              rtol: float = RTOL, backend=None) -> EndProbe:
    """Increments ``I(2R) - I(R)`` over ``doublings`` successive doublings.

    At ``end="inf"`` the cutoffs are ``R = start * 2**j`` (default start 1e3);
    at ``end="zero"`` the lower limits are ``start / 2**j`` (default 1e-3).
    """
    if end == "inf":
        start = 1e3 if start is None else start
        cuts = start * 2.0 ** np.arange(doublings + 1)
        incs = [adaptive_integrate(f, cuts[j], cuts[j + 1], rtol=rtol, atol=0.0,
                                   backend=backend).value for j in range(doublings)]
    elif end == "zero":
        start = 1e-3 if start is None else start
        cuts = start / 2.0 ** np.arange(doublings + 1)
        incs = [adaptive_integrate(f, cuts[j + 1], cuts[j], rtol=rtol, atol=0.0,
                                   backend=backend).value for j in range(doublings)]
    else:
        raise ValueError(f"end must be 'zero' or 'inf', got {end!r}")
    incs = np.array(incs)
    sizes = cuts[:-1] if end == "inf" else 1.0 / cuts[:-1]
    divergent, rate, coef, expo = classify_increments(incs, sizes)
    return EndProbe(end, cuts, incs, divergent, rate, coef, expo)


@dataclass
class IntegralVerdict:
    """Convergence classification of an integral over ``(0, inf)``."""

    kind: str
    value: float | None = None
    error: float | None = None
    divergence_rate: str | None = None
    probes: dict = field(default_factory=dict, repr=False)

    CONVERGENT = "convergent"
    DIVERGENT_AT_ZERO = "divergent_at_zero"
    DIVERGENT_AT_INFINITY = "divergent_at_infinity"
    DIVERGENT_BOTH = "divergent_both"

    @property
    def convergent(self) -> bool:
        return self.kind == self.CONVERGENT

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": self.value,
                "divergence_rate": self.divergence_rate}


def kind_from_ends(zero_ok: bool, inf_ok: bool) -> str:
    if zero_ok and inf_ok:
        return IntegralVerdict.CONVERGENT
    if inf_ok:
        return IntegralVerdict.DIVERGENT_AT_ZERO
    if zero_ok:
        return IntegralVerdict.DIVERGENT_AT_INFINITY
    return IntegralVerdict.DIVERGENT_BOTH


def integrate_half_line(f, rtol: float = RTOL, atol: float = ATOL, backend=None) -> QuadResult:
    """``int_0^inf f`` as ``int_0^1 f + int_0^1 f(1/t)/t^2``; assumes convergence."""
    head = adaptive_integrate(f, 0.0, 1.0, rtol=rtol, atol=atol, backend=backend)
    tail = adaptive_integrate(_substitute(f), 0.0, 1.0, rtol=rtol, atol=atol,
                              backend=backend)
    return QuadResult(head.value + tail.value, head.error + tail.error,
                      head.panels + tail.panels)


def improper_integral(f, rtol: float = RTOL, backend=None) -> IntegralVerdict:
    """Classify and, when finite, evaluate ``int_0^inf f(k) dk`` for ``f >= 0``."""
    zero = probe_end(f, "zero", rtol=rtol, backend=backend)
    inf = probe_end(f, "inf", rtol=rtol, backend=backend)
    kind = kind_from_ends(not zero.divergent, not inf.divergent)
    probes = {"zero": zero, "inf": inf}
    if kind != IntegralVerdict.CONVERGENT:
        rates = [f"{p.end}: {p.describe()}" for p in (zero, inf) if p.divergent]
        return IntegralVerdict(kind, None, None, "; ".join(rates), probes)
    res = integrate_half_line(f, rtol=rtol, backend=backend)
    return IntegralVerdict(kind, res.value, res.error, None, probes)
