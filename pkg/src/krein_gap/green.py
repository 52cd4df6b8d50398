"""Green functions of point-perturbed Laplacians in two and three dimensions.

The square root of the spectral parameter is taken on the branch with
``Im sqrt(z) > 0`` so free kernels decay.  On the negative axis ``z = -kappa^2``:

* dim 3: ``G0 = exp(-kappa r) / (4 pi r)``, rank-one coefficient
  ``1 / (alpha + kappa / 4 pi)``;
* dim 2: ``G0 = K0(kappa r) / (2 pi)``, coefficient
  ``2 pi / (2 pi alpha - psi(1) + ln(kappa / 2))``.

Zeros of the coefficient denominators are the negative eigenvalues.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, PoleError, ValidationError
from .special import bessel_k0, euler_gamma

POLE_TOL = 1e-10
BRACKET = (1e-9, 1e9)
BISECTION_STEPS = 200


@dataclass(frozen=True)
class PointPerturbation:
    dim: int
    alpha: float

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValidationError(f"dim: must be 2 or 3, got {self.dim}")
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass(frozen=True)
class GreenQuery:
    z: complex
    x: tuple
    xp: tuple

    def __post_init__(self):
        x = tuple(float(c) for c in np.atleast_1d(self.x))
        xp = tuple(float(c) for c in np.atleast_1d(self.xp))
        if len(x) != len(xp) or len(x) not in (2, 3):
            raise ValidationError("points: x and xp must both lie in R^2 or R^3")
        if x == xp:
            raise ValidationError("points: x == xp, the kernel is singular on the diagonal")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xp", xp)
        object.__setattr__(self, "z", complex(self.z))

    @property
    def dim(self) -> int:
        return len(self.x)


def decaying_sqrt(z: complex) -> complex:
    """``sqrt(z)`` with ``Im >= 0``."""
    s = cmath.sqrt(complex(z))
    if s.imag < 0 or (s.imag == 0 and s.real < 0):
        s = -s
    return s


def _kappa(z: complex) -> float:
    z = complex(z)
    if z.imag != 0 or not z.real < 0:
        raise DomainError(f"z={z}: dim-2 kernels are evaluated on (-inf, 0) only")
    return math.sqrt(-z.real)


def _kernel(dim: int, z: complex, r: float) -> complex:
    if r == 0:
        raise ValidationError("points: coincident arguments, the kernel is singular")
    if dim == 3:
        s = decaying_sqrt(z)
        return cmath.exp(1j * s * r) / (4.0 * math.pi * r)
    kappa = _kappa(z)
    return complex(bessel_k0(kappa * r) / (2.0 * math.pi))


def free_green(q: GreenQuery) -> complex:
    r = math.dist(q.x, q.xp)
    return _kernel(q.dim, q.z, r)


def denominator(p: PointPerturbation, z: complex) -> complex:
    """Denominator of the rank-one coefficient; the coefficient is ``c / denominator``."""
    if p.dim == 3:
        return p.alpha - 1j * decaying_sqrt(z) / (4.0 * math.pi)
    kappa = _kappa(z)
    return 2.0 * math.pi * p.alpha + euler_gamma() + math.log(kappa / 2.0)


def coefficient(p: PointPerturbation, z: complex) -> complex:
    den = denominator(p, z)
    if abs(den) < POLE_TOL:
        raise PoleError(f"z={z}: pole of the perturbed Green function (|denominator| {abs(den):.2g})")
    num = 1.0 if p.dim == 3 else 2.0 * math.pi
    return num / den


def perturbed_green(p: PointPerturbation, q: GreenQuery) -> complex:
    if q.dim != p.dim:
        raise ValidationError(f"dim: query points are in R^{q.dim}, perturbation in R^{p.dim}")
    origin = (0.0,) * p.dim
    g_x0 = _kernel(p.dim, q.z, math.dist(q.x, origin))
    g_0xp = _kernel(p.dim, q.z, math.dist(origin, q.xp))
    return free_green(q) + coefficient(p, q.z) * g_x0 * g_0xp


def _real_denominator(p: PointPerturbation, kappa: float) -> float:
    return denominator(p, complex(-kappa * kappa)).real


def eigenvalue_closed_form(p: PointPerturbation) -> float | None:
    if p.dim == 3:
        return -16.0 * math.pi**2 * p.alpha**2 if p.alpha < 0 else None
    return -4.0 * math.exp(-2.0 * euler_gamma() - 4.0 * math.pi * p.alpha)


def eigenvalue_bisection(p: PointPerturbation, bracket=BRACKET,
                         steps: int = BISECTION_STEPS) -> float | None:
    """Root of the denominator in ``kappa``, bisected in ``log kappa``.

    Both denominators increase with kappa; if the default bracket misses the
    root it is widened by factors of 1e10 (at most 30 times).
    """
    lo, hi = math.log(bracket[0]), math.log(bracket[1])
    f = lambda u: _real_denominator(p, math.exp(u))
    f_lo, f_hi = f(lo), f(hi)
    widen = 0
    while f_lo > 0 or f_hi < 0:
        if p.dim == 3 and f_lo > 0:
            # alpha + kappa / 4pi > 0 for every kappa > 0 when alpha >= 0
            if p.alpha >= 0:
                return None
        if widen == 30:
            return None
        if f_lo > 0:
            lo -= 10 * math.log(10.0)
            f_lo = f(lo)
        if f_hi < 0:
            hi += 10 * math.log(10.0)
            f_hi = f(hi)
        widen += 1
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    kappa = math.exp(0.5 * (lo + hi))
    return -kappa * kappa


def negative_eigenvalue(p: PointPerturbation, rtol: float = 1e-10) -> float | None:
    """Negative eigenvalue of the perturbed Laplacian, or None.

    The closed form is cross-checked against bisection on the coefficient
    denominator.
    """
    closed = eigenvalue_closed_form(p)
    bis = eigenvalue_bisection(p)
    if (closed is None) != (bis is None):
        raise ConsistencyError(
            f"eigenvalue: closed form {closed!r} and bisection {bis!r} disagree on existence"
        )
    if closed is not None and abs(bis - closed) > rtol * abs(closed):
        raise ConsistencyError(
            f"eigenvalue: closed form {closed!r} and bisection {bis!r} differ"
        )
    return closed
