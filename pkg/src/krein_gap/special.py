"""Special functions for the planar point-interaction kernels."""

import math

import numpy as np

from . import kernels
from ._backend import resolve
from .errors import DomainError

SERIES_MAX = kernels.K0_SERIES_MAX


def euler_gamma() -> float:
    """Euler-Mascheroni constant; ``digamma(1) == -euler_gamma()``."""
    return 0.5772156649015329


def digamma(x: float) -> float:
    """psi(x) for x > 0 via upward recurrence and the asymptotic series."""
    if not x > 0:
        raise DomainError(f"digamma: need x > 0, got {x}")
    if x == 1.0:
        return -euler_gamma()
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    # Bernoulli terms B_2k / (2k x^2k)
    tail = inv2 * (1 / 12 - inv2 * (1 / 120 - inv2 * (1 / 252 - inv2 * (1 / 240 - inv2 / 132))))
    return acc + math.log(x) - 0.5 / x - tail


def bessel_k0(x, backend=None):
    """Modified Bessel function of the second kind, order zero.

    Ascending series with its logarithmic term for ``x <= 2``; above that
    ``exp(-x)`` times the trapezoid sum of ``int exp(-x (cosh t - 1)) dt``
    (up to ``x = 20``) or the Hankel asymptotic series.  Accepts scalars or
    arrays; returns the same shape.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("bessel_k0: need x > 0")
    flat = np.atleast_1d(arr).ravel()
    if resolve(backend) == "numba":
        out = kernels.k0_nb(flat)
    else:
        out = kernels.k0_np(flat)
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def bessel_k0_series(x, backend=None):
    """The small-argument branch alone (valid for all x > 0, accurate for x <~ 3)."""
    flat = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if resolve(backend) == "numba":
        return kernels.k0_series_nb(flat)
    return kernels.k0_series_np(flat)


def bessel_k0_large(x, backend=None):
    """The large-argument branch alone (accurate for x >~ 1)."""
    flat = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if resolve(backend) == "numba":
        return kernels.k0_large_nb(flat)
    return kernels.k0_large_np(flat)
