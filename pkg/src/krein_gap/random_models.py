"""Seeded random instances for property checks.

Every generator takes a ``numpy.random.Generator``; callers derive them from
one seed so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from .cayley import to_contraction, to_operator
from .errors import NotAnOperatorError
from .interval import IntervalReport, gap_operators
from .linalg import OrthoSplit
from .resolvent import lift


def generator(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def with_spectrum(rng: np.random.Generator, eigenvalues) -> np.ndarray:
    w = np.asarray(eigenvalues, dtype=float)
    q = orthogonal(rng, w.size)
    out = (q * w) @ q.T
    return 0.5 * (out + out.T)


def contraction(rng: np.random.Generator, dim: int, p_edge: float = 0.2,
                top: float = 1.0) -> np.ndarray:
    """PSD contraction with eigenvalues uniform in ``[0, top]``.

    With probability ``p_edge`` each eigenvalue is snapped to 0 or to ``top``,
    so kernels and eigenvalue-1 subspaces show up regularly.
    """
    w = rng.uniform(0.0, top, dim)
    snap = rng.random(dim) < p_edge
    w[snap] = np.where(rng.random(snap.sum()) < 0.5, 0.0, top)
    return with_spectrum(rng, w)


def psd_operator(rng: np.random.Generator, dim: int, scale: float = 5.0) -> np.ndarray:
    w = rng.uniform(0.0, scale, dim)
    w[rng.random(dim) < 0.15] = 0.0
    return with_spectrum(rng, w)


def split(rng: np.random.Generator, dim: int, d: int) -> OrthoSplit:
    """Random orthonormal split with ``dim N = d``."""
    q = orthogonal(rng, dim)
    return OrthoSplit(q[:, : dim - d], q[:, dim - d:])


def invertible(rng: np.random.Generator, dim: int, split_: OrthoSplit,
               max_tries: int = 100) -> np.ndarray:
    """Symmetric, possibly indefinite ``L`` with ``L`` and its M-compression well conditioned."""
    bm = split_.basisM
    for _ in range(max_tries):
        w = rng.uniform(0.5, 2.0, dim) * np.where(rng.random(dim) < 0.3, -1.0, 1.0)
        l = with_spectrum(rng, w)
        r = bm.T @ l @ bm
        if r.size == 0 or np.linalg.cond(r) < 1e6:
            return l
    raise RuntimeError("invertible: no well-conditioned instance found")


def interpolate(rng: np.random.Generator, lower: np.ndarray, upper: np.ndarray,
                lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """``lower + D^1/2 C D^1/2`` with ``D = upper - lower`` and ``spec C`` uniform in ``[lo, hi]``."""
    diff = upper - lower
    w, v = np.linalg.eigh(0.5 * (diff + diff.T))
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    c = with_spectrum(rng, rng.uniform(lo, hi, lower.shape[0]))
    out = lower + root @ c @ root
    return 0.5 * (out + out.T)


def sample_X(rng: np.random.Generator, report: IntervalReport) -> np.ndarray:
    """Candidate N-block: half inside-or-near the interval, half from a box."""
    d = report.Xmin.shape[0]
    if rng.random() < 0.5:
        return interpolate(rng, report.Xmin, report.Xmax, -0.3, 1.3)
    x = rng.uniform(-0.5, 1.5, (d, d))
    return 0.5 * (x + x.T)


def admissible_Y(rng: np.random.Generator, G1: np.ndarray, G2: np.ndarray,
                 lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    return interpolate(rng, -G1, G2, lo, hi)


def resolvent_instance(rng: np.random.Generator, dim: int, d: int, max_tries: int = 50):
    """``(A, split, Y)`` with ``A`` and ``A_Y`` both genuine operators."""
    for _ in range(max_tries):
        k = contraction(rng, dim, top=0.95)
        a = to_operator(k).entries
        sp = split(rng, dim, d)
        gaps = gap_operators(to_contraction(a), sp)
        y = admissible_Y(rng, gaps.G1, gaps.G2, 0.05, 0.95)
        try:
            to_operator(to_contraction(a).entries + lift(sp, y))
        except NotAnOperatorError:
            continue
        return a, sp, y
    raise RuntimeError("resolvent_instance: no operator-valued perturbation found")
