"""Oracle suites shared by ``krein-gap verify`` and the acceptance tests.

Each suite takes its sizes and tolerance as arguments and returns a
:class:`SuiteResult`; randomised suites draw from ``generator([seed, tag])`` so
they are reproducible independently of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import random_models as rm
from .cayley import to_contraction, to_operator
from .criterion import (
    A_IS_MAXIMAL,
    CriterionSpec,
    IntegralVerdict,
    TwoPointSpec,
    classify_exponents,
    delta_restriction_gaps,
    improper_quadrature,
    integrand,
    polyharmonic_classify,
    two_point_report,
    verdict_from_kinds,
)
from .errors import KreinGapError
from .green import PointPerturbation, eigenvalue_bisection, eigenvalue_closed_form, negative_eigenvalue
from .interval import admissible_interval, in_interval, is_admissible
from .linalg import OrthoSplit, block_inverse_residual
from .resolvent import build_perturbation, krein_resolvent, resolvent_direct
from .special import bessel_k0, bessel_k0_large, bessel_k0_series, digamma

K0_AT_ONE = 0.4210244382
SPECTRAL_POINTS = (-0.5, -2.5, 1 + 2j, -10.0)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    metric: float
    tol: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.metric:.3g} (tol {self.tol:g})"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "metric": self.metric,
                "tol": self.tol, **self.detail}


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), tag])


def interval_oracle(seed: int = 42, instances: int = 200, samples: int = 50,
                    tol: float = 1e-7) -> SuiteResult:
    """Interval membership against the direct completion test on random contractions."""
    rng = _rng(seed, 1)
    disagreements = []
    inside = 0
    for i in range(instances):
        dim = int(rng.integers(2, 7))
        d = int(rng.integers(1, min(3, dim) + 1))
        k = rm.contraction(rng, dim)
        sp = rm.split(rng, dim, d)
        rep = admissible_interval(k, sp, tol=tol)
        for _ in range(samples):
            x = rm.sample_X(rng, rep)
            a, b = is_admissible(k, sp, x, tol), in_interval(rep, x, tol)
            inside += a
            if a != b:
                disagreements.append(i)
    return SuiteResult("interval_oracle", not disagreements, float(len(disagreements)), tol,
                       {"checked": instances * samples, "admissible": inside,
                        "disagreeing_instances": sorted(set(disagreements))})


def running_example(tol: float = 1e-10) -> SuiteResult:
    k = np.array([[0.5, 0.25], [0.25, 0.5]])
    rep = admissible_interval(k, OrthoSplit.coordinate(2, [0]))
    expected = {"G1": 0.375, "G2": 0.375, "Xmin": 0.125, "Xmax": 0.875}
    got = {"G1": rep.gaps.G1[0, 0], "G2": rep.gaps.G2[0, 0],
           "Xmin": rep.Xmin[0, 0], "Xmax": rep.Xmax[0, 0]}
    err = max(abs(got[key] - expected[key]) for key in expected)
    return SuiteResult("running_example", err <= tol, err, tol,
                       {key: float(v) for key, v in got.items()})


def krein_resolvent_suite(seed: int = 42, instances: int = 100, tol: float = 1e-8,
                          points=SPECTRAL_POINTS) -> SuiteResult:
    """Correction formula against direct inversion of ``A_Y - z``."""
    rng = _rng(seed, 3)
    worst = 0.0
    failures = []
    for i in range(instances):
        dim = int(rng.integers(2, 7))
        d = int(rng.integers(1, min(3, dim) + 1))
        a, sp, y = rm.resolvent_instance(rng, dim, d)
        a_y = build_perturbation(a, sp, y)
        for z in points:
            direct = resolvent_direct(a_y, z)
            formula = krein_resolvent(a, sp, y, z)
            err = float(np.abs(formula - direct).max() / np.abs(direct).max())
            worst = max(worst, err)
            if not err <= tol:
                failures.append({"instance": i, "z": str(complex(z)), "rel_err": err})
    return SuiteResult("krein_resolvent", not failures, worst, tol,
                       {"instances": instances, "max_rel_err": worst, "failures": failures})


def uniqueness_grid(max_l: int = 3, backend=None) -> SuiteResult:
    """Three independent verdict routes on every valid ``(n, l)`` cell."""
    rows = []
    bad = 0
    for l in range(1, max_l + 1):
        for n in range(1, 4 * l):
            spec = CriterionSpec(n, l)
            rule = polyharmonic_classify(n, l)
            by_exponents = verdict_from_kinds(classify_exponents(spec, "I1"),
                                              classify_exponents(spec, "I2"))
            by_quadrature = verdict_from_kinds(
                improper_quadrature(integrand(spec, "I1"), backend=backend).kind,
                improper_quadrature(integrand(spec, "I2"), backend=backend).kind)
            by_gaps = delta_restriction_gaps(spec, backend).verdict
            ok = by_exponents == by_quadrature == by_gaps == rule
            bad += not ok
            rows.append({"n": n, "l": l, "expected": rule, "exponents": by_exponents,
                         "quadrature": by_quadrature, "gaps": by_gaps})
    return SuiteResult("uniqueness_grid", bad == 0, float(bad), 0.0, {"cells": rows})


def rank_one_3d(tol: float = 1e-6, backend=None) -> SuiteResult:
    rep = delta_restriction_gaps(CriterionSpec(3, 1), backend)
    err = abs(rep.G1_scalar - 0.5)
    i2_divergent = rep.I2.kind != IntegralVerdict.CONVERGENT
    ok = err <= tol and rep.G2_scalar == 0.0 and i2_divergent
    return SuiteResult("rank_one_3d", ok, err, tol,
                       {"G1": rep.G1_scalar, "G2": rep.G2_scalar, "I2": rep.I2.kind})


def point_spectra(tol: float = 1e-10) -> SuiteResult:
    worst = 0.0
    ok = True
    cases = []
    for alpha in (-2.0, -1.0, -0.1):
        p = PointPerturbation(3, alpha)
        got = negative_eigenvalue(p, rtol=tol)
        want = -16.0 * math.pi**2 * alpha**2
        err = abs(got - want) / abs(want)
        worst = max(worst, err)
        cases.append({"dim": 3, "alpha": alpha, "value": got})
    for alpha in (0.0, 0.5, 2.0):
        p = PointPerturbation(3, alpha)
        absent = negative_eigenvalue(p) is None and eigenvalue_bisection(p) is None
        ok &= absent
        cases.append({"dim": 3, "alpha": alpha, "value": None})
    for alpha in (-1.0, 0.0, 1.0):
        p = PointPerturbation(2, alpha)
        want = -4.0 * math.exp(2.0 * digamma(1.0) - 4.0 * math.pi * alpha)
        closed = eigenvalue_closed_form(p)
        bis = eigenvalue_bisection(p)
        err = max(abs(closed - want), abs(bis - want)) / abs(want)
        worst = max(worst, err)
        cases.append({"dim": 2, "alpha": alpha, "value": closed, "bisection": bis})
    ok &= worst <= tol
    return SuiteResult("point_spectra", ok, worst, tol, {"cases": cases})


def two_point(x0: float = 1.0, stability_tol: float = 1e-6, increment_tol: float = 0.02,
              backend=None) -> SuiteResult:
    rep = two_point_report(TwoPointSpec(x0), backend=backend)
    ints = rep.integrals
    target = 4.0 * math.pi * math.log(2.0)
    stable = [ints[k].convergent and ints[k].stability <= stability_tol
              for k in ("norm_sq", "pairing_inv")]
    pairing = ints["pairing"]
    inc_err = abs(pairing.increments[-1] - target) / target if not pairing.convergent else math.inf
    ok = all(stable) and inc_err <= increment_tol and rep.G1 > 0 and rep.G2 == 0.0
    return SuiteResult("two_point", ok, inc_err, increment_tol,
                       {"stability": [ints[k].stability for k in ("norm_sq", "pairing_inv")],
                        "last_increment": pairing.increments[-1], "G1": rep.G1,
                        "G2": rep.G2, "verdict": A_IS_MAXIMAL if rep.G2 == 0 < rep.G1 else None})


def block_inverse_suite(seed: int = 42, instances: int = 100, tol: float = 1e-9) -> SuiteResult:
    rng = _rng(seed, 8)
    worst = 0.0
    failures = []
    for i in range(instances):
        dim = int(rng.integers(2, 7))
        d = int(rng.integers(1, dim))
        sp = rm.split(rng, dim, d)
        l = rm.invertible(rng, dim, sp)
        res = block_inverse_residual(l, sp, tol)
        worst = max(worst, res.residual / (res.bound / tol))
        if not res.passed:
            failures.append(i)
    return SuiteResult("block_inverse", not failures, worst, tol, {"failures": failures})


def cayley_suite(seed: int = 42, instances: int = 200, tol: float = 1e-8) -> SuiteResult:
    """Round trips and eigenvalue mapping ``lambda -> lambda / (1 + lambda)``."""
    rng = _rng(seed, 9)
    worst = 0.0
    for _ in range(instances):
        dim = int(rng.integers(1, 7))
        a = rm.psd_operator(rng, dim)
        k = to_contraction(a).entries
        scale = max(1.0, float(np.abs(a).max()))
        back = to_operator(k).entries
        worst = max(worst, float(np.abs(back - a).max()) / scale)
        lam = np.linalg.eigvalsh(a)
        mu = np.linalg.eigvalsh(k)
        worst = max(worst, float(np.abs(mu - lam / (1.0 + lam)).max()))
        worst = max(worst, max(0.0, -float(mu.min()), float(mu.max()) - 1.0))
        k2 = rm.contraction(rng, dim, top=0.99)
        again = to_contraction(to_operator(k2)).entries
        worst = max(worst, float(np.abs(again - k2).max()))
    return SuiteResult("cayley", worst <= tol, worst, tol, {"instances": instances})


def k0_suite(value_tol: float = 1e-9, seam_tol: float = 1e-10, backend=None) -> SuiteResult:
    at_one = float(bessel_k0_series(1.0, backend)[0])
    err = abs(at_one - K0_AT_ONE)
    err = max(err, abs(bessel_k0(1.0, backend) - K0_AT_ONE))
    seam = abs(float(bessel_k0_series(2.0, backend)[0]) - float(bessel_k0_large(2.0, backend)[0]))
    ok = err <= value_tol and seam <= seam_tol
    return SuiteResult("k0", ok, max(err, seam), value_tol,
                       {"K0(1)": at_one, "seam": seam, "seam_tol": seam_tol})


SUITES = (
    ("interval_oracle", lambda seed, be: interval_oracle(seed)),
    ("running_example", lambda seed, be: running_example()),
    ("krein_resolvent", lambda seed, be: krein_resolvent_suite(seed)),
    ("uniqueness_grid", lambda seed, be: uniqueness_grid(backend=be)),
    ("rank_one_3d", lambda seed, be: rank_one_3d(backend=be)),
    ("point_spectra", lambda seed, be: point_spectra()),
    ("two_point", lambda seed, be: two_point(backend=be)),
    ("block_inverse", lambda seed, be: block_inverse_suite(seed)),
    ("cayley", lambda seed, be: cayley_suite(seed)),
    ("k0", lambda seed, be: k0_suite(backend=be)),
)


def run_all(seed: int = 42, backend=None) -> list[SuiteResult]:
    out = []
    for name, fn in SUITES:
        try:
            out.append(fn(seed, backend))
        except KreinGapError as exc:
            out.append(SuiteResult(name, False, math.inf, 0.0,
                                   {"error": f"{type(exc).__name__}: {exc}"}))
    return out
