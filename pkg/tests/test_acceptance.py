"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and when the module is run as a script.
"""

import math

import numpy as np
import pytest
from scipy import integrate, special

from krein_gap import verify
from krein_gap.criterion import A_IS_MAXIMAL, A_IS_MINIMAL, UNIQUE
from krein_gap.special import bessel_k0, bessel_k0_large, bessel_k0_series

SEED = 42
RESULTS = {}


def record(number, title, ok, detail):
    RESULTS[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}"
    assert ok, RESULTS[number]


def test_c01_interval_oracle():
    r = verify.interval_oracle(SEED, instances=200, samples=50, tol=1e-7)
    record(1, "interval vs direct completion test", r.passed,
           f"{int(r.metric)} disagreements in {r.detail['checked']} samples "
           f"({r.detail['admissible']} admissible)")


def test_c02_running_example():
    r = verify.running_example(tol=1e-10)
    # hand Schur complements: 1/2 - (1/4)^2 / (1/2) for both K and I - K
    hand = 0.5 - 0.25**2 / 0.5
    ok = r.passed and abs(r.detail["G1"] - hand) <= 1e-10 and abs(r.detail["G2"] - hand) <= 1e-10
    record(2, "2x2 example G1 = G2 = 3/8, [1/8, 7/8]", ok, f"max error {r.metric:.2e}")


def test_c03_krein_resolvent():
    r = verify.krein_resolvent_suite(SEED, instances=100, tol=1e-8,
                                     points=(-0.5, -2.5, 1 + 2j, -10.0))
    record(3, "resolvent formula vs direct inversion", r.passed,
           f"max relative error {r.metric:.2e} over 100 instances x 4 points")


def test_c04_uniqueness_grid():
    r = verify.uniqueness_grid(max_l=3)
    cells = r.detail["cells"]
    expected = {(c["n"], c["l"]): (UNIQUE if c["n"] == 2 * c["l"] else
                                   A_IS_MINIMAL if c["n"] < 2 * c["l"] else A_IS_MAXIMAL)
                for c in cells}
    ok = r.passed and len(cells) == 3 + 7 + 11 and all(
        c["exponents"] == c["quadrature"] == c["gaps"] == expected[(c["n"], c["l"])]
        for c in cells)
    laplace = {(c["n"], c["l"]): c["gaps"] for c in cells}
    ok = ok and laplace[(2, 1)] == UNIQUE and laplace[(3, 1)] == A_IS_MAXIMAL
    record(4, "uniqueness trichotomy on l = 1..3, n < 4l", ok,
           f"{len(cells) - int(r.metric)}/{len(cells)} cells agree on all three routes")


def test_c05_rank_one_3d():
    r = verify.rank_one_3d(tol=1e-6)
    norm = 4 * math.pi * integrate.quad(lambda k: k * k / (1 + k * k) ** 2, 0, np.inf)[0]
    pair = 4 * math.pi * integrate.quad(lambda k: 1 / (1 + k * k), 0, np.inf)[0]
    oracle = norm / pair
    ok = r.passed and abs(oracle - 0.5) < 1e-9 and abs(r.detail["G1"] - oracle) <= 1e-6
    record(5, "3D rank-one gaps", ok,
           f"G1 = {r.detail['G1']:.10f} (oracle {oracle:.10f}), G2 = {r.detail['G2']} "
           f"with I2 {r.detail['I2']}")


def test_c06_point_spectra():
    r = verify.point_spectra(tol=1e-10)
    worst = 0.0
    for case in r.detail["cases"]:
        if case["dim"] == 2:
            want = -4 * math.exp(2 * special.digamma(1.0) - 4 * math.pi * case["alpha"])
            worst = max(worst, abs(case["value"] - want) / abs(want),
                        abs(case["bisection"] - want) / abs(want))
        elif case["alpha"] < 0:
            want = -16 * math.pi**2 * case["alpha"] ** 2
            worst = max(worst, abs(case["value"] - want) / abs(want))
        else:
            worst = max(worst, 0.0 if case["value"] is None else math.inf)
    ok = r.passed and worst <= 1e-10
    record(6, "point spectra in dims 2 and 3", ok, f"max relative error {worst:.2e}")


def test_c07_two_point():
    r = verify.two_point(x0=1.0, stability_tol=1e-6, increment_tol=0.02)
    stab = max(r.detail["stability"])
    record(7, "two-point planar example", r.passed,
           f"stability {stab:.1e}, increment {r.detail['last_increment']:.5f} vs "
           f"4 pi ln 2 = {4 * math.pi * math.log(2):.5f}, G1 = {r.detail['G1']:.4f}, "
           f"G2 = {r.detail['G2']}")


def test_c08_block_inverse():
    r = verify.block_inverse_suite(SEED, instances=100, tol=1e-9)
    record(8, "blockwise inverse identity", r.passed,
           f"max relative residual {r.metric:.2e} over 100 instances")


def test_c09_cayley():
    r = verify.cayley_suite(SEED, instances=200, tol=1e-8)
    record(9, "fractional transform round trip and spectral map", r.passed,
           f"max error {r.metric:.2e} over 200 instances")


def test_c10_k0():
    r = verify.k0_suite(value_tol=1e-9, seam_tol=1e-10)
    x = np.linspace(1.5, 2.5, 201)
    seam = float(np.max(np.abs(bessel_k0_series(x) - bessel_k0_large(x)) / bessel_k0_large(x)))
    vs_scipy = abs(bessel_k0(1.0) - special.k0(1.0))
    ok = r.passed and seam <= 1e-10 and vs_scipy <= 1e-12
    record(10, "K0(1) and seam continuity", ok,
           f"|K0(1) - 0.4210244382| = {abs(r.detail['K0(1)'] - 0.4210244382):.1e}, "
           f"seam at 2 {r.detail['seam']:.1e}, seam on [1.5, 2.5] {seam:.1e}")


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
