"""Time the compiled kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N] [--quick]

Both backends are called through the same dispatch functions; the first
numba call (compilation) is excluded from the timings.
"""

import argparse
import math
import timeit

import numpy as np

from krein_gap import kernels
from krein_gap.quadrature import improper_integral, monomial
from krein_gap.special import bessel_k0


def cases(quick):
    n = 2_000 if quick else 200_000
    u = np.linspace(0.0, 2e3 if quick else 2e4, n // 10)
    x = np.geomspace(1e-3, 50.0, n)
    a = np.linspace(0.0, 1.0, n + 1)
    lo, hi = a[:-1], a[1:]
    params = (2 * math.pi, 1.0, 0.0, 2.0)

    def panels(backend):
        if backend == "numba":
            return kernels.gk15_family_nb(kernels.TWO_POINT, np.array(params), 0, lo, hi)
        return kernels.gk15_np(lambda t: kernels.family_values_np(kernels.TWO_POINT, params, 0, t),
                               lo, hi)

    return {
        f"angular mean ({u.size} points)": lambda be: kernels.angular_mean(u, be),
        f"K0 ({x.size} points)": lambda be: bessel_k0(x, be),
        f"GK15 two-point panels ({lo.size})": panels,
        "improper integral with probes": lambda be: improper_integral(
            monomial(1.0, 1.0, 2.0, 1.0), backend=be),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="small sizes, for smoke tests")
    args = ap.parse_args(argv)

    rows = []
    for name, fn in cases(args.quick).items():
        fn("numba")  # compile
        times = {be: min(timeit.repeat(lambda: fn(be), number=1, repeat=args.repeat))
                 for be in ("numba", "numpy")}
        rows.append((name, times["numba"], times["numpy"]))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba [ms]':>11}  {'numpy [ms]':>11}  {'speed-up':>8}")
    for name, t_nb, t_np in rows:
        print(f"{name:<{width}}  {1e3 * t_nb:11.3f}  {1e3 * t_np:11.3f}  {t_np / t_nb:8.2f}")
    return rows


if __name__ == "__main__":
    main()
