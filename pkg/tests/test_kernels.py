import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy import special

from krein_gap import kernels
from krein_gap._backend import resolve


def test_resolve():
    assert resolve("NumPy") == "numpy"
    with pytest.raises(ValueError):
        resolve("cuda")


class TestAngularMean:
    @pytest.mark.parametrize("backend", ["numba", "numpy"])
    def test_against_bessel(self, backend):
        u = np.concatenate([[0.0], np.geomspace(1e-6, 5e3, 400)])
        assert_allclose(kernels.angular_mean(u, backend), 2 * (1 - special.j0(u)), atol=1e-13)

    def test_node_count_grows(self):
        assert kernels.angular_nodes(1e3) > kernels.angular_nodes(1.0)
        assert kernels.angular_nodes(5.0) % 4 == 0

    def test_chunking_is_invisible(self):
        u = np.linspace(0, 400, 3001)
        full = kernels.angular_mean_np(u)
        chunked = kernels.angular_mean_np(u, max_cells=5000)
        # chunks pick their own node counts, so agreement is at rounding level
        assert_allclose(full, chunked, rtol=0, atol=1e-13)

    @given(st.lists(st.floats(0, 1e3), min_size=1, max_size=50))
    def test_backends_agree(self, us):
        u = np.array(us)
        assert_allclose(kernels.angular_mean_nb(u), kernels.angular_mean_np(u), atol=1e-13)


class TestPanels:
    @pytest.mark.parametrize("code, params", [
        (kernels.MONO, (1.0, 2.0, 2.0, 2.0)),
        (kernels.MONO, (3.0, -0.5, 4.0, 1.0)),
        (kernels.TWO_POINT, (6.28, 1.0, 0.0, 2.0)),
        (kernels.TWO_POINT, (6.28, 1.0, 2.0, 1.0)),
    ])
    @pytest.mark.parametrize("mode", [0, 1])
    def test_backends_agree(self, code, params, mode):
        a = np.linspace(0.05, 0.95, 10)
        b = a + 0.05
        v_nb, e_nb = kernels.gk15_family_nb(code, np.array(params), mode, a, b)
        f = lambda x: kernels.family_values_np(code, params, mode, x)
        v_np, e_np = kernels.gk15_np(f, a, b)
        assert_allclose(v_nb, v_np, rtol=1e-13)
        assert_allclose(e_nb, e_np, rtol=1e-6, atol=1e-14 * np.abs(v_np).max())

    def test_gk15_is_exact_for_polynomials(self):
        v, e = kernels.gk15_np(lambda x: x**10, np.array([0.0]), np.array([1.0]))
        assert_allclose(v, [1 / 11], rtol=1e-14)

    def test_substituted_family(self):
        # mode 1 is k = 1/t with the Jacobian: f(1/t) / t^2
        params = (1.0, 1.5, 2.0, 2.0)
        t = np.array([0.1, 0.5, 0.9])
        direct = kernels.family_values_np(kernels.MONO, params, 0, 1 / t) / t**2
        assert_allclose(kernels.family_values_np(kernels.MONO, params, 1, t), direct, rtol=1e-13)


def test_env_flag_selects_numpy(tmp_path):
    import os
    import subprocess
    import sys

    code = ("from krein_gap import BACKEND; from krein_gap.criterion import *; "
            "print(BACKEND, delta_restriction_gaps(CriterionSpec(3, 1)).G1_scalar)")
    env = dict(os.environ, KREIN_GAP_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out[0] == "numpy" and abs(float(out[1]) - 0.5) < 1e-8


def test_benchmark_smoke(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    rows = bench.main(["--quick", "--repeat", "1"])
    assert len(rows) == 4 and all(t > 0 for _, t, _ in rows)
    assert "speed-up" in capsys.readouterr().out
