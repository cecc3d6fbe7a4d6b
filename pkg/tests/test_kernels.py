"""Both subset-lattice backends against a brute-force reference."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infoseg import _kernels, _subsetops_py

BACKENDS = [_subsetops_py]
try:
    from infoseg import _subsetops

    BACKENDS.append(_subsetops)
except ImportError:  # pragma: no cover - compiled extension not built
    pass


def brute_zeta(a: np.ndarray) -> np.ndarray:
    n = len(a)
    out = np.zeros_like(a)
    for x in range(n):
        for y in range(n):
            if y & x == y:
                out[x] += a[y]
    return out


@pytest.mark.parametrize("ops", BACKENDS, ids=lambda ops: ops.BACKEND)
class TestAgainstBruteForce:
    @pytest.mark.parametrize("m", [0, 1, 2, 3, 5, 8])
    def test_zeta_int(self, ops, m):
        rng = np.random.default_rng(m)
        a = rng.integers(-50, 50, size=2**m).astype(np.int64)
        got = a.copy()
        ops.zeta_in_place(got, m)
        assert np.array_equal(got, brute_zeta(a))

    @pytest.mark.parametrize("m", [1, 4, 7])
    def test_zeta_float(self, ops, m):
        rng = np.random.default_rng(100 + m)
        a = rng.standard_normal(2**m)
        got = a.copy()
        ops.zeta_in_place(got, m)
        assert np.allclose(got, brute_zeta(a), atol=1e-12)

    @pytest.mark.parametrize("m", [0, 1, 3, 6, 10])
    def test_mobius_inverts_zeta_exactly(self, ops, m):
        rng = np.random.default_rng(200 + m)
        a = rng.integers(0, 10**6, size=2**m).astype(np.int64)
        z = a.copy()
        ops.zeta_in_place(z, m)
        ops.mobius_in_place(z, m)
        assert np.array_equal(z, a)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
class TestBackendsAgree:
    @given(st.integers(0, 9), st.integers(0, 2**32 - 1))
    @settings(max_examples=60)
    def test_int_transforms_identical(self, m, seed):
        rng = np.random.default_rng(seed)
        a = rng.integers(-(10**9), 10**9, size=2**m).astype(np.int64)
        results = []
        for ops in BACKENDS:
            z = a.copy()
            ops.zeta_in_place(z, m)
            results.append(z)
        assert np.array_equal(results[0], results[1])

    def test_float_transforms_identical(self):
        # same pairwise additions in the same order => bitwise-equal floats
        rng = np.random.default_rng(7)
        a = rng.standard_normal(2**8)
        results = []
        for ops in BACKENDS:
            z = a.copy()
            ops.zeta_in_place(z, 8)
            results.append(z)
        assert np.array_equal(results[0], results[1])


def test_env_var_forces_numpy_backend():
    env = dict(os.environ, INFOSEG_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import infoseg; print(infoseg.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_active_backend_is_exported():
    assert _kernels.BACKEND in {"compiled", "numpy"}
