"""The compiled kernels and the pure fallback must agree exactly."""
import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modvertex import _pykernels as pure
from modvertex import kernels

try:
    from modvertex import _core as compiled
except ImportError:  # extension not built in this environment
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


@needs_ext
def test_backend_is_compiled_when_available():
    assert kernels.BACKEND == "cython"


def test_pure_backend_can_be_forced():
    code = "import modvertex.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, MODVERTEX_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@needs_ext
@given(st.integers(-10 ** 6, 10 ** 6), st.integers(0, 500), st.sampled_from([2, 3, 5, 7, 31]))
def test_binom_backends_agree(b, a, p):
    assert compiled.binom_mod(b, a, p) == pure.binom_mod(b, a, p)


@needs_ext
def test_binom_huge_arguments_fall_back_exactly():
    assert compiled.binom_mod(10 ** 30, 10 ** 15, 7) == pure.binom_mod(10 ** 30, 10 ** 15, 7)


matrices = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n),
                                             min_size=0, max_size=8)))


@needs_ext
@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_row_reduction_backends_agree(mat, p):
    n, rows = mat
    assert compiled.rref_mod(rows, n, p) == pure.rref_mod(rows, n, p)
    assert compiled.nullspace_mod(rows, n, p) == pure.nullspace_mod(rows, n, p)
    assert compiled.rank_mod(rows, n, p) == pure.rank_mod(rows, n, p)


@given(matrices, st.sampled_from([2, 3, 5, 7]))
def test_nullspace_vectors_are_in_kernel(mat, p):
    n, rows = mat
    basis = kernels.nullspace_mod(rows, n, p)
    assert len(basis) == n - kernels.rank_mod(rows, n, p)
    for v in basis:
        assert all(sum(r[i] * v[i] for i in range(n)) % p == 0 for r in rows)


def _naive_series(a, b, max_delta):
    w = a.shape[1]
    off = (w - 1) // 2
    out = np.zeros((max_delta + 1, w), dtype=np.int64)
    for d1, j1 in zip(*np.nonzero(a)):
        for d2, j2 in zip(*np.nonzero(b)):
            j = j1 + j2 - off
            if d1 + d2 <= max_delta and 0 <= j < w:
                out[d1 + d2, j] += a[d1, j1] * b[d2, j2]
    return out


@pytest.mark.parametrize("seed", range(5))
def test_series_product_matches_naive(seed):
    rng = random.Random(seed)
    a = np.array([[rng.randint(-2, 2) for _ in range(11)] for _ in range(4)])
    b = np.array([[rng.randint(-2, 2) for _ in range(11)] for _ in range(5)])
    want = _naive_series(a, b, 5)
    assert (pure.series_mul2d(a, b, 5) == want).all()
    if compiled is not None:
        assert (compiled.series_mul2d(a, b, 5) == want).all()


@needs_ext
def test_reports_identical_across_backends(tmp_path):
    outs = []
    for pure_flag in ("1", ""):
        env = dict(os.environ, MODVERTEX_PURE=pure_flag)
        for suite, extra in (("character", ["--p", "3", "--depth", "4"]),
                             ("singular", ["--p", "2", "--depth", "2"])):
            target = tmp_path / f"{suite}{pure_flag or 0}.json"
            res = subprocess.run([sys.executable, "-m", "modvertex.cli", "--suite", suite, *extra,
                                  "--output", str(target)], env=env, capture_output=True,
                                 text=True)
            assert res.returncode == 0, res.stderr
            outs.append((suite, target.read_bytes()))
    assert outs[:2] == outs[2:]
