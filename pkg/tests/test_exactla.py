import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phantomkit import exactla as la
from phantomkit.errors import BadField


def mats(p, max_rows=6, max_cols=6):
    return st.tuples(st.integers(0, max_rows), st.integers(0, max_cols)).flatmap(
        lambda rc: st.lists(st.integers(0, p - 1), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(rc)
        )
    )


def test_rref_identity():
    r, piv, k = la.rref(np.eye(2, dtype=np.int64), 5)
    assert np.array_equal(r, np.eye(2)) and piv == (0, 1) and k == 2


def test_rref_zero():
    r, piv, k = la.rref(np.zeros((3, 4), dtype=np.int64), 7)
    assert not r.any() and piv == () and k == 0


def test_rref_hand_example():
    r, piv, k = la.rref([[2, 4], [1, 2]], 5)
    assert r.tolist() == [[1, 2], [0, 0]] and k == 1 and piv == (0,)


def test_kernel_examples():
    assert la.kernel_basis(np.eye(3, dtype=np.int64), 5).dim == 0
    assert la.kernel_basis(np.zeros((3, 3), dtype=np.int64), 5).dim == 3
    ker = la.kernel_basis([[1, 2]], 5)
    assert ker.dim == 1 and ker.contains(np.array([3, 1]), 5)


def test_solve_examples():
    assert la.solve_linear(np.eye(3, dtype=np.int64), [1, 2, 0], 3).tolist() == [1, 2, 0]
    assert la.solve_linear([[1, 1]], [1], 2).tolist() == [1, 0]
    assert la.solve_linear([[0, 0]], [1], 2) is None


def test_quotient_dim_examples():
    assert la.quotient_dim(4, la.span(np.zeros((0, 4), np.int64), 2, 4)) == 4
    assert la.quotient_dim(4, la.span(np.eye(4, dtype=np.int64), 2)) == 0
    assert la.quotient_dim(4, la.span([[1, 1, 0, 0]], 2)) == 3


@pytest.mark.parametrize("p", [0, 1, 4, 46349])
def test_bad_field(p):
    with pytest.raises(BadField):
        la.FieldSpec(p)


def test_inverse_table():
    inv = la.inverse_table(7)
    assert all((x * inv[x]) % 7 == 1 for x in range(1, 7))


def test_kernel_matches_enumeration():
    # brute force over every vector of F_2^4 and F_3^3
    rng = np.random.default_rng(1)
    for p, n in ((2, 4), (3, 3)):
        for _ in range(25):
            m = rng.integers(0, p, (rng.integers(1, 4), n))
            ker = la.kernel_basis(m, p)
            brute = sum(1 for v in itertools.product(range(p), repeat=n) if not (m @ np.array(v) % p).any())
            assert p ** ker.dim == brute


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 46337]).flatmap(lambda p: st.tuples(st.just(p), mats(p))))
def test_rank_nullity_and_idempotence(pm):
    p, m = pm
    r, piv, k = la.rref(m, p)
    assert k + la.kernel_basis(m, p).dim == m.shape[1]
    r2, piv2, k2 = la.rref(r, p)
    assert np.array_equal(r, r2) and piv == piv2 and k == k2
    # row space is preserved
    if m.shape[0] and m.shape[1]:
        assert la.span(m, p) == la.span(r[:k], p, m.shape[1])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 7, 46337]).flatmap(lambda p: st.tuples(st.just(p), mats(p))))
def test_backends_agree(pm):
    p, m = pm
    start = la.backend()
    try:
        la.set_backend("numpy")
        a = la.rref(m, p)
        la.set_backend("numba")
        b = la.rref(m, p)
    finally:
        la.set_backend(start)
    assert np.array_equal(a[0], b[0]) and a[1:] == b[1:]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 5]).flatmap(lambda p: st.tuples(st.just(p), mats(p, 5, 5))), st.integers(0, 2**32 - 1))
def test_solve_consistent_systems(pm, seed):
    p, m = pm
    if m.shape[1] == 0:
        return
    x0 = np.random.default_rng(seed).integers(0, p, m.shape[1])
    b = m @ x0 % p
    x = la.solve_linear(m, b, p)
    assert x is not None and np.array_equal(m @ x % p, b)


def test_left_kernel():
    m = np.array([[1, 0], [1, 0], [0, 1]])
    lk = la.left_kernel(m, 2)
    assert lk.dim == 1 and not (lk.basis @ m % 2).any()


def test_env_flag_selects_numpy():
    code = "from phantomkit import exactla; print(exactla.backend())"
    env = {**os.environ, "PHANTOMKIT_NUMBA": "0"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
