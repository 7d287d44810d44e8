import itertools
import json

import numpy as np
import pytest

from phantomkit.algebra import catalog_algebra
from phantomkit.exactla import rank
from phantomkit.errors import InvalidModule, InvalidMorphism, SideMismatch
from phantomkit.modules import (
    ModuleRep,
    cokernel_module,
    compose,
    direct_sum,
    dual_module,
    hom_space,
    identity,
    intertwines,
    is_isomorphic,
    is_reflexive,
    kernel_module,
    load_module,
    make_morphism,
    module_from_json,
    module_to_json,
    natural_eval_to_double_star,
    pushout,
    regular_module,
    representation_errors,
    star_module,
    tensor_over_A,
    zero_module,
    zero_morphism,
)
from phantomkit.pools import gen_random_module, gen_random_morphism, simple_modules
from phantomkit.resolve import is_projective

from .conftest import CATALOG, simple_k, top_projection


def brute_hom_dim(M, N):
    p = M.p
    n = M.dim * N.dim
    if n > 12:
        pytest.skip("too large to enumerate")
    count = 0
    for entries in itertools.product(range(p), repeat=n):
        if intertwines(M, N, np.array(entries, dtype=np.int64).reshape(M.dim, N.dim)):
            count += 1
    return round(np.log(count) / np.log(p))


def test_hom_examples(tp2):
    k, A = simple_k(tp2), regular_module(tp2)
    assert hom_space(k, k).dim == 1
    assert hom_space(k, A).dim == 1
    assert hom_space(A, zero_module(tp2)).dim == 0


@pytest.mark.parametrize("key,p", [("truncated_poly 2", 2), ("triangular_2", 2), ("group_C3", 2), ("nakayama 3,2", 2)])
def test_hom_matches_enumeration(key, p):
    a = catalog_algebra(key, p)
    rng = np.random.default_rng(5)
    for _ in range(6):
        M = gen_random_module(a, 3, rng)
        N = gen_random_module(a, 3, rng)
        if M.dim * N.dim > 12:
            continue
        H = hom_space(M, N)
        assert H.dim == brute_hom_dim(M, N)
        for f in H.basis:
            assert intertwines(M, N, f.matrix)


def test_kernel_cokernel_examples(tp2):
    A = regular_module(tp2)
    K, inc = kernel_module(identity(A))
    assert K.dim == 0
    C, q = cokernel_module(zero_morphism(zero_module(tp2), A))
    assert C.dim == A.dim and is_isomorphic(C, A)
    K, inc = kernel_module(top_projection(tp2))
    assert K.dim == 1 and is_isomorphic(K, simple_k(tp2))


def test_dual_examples(tp2):
    k = simple_k(tp2)
    assert dual_module(zero_module(tp2)).dim == 0
    Dk = dual_module(k)
    assert Dk.side == "left" and Dk.dim == 1
    assert is_isomorphic(dual_module(regular_module(tp2)), regular_module(tp2, "left"))


@pytest.mark.parametrize("key,p", CATALOG)
def test_double_dual_is_identity(key, p):
    a = catalog_algebra(key, p)
    rng = np.random.default_rng(11)
    for _ in range(5):
        M = gen_random_module(a, 4, rng)
        DD = dual_module(dual_module(M))
        assert DD.side == M.side and np.array_equal(DD.action, M.action)
        assert not representation_errors(dual_module(M))


def test_star_examples(tp2):
    A = regular_module(tp2)
    assert is_isomorphic(star_module(A), regular_module(tp2, "left"))
    assert star_module(simple_k(tp2)).dim == 1
    assert star_module(zero_module(tp2)).dim == 0


def test_evaluation_map(tp2, t2):
    for M in (regular_module(tp2), simple_k(tp2), regular_module(t2)):
        ev, _, _ = natural_eval_to_double_star(M)
        assert ev.is_injective() and ev.is_surjective()
    S = next(S for S in simple_modules(t2) if not is_projective(S).verdict)
    assert star_module(S).dim == 0
    assert not is_reflexive(S)


def test_tensor_examples(tp2):
    rng = np.random.default_rng(3)
    A = regular_module(tp2)
    for _ in range(5):
        Y = gen_random_module(tp2, 4, rng, side="left")
        assert tensor_over_A(A, Y).dim == Y.dim
    assert tensor_over_A(simple_k(tp2), simple_k(tp2, "left")).dim == 1
    assert tensor_over_A(A, zero_module(tp2, "left")).dim == 0
    with pytest.raises(SideMismatch):
        tensor_over_A(A, A)


def test_direct_sum_and_compose(t2):
    rng = np.random.default_rng(2)
    M, N = gen_random_module(t2, 3, rng), gen_random_module(t2, 3, rng)
    S, inj, proj = direct_sum(M, N)
    assert S.dim == M.dim + N.dim
    assert np.array_equal(compose(inj[0], proj[0]).matrix, np.eye(M.dim, dtype=np.int64))
    assert compose(inj[0], proj[1]).is_zero()
    assert not representation_errors(S)


def test_pushout_square(t2):
    rng = np.random.default_rng(4)
    for _ in range(10):
        K = gen_random_module(t2, 3, rng)
        A, B = gen_random_module(t2, 3, rng), gen_random_module(t2, 3, rng)
        alpha, beta = gen_random_morphism(K, A, rng), gen_random_morphism(K, B, rng)
        P, a2, b2, q = pushout(alpha, beta)
        lhs = compose(alpha, a2).matrix
        rhs = compose(beta, b2).matrix
        assert np.array_equal(lhs, rhs)
        # dim P = dim A + dim B - rank of [alpha, -beta]
        stacked = np.hstack([alpha.matrix, (-beta.matrix) % 2])
        assert P.dim == A.dim + B.dim - rank(stacked, 2)


def test_invalid_module_and_morphism(tp2):
    with pytest.raises(InvalidModule):
        module_from_json({"algebra": tp2.name, "side": "right", "dim": 1, "action": [[[1]], [[1]]]}, tp2)
    with pytest.raises(InvalidModule):
        module_from_json({"algebra": tp2.name, "side": "right", "dim": 2, "action": [[[1]]]}, tp2)
    k, A = simple_k(tp2), regular_module(tp2)
    with pytest.raises(InvalidMorphism):
        make_morphism(A, k, [[1], [1]])  # x must map to 0
    with pytest.raises(InvalidModule):
        ModuleRep(tp2, "up", np.zeros((2, 1, 1), np.int64))


def test_module_json_roundtrip(tmp_path):
    a = catalog_algebra("nakayama 3,2", 2)
    M = gen_random_module(a, 5, np.random.default_rng(9))
    path = tmp_path / "m.json"
    path.write_text(json.dumps(module_to_json(M)), encoding="utf-8")
    M2 = load_module(str(path), a)
    assert M2.key == M.key


def test_random_morphisms_intertwine():
    a = catalog_algebra("nakayama 3,2", 2)
    rng = np.random.default_rng(0)
    for _ in range(100):
        M, N = gen_random_module(a, 3, rng), gen_random_module(a, 3, rng)
        f = gen_random_morphism(M, N, rng)
        assert intertwines(M, N, f.matrix)
