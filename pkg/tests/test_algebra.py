import json

import numpy as np
import pytest

from phantomkit.algebra import (
    AlgebraPresentation,
    algebra_from_json,
    algebra_to_json,
    catalog_algebra,
    load_algebra,
    opposite_algebra,
    validate_algebra,
)
from phantomkit.errors import BadField, BadParams, BadUnit, InputError, NonAssociative, UnknownKey
from phantomkit.modules import regular_module, representation_errors
from phantomkit.resolve import is_injective

from .conftest import CATALOG


@pytest.mark.parametrize("key,p", CATALOG)
def test_catalog_valid(key, p):
    a = catalog_algebra(key, p)
    assert validate_algebra(a)["associative"]
    for side in ("right", "left"):
        A = regular_module(a, side)
        assert A.dim == a.dim and not representation_errors(A)


def test_truncated_poly_table_by_hand(tp2):
    # basis {1, x}: 1*1 = 1, 1*x = x*1 = x, x*x = 0
    m = tp2.mult
    assert m[0, 0].tolist() == [1, 0]
    assert m[0, 1].tolist() == [0, 1] and m[1, 0].tolist() == [0, 1]
    assert m[1, 1].tolist() == [0, 0]
    assert tp2.declared_gorenstein == 0


def test_regular_action_of_x(tp2):
    A = regular_module(tp2)
    assert A.action[1].tolist() == [[0, 1], [0, 0]]


def test_field():
    a = catalog_algebra("field", 3)
    assert a.dim == 1 and a.p == 3
    assert regular_module(a).action.tolist() == [[[1]]]


def test_bad_unit():
    # e1*e1 = e2 with e2 declared the unit, every other product zero
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 1] = 1
    with pytest.raises(BadUnit):
        validate_algebra(AlgebraPresentation("bad", 2, mult, np.array([0, 1]), None))


def test_non_associative():
    # k x k with idempotents e0, e1, then one product corrupted
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[1, 1, 1] = 1
    good = AlgebraPresentation("kxk", 3, mult, np.array([1, 1]), None)
    validate_algebra(good)
    bad = mult.copy()
    bad[0, 0] = [0, 1]  # e0*e0 = e1: (e0 e0) e0 = 0 but e0 (e0 e0) = 0, (e0 e0) e1 = e1 != 0 = e0 (e0 e1)
    with pytest.raises(NonAssociative):
        validate_algebra(AlgebraPresentation("bad", 3, bad, np.array([1, 1]), None))


def test_opposite(tp2, t2):
    assert np.array_equal(opposite_algebra(tp2).mult, tp2.mult)
    op = opposite_algebra(t2)
    assert np.array_equal(op.mult, t2.mult.transpose(1, 0, 2))
    assert not np.array_equal(op.mult, t2.mult)
    assert np.array_equal(opposite_algebra(op).mult, t2.mult)
    assert op.op.key == t2.key


def test_group_c2_is_truncated_poly():
    g = catalog_algebra("group_C2", 2)
    # y = 1 + g satisfies y^2 = 0 in characteristic 2
    y = np.array([1, 1])
    assert not g.product(y, y).any()
    assert g.product(g.unit, y).tolist() == [1, 1]


@pytest.mark.parametrize("key,p", [("group_C2", 2), ("group_C3", 3), ("group_C3", 2), ("truncated_poly 3", 3)])
def test_self_injective_catalog(key, p):
    assert is_injective(regular_module(catalog_algebra(key, p)))


def test_triangular_not_self_injective(t2):
    assert not is_injective(regular_module(t2))


def test_nakayama_dims():
    assert catalog_algebra("nakayama 3,2", 2).dim == 5
    assert catalog_algebra("nakayama:3,3,2", 2).dim == 8
    assert catalog_algebra("nakayama", 2, {"kupisch": [2, 2]}).dim == 4


def test_catalog_errors():
    with pytest.raises(UnknownKey):
        catalog_algebra("quaternions", 2)
    with pytest.raises(BadParams):
        catalog_algebra("truncated_poly 0", 2)
    with pytest.raises(BadField):
        catalog_algebra("field", 6)
    assert issubclass(BadParams, InputError)


@pytest.mark.parametrize("key,p", CATALOG)
def test_json_roundtrip(key, p, tmp_path):
    a = catalog_algebra(key, p)
    path = tmp_path / "a.json"
    path.write_text(json.dumps(algebra_to_json(a)), encoding="utf-8")
    b = load_algebra(str(path))
    assert b.key == a.key and b.name == a.name
    assert algebra_from_json(algebra_to_json(a)).key == a.key


def test_json_missing_field():
    with pytest.raises(InputError):
        algebra_from_json({"name": "x", "p": 2})


def test_generators_generate():
    for key, p in CATALOG:
        a = catalog_algebra(key, p)
        gens = [a.unit] + [np.eye(a.dim, dtype=np.int64)[g] for g in a.generators]
        assert a._closure(gens).dim == a.dim
