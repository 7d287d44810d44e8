import numpy as np
import pytest

from phantomkit.algebra import catalog_algebra
from phantomkit.modules import ModuleRep, make_morphism, regular_module

CATALOG = [
    ("field", 2),
    ("field", 3),
    ("truncated_poly 2", 2),
    ("truncated_poly 3", 3),
    ("group_C2", 2),
    ("group_C3", 2),
    ("group_C3", 3),
    ("triangular_2", 2),
    ("nakayama 3,2", 2),
    ("nakayama 2,2", 2),
    ("nakayama 3,3,2", 2),
]


@pytest.fixture(scope="session")
def tp2():
    return catalog_algebra("truncated_poly 2", 2)


@pytest.fixture(scope="session")
def t2():
    return catalog_algebra("triangular_2", 2)


def simple_k(a, side="right"):
    """The trivial module of F_p[x]/(x^m): the unit acts as 1, powers of x as 0."""
    act = np.zeros((a.dim, 1, 1), dtype=np.int64)
    act[0, 0, 0] = 1
    return ModuleRep(a, side, act, "k")


def socle_inclusion(a):
    """k -> A sending the generator to x^{m-1}."""
    k, A = simple_k(a), regular_module(a)
    row = np.zeros((1, a.dim), dtype=np.int64)
    row[0, a.dim - 1] = 1
    return make_morphism(k, A, row)


def top_projection(a):
    """A -> k sending 1 to the generator."""
    k, A = simple_k(a), regular_module(a)
    col = np.zeros((a.dim, 1), dtype=np.int64)
    col[0, 0] = 1
    return make_morphism(A, k, col)
