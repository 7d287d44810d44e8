"""Exact dense linear algebra over prime fields F_p.

Matrices are plain ``numpy.int64`` arrays whose entries are residues in
``[0, p)``. Every function returns fresh arrays and never mutates its inputs.

The row-reduction kernel has two implementations: a numba-compiled loop and a
vectorised numpy fallback. The compiled one is used when numba imports and the
environment variable ``PHANTOMKIT_NUMBA`` is not set to ``0``/``off``/``false``.
Both produce bit-identical results (first-nonzero pivoting).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import BadField
from . import _numpy_kernels

MAX_PRIME = 46337

__all__ = [
    "FieldSpec",
    "Subspace",
    "as_mat",
    "backend",
    "set_backend",
    "rref",
    "rank",
    "kernel_basis",
    "left_kernel",
    "solve_linear",
    "quotient_dim",
    "mat_mul",
    "span",
    "inverse_table",
]


def _numba_requested() -> bool:
    flag = os.environ.get("PHANTOMKIT_NUMBA", "1").strip().lower()
    return flag not in {"0", "off", "false", "no"}


def _load_numba():
    try:
        from . import _numba_kernels
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return None
    return _numba_kernels.rref_inplace


_KERNELS = {"numpy": _numpy_kernels.rref_inplace}
_active = "numpy"
if _numba_requested():
    _compiled = _load_numba()
    if _compiled is not None:
        _KERNELS["numba"] = _compiled
        _active = "numba"


def backend() -> str:
    """Name of the row-reduction kernel in use: ``"numba"`` or ``"numpy"``."""
    return _active


def set_backend(name: str) -> None:
    """Switch kernels at runtime (benchmarks and cross-backend tests)."""
    global _active
    if name == "numba" and "numba" not in _KERNELS:
        compiled = _load_numba()
        if compiled is None:
            raise RuntimeError("numba is not importable")
        _KERNELS["numba"] = compiled
    if name not in _KERNELS:
        raise ValueError(f"unknown backend {name!r}")
    _active = name


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise BadField(f"modulus {self.p!r} is not prime")
        if self.p > MAX_PRIME:
            raise BadField(f"modulus {self.p} exceeds {MAX_PRIME}")


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, p - 2, p)
    inv.flags.writeable = False
    return inv


def as_mat(x, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce ``x`` to a reduced int64 matrix (a copy)."""
    a = np.array(x, dtype=np.int64, copy=True)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim == 1 and shape is None:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % p


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return (a @ b) % p


def rref(m, p: int) -> tuple[np.ndarray, tuple[int, ...], int]:
    """Reduced row echelon form of ``m`` over F_p.

    Returns ``(R, pivot_columns, rank)``. ``R`` has the same shape as ``m``;
    rows past ``rank`` are zero.
    """
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    a %= p
    if a.size == 0:
        return a, (), 0
    r, piv = _KERNELS[_active](a, p, inverse_table(p))
    return a, tuple(int(c) for c in piv[:r]), int(r)


def rank(m, p: int) -> int:
    return rref(m, p)[2]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Row space held as an RREF basis. ``basis`` has shape (dim, ambient_dim)."""

    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coordinates(self, v: np.ndarray, p: int) -> np.ndarray | None:
        """Coefficients of ``v`` (1-d, or 2-d with one vector per row) in the basis.

        Returns None if some vector is outside the subspace.
        """
        v = np.asarray(v, dtype=np.int64) % p
        single = v.ndim == 1
        vv = v.reshape(1, -1) if single else v
        coords = vv[:, list(self.pivots)] if self.pivots else np.zeros((vv.shape[0], 0), np.int64)
        if not np.array_equal(mat_mul(coords, self.basis, p), vv):
            return None
        return coords[0] if single else coords

    def contains(self, v: np.ndarray, p: int) -> bool:
        return self.coordinates(v, p) is not None

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    __hash__ = None


def span(rows, p: int, ambient_dim: int | None = None) -> Subspace:
    """Subspace spanned by the rows of ``rows``."""
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, ambient_dim or 0), np.int64)
    n = a.shape[1] if ambient_dim is None else ambient_dim
    if a.shape[0] == 0:
        return Subspace(n, np.zeros((0, n), dtype=np.int64), ())
    r, piv, k = rref(a, p)
    return Subspace(n, r[:k].copy(), piv)


def kernel_basis(m, p: int) -> Subspace:
    """Basis of ``{v : m @ v = 0}`` (right null space), as an RREF subspace."""
    a = np.asarray(m, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return Subspace(cols, np.eye(cols, dtype=np.int64), tuple(range(cols)))
    r, piv, k = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    if not free:
        return Subspace(cols, np.zeros((0, cols), dtype=np.int64), ())
    vecs = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        vecs[t, f] = 1
        for i, c in enumerate(piv):
            vecs[t, c] = (-r[i, f]) % p
    return span(vecs, p, cols)


def left_kernel(m, p: int) -> Subspace:
    """Basis of ``{v : v @ m = 0}``."""
    return kernel_basis(np.asarray(m, dtype=np.int64).T, p)


def solve_linear(coeff, rhs, p: int) -> np.ndarray | None:
    """Solve ``coeff @ x = rhs`` over F_p.

    ``rhs`` may be a vector or a matrix (one right-hand side per column).
    Free variables are set to zero. Returns None if any system is inconsistent.
    """
    a = np.asarray(coeff, dtype=np.int64) % p
    b = np.asarray(rhs, dtype=np.int64) % p
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"coefficient rows {a.shape[0]} != rhs length {b.shape[0]}")
    n = a.shape[1]
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    if a.shape[0] == 0:
        return x[:, 0] if vector else x
    r, piv, k = rref(np.hstack([a, b]), p)
    if any(c >= n for c in piv):
        return None
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x[:, 0] if vector else x


def quotient_dim(ambient: int, relations: Subspace) -> int:
    if relations.ambient_dim != ambient:
        raise ValueError("relations live in a different ambient space")
    return ambient - relations.dim
