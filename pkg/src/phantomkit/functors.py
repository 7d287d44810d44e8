"""Ext and Tor groups and the maps morphisms induce on them.

``Ext^i(M, X)`` is the cohomology of ``Hom(F_*, X)`` where ``F_*`` is a free
resolution of ``M``; since ``Hom(A^g, X) = X^g`` the cochains are tuples of
elements of ``X``. ``Tor_i(M, Y)`` is the homology of ``F_* (x) Y = Y^{g_*}``.
Group elements are represented by cochain (chain) vectors; ``reps`` holds a
basis of representatives modulo ``boundaries``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import exactla as la
from .errors import ShapeMismatch, SideMismatch
from .modules import ModuleMorphism, ModuleRep, _check_pair
from .resolve import ChainMap, FreeResolution, free_resolution, lift_to_chain_map

DEFAULT_MAX_DEGREE = 6


def _act_blocks(coeffs: np.ndarray, Z: ModuleRep, transpose_blocks: bool) -> np.ndarray:
    """Block matrix with block ``[a, b]`` (or ``[b, a]``) equal to ``Z.act(coeffs[a, b])``."""
    g, h, _ = coeffs.shape
    z = Z.dim
    if g == 0 or h == 0 or z == 0:
        shape = (h * z, g * z) if transpose_blocks else (g * z, h * z)
        return np.zeros(shape, dtype=np.int64)
    blocks = np.einsum("abk,kmn->abmn", coeffs, Z.action) % Z.p
    if transpose_blocks:
        return blocks.transpose(1, 2, 0, 3).reshape(h * z, g * z)
    return blocks.transpose(0, 2, 1, 3).reshape(g * z, h * z)


def ext_coboundary(res: FreeResolution, X: ModuleRep, i: int) -> np.ndarray:
    """``delta: X^{n_{i-1}} -> X^{n_i}`` (``i >= 1``)."""
    return _act_blocks(res.coeffs(i), X, transpose_blocks=True)


def tor_boundary(res: FreeResolution, Y: ModuleRep, i: int) -> np.ndarray:
    """``Y^{n_i} -> Y^{n_{i-1}}`` (``i >= 1``)."""
    return _act_blocks(res.coeffs(i), Y, transpose_blocks=False)


@dataclass(frozen=True, eq=False)
class _Homology:
    """Quotient ``cycles / boundaries`` inside a fixed ambient space."""

    p: int
    ambient: int
    cycles: la.Subspace
    boundaries: la.Subspace
    reps: np.ndarray  # (dim, ambient)

    @property
    def dim(self) -> int:
        return self.reps.shape[0]

    def class_of(self, v) -> np.ndarray:
        """Coordinates of the class of the cycle(s) ``v`` in the ``reps`` basis."""
        v = np.asarray(v, dtype=np.int64) % self.p
        single = v.ndim == 1
        vv = v.reshape(1, -1) if single else v
        if vv.shape[0] == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        if not self.cycles.contains(vv, self.p):
            raise ValueError("vector is not a cycle")
        basis = np.vstack([self.reps, self.boundaries.basis])
        x = la.solve_linear(basis.T, vv.T, self.p)
        out = x.T[:, : self.dim]
        return out[0] if single else out

    def is_zero_class(self, v) -> bool:
        return not np.asarray(self.class_of(v)).any()


def _homology(p: int, ambient: int, cycles: la.Subspace, boundaries: la.Subspace) -> _Homology:
    # complement the boundaries inside the cycles, picking cycle basis vectors
    reps = []
    sub = boundaries
    for v in cycles.basis:
        if not sub.contains(v, p):
            reps.append(v)
            sub = la.span(np.vstack([sub.basis, v]), p, ambient)
    arr = np.array(reps, dtype=np.int64).reshape(len(reps), ambient)
    return _Homology(p, ambient, cycles, boundaries, arr)


@dataclass(frozen=True, eq=False)
class ExtSpace:
    M: ModuleRep
    X: ModuleRep
    degree: int
    resolution: FreeResolution
    homology: _Homology

    @property
    def dim(self) -> int:
        return self.homology.dim

    @property
    def reps(self) -> np.ndarray:
        return self.homology.reps


@dataclass(frozen=True, eq=False)
class TorSpace:
    M: ModuleRep
    Y: ModuleRep
    degree: int
    resolution: FreeResolution
    homology: _Homology

    @property
    def dim(self) -> int:
        return self.homology.dim

    @property
    def reps(self) -> np.ndarray:
        return self.homology.reps


def _zero_space(n: int, p: int) -> la.Subspace:
    return la.span(np.zeros((0, n), np.int64), p, n)


def _check_degree(i: int, max_degree: int | None) -> None:
    if i < 0:
        raise ValueError("degree must be >= 0")
    if max_degree is not None and i > max_degree:
        raise ValueError(f"degree {i} exceeds the cap {max_degree}")


class _Memo:
    """Bounded, lock-protected memo; a hit equals a fresh computation."""

    def __init__(self, limit: int = 50000):
        self._data: dict = {}
        self._lock = threading.Lock()
        self._limit = limit

    def get(self, key, make):
        with self._lock:
            if key in self._data:
                return self._data[key]
        val = make()
        with self._lock:
            if len(self._data) >= self._limit:
                self._data.clear()
            self._data[key] = val
        return val

    def clear(self):
        with self._lock:
            self._data.clear()


_spaces = _Memo()
_lifts = _Memo(20000)


def clear_caches() -> None:
    _spaces.clear()
    _lifts.clear()


def ext_space(M: ModuleRep, X: ModuleRep, i: int, max_degree: int | None = DEFAULT_MAX_DEGREE, res=None) -> ExtSpace:
    _check_pair(M, X)
    _check_degree(i, max_degree)
    if res is None:
        return _spaces.get(("ext", M.key, X.key, i), lambda: _ext_space(M, X, i, free_resolution(M, i + 1)))
    return _ext_space(M, X, i, res)


def _ext_space(M: ModuleRep, X: ModuleRep, i: int, res: FreeResolution) -> ExtSpace:
    p, n = M.p, res.ranks[i] * X.dim
    E_next = ext_coboundary(res, X, i + 1)
    cyc = la.left_kernel(E_next, p) if E_next.shape[1] else la.span(np.eye(n, dtype=np.int64), p, n)
    if i == 0 or res.ranks[i - 1] * X.dim == 0:
        bd = _zero_space(n, p)
    else:
        bd = la.span(ext_coboundary(res, X, i), p, n)
    return ExtSpace(M, X, i, res, _homology(p, n, cyc, bd))


def tor_space(M: ModuleRep, Y: ModuleRep, i: int, max_degree: int | None = DEFAULT_MAX_DEGREE, res=None) -> TorSpace:
    if M.algebra != Y.algebra or M.side == Y.side:
        raise SideMismatch("Tor needs modules over one algebra on opposite sides")
    _check_degree(i, max_degree)
    if res is None:
        return _spaces.get(("tor", M.key, Y.key, i), lambda: _tor_space(M, Y, i, free_resolution(M, i + 1)))
    return _tor_space(M, Y, i, res)


def _tor_space(M: ModuleRep, Y: ModuleRep, i: int, res: FreeResolution) -> TorSpace:
    p, n = M.p, res.ranks[i] * Y.dim
    if i == 0 or res.ranks[i - 1] * Y.dim == 0:
        cyc = la.span(np.eye(n, dtype=np.int64), p, n) if n else _zero_space(0, p)
    else:
        cyc = la.left_kernel(tor_boundary(res, Y, i), p)
    T_next = tor_boundary(res, Y, i + 1)
    bd = la.span(T_next, p, n) if T_next.shape[0] else _zero_space(n, p)
    return TorSpace(M, Y, i, res, _homology(p, n, cyc, bd))


# ---------------------------------------------------------------- induced maps


@dataclass(frozen=True, eq=False)
class InducedMap:
    kind: str  # "ext_contra", "ext_cov", "tor"
    degree: int
    source: ExtSpace | TorSpace
    target: ExtSpace | TorSpace
    matrix: np.ndarray  # (dim source, dim target) on class coordinates

    @property
    def p(self) -> int:
        return self.source.homology.p

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def rank(self) -> int:
        return la.rank(self.matrix, self.p) if self.matrix.size else 0

    def is_monic(self) -> bool:
        return self.rank() == self.source.dim

    def is_epic(self) -> bool:
        return self.rank() == self.target.dim


def _induced(kind, i, src, tgt, chain_matrix) -> InducedMap:
    if src.dim == 0 or tgt.dim == 0:
        mat = np.zeros((src.dim, tgt.dim), dtype=np.int64)
    else:
        images = la.mat_mul(src.reps, chain_matrix, src.homology.p)
        mat = tgt.homology.class_of(images)
    return InducedMap(kind, i, src, tgt, mat)


def lift(f: ModuleMorphism, i: int, res_m: FreeResolution | None = None, res_n: FreeResolution | None = None) -> ChainMap:
    """Chain map over ``f`` through degree ``i`` (memoised for default resolutions)."""
    if res_m is None and res_n is None:
        key = (f.source.key, f.target.key, f.matrix.tobytes(), i)
        return _lifts.get(key, lambda: lift(f, i, free_resolution(f.source, i + 1), free_resolution(f.target, i + 1)))
    res_m = res_m or free_resolution(f.source, i + 1)
    res_n = res_n or free_resolution(f.target, i + 1)
    return lift_to_chain_map(f, res_m, res_n, i)


def ext_map_contra(
    f: ModuleMorphism, X: ModuleRep, i: int, max_degree: int | None = DEFAULT_MAX_DEGREE,
    res_m: FreeResolution | None = None, res_n: FreeResolution | None = None,
) -> InducedMap:
    """``Ext^i(f, X): Ext^i(N, X) -> Ext^i(M, X)`` for ``f: M -> N``."""
    _check_pair(f.source, X)
    src = ext_space(f.target, X, i, max_degree, res=res_n)
    tgt = ext_space(f.source, X, i, max_degree, res=res_m)
    if src.dim == 0 or tgt.dim == 0:
        return InducedMap("ext_contra", i, src, tgt, np.zeros((src.dim, tgt.dim), dtype=np.int64))
    phi = lift(f, i, res_m, res_n)
    mat = _act_blocks(phi.coeffs(i), X, transpose_blocks=True)
    return _induced("ext_contra", i, src, tgt, mat)


def ext_map_cov(
    X: ModuleRep, f: ModuleMorphism, i: int, max_degree: int | None = DEFAULT_MAX_DEGREE,
    res: FreeResolution | None = None,
) -> InducedMap:
    """``Ext^i(X, f): Ext^i(X, M) -> Ext^i(X, N)``."""
    _check_pair(X, f.source)
    src = ext_space(X, f.source, i, max_degree, res=res)
    tgt = ext_space(X, f.target, i, max_degree, res=res)
    g = src.resolution.ranks[i]
    mat = np.kron(np.eye(g, dtype=np.int64), f.matrix)
    return _induced("ext_cov", i, src, tgt, mat)


def tor_map(
    f: ModuleMorphism, Y: ModuleRep, i: int, max_degree: int | None = DEFAULT_MAX_DEGREE,
    res_m: FreeResolution | None = None, res_n: FreeResolution | None = None,
) -> InducedMap:
    """``Tor_i(f, Y): Tor_i(M, Y) -> Tor_i(N, Y)``."""
    if f.source.algebra != Y.algebra or f.source.side == Y.side:
        raise SideMismatch("Tor needs modules over one algebra on opposite sides")
    src = tor_space(f.source, Y, i, max_degree, res=res_m)
    tgt = tor_space(f.target, Y, i, max_degree, res=res_n)
    if src.dim == 0 or tgt.dim == 0:
        return InducedMap("tor", i, src, tgt, np.zeros((src.dim, tgt.dim), dtype=np.int64))
    phi = lift(f, i, res_m, res_n)
    mat = _act_blocks(phi.coeffs(i), Y, transpose_blocks=False)
    return _induced("tor", i, src, tgt, mat)


def ext_dim(M: ModuleRep, X: ModuleRep, i: int, max_degree: int | None = DEFAULT_MAX_DEGREE) -> int:
    return ext_space(M, X, i, max_degree).dim


def tor_dim(M: ModuleRep, Y: ModuleRep, i: int, max_degree: int | None = DEFAULT_MAX_DEGREE) -> int:
    return tor_space(M, Y, i, max_degree).dim


__all__ = [
    "DEFAULT_MAX_DEGREE",
    "ExtSpace",
    "TorSpace",
    "InducedMap",
    "ShapeMismatch",
    "ext_space",
    "tor_space",
    "ext_map_contra",
    "ext_map_cov",
    "tor_map",
    "ext_dim",
    "tor_dim",
    "ext_coboundary",
    "tor_boundary",
]
