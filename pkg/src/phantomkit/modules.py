"""Finitely generated modules as matrix representations, and their morphisms.

Conventions (fixed everywhere):

* vectors are rows; a module element ``v`` times basis element ``e_j`` is
  ``v @ M.action[j]``;
* a morphism ``phi: M -> N`` is a ``dim M x dim N`` matrix acting by
  ``v -> v @ phi``, so "first ``f`` then ``g``" is ``f.matrix @ g.matrix``;
* a left module over ``A`` is stored as a right module over ``A^op`` with
  ``side == "left"``; ``M.algebra`` is always the base algebra and
  ``M.acting`` the algebra that actually acts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import exactla as la
from .algebra import RIGHT, SIDES, AlgebraPresentation, flip_side
from .errors import InputError, InvalidModule, InvalidMorphism, ShapeMismatch, SideMismatch


@dataclass(frozen=True, eq=False)
class ModuleRep:
    algebra: AlgebraPresentation
    side: str
    action: np.ndarray  # (dim A, m, m)
    name: str = ""

    def __post_init__(self):
        if self.side not in SIDES:
            raise InvalidModule(f"side must be one of {SIDES}, got {self.side!r}")
        act = np.asarray(self.action, dtype=np.int64) % self.algebra.p
        d = self.algebra.dim
        if act.ndim != 3 or act.shape[0] != d or act.shape[1] != act.shape[2]:
            raise InvalidModule(f"action must have shape ({d}, m, m), got {act.shape}")
        act.flags.writeable = False
        object.__setattr__(self, "action", act)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def acting(self) -> AlgebraPresentation:
        return self.algebra if self.side == RIGHT else self.algebra.op

    @cached_property
    def key(self) -> tuple:
        return (self.algebra.key, self.side, self.dim, self.action.tobytes())

    def act(self, c) -> np.ndarray:
        """Matrix of ``v -> v * c`` for an element ``c`` of the acting algebra."""
        c = np.asarray(c, dtype=np.int64)
        if self.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.tensordot(c, self.action, axes=(0, 0)) % self.p

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<ModuleRep {label}{self.side} over {self.algebra.name}, dim {self.dim}>"


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    source: ModuleRep
    target: ModuleRep
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64).reshape(self.source.dim, self.target.dim)
        m = m % self.source.p
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def p(self) -> int:
        return self.source.p

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def __repr__(self):
        return f"<ModuleMorphism {self.source.dim} -> {self.target.dim}, rank {self.rank()}>"


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: ModuleRep
    target: ModuleRep
    flat: la.Subspace  # RREF basis of flattened (dim source x dim target) matrices

    @property
    def dim(self) -> int:
        return self.flat.dim

    @property
    def basis(self) -> list[ModuleMorphism]:
        m, n = self.source.dim, self.target.dim
        return [ModuleMorphism(self.source, self.target, row.reshape(m, n)) for row in self.flat.basis]

    def coordinates(self, matrix) -> np.ndarray | None:
        return self.flat.coordinates(np.asarray(matrix, dtype=np.int64).reshape(-1), self.source.p)

    def combine(self, coeffs) -> ModuleMorphism:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        flat = la.mat_mul(coeffs.reshape(1, -1), self.flat.basis, self.source.p)
        return ModuleMorphism(self.source, self.target, flat.reshape(self.source.dim, self.target.dim))


# ------------------------------------------------------------ validation


def representation_errors(M: ModuleRep) -> list[str]:
    p, B = M.p, M.acting
    errs = []
    eye = np.eye(M.dim, dtype=np.int64)
    if not np.array_equal(M.act(B.unit), eye):
        errs.append("unit does not act as the identity")
    prod = np.einsum("iab,jbc->ijac", M.action, M.action) % p
    expect = np.einsum("ijk,kac->ijac", B.mult, M.action) % p
    bad = np.argwhere(np.any(prod != expect, axis=(2, 3)))
    for i, j in bad[:3]:
        errs.append(f"action[{i}] @ action[{j}] != sum_k mult[{i}][{j}][k] action[k]")
    return errs


def validate_module(M: ModuleRep) -> ModuleRep:
    errs = representation_errors(M)
    if errs:
        raise InvalidModule("; ".join(errs))
    return M


def intertwines(M: ModuleRep, N: ModuleRep, matrix) -> bool:
    m = np.asarray(matrix, dtype=np.int64) % M.p
    for j in range(M.algebra.dim):
        if not np.array_equal(la.mat_mul(M.action[j], m, M.p), la.mat_mul(m, N.action[j], M.p)):
            return False
    return True


def _check_pair(M: ModuleRep, N: ModuleRep) -> None:
    if M.algebra != N.algebra or M.side != N.side:
        raise SideMismatch(f"{M!r} and {N!r} are not modules over the same algebra and side")


def make_morphism(source: ModuleRep, target: ModuleRep, matrix, check: bool = True) -> ModuleMorphism:
    _check_pair(source, target)
    m = np.asarray(matrix, dtype=np.int64)
    if m.size != source.dim * target.dim:
        raise ShapeMismatch(f"matrix of size {m.shape} cannot map dim {source.dim} -> {target.dim}")
    f = ModuleMorphism(source, target, m.reshape(source.dim, target.dim))
    if check and not intertwines(source, target, f.matrix):
        raise InvalidMorphism("matrix does not intertwine the two actions")
    return f


# ------------------------------------------------------------ constructors


def zero_module(algebra: AlgebraPresentation, side: str = RIGHT) -> ModuleRep:
    return ModuleRep(algebra, side, np.zeros((algebra.dim, 0, 0), dtype=np.int64), "0")


def regular_module(algebra: AlgebraPresentation, side: str = RIGHT) -> ModuleRep:
    """The acting algebra as a right module over itself."""
    acting = algebra if side == RIGHT else algebra.op
    return ModuleRep(algebra, side, acting.right_mult, "A" if side == RIGHT else "A^op")


def free_module(algebra: AlgebraPresentation, side: str, rank: int) -> ModuleRep:
    """``A^rank``; basis index ``a * dim A + k`` is ``e_k`` in slot ``a``."""
    reg = regular_module(algebra, side).action
    d = algebra.dim
    act = np.zeros((d, rank * d, rank * d), dtype=np.int64)
    for a in range(rank):
        act[:, a * d:(a + 1) * d, a * d:(a + 1) * d] = reg
    return ModuleRep(algebra, side, act, f"A^{rank}")


def identity(M: ModuleRep) -> ModuleMorphism:
    return ModuleMorphism(M, M, np.eye(M.dim, dtype=np.int64))


def zero_morphism(M: ModuleRep, N: ModuleRep) -> ModuleMorphism:
    return ModuleMorphism(M, N, np.zeros((M.dim, N.dim), dtype=np.int64))


def compose(f: ModuleMorphism, g: ModuleMorphism) -> ModuleMorphism:
    """``g o f`` (apply ``f`` first)."""
    if f.target.key != g.source.key:
        raise ShapeMismatch("compose: target of f is not the source of g")
    return ModuleMorphism(f.source, g.target, la.mat_mul(f.matrix, g.matrix, f.p))


def add(f: ModuleMorphism, g: ModuleMorphism, scale: int = 1) -> ModuleMorphism:
    return ModuleMorphism(f.source, f.target, (f.matrix + scale * g.matrix) % f.p)


def kernel_module(f: ModuleMorphism) -> tuple[ModuleRep, ModuleMorphism]:
    M, p = f.source, f.p
    ker = la.left_kernel(f.matrix, p)
    K = ker.basis
    piv = list(ker.pivots)
    d = M.algebra.dim
    act = np.zeros((d, K.shape[0], K.shape[0]), dtype=np.int64)
    for j in range(d):
        act[j] = la.mat_mul(K, M.action[j], p)[:, piv]
    Kmod = ModuleRep(M.algebra, M.side, act, "ker")
    return Kmod, ModuleMorphism(Kmod, M, K)


@dataclass(frozen=True, eq=False)
class _Quotient:
    projection: np.ndarray  # ambient -> quotient coordinates
    free: list[int]


def _quotient(rows: np.ndarray, n: int, p: int) -> _Quotient:
    sub = la.span(rows, p, n)
    piv = list(sub.pivots)
    free = [c for c in range(n) if c not in set(piv)]
    S = np.zeros((n, n), dtype=np.int64)
    for i, c in enumerate(piv):
        S[c] = sub.basis[i]
    proj = ((np.eye(n, dtype=np.int64) - S) % p)[:, free]
    return _Quotient(proj, free)


def quotient_module(N: ModuleRep, rows) -> tuple[ModuleRep, ModuleMorphism]:
    """``N / U`` for the submodule ``U`` spanned (over k) by ``rows``, which must be A-stable."""
    p = N.p
    rows = np.asarray(rows, dtype=np.int64)
    rows = rows.reshape(rows.size // N.dim if N.dim else 0, N.dim)
    q = _quotient(rows, N.dim, p)
    d = N.algebra.dim
    k = len(q.free)
    act = np.zeros((d, k, k), dtype=np.int64)
    for j in range(d):
        act[j] = la.mat_mul(N.action[j], q.projection, p)[q.free, :]
    C = ModuleRep(N.algebra, N.side, act, "coker")
    return C, ModuleMorphism(N, C, q.projection)


def cokernel_module(f: ModuleMorphism) -> tuple[ModuleRep, ModuleMorphism]:
    return quotient_module(f.target, f.matrix)


def induced_on_cokernel(proj: ModuleMorphism, g: ModuleMorphism) -> ModuleMorphism:
    """Given a cokernel projection ``N -> C`` and ``g: N -> Z`` vanishing on its
    kernel, return the induced ``C -> Z``."""
    p = proj.p
    img = la.left_kernel(proj.matrix, p)
    if la.mat_mul(img.basis, g.matrix, p).any():
        raise ValueError("map does not vanish on the kernel of the projection")
    free = [c for c in range(proj.source.dim) if c not in set(img.pivots)]
    return ModuleMorphism(proj.target, g.target, g.matrix[free, :])


def direct_sum(*mods: ModuleRep) -> tuple[ModuleRep, list[ModuleMorphism], list[ModuleMorphism]]:
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    for M in mods[1:]:
        _check_pair(mods[0], M)
    A, side = mods[0].algebra, mods[0].side
    n = sum(M.dim for M in mods)
    act = np.zeros((A.dim, n, n), dtype=np.int64)
    off = 0
    spans = []
    for M in mods:
        act[:, off:off + M.dim, off:off + M.dim] = M.action
        spans.append((off, M.dim))
        off += M.dim
    S = ModuleRep(A, side, act, "(+)".join(M.name or "M" for M in mods))
    inj, proj = [], []
    for M, (o, m) in zip(mods, spans):
        e = np.zeros((m, n), dtype=np.int64)
        e[:, o:o + m] = np.eye(m, dtype=np.int64)
        inj.append(ModuleMorphism(M, S, e))
        proj.append(ModuleMorphism(S, M, e.T.copy()))
    return S, inj, proj


def stack_maps(*fs: ModuleMorphism) -> ModuleMorphism:
    """``[f_1 ... f_r]``: the map ``M_1 + ... + M_r -> N`` (maps stacked by rows)."""
    S, _, _ = direct_sum(*(f.source for f in fs))
    return ModuleMorphism(S, fs[0].target, np.vstack([f.matrix for f in fs]))


def pair_maps(*fs: ModuleMorphism) -> ModuleMorphism:
    """``[f_1 ... f_r]^t``: the map ``M -> N_1 + ... + N_r``."""
    S, _, _ = direct_sum(*(f.target for f in fs))
    return ModuleMorphism(fs[0].source, S, np.hstack([f.matrix for f in fs]))


def pushout(alpha: ModuleMorphism, beta: ModuleMorphism):
    """Pushout of ``A <- S -> B``; returns ``(P, A -> P, B -> P, projection)``."""
    p = alpha.p
    _, inj, _ = direct_sum(alpha.target, beta.target)
    neg = ModuleMorphism(beta.source, beta.target, (-beta.matrix) % p)
    j = pair_maps(alpha, neg)
    P, q = cokernel_module(j)
    return P, compose(inj[0], q), compose(inj[1], q), q


# ------------------------------------------------------------ Hom


def _intertwining_rows(P: ModuleRep, Q: ModuleRep) -> np.ndarray:
    m, n, p = P.dim, Q.dim, P.p
    rows = []
    eye_m = np.eye(m, dtype=np.int64)
    eye_n = np.eye(n, dtype=np.int64)
    for j in P.acting.generators:
        rows.append((np.kron(P.action[j], eye_n) - np.kron(eye_m, Q.action[j].T)) % p)
    if not rows:
        return np.zeros((0, m * n), dtype=np.int64)
    return np.vstack(rows)


def hom_space(M: ModuleRep, N: ModuleRep) -> HomSpace:
    """All A-linear maps ``M -> N``, via the stacked intertwining system."""
    _check_pair(M, N)
    if M.dim == 0 or N.dim == 0:
        return HomSpace(M, N, la.span(np.zeros((0, M.dim * N.dim), np.int64), M.p, M.dim * N.dim))
    return HomSpace(M, N, la.kernel_basis(_intertwining_rows(M, N), M.p))


def find_hom(P: ModuleRep, Q: ModuleRep, left, right, target) -> np.ndarray | None:
    """Some A-linear ``X: P -> Q`` with ``left @ X @ right == target``, or None.

    ``left`` is ``a x dim P``, ``right`` is ``dim Q x b``, ``target`` is ``a x b``.
    """
    _check_pair(P, Q)
    p = P.p
    left = np.asarray(left, dtype=np.int64) % p
    right = np.asarray(right, dtype=np.int64) % p
    target = np.asarray(target, dtype=np.int64) % p
    m, n = P.dim, Q.dim
    if m * n == 0:
        return np.zeros((m, n), dtype=np.int64) if not target.any() else None
    eq = np.kron(left, right.T) % p
    coeff = np.vstack([_intertwining_rows(P, Q), eq])
    rhs = np.concatenate([np.zeros(coeff.shape[0] - eq.shape[0], dtype=np.int64), target.reshape(-1)])
    x = la.solve_linear(coeff, rhs, p)
    return None if x is None else x.reshape(m, n)


def is_isomorphic(M: ModuleRep, N: ModuleRep, tries: int = 64, seed: int = 0) -> bool:
    """Search Hom(M, N) for an invertible map (exact when one is found)."""
    if M.dim != N.dim or M.side != N.side:
        return False
    if M.dim == 0:
        return True
    H = hom_space(M, N)
    if H.dim == 0:
        return False
    rng = np.random.default_rng(seed)
    for b in H.basis:
        if b.rank() == M.dim:
            return True
    for _ in range(tries):
        f = H.combine(rng.integers(0, M.p, H.dim))
        if f.rank() == M.dim:
            return True
    return False


# ------------------------------------------------------------ dualities


def dual_module(M: ModuleRep) -> ModuleRep:
    """``D(M) = Hom_k(M, k)``; functionals are rows, the side flips."""
    return ModuleRep(M.algebra, flip_side(M.side), M.action.transpose(0, 2, 1).copy(), f"D({M.name})")


def dual_morphism(f: ModuleMorphism) -> ModuleMorphism:
    return ModuleMorphism(dual_module(f.target), dual_module(f.source), f.matrix.T.copy())


@dataclass(frozen=True, eq=False)
class StarModule:
    module: ModuleRep  # M* over the flipped side
    hom: HomSpace  # Hom(M, regular); its flat basis is the basis of M*


def star(M: ModuleRep) -> StarModule:
    """``M* = Hom_A(M, A)`` with the left A-structure from multiplication in A."""
    reg = regular_module(M.algebra, M.side)
    H = hom_space(M, reg)
    B, p, d = M.acting, M.p, M.algebra.dim
    s = H.dim
    act = np.zeros((d, s, s), dtype=np.int64)
    if s:
        basis = H.flat.basis.reshape(s, M.dim, d)
        for k in range(d):
            moved = np.einsum("smd,de->sme", basis, B.left_mult[k]) % p
            act[k] = H.flat.coordinates(moved.reshape(s, -1), p)
    Ms = ModuleRep(M.algebra, flip_side(M.side), act, f"{M.name}*")
    return StarModule(Ms, H)


def star_module(M: ModuleRep) -> ModuleRep:
    return star(M).module


def star_morphism(f: ModuleMorphism, sm: StarModule | None = None, sn: StarModule | None = None) -> ModuleMorphism:
    """``f*: N* -> M*``, ``psi -> psi o f``."""
    sm = sm or star(f.source)
    sn = sn or star(f.target)
    p, d = f.p, f.source.algebra.dim
    rows = []
    for psi in sn.hom.flat.basis:
        comp = la.mat_mul(f.matrix, psi.reshape(f.target.dim, d), p)
        rows.append(sm.hom.flat.coordinates(comp.reshape(-1), p))
    mat = np.array(rows, dtype=np.int64).reshape(sn.module.dim, sm.module.dim)
    return ModuleMorphism(sn.module, sm.module, mat)


def natural_eval_to_double_star(M: ModuleRep):
    """Evaluation ``M -> M**``, ``v -> (phi -> phi(v))``.

    Returns ``(ev, star_of_M, star_of_star)``.
    """
    s1 = star(M)
    s2 = star(s1.module)
    p, d = M.p, M.algebra.dim
    basis = s1.hom.flat.basis.reshape(s1.hom.dim, M.dim, d)
    rows = []
    for t in range(M.dim):
        val = basis[:, t, :]  # (dim M*, d): phi_s(e_t)
        coords = s2.hom.flat.coordinates(val.reshape(-1), p)
        if coords is None:
            raise AssertionError("evaluation is not a homomorphism; convention bug")
        rows.append(coords)
    mat = np.array(rows, dtype=np.int64).reshape(M.dim, s2.module.dim)
    return ModuleMorphism(M, s2.module, mat), s1, s2


def is_reflexive(M: ModuleRep) -> bool:
    ev, _, s2 = natural_eval_to_double_star(M)
    return M.dim == s2.module.dim and ev.rank() == M.dim


# ------------------------------------------------------------ tensor


@dataclass(frozen=True, eq=False)
class TensorProduct:
    dim: int
    relations: la.Subspace  # inside M (x)_k Y, basis index i * dim Y + l
    projection: np.ndarray  # (dim M * dim Y) x dim


def tensor_over_A(M: ModuleRep, Y: ModuleRep) -> TensorProduct:
    """``M (x)_A Y`` for ``M`` right and ``Y`` left over the same algebra."""
    if M.algebra != Y.algebra or M.side == Y.side:
        raise SideMismatch("tensor_over_A needs a right module and a left module over one algebra")
    p, m, n = M.p, M.dim, Y.dim
    amb = m * n
    rows = [np.zeros((0, amb), dtype=np.int64)]
    for j in M.acting.generators:
        rows.append((np.kron(M.action[j], np.eye(n, dtype=np.int64)) - np.kron(np.eye(m, dtype=np.int64), Y.action[j])) % p)
    rel = np.vstack(rows)
    q = _quotient(rel, amb, p)
    return TensorProduct(len(q.free), la.span(rel, p, amb), q.projection)


# ------------------------------------------------------------ JSON


def module_to_json(M: ModuleRep) -> dict:
    return {"algebra": M.algebra.name, "side": M.side, "dim": M.dim, "action": M.action.tolist()}


def module_from_json(obj: dict, algebra: AlgebraPresentation) -> ModuleRep:
    try:
        if obj.get("algebra") not in (algebra.name, None):
            raise InputError(f"module declares algebra {obj.get('algebra')!r}, loaded {algebra.name!r}")
        dim = int(obj["dim"])
        side = obj.get("side", RIGHT)
        action = np.array(obj["action"], dtype=np.int64)
        if dim == 0:
            action = np.zeros((algebra.dim, 0, 0), dtype=np.int64)
        M = ModuleRep(algebra, side, action.reshape(algebra.dim, dim, dim))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidModule(f"bad module JSON: {exc}") from exc
    return validate_module(M)


def load_module(path: str, algebra: AlgebraPresentation) -> ModuleRep:
    with open(path, encoding="utf-8") as fh:
        M = module_from_json(json.load(fh), algebra)
    return ModuleRep(M.algebra, M.side, M.action, name=path)


def morphism_from_json(obj: dict, source: ModuleRep, target: ModuleRep) -> ModuleMorphism:
    try:
        mat = np.array(obj["matrix"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMorphism(f"bad morphism JSON: {exc}") from exc
    if mat.size != source.dim * target.dim:
        raise InvalidMorphism(f"matrix has {mat.size} entries, expected {source.dim} x {target.dim}")
    return make_morphism(source, target, mat.reshape(source.dim, target.dim))
