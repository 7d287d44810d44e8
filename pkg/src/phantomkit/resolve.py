"""Free covers, syzygies, truncated free resolutions and chain-map lifts.

Free modules ``A^g`` use the basis of :func:`phantomkit.modules.free_module`:
index ``a * dim A + k`` is ``e_k`` in slot ``a``. A homomorphism out of
``A^g`` is determined by the images of its ``g`` generators (the unit in each
slot); for a free target those images, reshaped to ``(g, g', dim A)``, are the
"matrix over A" of the map. Resolutions are not minimal; every invariant the
library exposes is insensitive to extra projective summands.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import exactla as la
from .errors import LiftFailed, NotReflexive
from .modules import (
    ModuleMorphism,
    ModuleRep,
    cokernel_module,
    dual_module,
    find_hom,
    free_module,
    kernel_module,
    natural_eval_to_double_star,
    star,
    star_morphism,
)


@dataclass(frozen=True, eq=False)
class FreeCover:
    module: ModuleRep
    generators: np.ndarray  # (rank, dim module)
    free: ModuleRep
    projection: ModuleMorphism

    @property
    def rank(self) -> int:
        return self.generators.shape[0]


def _a_span(M: ModuleRep, gens: np.ndarray) -> la.Subspace:
    if gens.shape[0] == 0:
        return la.span(np.zeros((0, M.dim), np.int64), M.p, M.dim)
    rows = np.einsum("gm,kmn->kgn", gens, M.action).reshape(-1, M.dim) % M.p
    return la.span(rows, M.p, M.dim)


def _generates(M: ModuleRep, gens: list[np.ndarray]) -> bool:
    if not gens:
        return M.dim == 0
    return _a_span(M, np.array(gens)).dim == M.dim


def free_map(images: np.ndarray, target: ModuleRep) -> np.ndarray:
    """Matrix of the map ``A^g -> target`` sending generator ``a`` to ``images[a]``."""
    g = images.shape[0]
    d = target.algebra.dim
    if g == 0 or target.dim == 0:
        return np.zeros((g * d, target.dim), dtype=np.int64)
    return (np.einsum("gm,kmn->gkn", images, target.action) % target.p).reshape(g * d, target.dim)


def choose_generators(M: ModuleRep, order: Sequence[int] | None = None) -> np.ndarray:
    """Greedy generating set.

    Scan basis vectors (in ``order``), keeping those outside the A-span of the
    ones kept so far; then drop generators the others already cover, and merge
    pairs whose sum generates as much as the pair does. The last two passes only
    shrink the cover; they keep resolutions of non-local algebras from growing
    a new projective summand per generator at every step.
    """
    p, m = M.p, M.dim
    order = list(range(m)) if order is None else list(order)
    kept: list[np.ndarray] = []
    sub = _a_span(M, np.zeros((0, m), np.int64))
    for t in order:
        if sub.dim == m:
            break
        e = np.zeros(m, dtype=np.int64)
        e[t] = 1
        if sub.contains(e, p):
            continue
        kept.append(e)
        sub = _a_span(M, np.array(kept))
    i = 0
    while i < len(kept):
        rest = kept[:i] + kept[i + 1:]
        if _generates(M, rest):
            kept = rest
        else:
            i += 1
    merged = True
    while merged and len(kept) > 1:
        merged = False
        for i in range(len(kept)):
            for j in range(i + 1, len(kept)):
                trial = kept[:i] + [(kept[i] + kept[j]) % p] + kept[i + 1:j] + kept[j + 1:]
                if _generates(M, trial):
                    kept = trial
                    merged = True
                    break
            if merged:
                break
    if not kept:
        return np.zeros((0, m), dtype=np.int64)
    return np.array(kept, dtype=np.int64)


def free_cover(M: ModuleRep, order: Sequence[int] | None = None) -> FreeCover:
    gens = choose_generators(M, order)
    F = free_module(M.algebra, M.side, gens.shape[0])
    proj = ModuleMorphism(F, M, free_map(gens, M))
    return FreeCover(M, gens, F, proj)


@dataclass(frozen=True, eq=False)
class FreeResolution:
    """``... -> F_1 -> F_0 -> M -> 0`` computed through ``F_length``.

    ``covers[i]`` covers ``syzygies[i]`` (``syzygies[0]`` is ``M``);
    ``inclusions[i]`` embeds ``syzygies[i]`` into ``F_{i-1}`` (index 0 unused);
    ``coeffs[i]`` (``i >= 1``) is the ``(n_i, n_{i-1}, dim A)`` matrix over A of
    ``d_i``. ``syzygies`` runs one past ``length``.
    """

    module: ModuleRep
    covers: tuple[FreeCover, ...]
    syzygies: tuple[ModuleRep, ...]
    inclusions: tuple[ModuleMorphism | None, ...]
    order: tuple[int, ...] | None = None

    @property
    def length(self) -> int:
        return len(self.covers) - 1

    @property
    def ranks(self) -> list[int]:
        return [c.rank for c in self.covers]

    def free(self, i: int) -> ModuleRep:
        return self.covers[i].free

    def differential(self, i: int) -> ModuleMorphism:
        """``d_i: F_i -> F_{i-1}`` for ``i >= 1``; ``d_0`` is the augmentation."""
        if i == 0:
            return self.covers[0].projection
        c = self.covers[i]
        inc = self.inclusions[i]
        return ModuleMorphism(c.free, inc.target, la.mat_mul(c.projection.matrix, inc.matrix, c.module.p))

    def coeffs(self, i: int) -> np.ndarray:
        c = self.covers[i]
        d = self.module.algebra.dim
        if i == 0:
            return c.generators
        imgs = la.mat_mul(c.generators, self.inclusions[i].matrix, self.module.p)
        return imgs.reshape(c.rank, self.covers[i - 1].rank, d)


def _extend(res: FreeResolution, length: int) -> FreeResolution:
    covers = list(res.covers)
    syz = list(res.syzygies)
    incs = list(res.inclusions)
    order = res.order
    while len(covers) <= length:
        i = len(covers)
        cov = free_cover(syz[i], order if i == 0 else None)
        covers.append(cov)
        K, inc = kernel_module(cov.projection)
        syz.append(K)
        incs.append(inc)
    return FreeResolution(res.module, tuple(covers), tuple(syz), tuple(incs), order)


_cache: dict[tuple, FreeResolution] = {}
_cache_lock = threading.Lock()


def free_resolution(M: ModuleRep, length: int, order: Sequence[int] | None = None) -> FreeResolution:
    """Free resolution through ``F_length`` (memoised; equal to a fresh computation).

    ``order`` permutes the basis scan used to choose generators of ``M`` itself.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    okey = None if order is None else tuple(int(t) for t in order)
    key = (M.key, okey)
    with _cache_lock:
        res = _cache.get(key)
    if res is not None and res.length >= length:
        return res
    if res is None:
        res = FreeResolution(M, (), (M,), (None,), okey)
    res = _extend(res, length)
    with _cache_lock:
        old = _cache.get(key)
        if old is None or old.length < res.length:
            _cache[key] = res
    return res


_audited: set = set()


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()
        _audited.clear()


def syzygy(M: ModuleRep, i: int) -> ModuleRep:
    if i == 0:
        return M
    return free_resolution(M, i - 1).syzygies[i]


def check_resolution(res: FreeResolution) -> list[str]:
    """Exactness and ``d o d = 0`` checks; returns a list of violations."""
    p = res.module.p
    errs = []
    eps = res.differential(0)
    if eps.rank() != res.module.dim:
        errs.append("augmentation not surjective")
    prev = eps
    for i in range(1, res.length + 1):
        d = res.differential(i)
        if la.mat_mul(d.matrix, prev.matrix, p).any():
            errs.append(f"d_{i-1} o d_{i} != 0")
        if prev.source.dim - prev.rank() != d.rank():
            errs.append(f"not exact at F_{i-1}")
        prev = d
    return errs


def audit_cache() -> list[str]:
    """Run :func:`check_resolution` on every cached resolution not yet audited."""
    with _cache_lock:
        todo = [(k, r) for k, r in _cache.items() if (k, r.length) not in _audited]
    errs = []
    for key, res in todo:
        errs += [f"{res.module.name}: {e}" for e in check_resolution(res)]
        with _cache_lock:
            _audited.add((key, res.length))
    return errs


# ---------------------------------------------------------------- chain maps


@dataclass(frozen=True, eq=False)
class ChainMap:
    base: ModuleMorphism
    source: FreeResolution
    target: FreeResolution
    stages: tuple[ModuleMorphism, ...]  # F_i(M) -> F_i(N)
    images: tuple[np.ndarray, ...]  # generator images, (n_i(M), dim F_i(N))

    def coeffs(self, i: int) -> np.ndarray:
        d = self.base.source.algebra.dim
        return self.images[i].reshape(self.source.ranks[i], self.target.ranks[i], d)


def _solve_rows(coeff_map: np.ndarray, targets: np.ndarray, p: int) -> np.ndarray:
    """Rows ``y`` with ``y @ coeff_map == targets`` (row by row)."""
    if targets.shape[0] == 0:
        return np.zeros((0, coeff_map.shape[0]), dtype=np.int64)
    sol = la.solve_linear(coeff_map.T, targets.T, p)
    if sol is None:
        raise LiftFailed("lifting equation has no solution")
    return sol.T.copy()


def lift_to_chain_map(f: ModuleMorphism, res_m: FreeResolution, res_n: FreeResolution, upto: int) -> ChainMap:
    """Lift ``f: M -> N`` to ``F_i(M) -> F_i(N)`` for ``i <= upto``."""
    if res_m.length < upto or res_n.length < upto:
        raise ValueError("resolutions are shorter than the requested lift")
    p = f.p
    stages, images = [], []
    tgt = la.mat_mul(res_m.covers[0].generators, f.matrix, p)
    for i in range(upto + 1):
        dn = res_n.differential(i).matrix
        if i > 0:
            src_gens = res_m.coeffs(i).reshape(res_m.ranks[i], res_m.free(i - 1).dim)
            tgt = la.mat_mul(src_gens, stages[-1].matrix, p)
        y = _solve_rows(dn, tgt, p)
        images.append(y)
        stages.append(ModuleMorphism(res_m.free(i), res_n.free(i), free_map(y, res_n.free(i))))
    return ChainMap(f, res_m, res_n, tuple(stages), tuple(images))


def check_chain_map(phi: ChainMap) -> bool:
    p = phi.base.p
    if not np.array_equal(
        la.mat_mul(phi.source.differential(0).matrix, phi.base.matrix, p),
        la.mat_mul(phi.stages[0].matrix, phi.target.differential(0).matrix, p),
    ):
        return False
    for i in range(1, len(phi.stages)):
        lhs = la.mat_mul(phi.source.differential(i).matrix, phi.stages[i - 1].matrix, p)
        rhs = la.mat_mul(phi.stages[i].matrix, phi.target.differential(i).matrix, p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def restrict_to_syzygy(phi: ChainMap, i: int) -> ModuleMorphism:
    """``Omega^i f`` from stage ``i-1`` of a chain map (``i >= 1``)."""
    p = phi.base.p
    inc_m = phi.source.inclusions[i]
    inc_n = phi.target.inclusions[i]
    vals = la.mat_mul(inc_m.matrix, phi.stages[i - 1].matrix, p)
    sub = la.Subspace(inc_n.target.dim, inc_n.matrix, la.span(inc_n.matrix, p, inc_n.target.dim).pivots)
    coords = sub.coordinates(vals, p) if vals.shape[0] else np.zeros((0, inc_n.source.dim), np.int64)
    if coords is None:
        raise LiftFailed("chain map does not carry syzygies into syzygies")
    return ModuleMorphism(inc_m.source, inc_n.source, coords)


def syzygy_morphism(f: ModuleMorphism, i: int, order_m=None, order_n=None) -> ModuleMorphism:
    if i == 0:
        return f
    rm = free_resolution(f.source, i - 1, order_m)
    rn = free_resolution(f.target, i - 1, order_n)
    return restrict_to_syzygy(lift_to_chain_map(f, rm, rn, i - 1), i)


# ---------------------------------------------------------------- projectivity


@dataclass(frozen=True, eq=False)
class ProjectivityCheck:
    verdict: bool
    witness: ModuleMorphism | None  # splitting s: M -> F with s then pi = id

    def __bool__(self):
        return self.verdict


def is_projective(M: ModuleRep) -> ProjectivityCheck:
    """True iff the free cover splits."""
    if M.dim == 0:
        return ProjectivityCheck(True, None)
    cov = free_cover(M)
    eye = np.eye(M.dim, dtype=np.int64)
    s = find_hom(M, cov.free, eye, cov.projection.matrix, eye)
    if s is None:
        return ProjectivityCheck(False, None)
    return ProjectivityCheck(True, ModuleMorphism(M, cov.free, s))


def is_injective(M: ModuleRep) -> bool:
    """Injective iff its k-dual is projective over the opposite side."""
    return is_projective(dual_module(M)).verdict


def injective_envelope_embed(M: ModuleRep) -> ModuleMorphism:
    """A monomorphism ``M -> E`` with ``E = D(free cover of D(M))`` injective."""
    cov = free_cover(dual_module(M))
    E = dual_module(cov.free)
    return ModuleMorphism(M, E, cov.projection.matrix.T.copy())


def cosyzygy(M: ModuleRep) -> tuple[ModuleRep, ModuleMorphism, ModuleMorphism]:
    """``(coker, M -> E, E -> coker)`` for the injective envelope embedding."""
    u = injective_envelope_embed(M)
    C, q = cokernel_module(u)
    return C, u, q


def gp_cosyzygy(K: ModuleRep) -> tuple[ModuleMorphism, ModuleRep, ModuleMorphism]:
    """Embed a reflexive ``K`` into a projective ``F*`` through ``K ~ K**``.

    Returns ``(K -> F*, cokernel, F* -> cokernel)``.
    """
    ev, s1, s2 = natural_eval_to_double_star(K)
    if s2.module.dim != K.dim or ev.rank() != K.dim:
        raise NotReflexive(f"{K!r} is not reflexive")
    cov = free_cover(s1.module)
    pi_star = star_morphism(cov.projection, sm=star(cov.free), sn=s2)
    u = ModuleMorphism(K, pi_star.target, la.mat_mul(ev.matrix, pi_star.matrix, K.p))
    L, q = cokernel_module(u)
    return u, L, q
