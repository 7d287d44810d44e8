"""Random instances and the test-module pools used for sampled cross-checks."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

import numpy as np

from . import exactla as la
from .algebra import AlgebraPresentation, flip_side
from .modules import (
    ModuleMorphism,
    ModuleRep,
    dual_module,
    free_module,
    hom_space,
    is_isomorphic,
    quotient_module,
    regular_module,
    star_module,
    zero_morphism,
)
from .resolve import _a_span, is_projective, syzygy

ENUMERATION_LIMIT = 4096


def _named(M: ModuleRep, name: str) -> ModuleRep:
    return ModuleRep(M.algebra, M.side, M.action, name)


def gen_random_module(a: AlgebraPresentation, max_dim: int, rng: np.random.Generator, side: str = "right") -> ModuleRep:
    """Quotient of ``A^g`` (``g`` in 1..2) by the submodule generated by random
    elements, with more elements added until the quotient has dim <= max_dim."""
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    p = a.p
    g = int(rng.integers(1, 3))
    F = free_module(a, side, g)
    gens = [rng.integers(0, p, F.dim) for _ in range(int(rng.integers(0, 3)))]
    while True:
        arr = np.array(gens, dtype=np.int64).reshape(len(gens), F.dim)
        sub = _a_span(F, arr)
        if F.dim - sub.dim <= max_dim:
            break
        gens.append(rng.integers(0, p, F.dim))
    Q, _ = quotient_module(F, sub.basis)
    return _named(Q, f"rand{Q.dim}")


def gen_random_morphism(M: ModuleRep, N: ModuleRep, rng: np.random.Generator) -> ModuleMorphism:
    """Uniform random element of ``Hom_A(M, N)``."""
    H = hom_space(M, N)
    if H.dim == 0:
        return zero_morphism(M, N)
    return H.combine(rng.integers(0, M.p, H.dim))


def gen_gp_module(a: AlgebraPresentation, rng: np.random.Generator, max_dim: int = 5, side: str = "right") -> ModuleRep:
    """``Omega^n`` of a random module over a certified ``n``-Gorenstein algebra."""
    from .deciders import certificate, gp_test

    cert = certificate(a)
    M = syzygy(gen_random_module(a, max_dim, rng, side), cert.n)
    if not gp_test(M, cert).verdict:
        raise AssertionError("syzygy beyond the Gorenstein dimension failed the GP test")
    return _named(M, f"gp{M.dim}")


# ---------------------------------------------------------------- simples


def _candidate_vectors(n: int, p: int, rng: np.random.Generator):
    if p ** n <= ENUMERATION_LIMIT:
        for v in itertools.product(range(p), repeat=n):
            if any(v):
                yield np.array(v, dtype=np.int64)
        return
    eye = np.eye(n, dtype=np.int64)
    yield from eye
    for _ in range(256):
        v = rng.integers(0, p, n)
        if v.any():
            yield v


def simple_modules(a: AlgebraPresentation, side: str = "right", seed: int = 0) -> list[ModuleRep]:
    """Simple modules found as minimal cyclic submodules of ``D(A)``.

    Every simple module embeds in the injective cogenerator, and a cyclic
    submodule of least dimension among those found is simple. Exhaustive for
    small ``p^dim``, a seeded search otherwise.
    """
    E = dual_module(regular_module(a, flip_side(side)))
    p = a.p
    rng = np.random.default_rng(seed)
    spans: dict[bytes, la.Subspace] = {}
    for v in _candidate_vectors(E.dim, p, rng):
        s = _a_span(E, v.reshape(1, -1))
        spans.setdefault(s.basis.tobytes(), s)
    subs = sorted(spans.values(), key=lambda s: (s.dim, s.basis.tobytes()))
    # a non-simple span properly contains a smaller simple one, met earlier
    minimal: list[la.Subspace] = []
    for s in subs:
        if not any(t.dim < s.dim and t.basis.shape[0] and s.contains(t.basis, p) for t in minimal):
            minimal.append(s)
    out: list[ModuleRep] = []
    for s in minimal:
        d = a.dim
        act = np.zeros((d, s.dim, s.dim), dtype=np.int64)
        for j in range(d):
            act[j] = s.coordinates(la.mat_mul(s.basis, E.action[j], p), p)
        S = ModuleRep(a, side, act, f"S{len(out)}")
        if not any(is_isomorphic(S, T) for T in out):
            out.append(S)
    return out


# ---------------------------------------------------------------- pools


@dataclass(frozen=True, eq=False)
class Pool:
    """Test modules for both sides; ``left`` is exactly ``D`` of ``right``."""

    algebra: AlgebraPresentation
    right: tuple[ModuleRep, ...]
    left: tuple[ModuleRep, ...]

    def side(self, side: str) -> tuple[ModuleRep, ...]:
        return self.right if side == "right" else self.left

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for M in self.right:
            h.update(repr((M.side, M.dim)).encode())
            h.update(M.action.tobytes())
        return h.hexdigest()[:16]

    def record(self) -> dict:
        return {
            "size": len(self.right),
            "dims": [M.dim for M in self.right],
            "names": [M.name for M in self.right],
            "fingerprint": self.fingerprint(),
        }


def _dedupe(mods) -> list[ModuleRep]:
    seen, out = set(), []
    for M in mods:
        if M.dim == 0 or M.key in seen:
            continue
        seen.add(M.key)
        out.append(M)
    return out


def standard_modules(a: AlgebraPresentation, side: str, max_syzygy: int = 3) -> list[ModuleRep]:
    """Regular module, simples, the injective cogenerator, their syzygies and the
    stars of the opposite side's regular module and simples."""
    base = [regular_module(a, side)] + simple_modules(a, side)
    base.append(_named(dual_module(regular_module(a, flip_side(side))), "D(A)"))
    out = list(base)
    for B in base:
        if is_projective(B).verdict:
            continue
        for k in range(1, max_syzygy + 1):
            out.append(_named(syzygy(B, k), f"Omega{k}({B.name})"))
    for B in [regular_module(a, flip_side(side))] + simple_modules(a, flip_side(side)):
        out.append(_named(star_module(B), f"{B.name}*"))
    return _dedupe(out)


def close_under_duality(right, left) -> tuple[list[ModuleRep], list[ModuleRep]]:
    r = _dedupe(list(right) + [_named(dual_module(Y), f"D({Y.name})") for Y in left])
    return r, [_named(dual_module(X), f"D({X.name})") for X in r]


def build_pool(a: AlgebraPresentation, seed: int, n_random: int = 16, max_dim: int = 5, max_syzygy: int = 3) -> Pool:
    """Standard modules plus ``n_random`` seeded random modules per side, closed under ``D``."""
    core = {}
    for side_idx, side in enumerate(("right", "left")):
        rng = np.random.default_rng([seed, 7919, side_idx])
        mods = standard_modules(a, side, max_syzygy)
        mods += [gen_random_module(a, max_dim, rng, side) for _ in range(n_random)]
        core[side] = _dedupe(mods)
    right, left = close_under_duality(core["right"], core["left"])
    return Pool(a, tuple(right), tuple(left))
