"""Seeded experiments that pit each decision procedure against direct computation.

Every suite draws random instances and evaluates two independent paths: the
decider (a finite factorization criterion) and the sampled side (induced maps
on Ext and Tor computed over a test-module pool). A trial passes when the two
agree and when the decider's own certificate survives re-checking: a
factorization must recompose, and a negative verdict must come with a test
module on which the claimed property visibly fails.
"""

from __future__ import annotations

import json
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import deciders as dc
from . import functors as fn
from .algebra import AlgebraPresentation, catalog_algebra
from .errors import ConfigError, PhantomKitError
from .modules import (
    ModuleMorphism,
    ModuleRep,
    dual_module,
    hom_space,
    identity,
    module_from_json,
    module_to_json,
    tensor_over_A,
)
from .pools import (
    Pool,
    _dedupe,
    _named,
    build_pool,
    gen_gp_module,
    gen_random_module,
    gen_random_morphism,
)
from .resolve import audit_cache, check_resolution, free_resolution, gp_cosyzygy, is_injective, is_projective, syzygy

__all__ = [
    "TrialConfig",
    "SuiteReport",
    "VerificationReport",
    "Instance",
    "SUITES",
    "THEOREM_SUITES",
    "verify",
    "run_suite",
    "replay",
    "gen_random_module",
    "gen_random_morphism",
    "gen_gp_module",
    "parse_algebra_spec",
]

GENERAL_ALGEBRAS = (
    "field@2",
    "truncated_poly 2@2",
    "truncated_poly 3@3",
    "group_C2@2",
    "triangular_2@2",
    "nakayama 3,2@2",
)
GP_ALGEBRAS = ("truncated_poly 2@2", "truncated_poly 3@3", "field@2", "group_C2@2", "triangular_2@2")
GORENSTEIN_ALGEBRAS = ("triangular_2@2", "nakayama 3,2@2")


def parse_algebra_spec(spec: str) -> AlgebraPresentation:
    """``"<catalog key>@<p>"``, e.g. ``"nakayama 3,2@2"``; ``p`` defaults to 2."""
    key, _, p = spec.rpartition("@")
    if not key:
        key, p = spec, "2"
    try:
        prime = int(p)
    except ValueError as exc:
        raise ConfigError(f"bad prime in algebra spec {spec!r}") from exc
    return catalog_algebra(key.strip(), prime)


# ---------------------------------------------------------------- config and reports


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 42
    trials: int = 100  # per algebra
    algebras: tuple[str, ...] | None = None  # None: the suite's defaults
    max_dim: int = 4
    pool_size: int = 16  # seeded random modules per side
    degrees: tuple[int, ...] = (1, 2)
    theorems: tuple[str, ...] = ("thm11",)
    threads: int | None = None  # None: PHANTOMKIT_THREADS or 1

    def __post_init__(self):
        if self.trials < 0 or self.max_dim < 1 or self.pool_size < 0:
            raise ConfigError("trials, max_dim and pool_size must be non-negative (max_dim >= 1)")
        if not self.degrees or min(self.degrees) < 1:
            raise ConfigError("degrees must be positive")
        unknown = [t for t in self.theorems if t not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")

    def to_json(self) -> dict:
        return {
            "seed": int(self.seed),
            "trials": self.trials,
            "algebras": list(self.algebras) if self.algebras is not None else None,
            "max_dim": self.max_dim,
            "pool_size": self.pool_size,
            "degrees": list(self.degrees),
            "theorems": list(self.theorems),
        }

    def worker_count(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        try:
            return max(1, int(os.environ.get("PHANTOMKIT_THREADS", "1")))
        except ValueError:
            return 1


@dataclass
class SuiteReport:
    theorem: str
    trials: int = 0
    passes: int = 0
    failures: list = field(default_factory=list)
    per_algebra: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "theorem": self.theorem,
            "passed": self.passed,
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures,
            "per_algebra": self.per_algebra,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


@dataclass
class VerificationReport:
    config: TrialConfig
    suites: list[SuiteReport]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def suite(self, theorem: str) -> SuiteReport:
        for s in self.suites:
            if s.theorem == theorem:
                return s
        raise KeyError(theorem)

    def to_json(self, timing: bool = False) -> dict:
        return {
            "config": self.config.to_json(),
            "passed": self.passed,
            "suites": [s.to_json(timing) for s in self.suites],
        }

    def dumps(self, timing: bool = False) -> str:
        """Deterministic serialization; wall times are left out unless asked for."""
        return json.dumps(self.to_json(timing), sort_keys=True, indent=1)


# ---------------------------------------------------------------- instances


@dataclass(frozen=True, eq=False)
class Instance:
    f: ModuleMorphism
    X: ModuleRep | None = None
    order_m: tuple[int, ...] | None = None
    order_n: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = {
            "M": module_to_json(self.f.source),
            "N": module_to_json(self.f.target),
            "f": self.f.matrix.tolist(),
        }
        if self.X is not None:
            out["X"] = module_to_json(self.X)
        if self.order_m is not None:
            out["order_m"] = list(self.order_m)
            out["order_n"] = list(self.order_n)
        return out

    @classmethod
    def from_json(cls, obj: dict, a: AlgebraPresentation) -> "Instance":
        M = module_from_json(obj["M"], a)
        N = module_from_json(obj["N"], a)
        f = ModuleMorphism(M, N, np.array(obj["f"], dtype=np.int64).reshape(M.dim, N.dim))
        X = module_from_json(obj["X"], a) if "X" in obj else None
        om = tuple(obj["order_m"]) if "order_m" in obj else None
        on = tuple(obj["order_n"]) if "order_n" in obj else None
        return cls(f, X, om, on)


@dataclass(frozen=True, eq=False)
class _Ctx:
    suite: str
    spec: str
    algebra: AlgebraPresentation
    pool: Pool
    cert: dc.GorensteinCertificate | None
    config: TrialConfig

    @property
    def gp(self) -> bool:
        return SUITES[self.suite].gp


def _draw_pair(ctx: _Ctx, rng: np.random.Generator, make) -> Instance:
    M = make()
    kind = int(rng.integers(0, 8))
    if kind == 0:
        return Instance(identity(M))
    N = M if kind <= 2 else make()
    return Instance(gen_random_morphism(M, N, rng))


def _gen_general(ctx: _Ctx, rng: np.random.Generator) -> Instance:
    small = [X for X in ctx.pool.right if X.dim <= ctx.config.max_dim + 2]

    def make():
        # a quarter of the draws reuse pool members (simples, syzygies, ...)
        if small and rng.integers(0, 4) == 0:
            return small[int(rng.integers(0, len(small)))]
        return gen_random_module(ctx.algebra, ctx.config.max_dim, rng)

    return _draw_pair(ctx, rng, make)


def _gen_gp(ctx: _Ctx, rng: np.random.Generator) -> Instance:
    return _draw_pair(ctx, rng, lambda: gen_gp_module(ctx.algebra, rng, ctx.config.max_dim))


def _gen_triple(ctx: _Ctx, rng: np.random.Generator) -> Instance:
    inst = _gen_general(ctx, rng)
    if rng.integers(0, 2):
        X = gen_random_module(ctx.algebra, ctx.config.max_dim, rng)
    else:
        X = ctx.pool.right[int(rng.integers(0, len(ctx.pool.right)))]
    return Instance(inst.f, X)


def _gen_permuted(ctx: _Ctx, rng: np.random.Generator) -> Instance:
    inst = _gen_triple(ctx, rng)
    f = inst.f
    om = tuple(int(t) for t in rng.permutation(f.source.dim))
    on = tuple(int(t) for t in rng.permutation(f.target.dim))
    return Instance(f, inst.X, om, on)


# ---------------------------------------------------------------- the sampled side


def _induced(functor: str, f: ModuleMorphism, Z: ModuleRep, i: int) -> fn.InducedMap:
    if functor == "ext_contra":
        return fn.ext_map_contra(f, Z, i, max_degree=None)
    if functor == "ext_cov":
        return fn.ext_map_cov(Z, f, i, max_degree=None)
    return fn.tor_map(f, Z, i, max_degree=None)


def _property(m: fn.InducedMap, pred: str) -> bool:
    if pred == "zero":
        return m.is_zero()
    if pred == "monic":
        return m.is_monic()
    return m.is_epic()


@dataclass(frozen=True)
class _Sampled:
    verdict: bool
    counterexample: str | None  # name of the first failing test module

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "counterexample": self.counterexample}


def _sample(f: ModuleMorphism, functor: str, pred: str, i: int, mods) -> _Sampled:
    for Z in mods:
        if not _property(_induced(functor, f, Z, i), pred):
            return _Sampled(False, Z.name)
    return _Sampled(True, None)


def _derived_modules(ctx: _Ctx, base: list[ModuleRep], depth: int) -> tuple[list[ModuleRep], list[ModuleRep]]:
    """Instance-derived test modules: each base module ``B`` with ``Omega^k B`` and
    ``D Omega^k D B`` (k <= depth), closed under ``D``; GP suites keep the GP ones."""
    out = []
    for B in base:
        out.append(B)
        DB = dual_module(B)
        for k in range(1, depth + 1):
            out.append(_named(syzygy(B, k), f"Omega{k}({B.name})"))
            out.append(_named(dual_module(syzygy(DB, k)), f"D Omega{k} D({B.name})"))
    out = _dedupe(out)
    if ctx.gp:
        out = [X for X in out if dc.gp_test(X, ctx.cert).verdict]
    right = _dedupe(list(ctx.pool.right) + out)
    left = [_named(dual_module(X), f"D({X.name})") for X in right]
    return right, left


def _gp_pool(ctx: _Ctx) -> tuple[list[ModuleRep], list[ModuleRep]]:
    right = [X for X in ctx.pool.right if dc.gp_test(X, ctx.cert).verdict]
    return right, [_named(dual_module(X), f"D({X.name})") for X in right]


def _pools(ctx: _Ctx, f: ModuleMorphism, extra: list[ModuleRep], depth: int):
    base = [f.source, f.target] + [X for X in extra if X.dim]
    if ctx.gp:
        saved = ctx.pool
        right, _ = _gp_pool(ctx)
        ctx2 = _Ctx(ctx.suite, ctx.spec, ctx.algebra, Pool(saved.algebra, tuple(right), ()), ctx.cert, ctx.config)
        return _derived_modules(ctx2, base, depth)
    return _derived_modules(ctx, base, depth)


# ---------------------------------------------------------------- certificate re-checks


def _certificate_problems(report: dc.DecisionReport) -> list[str]:
    """Re-check a decider's own evidence, independently of its verdict logic."""
    w = report.witness
    if report.verdict:
        if isinstance(w, dc.Factorization):
            probs = []
            if w.of is None or not w.recomposes_to(w.of):
                probs.append("factorization does not recompose")
            mid = w.first.target
            ok = is_projective(mid).verdict if w.through == "projective" else is_injective(mid)
            if not ok:
                probs.append(f"middle module is not {w.through}")
            return probs
        return []
    return ["negative verdict without a witness"] if not report.witnesses() else []


def _witness_problems(report: dc.DecisionReport, f: ModuleMorphism) -> list[str]:
    probs = _certificate_problems(report)
    if not report.verdict:
        for t in report.witnesses():
            if _property(_induced(t.functor, f, t.module, t.degree), t.predicate):
                probs.append(f"witness does not reproduce: {t.describe()}")
    return probs


def _violation(claim: str, degree: int, decider, sampled: dict, problems: list[str] | None = None) -> dict:
    return {
        "claim": claim,
        "degree": degree,
        "decider": decider,
        "sampled": sampled,
        "problems": problems or [],
    }


def _agree(claim: str, i: int, report: dc.DecisionReport, f: ModuleMorphism, sampled: dict[str, _Sampled]) -> list[dict]:
    """Decider verdict must equal every sampled verdict, and its certificate must check out."""
    probs = _witness_problems(report, f)
    if probs or any(s.verdict != report.verdict for s in sampled.values()):
        return [_violation(claim, i, report.verdict, {k: s.to_json() for k, s in sampled.items()}, probs)]
    return []


# ---------------------------------------------------------------- suite checks
# Each check returns (violations, notes). Notes feed suite-level requirements.


def _check_thm11(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
    f = inst.f
    out = []
    for i in degrees:
        R, L = _pools(ctx, f, [], i)
        sampled = {
            "ext_contra_zero": _sample(f, "ext_contra", "zero", i, R),
            "tor_zero": _sample(f, "tor", "zero", i, L),
        }
        out += _agree("ext_contra_zero", i, dc.decide_ext_contra_vanishing(f, i), f, sampled)
        out += _agree("tor_zero", i, dc.decide_tor_vanishing(f, i), f, sampled)
    return out, {}


def _check_epic(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
    f = inst.f
    out = []
    notes = {"tor_epic": 0}
    for i in degrees:
        R, L = _pools(ctx, f, [], i)
        sampled = {
            "ext_contra_epic": _sample(f, "ext_contra", "epic", i, R),
            "tor_monic": _sample(f, "tor", "monic", i, L),
        }
        out += _agree("ext_contra_epic", i, dc.decide_epic_contra(f, i), f, sampled)
        tor_epic = _sample(f, "tor", "epic", i, L)
        ext_monic = _sample(f, "ext_contra", "monic", i, R)
        if tor_epic.verdict:
            notes["tor_epic"] += 1
            if not ext_monic.verdict:
                out.append(_violation(
                    "tor_epic_implies_ext_monic", i, None,
                    {"tor_epic": tor_epic.to_json(), "ext_contra_monic": ext_monic.to_json()},
                ))
    return out, notes


def _check_prop_prop(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
    f = inst.f
    R, _ = _pools(ctx, f, [], 1)
    sampled = {
        "ext_contra_zero": _sample(f, "ext_contra", "zero", 1, R),
        "ext_cov_zero": _sample(f, "ext_cov", "zero", 1, R),
    }
    r = dc.decide_gp_ext_pair(f)
    out = _agree("gp_ext_pair", 1, r, f, sampled)
    if dc.is_self_injective(ctx.algebra):
        s = dc.factors_through_injective(f)
        probs = _certificate_problems(s) if s.verdict else []
        if s.verdict != r.verdict or probs:
            out.append(_violation("projective_iff_injective", 1, {"projective": r.verdict, "injective": s.verdict}, {}, probs))
    return out, {}


def _gp_extra(f: ModuleMorphism) -> list[ModuleRep]:
    extra = []
    for M in (f.source, f.target):
        try:
            _, L, _ = gp_cosyzygy(M)
            extra.append(_named(L, f"L({M.name})"))
        except PhantomKitError:
            pass
    return extra


_TRIO = {
    "vanish": (("ext_cov", "zero"), ("ext_contra", "zero"), ("tor", "zero")),
    "epic": (("ext_cov", "epic"), ("ext_contra", "monic"), ("tor", "epic")),
    "monic": (("ext_cov", "monic"), ("ext_contra", "epic"), ("tor", "monic")),
}


def _trio_sampled(f: ModuleMorphism, direction: str, i: int, R, L) -> dict[str, _Sampled]:
    out = {}
    for functor, pred in _TRIO[direction]:
        out[f"{functor}_{pred}"] = _sample(f, functor, pred, i, L if functor == "tor" else R)
    return out


def _construction_modules(f: ModuleMorphism) -> list[ModuleRep]:
    mods = []
    try:
        cc = dc.cokernel_construction(f)
        mods += [cc.C, cc.h.source]
    except PhantomKitError:
        pass
    kc = dc.kernel_construction(f)
    mods += [kc.K, kc.h.target]
    return mods


def _equivalence(claim: str, i: int, eq: dc.DecisionReport, parts: list[dc.DecisionReport], f: ModuleMorphism) -> list[dict]:
    conj = all(r.verdict for r in parts)
    probs = _witness_problems(eq, f)
    if eq.verdict != conj or probs:
        return [_violation(claim, i, eq.verdict, {"conjunction_of_parts": conj}, probs)]
    return []


def _make_gp_trio(direction: str):
    def check(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
        f = inst.f
        base = _construction_modules(f)
        R, L = _pools(ctx, f, base + _gp_extra(f) + [g for B in base for g in _gp_extra(identity(B))], 1)
        if direction != "equivalence":
            return _agree(f"gp_{direction}", 1, dc.decide_gp_trio(f, direction), f, _trio_sampled(f, direction, 1, R, L)), {}
        out, parts = [], []
        for d in ("epic", "monic"):
            r = dc.decide_gp_trio(f, d)
            parts.append(r)
            out += _agree(f"gp_{d}", 1, r, f, _trio_sampled(f, d, 1, R, L))
        return out + _equivalence("gp_equivalence", 1, dc.decide_gp_trio(f, "equivalence"), parts, f), {}

    return check


def _check_lem(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
    f = inst.f
    cc = dc.cokernel_construction(f)
    fs, h = cc.f_sharp, cc.h
    p = f.p
    problems = []
    if not fs.is_injective():
        problems.append("f# not injective")
    if not h.is_surjective():
        problems.append("h not surjective")
    if (fs.matrix @ h.matrix % p).any():
        problems.append("h o f# != 0")
    if fs.source.dim + h.target.dim != fs.target.dim:
        problems.append("not exact in the middle")
    if not np.array_equal(fs.matrix[:, : f.target.dim] % p, f.matrix % p):
        problems.append("first component of f# is not f")
    if not is_projective(cc.u.target).verdict:
        problems.append("extra summand not projective")
    if not dc.gp_test(cc.C, ctx.cert).verdict:
        problems.append("cokernel is not GP")
    if problems:
        return [_violation("lem_exact_gp", 1, None, {}, problems)], {}
    return [], {}


def _make_gorenstein(attr: str):
    def check(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
        f = inst.f
        n = ctx.cert.n
        out = []
        base = _construction_modules(f)
        try:
            hull = dc.finite_pd_hull(f.source, n, verify=False)
            base += [hull.G, hull.H]
        except PhantomKitError:
            pass
        for d in degrees:
            i = n + d
            R, L = _pools(ctx, f, base, i)
            bundle = dc.decide_gorenstein_high_degree(f, i)
            if attr != "equivalence":
                out += _agree(f"gorenstein_{attr}", i, getattr(bundle, attr), f, _trio_sampled(f, attr, i, R, L))
                continue
            for part in ("epic", "monic"):
                out += _agree(f"gorenstein_{part}", i, getattr(bundle, part), f, _trio_sampled(f, part, i, R, L))
            out += _equivalence("gorenstein_equivalence", i, bundle.equivalence, [bundle.epic, bundle.monic], f)
        R1, _ = _pools(ctx, f, [], 1)
        nonzero = not _sample(f, "ext_contra", "zero", 1, R1).verdict
        return out, {"nonzero_at_1": int(nonzero)}

    return check


def _check_duality(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
    f, X = inst.f, inst.X
    DX = dual_module(X)
    probs = []
    for i in range(0, 4):
        for M in (f.source, f.target):
            e, t = fn.ext_dim(M, X, i), fn.tor_dim(M, DX, i)
            if e != t:
                probs.append(f"dim Ext^{i}(M,X)={e} but dim Tor_{i}(M,DX)={t}")
        em, tm = fn.ext_map_contra(f, X, i), fn.tor_map(f, DX, i)
        if em.is_zero() != tm.is_zero() or em.rank() != tm.rank():
            probs.append(f"degree {i}: Ext^{i}(f,X) rank {em.rank()} vs Tor_{i}(f,DX) rank {tm.rank()}")
    return ([_violation("duality", 3, None, {}, probs)] if probs else []), {}


def _flags(m: fn.InducedMap) -> tuple:
    return (m.source.dim, m.target.dim, m.rank(), m.is_zero(), m.is_monic(), m.is_epic())


def _check_invariants(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
    f, X = inst.f, inst.X
    M, N = f.source, f.target
    probs = []
    if fn.ext_dim(M, N, 0) != hom_space(M, N).dim:
        probs.append("Ext^0(M,N) != Hom(M,N)")
    Y = dual_module(X)
    if fn.tor_dim(M, Y, 0) != tensor_over_A(M, Y).dim:
        probs.append("Tor_0(M,Y) != M (x) Y")
    top = max(degrees) + 1
    res_m, res_n = free_resolution(M, top), free_resolution(N, top)
    alt_m = free_resolution(M, top, inst.order_m)
    alt_n = free_resolution(N, top, inst.order_n)
    for r in (res_m, res_n, alt_m, alt_n):
        probs += check_resolution(r)
    tests = [X, N, ctx.pool.right[0]]
    for i in range(0, top):
        for Z in tests:
            if fn.ext_space(M, Z, i, None).dim != fn.ext_space(M, Z, i, None, res=alt_m).dim:
                probs.append(f"Ext^{i} dim depends on the resolution")
            a1 = fn.ext_map_contra(f, Z, i, None)
            a2 = fn.ext_map_contra(f, Z, i, None, res_m=alt_m, res_n=alt_n)
            if _flags(a1) != _flags(a2):
                probs.append(f"Ext^{i}(f,-) flags depend on the resolution")
            DZ = dual_module(Z)
            t1 = fn.tor_map(f, DZ, i, None)
            t2 = fn.tor_map(f, DZ, i, None, res_m=alt_m, res_n=alt_n)
            if _flags(t1) != _flags(t2):
                probs.append(f"Tor_{i}(f,-) flags depend on the resolution")
        if i >= 1 and fn.ext_dim(M, X, i + 1, None) != fn.ext_dim(syzygy(M, 1), X, i, None):
            probs.append(f"dimension shift fails at degree {i}")
    return ([_violation("invariants", top, None, {}, probs)] if probs else []), {}


def _check_hull(ctx: _Ctx, inst: Instance, degrees) -> tuple[list, dict]:
    M = inst.f.source
    n = ctx.cert.n
    hull = dc.finite_pd_hull(M, n, verify=False)
    e, q = hull.embed, hull.proj
    probs = []
    if e.source.key != M.key:
        probs.append("embedding does not start at M")
    if not e.is_injective():
        probs.append("M -> H not injective")
    if not q.is_surjective():
        probs.append("H -> G not surjective")
    if (e.matrix @ q.matrix % M.p).any():
        probs.append("composite M -> H -> G nonzero")
    if M.dim + hull.G.dim != hull.H.dim:
        probs.append("not exact at H")
    if not is_projective(syzygy(hull.H, n)).verdict:
        probs.append("pd H exceeds n")
    if not dc.gp_test(hull.G, ctx.cert).verdict:
        probs.append("G is not GP")
    return ([_violation("hull", n, None, {}, probs)] if probs else []), {}


# ---------------------------------------------------------------- suite table


@dataclass(frozen=True)
class SuiteSpec:
    check: Callable
    generate: Callable
    algebras: tuple[str, ...]
    degrees: str = "first"  # first | config | above_n
    gp: bool = False
    needs_certificate: bool = False
    description: str = ""


SUITES: dict[str, SuiteSpec] = {
    "thm11": SuiteSpec(_check_thm11, _gen_general, GENERAL_ALGEBRAS, "first",
                       description="Ext^1(f,-) = 0 iff Tor_1(f,-) = 0 iff f factors through a projective"),
    "cor_i1": SuiteSpec(_check_thm11, _gen_general, GENERAL_ALGEBRAS, "config",
                        description="degree-i vanishing via Omega^{i-1} f"),
    "cor_cc": SuiteSpec(_check_epic, _gen_general, GENERAL_ALGEBRAS, "first",
                        description="Ext^1(f,-) epic iff Tor_1(f,-) monic iff the kernel map factors"),
    "cor_ii1": SuiteSpec(_check_epic, _gen_general, GENERAL_ALGEBRAS, "config",
                         description="degree-i epic/monic via Omega^{i-1} f"),
    "prop_prop": SuiteSpec(_check_prop_prop, _gen_gp, GP_ALGEBRAS, "first", gp=True, needs_certificate=True,
                           description="on GP modules Ext^1(f,-) and Ext^1(-,f) vanish together"),
    "thm12": SuiteSpec(_make_gp_trio("vanish"), _gen_gp, GP_ALGEBRAS, "first", gp=True, needs_certificate=True,
                       description="GP vanishing trio"),
    "lem": SuiteSpec(_check_lem, _gen_gp, GP_ALGEBRAS, "first", gp=True, needs_certificate=True,
                     description="0 -> M -> N (+) P -> C -> 0 exact with C GP"),
    "cor_22": SuiteSpec(_make_gp_trio("epic"), _gen_gp, GP_ALGEBRAS, "first", gp=True, needs_certificate=True,
                        description="GP epic trio"),
    "cor_222": SuiteSpec(_make_gp_trio("monic"), _gen_gp, GP_ALGEBRAS, "first", gp=True, needs_certificate=True,
                         description="GP monic trio"),
    "cor_gor": SuiteSpec(_make_gp_trio("equivalence"), _gen_gp, GP_ALGEBRAS, "first", gp=True,
                         needs_certificate=True, description="GP equivalence trio"),
    "prop_co": SuiteSpec(_make_gorenstein("vanish"), _gen_general, GORENSTEIN_ALGEBRAS, "above_n",
                         needs_certificate=True, description="vanishing trio above the Gorenstein dimension"),
    "cor_ccc": SuiteSpec(_make_gorenstein("epic"), _gen_general, GORENSTEIN_ALGEBRAS, "above_n",
                         needs_certificate=True, description="epic trio above the Gorenstein dimension"),
    "cor_cccc": SuiteSpec(_make_gorenstein("monic"), _gen_general, GORENSTEIN_ALGEBRAS, "above_n",
                          needs_certificate=True, description="monic trio above the Gorenstein dimension"),
    "cor_final": SuiteSpec(_make_gorenstein("equivalence"), _gen_general, GORENSTEIN_ALGEBRAS, "above_n",
                           needs_certificate=True, description="equivalence trio above the Gorenstein dimension"),
    "duality": SuiteSpec(_check_duality, _gen_triple, GENERAL_ALGEBRAS, "first",
                         description="Ext^i(M,X) against Tor_i(M,DX), dims and induced maps, i <= 3"),
    "invariants": SuiteSpec(_check_invariants, _gen_permuted, GENERAL_ALGEBRAS, "first",
                            description="Ext^0 = Hom, Tor_0 = tensor, d o d = 0, resolution independence"),
    "hull": SuiteSpec(_check_hull, _gen_general, GORENSTEIN_ALGEBRAS, "first", needs_certificate=True,
                      description="finite projective dimension hull postconditions"),
}

THEOREM_SUITES = (
    "thm11", "cor_i1", "cor_cc", "cor_ii1", "prop_prop", "thm12", "lem",
    "cor_22", "cor_222", "cor_gor", "prop_co", "cor_ccc", "cor_cccc", "cor_final",
)


def _degrees(spec: SuiteSpec, config: TrialConfig) -> tuple[int, ...]:
    if spec.degrees == "first":
        return (1,)
    return tuple(config.degrees)


# ---------------------------------------------------------------- runner


def _context(theorem: str, spec_str: str, config: TrialConfig) -> _Ctx:
    suite = SUITES[theorem]
    a = parse_algebra_spec(spec_str)
    cert = dc.cached_certificate(a)
    if suite.needs_certificate and cert is None:
        raise ConfigError(f"suite {theorem} needs a Gorenstein certificate; {spec_str} has none")
    pool = build_pool(a, config.seed, n_random=config.pool_size, max_dim=config.max_dim)
    return _Ctx(theorem, spec_str, a, pool, cert, config)


def _run_trial(ctx: _Ctx, alg_idx: int, trial: int) -> tuple[dict | None, dict]:
    suite = SUITES[ctx.suite]
    rng = np.random.default_rng([ctx.config.seed & (2**63 - 1), zlib.crc32(ctx.suite.encode()), alg_idx, trial])
    inst = suite.generate(ctx, rng)
    try:
        violations, notes = suite.check(ctx, inst, _degrees(suite, ctx.config))
    except PhantomKitError as exc:
        violations, notes = [_violation("exception", 0, None, {}, [f"{type(exc).__name__}: {exc}"])], {}
    if not violations:
        return None, notes
    return {"trial": trial, "algebra": ctx.spec, "instance": inst.to_json(), "violations": violations}, notes


def _suite_requirements(theorem: str, ctx: _Ctx, notes: list[dict]) -> list[dict]:
    out = []
    if theorem in ("prop_co", "cor_ccc", "cor_cccc", "cor_final") and ctx.cert.n >= 1:
        if not sum(nt.get("nonzero_at_1", 0) for nt in notes):
            out.append({"trial": None, "algebra": ctx.spec, "instance": None, "violations": [
                _violation("non_vacuous", 1, None, {}, ["no instance with Ext^1(f,-) != 0"])]})
    return out


def run_suite(theorem: str, config: TrialConfig) -> SuiteReport:
    """Run one suite over its algebras; raises ConfigError before any trial if misconfigured."""
    if theorem not in SUITES:
        raise ConfigError(f"unknown suite {theorem!r}")
    spec = SUITES[theorem]
    algebras = config.algebras if config.algebras is not None else spec.algebras
    contexts = [_context(theorem, s, config) for s in algebras]
    rep = SuiteReport(theorem)
    start = time.perf_counter()
    workers = config.worker_count()
    for alg_idx, ctx in enumerate(contexts):
        jobs = range(config.trials)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(lambda t: _run_trial(ctx, alg_idx, t), jobs))
        else:
            results = [_run_trial(ctx, alg_idx, t) for t in jobs]
        failures = [r for r, _ in results if r is not None]
        failures += _suite_requirements(theorem, ctx, [nt for _, nt in results])
        notes_sum: dict = {}
        for _, nt in results:
            for k, v in nt.items():
                notes_sum[k] = notes_sum.get(k, 0) + v
        rep.trials += config.trials
        rep.passes += sum(1 for r, _ in results if r is None)
        rep.failures += failures
        rep.per_algebra[ctx.spec] = {
            "trials": config.trials,
            "passes": sum(1 for r, _ in results if r is None),
            "certificate_n": ctx.cert.n if ctx.cert is not None else None,
            "degrees": [(ctx.cert.n if spec.degrees == "above_n" else 0) + d for d in _degrees(spec, config)],
            "pool": ctx.pool.record(),
            "notes": dict(sorted(notes_sum.items())),
        }
    dd = audit_cache()
    if dd:
        rep.failures.append({"trial": None, "algebra": None, "instance": None,
                             "violations": [_violation("d_o_d", 0, None, {}, dd)]})
    rep.wall_time = time.perf_counter() - start
    return rep


def verify(theorem_id: str | None = None, config: TrialConfig | None = None) -> VerificationReport:
    """Run ``theorem_id`` (or every suite in ``config.theorems``) and collect a report."""
    config = config or TrialConfig()
    ids = (theorem_id,) if theorem_id is not None else config.theorems
    if theorem_id is not None and config.theorems != ids:
        config = TrialConfig(**{**config.__dict__, "theorems": ids})
    return VerificationReport(config, [run_suite(t, config) for t in ids])


def replay(theorem: str, failure: dict, config: TrialConfig) -> list[dict]:
    """Re-run a serialized failure; returns its violations (empty if it no longer fails)."""
    ctx = _context(theorem, failure["algebra"], config)
    inst = Instance.from_json(failure["instance"], ctx.algebra)
    spec = SUITES[theorem]
    try:
        violations, _ = spec.check(ctx, inst, _degrees(spec, config))
    except PhantomKitError as exc:
        violations = [_violation("exception", 0, None, {}, [f"{type(exc).__name__}: {exc}"])]
    return violations
