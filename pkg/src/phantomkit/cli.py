"""``phantomkit`` command line.

Exit codes: 0 success (or every suite passed), 1 a verification failure was
found, 2 bad input. Input errors are reported as ``path:line:col: message``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

from . import deciders as dc
from . import functors as fn
from . import theoremlab as tl
from .algebra import AlgebraPresentation, algebra_from_json, algebra_to_json, catalog_algebra, flip_side
from .errors import (
    BadField,
    BadUnit,
    ConfigError,
    InputError,
    InvalidModule,
    InvalidMorphism,
    NonAssociative,
    PhantomKitError,
)
from .modules import ModuleMorphism, ModuleRep, module_from_json, morphism_from_json
from .pools import build_pool

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class CliInputError(Exception):
    """An input problem already formatted with its file position."""


# ---------------------------------------------------------------- loading


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliInputError(f"{path}:1:1: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc


_ANCHOR_KEYS = {
    BadField: "p",
    NonAssociative: "mult",
    BadUnit: "unit",
    InvalidModule: "action",
    InvalidMorphism: "matrix",
}


def _anchored(path: str, text: str, exc: Exception) -> CliInputError:
    key = next((k for cls, k in _ANCHOR_KEYS.items() if isinstance(exc, cls)), None)
    line, col = 1, 1
    if key is not None:
        m = re.search(r'"%s"\s*:' % re.escape(key), text)
        if m:
            line = text.count("\n", 0, m.start()) + 1
            col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return CliInputError(f"{path}:{line}:{col}: {exc}")


@dataclass
class Workspace:
    """Validated objects loaded for one command."""

    algebra: AlgebraPresentation
    modules: dict[str, ModuleRep] = field(default_factory=dict)
    morphisms: dict[str, ModuleMorphism] = field(default_factory=dict)

    def module(self, path: str) -> ModuleRep:
        key = os.path.abspath(path)
        if key not in self.modules:
            obj, text = _read_json(path)
            try:
                M = module_from_json(obj, self.algebra)
            except InputError as exc:
                raise _anchored(path, text, exc) from exc
            self.modules[key] = ModuleRep(M.algebra, M.side, M.action, os.path.basename(path))
        return self.modules[key]

    def morphism(self, path: str) -> ModuleMorphism:
        key = os.path.abspath(path)
        if key not in self.morphisms:
            obj, text = _read_json(path)
            if not isinstance(obj, dict) or "source" not in obj or "target" not in obj:
                raise CliInputError(f"{path}:1:1: morphism needs 'source', 'target' and 'matrix'")
            base = os.path.dirname(os.path.abspath(path))
            src = self.module(os.path.join(base, str(obj["source"])))
            tgt = self.module(os.path.join(base, str(obj["target"])))
            try:
                self.morphisms[key] = morphism_from_json(obj, src, tgt)
            except InputError as exc:
                raise _anchored(path, text, exc) from exc
        return self.morphisms[key]


def load_ring(args) -> AlgebraPresentation:
    if args.builtin is not None:
        try:
            return catalog_algebra(args.builtin.replace(":", " "), args.p)
        except InputError as exc:
            raise CliInputError(f"--builtin {args.builtin}: {exc}") from exc
    if args.ring is None:
        raise CliInputError("no ring given: use --builtin KEY [--p P] or --ring FILE")
    obj, text = _read_json(args.ring)
    try:
        return algebra_from_json(obj)
    except InputError as exc:
        raise _anchored(args.ring, text, exc) from exc


# ---------------------------------------------------------------- formatting


def _evidence(r: dc.DecisionReport) -> str:
    w = r.witness
    if r.verdict and isinstance(w, dc.Factorization):
        if w.of is not None and w.of.is_zero():
            return "witness h=0"
        return f"factors through a {w.through} module of dim {w.first.target.dim}"
    if r.witnesses():
        return "witness: " + "; ".join(t.describe() for t in r.witnesses())
    return "no witness"


def _line(label: str, r: dc.DecisionReport) -> str:
    return f"{label}: {'yes' if r.verdict else 'no'} ({_evidence(r)}) [{r.justification}, {r.regime}]"


def _report_json(r: dc.DecisionReport) -> dict:
    out = {
        "question": r.question,
        "degree": r.degree,
        "verdict": r.verdict,
        "justification": r.justification,
        "regime": r.regime,
        "evidence": _evidence(r),
    }
    if r.witnesses():
        out["witnesses"] = [
            {"functor": t.functor, "degree": t.degree, "predicate": t.predicate, "side": t.module.side,
             "dim": t.module.dim, "action": t.module.action.tolist()}
            for t in r.witnesses()
        ]
    return out


def _emit(args, lines: list[str], payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    a = load_ring(args)
    ws = Workspace(a)
    f = ws.morphism(args.morphism)
    i = args.degree
    cls = dc.classify_morphism(f, i)
    lines = [_line(label, r) for label, r in cls.reports()]
    payload: dict = {"degree": i, "classification": {label: _report_json(r) for label, r in cls.reports()}}

    epic = dc.decide_epic_contra(f, i)
    lines.append(_line(f"Ext^{i}(f,-) epic / Tor_{i}(f,-) monic", epic))
    payload["epic_contra"] = _report_json(epic)

    pool = build_pool(a, args.seed, n_random=args.samples)
    side = f.source.side
    tor, ext, implication = dc.decide_one_directional(f, i, list(pool.side(side)), list(pool.side(flip_side(side))))
    lines.append(_line(f"Tor_{i}(f,-) epic (sampled)", tor))
    lines.append(_line(f"Ext^{i}(f,-) monic (sampled)", ext))
    lines.append(f"one-directional clause on the sample: {'holds' if implication else 'VIOLATED'}")
    payload["sampled"] = {"tor_epic": _report_json(tor), "ext_monic": _report_json(ext), "implication": implication,
                          "pool": pool.record()}

    cert = dc.cached_certificate(a)
    if cert is None:
        lines.append("Gorenstein: no certificate within the cutoff; GP and high-degree deciders skipped")
    else:
        payload["certificate_n"] = cert.n
        gp = all(dc.gp_test(M, cert).verdict for M in (f.source, f.target))
        if gp and i == 1:
            payload["gp"] = {}
            for d in ("vanish", "epic", "monic", "equivalence"):
                r = dc.decide_gp_trio(f, d)
                lines.append(_line(f"GP trio {d}", r))
                payload["gp"][d] = _report_json(r)
        if i > cert.n:
            b = dc.decide_gorenstein_high_degree(f, i)
            payload["gorenstein"] = {}
            for d in ("vanish", "epic", "monic", "equivalence"):
                r = getattr(b, d)
                lines.append(_line(f"degree {i} > n={cert.n} {d}", r))
                payload["gorenstein"][d] = _report_json(r)
    _emit(args, lines, payload)
    return EXIT_OK


def _table(args, kind: str) -> int:
    a = load_ring(args)
    ws = Workspace(a)
    M = ws.module(args.module)
    Z = ws.module(args.other)
    rows = []
    for i in range(args.i + 1):
        d = fn.ext_dim(M, Z, i, max_degree=None) if kind == "ext" else fn.tor_dim(M, Z, i, max_degree=None)
        rows.append((i, d))
    name = "Ext^i(M,N)" if kind == "ext" else "Tor_i(M,Y)"
    lines = [f"i  dim {name}"] + [f"{i:<2d} {d}" for i, d in rows]
    _emit(args, lines, {"functor": kind, "dims": [d for _, d in rows]})
    return EXIT_OK


def cmd_ext(args) -> int:
    return _table(args, "ext")


def cmd_tor(args) -> int:
    return _table(args, "tor")


def cmd_ringinfo(args) -> int:
    a = load_ring(args)
    cert = dc.self_injective_dimension(a, args.cutoff)
    payload = {"algebra": algebra_to_json(a) if args.full else a.name, "dim": a.dim, "p": a.p,
               "self_injective": dc.is_self_injective(a), "certificate": cert.to_json()}
    if cert.valid:
        lines = [f"{a.name} over F_{a.p}, dim {a.dim}: {cert.n}-Gorenstein "
                 f"(right {cert.sides['right']}, left {cert.sides['left']}; cutoff {cert.cutoff})"]
    else:
        lines = [f"{a.name} over F_{a.p}, dim {a.dim}: refused, no Gorenstein certificate within cutoff {cert.cutoff} "
                 f"(right {cert.sides['right']}, left {cert.sides['left']})"]
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_gp_test(args) -> int:
    a = load_ring(args)
    M = Workspace(a).module(args.module)
    cert = dc.self_injective_dimension(a, args.cutoff)
    if not cert.valid:
        raise CliInputError(f"{a.name}: no Gorenstein certificate within cutoff {args.cutoff}")
    r = dc.gp_test(M, cert)
    lines = [f"Gorenstein projective: {'yes' if r.verdict else 'no'} [n={cert.n}]"]
    if not r.verdict:
        lines.append(f"failed: {r.details['failed']}")
    _emit(args, lines, {"gp": r.verdict, "n": cert.n, "details": r.details})
    return EXIT_OK


def cmd_verify(args) -> int:
    theorems = tuple(args.theorem or ["thm11"])
    if "all" in theorems:
        theorems = tuple(tl.SUITES)
    cfg = tl.TrialConfig(
        seed=args.seed,
        trials=args.trials,
        algebras=tuple(args.algebra) if args.algebra else None,
        max_dim=args.max_dim,
        pool_size=args.pool_size,
        degrees=tuple(args.degrees),
        theorems=theorems,
    )
    report = tl.verify(config=cfg)
    text = report.dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        for s in report.suites:
            print(f"{s.theorem}: {'PASS' if s.passed else 'FAIL'} {s.passes}/{s.trials}")
    for s in report.suites:
        print(f"{s.theorem}: {s.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------- parser


def _ring_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--builtin", metavar="KEY", help="catalog algebra, e.g. 'truncated_poly 2' or nakayama:3,2")
    g.add_argument("--ring", metavar="FILE", help="algebra JSON file")
    p.add_argument("--p", type=int, default=2, help="field characteristic for --builtin (default 2)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phantomkit", description="Exact Ext/Tor deciders over finite-dimensional algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a morphism")
    _ring_args(p)
    p.add_argument("morphism", help="morphism JSON file")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--samples", type=int, default=16, help="random modules per side in the sampling pool")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)

    for name, other, func in (("ext", "N", cmd_ext), ("tor", "Y", cmd_tor)):
        p = sub.add_parser(name, help=f"dimension table of {name}")
        _ring_args(p)
        p.add_argument("module", help="M (module JSON file)")
        p.add_argument("other", metavar=other, help=f"{other} (module JSON file)")
        p.add_argument("--i", type=int, default=4, help="top degree")
        p.set_defaults(func=func)

    p = sub.add_parser("ringinfo", help="Gorenstein certificate of an algebra")
    _ring_args(p)
    p.add_argument("--cutoff", type=int, default=dc.DEFAULT_CUTOFF)
    p.add_argument("--full", action="store_true", help="include structure constants in JSON output")
    p.set_defaults(func=cmd_ringinfo)

    p = sub.add_parser("gp-test", help="Gorenstein projectivity of a module")
    _ring_args(p)
    p.add_argument("module")
    p.add_argument("--cutoff", type=int, default=dc.DEFAULT_CUTOFF)
    p.set_defaults(func=cmd_gp_test)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--theorem", action="append", help=f"suite id or 'all' (repeatable): {', '.join(tl.SUITES)}")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--algebra", action="append", help="override algebras, e.g. 'truncated_poly 2@2' (repeatable)")
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--pool-size", type=int, default=16)
    p.add_argument("--degrees", type=int, nargs="+", default=[1, 2])
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliInputError, InputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except PhantomKitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
