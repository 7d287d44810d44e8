"""Exit criteria. Each test prints one PASS/FAIL line with its wall time.

Run alone with ``pytest -m acceptance -v`` or ``python3 tests/test_acceptance.py``.
In-memory caches are cleared before every timed criterion.
"""

from __future__ import annotations

import dataclasses
import json
import sys
import time

import numpy as np
import pytest

from phantomkit import functors as fn
from phantomkit import resolve
from phantomkit.algebra import catalog_algebra
from phantomkit.deciders import self_injective_dimension
from phantomkit.modules import ModuleRep
from phantomkit.theoremlab import GENERAL_ALGEBRAS, TrialConfig, run_suite

pytestmark = pytest.mark.acceptance

_capsys = None


def _line(n: int, ok: bool, what: str, seconds: float, limit: float | None) -> None:
    budget = f" (limit {limit:.0f}s)" if limit else ""
    text = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {what} in {seconds:.2f}s{budget}"
    if _capsys is None:
        print(text)
        return
    with _capsys.disabled():
        print("\n" + text)


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def _cold():
    resolve.clear_cache()
    fn.clear_caches()


def _run(suites, cfg):
    reports = [run_suite(s, cfg) for s in suites]
    return reports, all(r.passed for r in reports)


def _summary(reports) -> str:
    return ", ".join(f"{r.theorem} {r.passes}/{r.trials}" for r in reports)


def test_1_golden_values():
    _cold()
    t0 = time.perf_counter()
    a = catalog_algebra("truncated_poly 2", 2)
    k = ModuleRep(a, "right", np.array([[[1]], [[0]]]), "k")
    kl = ModuleRep(a, "left", np.array([[[1]], [[0]]]), "k")
    ext = [fn.ext_dim(k, k, i) for i in range(5)]
    tor = [fn.tor_dim(k, kl, i) for i in range(5)]
    dt = time.perf_counter() - t0
    ok = ext == [1] * 5 and tor == [1] * 5 and dt < 1.0
    _line(1, ok, f"Ext^i(k,k)={ext} Tor_i(k,k)={tor} over F_2[x]/(x^2)", dt, 1)
    assert ext == [1] * 5 and tor == [1] * 5
    assert dt < 1.0


def test_2_thm11():
    _cold()
    t0 = time.perf_counter()
    cfg = TrialConfig(trials=100, seed=42)
    (rep,), ok = _run(["thm11"], cfg)
    dt = time.perf_counter() - t0
    algs = sorted(rep.per_algebra)
    ok = ok and rep.trials == 600 and len(algs) == 6 and dt < 180
    _line(2, ok, f"thm11 {rep.passes}/{rep.trials} over {len(algs)} algebras", dt, 180)
    assert rep.passed and rep.trials == 100 * len(GENERAL_ALGEBRAS) == 600
    assert dt < 180


def test_3_duality():
    _cold()
    t0 = time.perf_counter()
    (rep,), ok = _run(["duality"], TrialConfig(trials=34, seed=42))
    dt = time.perf_counter() - t0
    ok = ok and rep.trials >= 200 and dt < 120
    _line(3, ok, f"duality {rep.passes}/{rep.trials} triples, i <= 3", dt, 120)
    assert rep.passed and rep.trials >= 200
    assert dt < 120


def test_4_epic_monic():
    _cold()
    t0 = time.perf_counter()
    reports, ok = _run(["cor_cc", "cor_ii1"], TrialConfig(trials=100, seed=42, degrees=(1, 2)))
    dt = time.perf_counter() - t0
    _line(4, ok, _summary(reports) + ", i in {1,2}", dt, None)
    assert ok


def test_5_gp_suites():
    _cold()
    t0 = time.perf_counter()
    cfg = TrialConfig(trials=100, seed=42, algebras=("truncated_poly 2@2", "truncated_poly 3@3"))
    reports, ok = _run(["thm12", "lem", "cor_22", "cor_222", "cor_gor"], cfg)
    dt = time.perf_counter() - t0
    _line(5, ok and dt < 180, _summary(reports), dt, 180)
    assert ok
    assert dt < 180


def test_6_gorenstein():
    _cold()
    t0 = time.perf_counter()
    cert = self_injective_dimension(catalog_algebra("triangular_2", 2), cutoff=6)
    cfg = TrialConfig(trials=100, seed=42, algebras=("triangular_2@2",), degrees=(1, 2))
    reports, ok = _run(["prop_co", "cor_ccc", "cor_cccc", "cor_final"], cfg)
    dt = time.perf_counter() - t0
    notes = [r.per_algebra["triangular_2@2"]["notes"]["nonzero_at_1"] for r in reports]
    degrees = {tuple(r.per_algebra["triangular_2@2"]["degrees"]) for r in reports}
    ok = ok and cert.n == 1 and degrees == {(2, 3)} and min(notes) >= 1 and dt < 120
    _line(6, ok, f"n={cert.n}, degrees {sorted(degrees)}, {_summary(reports)}, nonzero at i=1: {notes}", dt, 120)
    assert cert.n == 1 and degrees == {(2, 3)}
    assert all(r.passed for r in reports) and min(notes) >= 1
    assert dt < 120


def test_7_structural_invariants():
    _cold()
    t0 = time.perf_counter()
    (inv,), ok_inv = _run(["invariants"], TrialConfig(trials=34, seed=42))
    (hull,), ok_hull = _run(["hull"], TrialConfig(trials=50, seed=42, algebras=("triangular_2@2",)))
    audit = resolve.audit_cache()
    dt = time.perf_counter() - t0
    ok = ok_inv and ok_hull and not audit and inv.trials >= 200 and hull.trials == 50
    _line(7, ok, f"invariants {inv.passes}/{inv.trials} (each with a permuted resolution), "
          f"hull {hull.passes}/{hull.trials}, d o d failures {len(audit)}", dt, None)
    assert inv.passed and inv.trials >= 200
    assert hull.passed and hull.trials == 50
    assert audit == []


def test_8_determinism():
    t0 = time.perf_counter()
    results = []
    for suite, cfg in [
        ("thm11", TrialConfig(trials=20, seed=7)),
        ("cor_gor", TrialConfig(trials=10, seed=7)),
        ("cor_final", TrialConfig(trials=30, seed=7, algebras=("triangular_2@2",))),
    ]:
        texts = []
        for threads in (1, 1, 4):
            _cold()
            cfg_t = dataclasses.replace(cfg, threads=threads)
            texts.append(json.dumps(run_suite(suite, cfg_t).to_json(), sort_keys=True, indent=1))
        results.append(len(set(texts)) == 1)
    dt = time.perf_counter() - t0
    ok = all(results)
    _line(8, ok, "repeated suite runs give byte-identical reports (1, 1 and 4 threads)", dt, None)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
