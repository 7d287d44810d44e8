import inspect
import json

import numpy as np
import pytest

from phantomkit import deciders as dc
from phantomkit import theoremlab as tl
from phantomkit.algebra import catalog_algebra
from phantomkit.errors import ConfigError
from phantomkit.modules import hom_space, regular_module
from phantomkit.resolve import is_projective
from phantomkit.theoremlab import TrialConfig, gen_random_module, gen_random_morphism, run_suite, verify

from .conftest import simple_k


def test_gen_random_module_examples(tp2):
    field = catalog_algebra("field", 2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        M = gen_random_module(field, 3, rng)
        assert 0 <= M.dim <= 3
    dims, nonproj = set(), False
    for _ in range(100):
        M = gen_random_module(tp2, 3, rng)
        dims.add(M.dim)
        nonproj |= not is_projective(M).verdict
    assert nonproj and max(dims) <= 3
    with pytest.raises(ValueError):
        gen_random_module(tp2, 0, rng)


def test_gen_random_morphism_examples(tp2):
    k = simple_k(tp2)
    H = hom_space(k, k)
    assert H.combine([0]).is_zero()
    assert np.array_equal(H.combine([1]).matrix, H.basis[0].matrix)
    f = gen_random_morphism(regular_module(tp2), k, np.random.default_rng(1))
    assert f.source.dim == 2


def test_thm11_acceptance_example():
    rep = run_suite("thm11", TrialConfig(trials=100, seed=42, algebras=("truncated_poly 2@2",)))
    assert rep.passed and rep.passes == 100


def test_prop_prop_on_field_is_vacuous():
    rep = run_suite("prop_prop", TrialConfig(trials=30, algebras=("field@2",)))
    assert rep.passed and rep.passes == 30


def test_lem_suite():
    rep = run_suite("lem", TrialConfig(trials=50, algebras=("truncated_poly 2@2", "truncated_poly 3@3")))
    assert rep.passed and rep.passes == 100


def test_determinism_and_threads():
    cfg = TrialConfig(trials=15, theorems=("thm11", "cor_cc", "thm12"))
    a = verify(config=cfg).dumps()
    b = verify(config=cfg).dumps()
    c = verify(config=TrialConfig(trials=15, theorems=("thm11", "cor_cc", "thm12"), threads=3)).dumps()
    assert a == b == c
    assert "wall_time" not in a
    d = verify(config=TrialConfig(trials=15, seed=7, theorems=("thm11", "cor_cc", "thm12"))).dumps()
    assert d != a


def test_config_errors():
    with pytest.raises(ConfigError):
        run_suite("thm12", TrialConfig(trials=1, algebras=("nakayama 3,3,2@2",)))
    with pytest.raises(ConfigError):
        TrialConfig(theorems=("nope",))
    with pytest.raises(ConfigError):
        TrialConfig(degrees=(0,))


def test_report_flags():
    rep = verify("cor_i1", TrialConfig(trials=5))
    js = json.loads(rep.dumps())
    for s in js["suites"]:
        assert s["passed"] == (not s["failures"])
    assert js["config"]["theorems"] == ["cor_i1"]
    assert all("pool" in v for v in js["suites"][0]["per_algebra"].values())


def test_failures_are_replayable(monkeypatch):
    # a deliberately wrong decider must be caught, and the serialized failure
    # must reproduce the same disagreement
    def wrong(f, i=1):
        return dc.DecisionReport("ext_contra_zero", i, True, "thm11", "exact")

    monkeypatch.setattr(dc, "decide_ext_contra_vanishing", wrong)
    cfg = TrialConfig(trials=20, algebras=("truncated_poly 2@2",))
    rep = run_suite("thm11", cfg)
    assert not rep.passed and rep.failures
    fail = json.loads(json.dumps(rep.failures[0]))
    assert tl.replay("thm11", fail, cfg) == fail["violations"]
    monkeypatch.undo()
    assert tl.replay("thm11", fail, cfg) == []


def test_sampled_side_is_independent():
    # the sampled helpers never consult the decider module
    src = inspect.getsource(tl._sample) + inspect.getsource(tl._induced) + inspect.getsource(tl._property)
    assert "dc." not in src


def test_pool_is_recorded():
    rep = run_suite("duality", TrialConfig(trials=3, algebras=("triangular_2@2",)))
    rec = rep.per_algebra["triangular_2@2"]["pool"]
    assert rec["size"] == len(rec["dims"]) and len(rec["fingerprint"]) == 16
