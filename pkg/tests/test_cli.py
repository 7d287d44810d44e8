import json

import pytest

from phantomkit.cli import main

K = {"algebra": "truncated_poly_2", "side": "right", "dim": 1, "action": [[[1]], [[0]]]}
KL = {**K, "side": "left"}
A = {"algebra": "truncated_poly_2", "side": "right", "dim": 2, "action": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]}


@pytest.fixture
def files(tmp_path):
    def put(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
        return str(path)

    return {
        "k": put("k.json", K),
        "kl": put("kl.json", KL),
        "A": put("A.json", A),
        "zero": put("zero.json", {"source": "k.json", "target": "k.json", "matrix": [[0]]}),
        "id": put("id.json", {"source": "k.json", "target": "k.json", "matrix": [[1]]}),
        "bad": put("bad.json", '{"source": "k.json",\n  "target": \n}'),
        "notmap": put("notmap.json", {"source": "A.json", "target": "k.json", "matrix": [[1], [1]]}),
        "badmod": put("badmod.json", '{"algebra": "truncated_poly_2",\n "side": "right", "dim": 1,\n "action": [[[1]], [[1]]]}'),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_zero_morphism(capsys, files):
    code, out, _ = run(capsys, "check", "--builtin", "truncated_poly 2", files["zero"])
    assert code == 0
    assert "phantom: yes (witness h=0)" in out.splitlines()[0]


def test_check_identity_all_no(capsys, files):
    code, out, _ = run(capsys, "check", "--builtin", "truncated_poly:2", "--json", files["id"])
    assert code == 0
    cls = json.loads(out)["classification"]
    assert len(cls) == 4
    assert all(not r["verdict"] and r["witnesses"] for r in cls.values())


def test_check_json_is_deterministic(capsys, files):
    _, a, _ = run(capsys, "check", "--builtin", "truncated_poly 2", "--json", "--seed", "3", files["id"])
    _, b, _ = run(capsys, "check", "--builtin", "truncated_poly 2", "--json", "--seed", "3", files["id"])
    assert a == b


def test_malformed_json_is_line_anchored(capsys, files):
    code, _, err = run(capsys, "check", "--builtin", "truncated_poly 2", files["bad"])
    assert code == 2
    assert "bad.json:3:1:" in err


def test_invalid_inputs_exit_2(capsys, files):
    code, _, err = run(capsys, "check", "--builtin", "truncated_poly 2", files["notmap"])
    assert code == 2 and "notmap.json:1:" in err
    code, _, err = run(capsys, "ext", "--builtin", "truncated_poly 2", files["badmod"], files["k"])
    assert code == 2 and "badmod.json:3:2:" in err
    code, _, _ = run(capsys, "ext", "--builtin", "truncated_poly 2", "missing.json", files["k"])
    assert code == 2
    code, _, _ = run(capsys, "ringinfo", "--builtin", "quaternions")
    assert code == 2


def test_ext_and_tor_tables(capsys, files):
    code, out, _ = run(capsys, "ext", "--builtin", "truncated_poly 2", "--json", files["k"], files["k"], "--i", "4")
    assert code == 0 and json.loads(out)["dims"] == [1, 1, 1, 1, 1]
    code, out, _ = run(capsys, "tor", "--builtin", "truncated_poly 2", "--json", files["A"], files["kl"])
    assert code == 0 and json.loads(out)["dims"] == [1, 0, 0, 0, 0]
    code, out, _ = run(capsys, "tor", "--builtin", "truncated_poly 2", "--json", files["k"], files["kl"])
    assert json.loads(out)["dims"] == [1, 1, 1, 1, 1]


def test_ringinfo(capsys):
    code, out, _ = run(capsys, "ringinfo", "--builtin", "truncated_poly 2", "--json")
    assert code == 0 and json.loads(out)["certificate"]["n"] == 0
    code, out, _ = run(capsys, "ringinfo", "--builtin", "triangular_2")
    assert code == 0 and "1-Gorenstein" in out
    code, out, _ = run(capsys, "ringinfo", "--builtin", "nakayama 3,3,2")
    assert code == 0 and "refused" in out


def test_ring_file(capsys, tmp_path, files):
    from phantomkit.algebra import algebra_to_json, catalog_algebra

    path = tmp_path / "ring.json"
    path.write_text(json.dumps(algebra_to_json(catalog_algebra("truncated_poly 2", 2))), encoding="utf-8")
    code, out, _ = run(capsys, "gp-test", "--ring", str(path), files["k"])
    assert code == 0 and "yes" in out


def test_gp_test_refusal(capsys, tmp_path):
    path = tmp_path / "m.json"
    a8 = {"algebra": "nakayama_3_3_2", "side": "right", "dim": 0, "action": [[]] * 8}
    path.write_text(json.dumps(a8), encoding="utf-8")
    code, _, err = run(capsys, "gp-test", "--builtin", "nakayama 3,3,2", str(path))
    assert code == 2 and "certificate" in err


def test_verify_exit_codes(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--theorem", "thm11", "--trials", "5", "--out", str(out_file))
    assert code == 0 and "PASS" in out
    assert json.loads(out_file.read_text())["passed"] is True
    code, _, err = run(capsys, "verify", "--theorem", "thm12", "--algebra", "nakayama 3,3,2@2", "--trials", "2")
    assert code == 2 and "certificate" in err


def test_verify_reports_failures(capsys, monkeypatch):
    from phantomkit import deciders as dc

    monkeypatch.setattr(dc, "decide_tor_vanishing", lambda f, i=1: dc.DecisionReport("tor_zero", i, True, "thm11", "exact"))
    code, out, _ = run(capsys, "verify", "--theorem", "thm11", "--trials", "40", "--algebra", "truncated_poly 2@2")
    assert code == 1 and "FAIL" in out
