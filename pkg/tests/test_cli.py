import json

import pytest

from povmforge.cli import main, parse_poly
from povmforge.finite_field import make_field


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_q_verify(tmp_path, capsys):
    code, out, _ = run(capsys, "construct-q", "--p", "5", "--k", "1", "--f", "0,0,1", "--chi", "1", "--verify", "--out", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ensemble_q5.json", "ensemble_q5_ledger.csv"]
    doc = json.loads((tmp_path / "ensemble_q5.json").read_text())
    assert doc["schema_version"] == 1
    assert doc["parameters"]["permutation"] == [0, 1, 2, 3, 4]
    assert len(doc["members"]) == 25 and len(doc["members"][0][0][0]) == 2


def test_determinism_across_workers(tmp_path, capsys):
    outs = []
    for w in ("1", "3"):
        d = tmp_path / w
        assert run(capsys, "construct", "q", "--field", "7,1", "--verify", "--out", str(d), "--workers", w)[0] == 0
        outs.append(((d / "ensemble_q7.json").read_bytes(), (d / "ensemble_q7_ledger.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_even_q_is_rejected(capsys):
    code, _, err = run(capsys, "construct-q", "--p", "2", "--k", "3")
    assert code == 2
    rec = json.loads(err)
    assert rec["error"] == "EvenQ" and "odd q required" in rec["message"]


def test_bad_prime(capsys):
    code, _, err = run(capsys, "construct-q1", "--p", "6")
    assert code == 2 and json.loads(err)["error"] == "UsageError"


def test_verify_replay(tmp_path, capsys):
    run(capsys, "construct-q1", "--p", "3", "--out", str(tmp_path))
    path = tmp_path / "ensemble_q1_3.json"
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and json.loads(out)["passed"]
    doc = json.loads(path.read_text())
    doc["members"][0] = [[[0.0, 0.0]] * 4] * 4
    path.write_text(json.dumps(doc))
    assert run(capsys, "verify", str(path))[0] == 1


def test_compact_replay_rebuilds(tmp_path, capsys):
    run(capsys, "construct-q", "--p", "3", "--k", "2", "--f", "0;0;1,0", "--compact", "--out", str(tmp_path))
    path = tmp_path / "ensemble_q9.json"
    assert "members" not in json.loads(path.read_text())
    assert run(capsys, "verify", str(path))[0] == 0


def test_fn_commands(capsys):
    code, out, _ = run(capsys, "fn-count", "--p", "3", "--k", "1", "--brute")
    assert code == 0 and json.loads(out) == {"bruteforce": 18, "formula": 18, "q": 3}
    code, out, _ = run(capsys, "fn", "check", "--p", "5", "--f", "1,0,1")
    assert code == 0 and json.loads(out)["pn"]
    code, out, _ = run(capsys, "fn", "check", "--p", "5", "--f", "0,0,0,1")
    assert code == 1


def test_welch_and_libound(capsys):
    code, out, _ = run(capsys, "welch", "--p", "3")
    assert code == 0 and json.loads(out)["i_max"] == pytest.approx(0.5)
    code, out, _ = run(capsys, "welch", "--n", "16", "--dim", "4")
    assert json.loads(out)["welch"] == pytest.approx((12 / 60) ** 0.5)
    code, out, _ = run(capsys, "libound", "--p", "2", "--k", "2")
    assert code == 0 and json.loads(out)["difference_set"]["ok"]


def test_sweep(tmp_path, capsys):
    code, out, _ = run(capsys, "sweep", "--construction", "q", "--q", "3,5,4")
    lines = out.strip().splitlines()
    assert code == 1  # q = 4 is recorded as an error row
    assert len(lines) == 1 + 8 + 1
    assert "EvenQ" in lines[-1]
    csv = tmp_path / "s.csv"
    assert run(capsys, "sweep", "--construction", "q1", "--q", "2,3", "--csv", str(csv))[0] == 0
    assert len(csv.read_text().splitlines()) == 7


def test_parse_poly():
    spec = make_field(3, 2)
    assert parse_poly("0;0;1,0", spec).coeffs == (0, 0, 1)
    assert parse_poly("2;;1", spec).coeffs == (2, 0, 1)
    assert parse_poly("0,0,1", make_field(5, 1)).coeffs == (0, 0, 1)


def test_tolerance_override_must_be_positive(capsys):
    assert run(capsys, "construct-q", "--p", "3", "--tol-bound", "-1")[0] == 2
