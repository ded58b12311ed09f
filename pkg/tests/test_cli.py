import json

import pytest

from gerbecalc.cli import main


def gen(tmp_path, mode, *extra, name=None):
    out = tmp_path / (name or f"{mode}.json")
    assert main(["generate", mode, "--output", str(out), *extra]) == 0
    return out


def check(path, *extra, out=None):
    args = ["check", "--input", str(path), "--jobs", "1", *extra]
    if out is not None:
        args += ["--output", str(out)]
    return main(args)


@pytest.mark.parametrize("mode", ["trivial", "torsor", "coboundary", "abelian", "cm"])
def test_generated_datasets_pass(tmp_path, mode):
    assert check(gen(tmp_path, mode, "--seed", "3")) == 0


def test_generate_is_byte_stable(tmp_path):
    a = gen(tmp_path, "coboundary", "--seed", "7", name="a.json")
    b = gen(tmp_path, "coboundary", "--seed", "7", name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_central_corruption_exits_1_and_names_cocg(tmp_path):
    path = gen(tmp_path, "coboundary", "--seed", "2")
    data = json.loads(path.read_text())
    # g unitriangular, so g (I + E13) only adds 1 in the corner
    data["gerbe"]["g"]["0,1,3"][0][2] += " + 1"
    path.write_text(json.dumps(data))
    rep = tmp_path / "rep.json"
    assert check(path, "--suite", "gerbe", "--report", "json", out=rep) == 1
    fails = [(r["tag"], r["simplex"]) for r in json.loads(rep.read_text())["records"] if r["verdict"] == "fail"]
    # every failure reads the perturbed g_013: the quadruple cocycle and the two triple relations
    assert sorted(fails) == sorted([("cocg", [0, 1, 2, 3]), ("cocep2", [0, 1, 3]), ("cockap2", [0, 1, 3])])


@pytest.mark.parametrize("text", ["{}", "not json", '{"format": "gerbecalc-dataset/1", "nerve": 3}'])
def test_malformed_input_exits_2(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert check(path) == 2


def test_bad_parameters_exit_2(tmp_path):
    assert check(tmp_path / "missing.json") == 2
    assert main(["generate", "nosuchmode"]) == 2
    assert main(["generate", "abelian", "--flavor", "u3"]) == 2
    assert main(["generate", "coboundary", "--opens", "9"]) == 2
    assert main(["check", "--input", "x", "--jobs", "0"]) == 2
    assert main([]) == 2


def test_empty_nerve_is_vacuous(tmp_path):
    path = gen(tmp_path, "torsor")
    data = json.loads(path.read_text())
    data["nerve"] = {"indices": [], "pairs": [], "triples": [], "quadruples": []}
    data["torsor"] = {k: ({} if isinstance(v, dict) else v) for k, v in data["torsor"].items()}
    path.write_text(json.dumps(data))
    rep = tmp_path / "rep.json"
    assert check(path, "--suite", "torsor", "--report", "json", out=rep) == 0
    doc = json.loads(rep.read_text())
    assert doc["summary"]["vacuous"] is True and "empty nerve" in doc["notes"]
    # the curvature of mu needs no open set and still runs
    assert check(path, "--suite", "group", "--report", "json", out=rep) == 0
    assert [r["tag"] for r in json.loads(rep.read_text())["records"]] == ["defkapmu0"]


def test_jobs_do_not_change_the_report(tmp_path):
    path = gen(tmp_path, "coboundary", "--seed", "1")
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert check(path, "--report", "json", out=r1) == 0
    assert main(["check", "--input", str(path), "--jobs", "2", "--report", "json", "--output", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_derive_is_idempotent(tmp_path):
    path = gen(tmp_path, "coboundary", "--seed", "4")
    once, twice = tmp_path / "once.json", tmp_path / "twice.json"
    assert main(["derive", "--input", str(path), "--output", str(once)]) == 0
    assert main(["derive", "--input", str(once), "--output", str(twice)]) == 0
    assert once.read_bytes() == twice.read_bytes()
    assert check(once) == 0


def test_derive_needs_gerbe(tmp_path):
    assert main(["derive", "--input", str(gen(tmp_path, "torsor"))]) == 2


def test_normalize_writes_checked_section(tmp_path):
    path = gen(tmp_path, "cm", "--seed", "5", "--kernel", "full")
    out = tmp_path / "norm.json"
    assert main(["normalize", "--input", str(path), "--output", str(out)]) == 0
    data = json.loads(out.read_text())
    assert set(data["crossed_module"]["normalized"]) == {"g", "chi"}
    assert check(out, "--suite", "cm") == 0
    again = tmp_path / "again.json"
    assert main(["normalize", "--input", str(out), "--output", str(again)]) == 0
    assert out.read_bytes() == again.read_bytes()


def test_normalize_rejects_broken_phi(tmp_path):
    path = gen(tmp_path, "cm", "--seed", "5")
    data = json.loads(path.read_text())
    data["crossed_module"]["phi"][0][0][2] += " + x1"
    path.write_text(json.dumps(data))
    assert main(["normalize", "--input", str(path)]) == 1
    assert check(path, "--suite", "cm") == 1
