import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from ternary_hadamard.cli import main
from ternary_hadamard.recipes import (COMMANDS, RecipeError, bundled_recipes, describe,
                                      load_recipe, parse_recipe, report_json, run_recipe,
                                      strip_timing)

DATA = Path(__file__).parent / "data"


def test_bundled_recipes_parse():
    rs = bundled_recipes()
    assert {"nv5-full", "figure2", "theorem-p29", "full-weight-counts",
            "negacirculant-d18", "p36-cliques"} <= set(rs)
    for r in rs.values():
        r.validate()
        assert all(s.command in COMMANDS for s in r.steps)


def test_nv5_full_passes_and_is_idempotent():
    r = load_recipe("nv5-full")
    a, b = run_recipe(r), run_recipe(r)
    assert a["passed"] and a["status"] == "pass"
    assert all(x["passed"] for x in a["assertions"])
    assert report_json(strip_timing(a)) == report_json(strip_timing(b))


def test_figure2_recipe():
    rep = run_recipe(load_recipe("figure2"))
    assert rep["passed"], [a for a in rep["assertions"] if not a["passed"]]


def test_wrong_expectation_fails_with_diff():
    rep = run_recipe(load_recipe(str(DATA / "wrong-count.recipe")))
    assert not rep["passed"]
    bad = [a for a in rep["assertions"] if not a["passed"]]
    assert len(bad) == 1 and bad[0]["diff"] == "expected 25, got 24"


def test_long_recipe_skipped_in_fast_tier():
    rep = run_recipe(load_recipe("p36-cliques"), tier="fast")
    assert rep["status"] == "skipped" and rep["steps"] == []


def test_recipe_errors():
    with pytest.raises(RecipeError):
        parse_recipe("name: x\nstep: a = no_such_command\n")
    with pytest.raises(RecipeError):
        parse_recipe("name: x\nstep: a = nv_code p=5\nexpect: b.n == 12\n")
    with pytest.raises(RecipeError):
        parse_recipe("step: a = nv_code p=5\n")
    with pytest.raises(RecipeError):
        load_recipe("not-a-recipe")


def test_describe():
    text = describe("NV(5,+1)")
    assert "n = 12, k = 6" in text and "d = 6" in text and "FAILED" not in text
    assert "[ok] self-dual" in text
    text = describe("H_NV(5,+1)")
    assert "order = 12" in text and "[ok] skew after scaling by a = +1" in text
    with pytest.raises(RecipeError):
        describe("unknown")


@pytest.fixture
def runner():
    return CliRunner()


def test_cli_construct_and_verify(runner, tmp_path):
    out = tmp_path / "nv.txt"
    r = runner.invoke(main, ["--json", "construct", "NV(5,+1)", "-o", str(out)])
    assert r.exit_code == 0 and json.loads(r.output)["self_dual"]
    r = runner.invoke(main, ["--json", "verify", str(out)])
    data = json.loads(r.output)
    assert data["n"] == 12 and data["d"] == 6 and data["self_dual"]


def test_cli_hadamard_and_equiv(runner, tmp_path):
    h = tmp_path / "h.txt"
    assert runner.invoke(main, ["hadamard", "build-nv", "5", "1", "-o", str(h)]).exit_code == 0
    r = runner.invoke(main, ["hadamard", "verify", str(h), "--code", "NV(5,1)"])
    data = json.loads(r.output)
    assert data["hadamard"] and data["rows_in_code"] and data["skew"] and data["rank3"] == 6
    r = runner.invoke(main, ["equiv", "check", str(h), "H_SDS(5,1)"])
    data = json.loads(r.output)
    assert data["equivalent"] and "witness" in data and "convention_note" in data
    r = runner.invoke(main, ["equiv", "autorder", "Paley_I(11)"])
    data = json.loads(r.output)
    assert data["aut_order"] == 190080 and "convention_note" in data
    r = runner.invoke(main, ["equiv", "canon", str(h)])
    assert r.exit_code == 0 and len(r.output.split()) == 12


def test_cli_octal_roundtrip(runner, tmp_path):
    h = tmp_path / "h.txt"
    runner.invoke(main, ["hadamard", "paley", "5", "--kind", "II", "-o", str(h)])
    r = runner.invoke(main, ["hadamard", "octal", "encode", str(h)])
    o = tmp_path / "h.oct"
    o.write_text(r.output)
    r = runner.invoke(main, ["hadamard", "octal", "decode", str(o)])
    dec = tmp_path / "dec.txt"
    dec.write_text(r.output)
    assert [l for l in h.read_text().splitlines() if not l.startswith("#")] == r.output.split()
    r = runner.invoke(main, ["equiv", "check", str(o), str(dec)])
    assert json.loads(r.output)["equivalent"]


def test_cli_hadamard_verify_rejects(runner, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("++++\n++++\n++++\n++++\n")
    r = runner.invoke(main, ["hadamard", "verify", str(bad)])
    assert r.exit_code == 1 and not json.loads(r.output)["hadamard"]


def test_cli_search(runner, tmp_path):
    r = runner.invoke(main, ["--threads", "2", "search", "fullweight", "P(11)"])
    assert json.loads(r.output)["count"] == 48
    outdir = tmp_path / "cl"
    r = runner.invoke(main, ["search", "clique", "NV(5,1)", "--size", "12", "-o", str(outdir)])
    data = json.loads(r.output)
    assert data["found"] == 1 and data["status"] == "exhaustive"
    assert len(list(outdir.iterdir())) == 1
    seed = tmp_path / "seed.txt"
    seed.write_text("\n".join((outdir / "clique_0000.txt").read_text().split()[:3]) + "\n")
    r = runner.invoke(main, ["search", "clique", "NV(5,1)", "--size", "12", "--seed-rows", str(seed)])
    assert json.loads(r.output)["found"] == 1
    r = runner.invoke(main, ["search", "minweight", "QR(11)"])
    assert json.loads(r.output)["d"] == 6


def test_cli_recipes(runner):
    r = runner.invoke(main, ["recipe", "list"])
    assert "nv5-full" in r.output and "long" in r.output
    r = runner.invoke(main, ["recipe", "run", "nv5-full"])
    assert r.exit_code == 0 and json.loads(r.output)["passed"]
    r = runner.invoke(main, ["recipe", "run", str(DATA / "wrong-count.recipe")])
    assert r.exit_code == 1 and json.loads(r.output)["status"] == "fail"
    r = runner.invoke(main, ["recipe", "run", "nope"])
    assert r.exit_code != 0


def test_cli_describe(runner):
    r = runner.invoke(main, ["describe", "NV(5,+1)"])
    assert r.exit_code == 0 and "d = 6" in r.output
    r = runner.invoke(main, ["describe", "unknown"])
    assert r.exit_code != 0


def test_cli_bad_names(runner):
    r = runner.invoke(main, ["construct", "XYZ(3)"])
    assert r.exit_code != 0
