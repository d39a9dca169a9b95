from __future__ import annotations

import json
from pathlib import Path

import pytest
from jsonschema import Draft7Validator
from referencing import Registry, Resource

from shw.algebra import from_json_dict, to_json_dict
from shw.catalog import get
from shw.cli import main, run

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def test_eval_prints_value(capsys):
    assert main(["eval", "D2", "0 -> 1"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_eval_with_assignment():
    r = run(["eval", "D2", "(x v y) -> 1", "--assign", "x=a,y=b"])
    assert (r.code, r.text) == (0, "1")
    r = run(["eval", "L3dm", "x'*", "--assign", "x=a"])
    assert (r.code, r.text) == (0, "0")


def test_check_identity_exit_codes():
    assert run(["check", "L10dm", "--identity", "x -> y = y -> x"]).code == 0
    r = run(["check", "L7dm", "--identity", "x -> y = y -> x"])
    assert r.code == 1
    assert "[x=0, y=a]" in r.text


def test_check_suite():
    r = run(["check", "L3dm", "--suite", "RDMSH2"])
    assert r.code == 0
    assert all(line.startswith("ok") for line in r.text.splitlines())
    assert run(["check", "L7dm", "--suite", "Co"]).code == 1


def test_catalog_list():
    r = run(["catalog", "list"])
    lines = r.text.splitlines()
    assert r.code == 0 and len(lines) == 38
    assert lines[0].split()[0] == "2"


def test_catalog_export_round_trip():
    r = run(["catalog", "export", "L3dm"])
    assert r.code == 0
    back = from_json_dict(json.loads(r.text))
    assert to_json_dict(back) == to_json_dict(get("L3dm"))


def test_structure_commands():
    r = run(["structure", "cons", "D1"])
    assert r.code == 0 and len(r.text.splitlines()) == 2
    r = run(["structure", "subs", "2e"])
    assert r.text == "{0,1}"
    r = run(["structure", "autos", "D1"])
    assert len(r.text.splitlines()) == 2
    assert run(["structure", "cep", "L5dm"]).code == 0


def test_simple():
    assert run(["simple", "D1"]).code == 0
    r = run(["simple", "double-diamond"])
    assert r.code == 1
    assert "not simple" in r.text


def test_primality_line():
    r = run(["primality", "L9dm"])
    assert r.code == 0
    assert r.text.startswith("semiprimal")


def test_verify_lemmas():
    r = run(["verify", "lemmas"])
    assert r.code == 0 and len(r.text.splitlines()) == 3
    r = run(["verify", "lemmas", "--group", "stone-property"])
    assert r.code == 0 and len(r.text.splitlines()) == 1


def test_verify_bases_reports_known_discrepancy():
    r = run(["verify", "bases"])
    assert r.code == 1
    failing = [l for l in r.text.splitlines() if l.startswith("FAIL")]
    assert len(failing) == 1 and "arrow-exchange" in failing[0]
    assert "[x=0, y=a, z=0]" in r.text
    # corollaries is an accepted alias for the same report
    assert run(["verify", "corollaries"]).code == 1


def test_verify_lattice_cep_primality():
    assert run(["verify", "lattice"]).code == 0
    assert run(["verify", "cep"]).code == 0
    r = run(["verify", "primality"])
    assert r.code == 0
    assert "reading dm-and-dp: matches" in r.text
    assert "reading dm-only: differs" in r.text


def test_verify_stone():
    r = run(["verify", "stone", "--max-size", "3"])
    assert r.code == 0
    assert r.text.splitlines()[-1] == "scan of size <= 3: complete, no violators"


def test_variety_commands():
    assert run(["variety", "member", "2e", "--gens", "L1dm"]).code == 0
    assert run(["variety", "member", "L2dm", "--gens", "L1dm"]).code == 1
    r = run(["variety", "count", "--ambient", "rdpcsh1"])
    assert (r.code, r.text) == (0, "1360")


def test_amalgam_check_witnessed_variety():
    r = run(["amalgam", "check", "--variety", "D1"])
    assert r.code == 0
    assert r.text.splitlines()[-1].endswith("computed: agrees")


def test_amalgam_check_obstructed_variety():
    r = run(["amalgam", "check", "--variety", "L1dm,L2dm", "--oracle"])
    assert r.code == 1
    assert "(2e; L1dm, L2dm) obstructed" in r.text
    assert "fails for V(L1dm,L2dm)" in r.text


def test_search_exit_codes():
    r = run(["search", "--lattice", "L1", "--require", "SH,Co"])
    assert r.code == 0
    assert r.text.splitlines()[0].startswith("1 solutions, exhausted")
    assert run(["search", "--lattice", "2", "--require", "SH",
                "--forbid", "SH"]).code == 1
    assert run(["search", "--lattice", "double-diamond",
                "--timeout", "0.0"]).code == 3


def test_search_from_file(tmp_path):
    doc = to_json_dict(get("double-diamond"))
    path = tmp_path / "dd.json"
    path.write_text(json.dumps(doc))
    r = run(["search", "--lattice", str(path), "--require", "SH,DQD,DM,L2,R",
             "--forbid", "St", "--limit", "1", "--order", "column-major"])
    assert r.code == 0
    found = from_json_dict(json.loads(r.text.splitlines()[1]))
    assert found.size == 7 and found.has_neg


def test_json_payloads_are_versioned():
    r = run(["--json", "check", "L7dm", "--identity", "x -> y = y -> x"])
    doc = json.loads(r.text)
    assert doc["schema"] == "shw.check/1"
    assert doc["items"][0]["witness"] == {"x": "0", "y": "a"}
    r = run(["--json", "variety", "count", "--ambient", "rdmsh1"])
    assert json.loads(r.text) == {"schema": "shw.variety-count/1",
                                  "ambient": "rdmsh1", "count": 9504}
    r = run(["--json", "search", "--lattice", "2", "--require", "SH"])
    doc = json.loads(r.text)
    assert doc["schema"] == "shw.search/1"
    assert [s["name"] for s in doc["solutions"]] == ["2#0", "2#1"]


def test_usage_and_input_errors(capsys):
    assert run(["simple", "nope"]).code == 2
    assert run(["catalog", "export"]).code == 2
    assert run(["eval", "D2", "x", "--assign", "x=z"]).code == 2
    assert run(["check", "L1dm"]).code == 2          # needs --suite or --identity
    assert run(["verify", "everything"]).code == 2   # unknown report
    assert main(["simple", "nope"]) == 2
    out = capsys.readouterr()
    assert out.out == "" and "unknown catalog key" in out.err


_SCHEMA_CASES = [
    ("algebra.schema.json", ["catalog", "export", "L3dm"]),
    ("catalog-list.schema.json", ["catalog", "list"]),
    ("eval.schema.json", ["eval", "D2", "x -> y", "--assign", "x=a,y=b"]),
    ("check.schema.json", ["check", "L7dm", "--suite", "Co"]),
    ("structure.schema.json", ["structure", "subs", "D1"]),
    ("structure.schema.json", ["structure", "cons", "L5dm"]),
    ("structure.schema.json", ["structure", "autos", "D2"]),
    ("structure.schema.json", ["structure", "cep", "2e"]),
    ("simple.schema.json", ["simple", "L1dm"]),
    ("primality.schema.json", ["primality", "D1"]),
    ("verify-lemmas.schema.json", ["verify", "lemmas"]),
    ("verify-bases.schema.json", ["verify", "bases"]),
    ("verify-lattice.schema.json", ["verify", "lattice"]),
    ("verify-cep.schema.json", ["verify", "cep"]),
    ("verify-primality.schema.json", ["verify", "primality"]),
    ("verify-stone.schema.json", ["verify", "stone", "--max-size", "3"]),
    ("variety-member.schema.json", ["variety", "member", "2e", "--gens", "D1"]),
    ("variety-count.schema.json", ["variety", "count", "--ambient", "rdmsh1"]),
    ("amalgam.schema.json", ["amalgam", "check", "--variety", "L1dm,L2dm",
                             "--oracle"]),
    ("search.schema.json", ["search", "--lattice", "2", "--require", "SH"]),
]


@pytest.mark.parametrize("schema_name,argv", _SCHEMA_CASES,
                         ids=[" ".join(c[1]) for c in _SCHEMA_CASES])
def test_payload_matches_published_schema(schema_name, argv):
    registry = Registry().with_resources(
        (p.name, Resource.from_contents(json.loads(p.read_text())))
        for p in SCHEMA_DIR.glob("*.json"))
    schema = json.loads((SCHEMA_DIR / schema_name).read_text())
    validator = Draft7Validator(schema, registry=registry)
    r = run(["--json"] + argv)
    validator.validate(json.loads(r.text))


@pytest.mark.parametrize("jobs", ["1", "2"])
def test_search_jobs_insensitive(jobs):
    r = run(["--json", "--jobs", jobs, "search", "--lattice", "L1",
             "--require", "SH"])
    doc = json.loads(r.text)
    assert [s["name"] for s in doc["solutions"]] == [f"L1#{i}" for i in range(10)]
