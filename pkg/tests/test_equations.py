from __future__ import annotations

import pytest

from shw import catalog
from shw.algebra import FiniteAlgebra
from shw.equations import (
    SUITES,
    get_suite,
    holds_at,
    parse_ids_text,
    run_lemma_suite,
    satisfies,
    satisfies_quasi,
    satisfies_suite,
    suite_names,
)
from shw.errors import InputError, SignatureError
from shw.terms import parse_identity, parse_quasi


def test_satisfies_reports_first_lexicographic_witness():
    # SH4 fails on L5dm; scanning x then y in element order hits (0, a) first
    res = satisfies(catalog.get("L5dm"), parse_identity("(x ^ y) -> y = 1"))
    assert not res.holds
    assert res.witness == {"x": 0, "y": 1}
    assert res.witness_labels(catalog.get("L5dm")) == {"x": "0", "y": "a"}


def test_satisfies_commutative_on_symmetric_table():
    assert satisfies(catalog.get("L10dm"), parse_identity("x -> y = y -> x")).holds
    assert satisfies(catalog.get("D1"), parse_identity("x -> y = y -> x")).holds
    assert not satisfies(catalog.get("L9dm"), parse_identity("x -> y = y -> x")).holds


def test_satisfies_leq_identity():
    assert satisfies(catalog.get("D3"), parse_identity("x ^ y <= x")).holds
    res = satisfies(catalog.get("D3"), parse_identity("x <= x ^ y"))
    assert not res.holds and res.witness == {"x": 1, "y": 0}


def test_satisfies_closed_identity_no_variables():
    assert satisfies(catalog.get("2e"), parse_identity("0' = 1")).holds
    assert not satisfies(catalog.get("2bare"), parse_identity("0 -> 1 = 1")).holds


def test_satisfies_quasi():
    q = parse_quasi("x != 1 => x <= x'")
    assert satisfies_quasi(catalog.get("L3dm"), q).holds
    # on L5dp the middle element negates to top, premises hold, conclusion too
    assert satisfies_quasi(catalog.get("L5dp"), q).holds
    bad = parse_quasi("x = x => x = 1")
    res = satisfies_quasi(catalog.get("2e"), bad)
    assert not res.holds and res.witness == {"x": 0}
    with pytest.raises(InputError):
        satisfies_quasi(catalog.get("2e"), parse_identity("x = x"))


def test_holds_at_single_assignment():
    d2 = catalog.get("D2")
    ident = parse_identity("x v x* = 1")
    assert holds_at(d2, ident, {"x": d2.index("a")})


def test_signature_fail_fast():
    bare = catalog.get("L1")  # no negation
    with pytest.raises(SignatureError):
        satisfies_suite(bare, "DQD")
    with pytest.raises(SignatureError):
        satisfies(bare, parse_identity("x' = x"))
    lattice_only = catalog.get("double-diamond")
    with pytest.raises(SignatureError):
        satisfies_suite(lattice_only, "SH")


def test_bare_chains_pass_sh():
    for i in range(1, 11):
        assert satisfies_suite(catalog.get(f"L{i}"), "SH").holds
    assert satisfies_suite(catalog.get("2"), "SH").holds
    assert satisfies_suite(catalog.get("2bar"), "SH").holds


def test_suite_registry():
    assert "SH" in suite_names() and "RDQDStSH1" in suite_names()
    rq = get_suite("RDQDStSH1")
    sources = [s.source for s in rq.items]
    assert "x* v x** = 1" in sources
    assert len(sources) == len(set(sources))  # composites deduplicate
    with pytest.raises(InputError):
        get_suite("NOPE")


def test_suite_conformance_split():
    # dm-chains are involutive, dp-chains pseudocomplemented, diamonds boolean
    for i in range(1, 11):
        assert satisfies_suite(catalog.get(f"L{i}dm"), "DM").holds
        assert not satisfies_suite(catalog.get(f"L{i}dp"), "DM").holds
        assert satisfies_suite(catalog.get(f"L{i}dp"), "PC").holds
    for k in ("D1", "D2", "D3"):
        assert satisfies_suite(catalog.get(k), "Bo").holds
        assert satisfies_suite(catalog.get(k), "DM").holds
    for k in ("2e", "2bare"):
        assert satisfies_suite(catalog.get(k), "DM").holds


def test_suite_report_first_failure():
    rep = satisfies_suite(catalog.get("L5dm"), "H")
    assert not rep.holds
    ff = rep.first_failure()
    assert ff.source == "(x ^ y) -> y = 1"
    assert ff.result.witness == {"x": 0, "y": 1}


def test_sh4_and_co_filters():
    sh4 = [k for k in catalog.family("rdmsh1-simples")
           if satisfies_suite(catalog.get(k), "SH4").holds]
    assert sh4 == ["2e", "L1dm", "D2"]
    co = [k for k in catalog.family("rdmsh1-simples")
          if satisfies_suite(catalog.get(k), "Co").holds]
    assert co == ["2bare", "L10dm", "D1"]


def test_parse_ids_text():
    sections = parse_ids_text("# c\n[A]\nx = x\nlbl: x <= 1\n", labeled=True)
    assert list(sections) == ["A"]
    labels = [lbl for lbl, _ in sections["A"]]
    assert labels == ["A-1", "lbl"]
    with pytest.raises(InputError):
        parse_ids_text("x = x\n")  # statement before section
    with pytest.raises(InputError):
        parse_ids_text("[A]\n[A]\n")


def test_run_lemma_suite_all_hold():
    reports = run_lemma_suite()
    assert {r.name for r in reports} == {"dqd-basic", "regular-dm", "stone-property"}
    for r in reports:
        assert r.holds, (r.name, [i.label for i in r.items if not i.holds])
    by_name = {r.name: r for r in reports}
    assert by_name["dqd-basic"].algebras == catalog.family("all-simples")
    assert by_name["stone-property"].algebras == catalog.family("rdmsh1-simples")


def test_run_lemma_suite_subset():
    reports = run_lemma_suite(["stone-property"])
    assert len(reports) == 1 and reports[0].name == "stone-property"
