from __future__ import annotations

import pytest

from shw import catalog
from shw.amalgamation import (
    Verdict,
    Witness,
    brute_force_amalgamation,
    decide_amalgamation,
    enumerate_amalgams,
    has_amalgamation_property,
    survey,
)
from shw.errors import InputError
from shw.varieties import closure


def _variety(*gens: str):
    return closure(gens, "rdqdstsh1")


def _find(ams, base, left, right):
    hits = [a for a in ams if (a.base, a.left, a.right) == (base, left, right)]
    assert hits, f"no amalgam ({base}; {left}, {right})"
    return hits


def test_two_element_variety_has_one_amalgam():
    v = _variety("2e")
    ams = enumerate_amalgams(v)
    assert len(ams) == 1
    a = ams[0]
    assert (a.base, a.left, a.right) == ("2e", "2e", "2e")
    assert a.into_left.mapping == (0, 1) and a.into_right.mapping == (0, 1)
    verdict = decide_amalgamation(a, v)
    assert verdict.kind == "witness" and verdict.witness.target == "2e"
    assert brute_force_amalgamation(a, v, max_factors=1).kind == "witness"


def test_rigid_chain_only_degenerate_amalgam():
    # L5dm has no proper subalgebra and no nontrivial automorphism, so the
    # singleton variety admits exactly the identity amalgam
    v = _variety("L5dm")
    assert v.members() == ("L5dm",)
    ams = enumerate_amalgams(v)
    assert len(ams) == 1
    assert ams[0].into_left.mapping == (0, 1, 2)


def test_enumeration_dedups_by_base_automorphism():
    # D1 has one nontrivial automorphism (the coatom swap); the four
    # embedding pairs D1 => D1 collapse to two orbits
    v = _variety("D1")
    assert v.members() == ("2bare", "D1")
    ams = enumerate_amalgams(v)
    assert len(ams) == 6
    self_ams = _find(ams, "D1", "D1", "D1")
    assert sorted(a.into_right.mapping for a in self_ams) == [
        (0, 1, 2, 3),
        (0, 1, 3, 2),
    ]
    for a in self_ams:
        assert a.into_left.mapping == (0, 1, 2, 3)


def test_mixed_variety_enumeration():
    v = _variety("L1dm", "D2")
    assert v.members() == ("2e", "L1dm", "D2")
    ams = enumerate_amalgams(v)
    assert len(ams) == 12
    _find(ams, "2e", "L1dm", "D2")


def test_identity_witness():
    v = _variety("L1dm")
    a = _find(enumerate_amalgams(v), "2e", "L1dm", "L1dm")[0]
    verdict = decide_amalgamation(a, v)
    assert verdict.kind == "witness"
    w = verdict.witness
    assert w.target == "L1dm"
    assert w.from_left.mapping == (0, 1, 2) and w.from_right.mapping == (0, 1, 2)
    assert w.validate(a)


def test_inclusion_witness():
    v = _variety("D2")
    a = _find(enumerate_amalgams(v), "2e", "2e", "D2")[0]
    verdict = decide_amalgamation(a, v)
    assert verdict.kind == "witness"
    w = verdict.witness
    assert w.target == "D2"
    assert w.from_left.mapping == (0, 1)          # 2e into {0,1} of D2
    assert w.from_right.mapping == (0, 1, 2, 3)   # identity on D2
    assert w.validate(a)


def test_incompatible_chains_are_obstructed():
    v = _variety("L1dm", "L2dm")
    a = _find(enumerate_amalgams(v), "2e", "L1dm", "L2dm")[0]
    verdict = decide_amalgamation(a, v)
    assert verdict.kind == "obstructed"
    assert verdict.reasons == (
        ("2e", "no embedding of L1dm"),
        ("L1dm", "no embedding of L2dm"),
        ("L2dm", "no embedding of L1dm"),
    )
    # the oracle cannot refute, only fail to find
    assert brute_force_amalgamation(a, v).kind == "inconclusive"


C10DM_OBSTRUCTED = {
    ("2e", "L1dm", "L2dm"), ("2e", "L1dm", "L3dm"), ("2e", "L1dm", "L4dm"),
    ("2e", "L2dm", "L1dm"), ("2e", "L2dm", "L3dm"), ("2e", "L2dm", "L4dm"),
    ("2e", "L3dm", "L1dm"), ("2e", "L3dm", "L2dm"), ("2e", "L3dm", "L4dm"),
    ("2e", "L4dm", "L1dm"), ("2e", "L4dm", "L2dm"), ("2e", "L4dm", "L3dm"),
    ("2bare", "L9dm", "L10dm"), ("2bare", "L10dm", "L9dm"),
}


def test_c10dm_survey():
    v = _variety(*catalog.family("C10dm"))
    rows = survey(v)
    assert len(rows) == 44
    obstructed = {
        (r.amalgam.base, r.amalgam.left, r.amalgam.right)
        for r in rows if r.decided.kind == "obstructed"
    }
    assert obstructed == C10DM_OBSTRUCTED
    for r in rows:
        assert r.consistent
        if r.decided.kind == "witness":
            assert r.decided.witness.target in v.members()
    ok, obs = has_amalgamation_property(v)
    assert not ok and len(obs) == 14


def test_singleton_varieties_decide_and_brute_agree():
    total = 0
    for key in catalog.family("all-simples"):
        rows = survey(_variety(key))
        total += len(rows)
        assert all(r.consistent for r in rows)
        # singleton-generated subvarieties all amalgamate
        assert all(r.decided.kind == "witness" for r in rows)
    assert total == 96 - 13  # diamond variety contributes the rest


def test_diamond_variety_has_ap():
    v = _variety("D1", "D2", "D3")
    rows = survey(v)
    assert len(rows) == 13
    assert all(r.consistent and r.decided.kind == "witness" for r in rows)


def test_full_ambient_verdict_table():
    v = _variety(*catalog.family("all-simples"))
    ams = enumerate_amalgams(v)
    assert len(ams) == 161
    obstructed = [a for a in ams if decide_amalgamation(a, v).kind != "witness"]
    assert len(obstructed) == 92


def test_tampered_witness_fails_validation():
    v = _variety("D2")
    a = _find(enumerate_amalgams(v), "2e", "2e", "D2")[0]
    w = decide_amalgamation(a, v).witness
    flipped = Witness(w.target, w.from_left,
                      type(w.from_right)(w.from_right.source,
                                         w.from_right.target, (1, 0, 2, 3)))
    assert not flipped.validate(a)


def test_membership_precondition():
    v = _variety("L1dm")
    a = _find(enumerate_amalgams(_variety("D2")), "2e", "2e", "D2")[0]
    with pytest.raises(InputError):
        decide_amalgamation(a, v)
    with pytest.raises(InputError):
        brute_force_amalgamation(a, _variety("D2"), max_factors=0)
