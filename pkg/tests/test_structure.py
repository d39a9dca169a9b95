from __future__ import annotations

from itertools import product as iproduct

import pytest

from shw import catalog
from shw.algebra import FiniteAlgebra, product, subalgebra
from shw.errors import InputError
from shw.structure import (
    CepReport,
    Morphism,
    all_subalgebras,
    all_subuniverses,
    automorphisms,
    classify_primality,
    congruence_join,
    congruence_lattice,
    congruence_meet,
    find_morphisms,
    has_cep,
    is_congruence,
    is_directly_indecomposable,
    is_simple,
    is_subdirectly_irreducible,
    principal_congruence,
    restrict_partition,
    subuniverse_closure,
)


def all_partitions(n):
    """Every partition of range(n) in normalized block form (oracle helper)."""
    if n == 0:
        yield ()
        return
    for rest in all_partitions(n - 1):
        k = max(rest) + 1 if rest else 0
        for blk in range(k + 1):
            yield rest + (blk,)


def brute_congruences(a: FiniteAlgebra):
    return sorted(p for p in all_partitions(a.size) if is_congruence(a, p))


def test_subuniverse_closure_from_constants():
    l1 = catalog.get("L1dm")
    assert subuniverse_closure(l1) == frozenset({0, 2})  # 0 -> 1 = 1 stays boolean
    l5 = catalog.get("L5dm")
    assert subuniverse_closure(l5) == frozenset({0, 1, 2})  # 0 -> 1 = a generates
    with pytest.raises(InputError):
        subuniverse_closure(l1, [7])


def test_all_subuniverses_l6dp_only_whole():
    subs = all_subuniverses(catalog.get("L6dp"))
    assert subs == [frozenset({0, 1, 2})]


def test_all_subuniverses_sorted_and_closed():
    d2 = catalog.get("D2")
    subs = all_subuniverses(d2)
    assert subs == sorted(subs, key=lambda s: (len(s), sorted(s)))
    for s in subs:
        assert subuniverse_closure(d2, s) == s
    assert frozenset({0, 1}) in subs and frozenset(range(4)) in subs


def test_subalgebra_of_s1_member_is_two():
    l1 = catalog.get("L1dm")
    two = subalgebra(l1, [0, 2])
    assert find_morphisms(two, catalog.get("2e"), "iso")


def test_find_morphisms_none_between_incompatible_chains():
    assert find_morphisms(catalog.get("L1dm"), catalog.get("L2dm"), "hom") == []
    assert find_morphisms(catalog.get("L1dm"), catalog.get("L2dm"), "embedding") == []


def test_find_morphisms_embedding_2e():
    embs = find_morphisms(catalog.get("2e"), catalog.get("L3dm"), "embedding")
    assert [m.mapping for m in embs] == [(0, 2)]
    assert all(m.check() for m in embs)


def test_find_morphisms_respects_fixed():
    d1 = catalog.get("D1")
    isos = find_morphisms(d1, d1, "iso", fixed={2: 3})
    assert [m.mapping for m in isos] == [(0, 1, 3, 2)]
    assert find_morphisms(d1, d1, "iso", fixed={0: 1}) == []


def test_automorphism_groups():
    # the a <-> b swap preserves the D1/D2 tables, D3 is rigid
    assert [m.mapping for m in automorphisms(catalog.get("D1"))] == [
        (0, 1, 2, 3), (0, 1, 3, 2)]
    assert len(automorphisms(catalog.get("D2"))) == 2
    assert len(automorphisms(catalog.get("D3"))) == 1
    assert len(automorphisms(catalog.get("L4dm"))) == 1


def test_morphism_check_rejects_bad_map():
    l1 = catalog.get("L1dm")
    assert not Morphism(l1, l1, (0, 0, 2)).check()  # collapses a without congruence


@pytest.mark.parametrize("key", ["2e", "L1dm", "L7dp", "D1", "D2", "D3"])
def test_congruence_lattice_matches_brute_force(key):
    a = catalog.get(key)
    assert congruence_lattice(a) == brute_congruences(a)


def test_congruence_lattice_of_square_matches_brute_force():
    sq = product(catalog.get("L1dm"), catalog.get("L1dm"))
    cons = congruence_lattice(sq)
    assert cons == brute_congruences(sq)
    # exactly the four congruences of a product of two simple factors
    assert len(cons) == 4
    left = tuple(i // 3 for i in range(9))   # kernel of first projection
    right = tuple(i % 3 for i in range(9))
    assert _norm(left) in cons and _norm(right) in cons


def _norm(p):
    seen = {}
    return tuple(seen.setdefault(b, len(seen)) for b in p)


def test_principal_congruence_collapses_simple():
    d3 = catalog.get("D3")
    for x in range(4):
        for y in range(x + 1, 4):
            assert principal_congruence(d3, x, y) == (0, 0, 0, 0)


def test_congruence_join_meet():
    sq = product(catalog.get("2e"), catalog.get("2e"))
    cons = congruence_lattice(sq)
    delta = tuple(range(4))
    nabla = (0,) * 4
    nontrivial = [p for p in cons if p not in (delta, nabla)]
    p, q = nontrivial
    assert congruence_meet(p, q) == delta
    assert congruence_join(sq, p, q) == nabla


def test_simplicity_and_si_agree_on_catalog_and_subalgebras():
    for key in catalog.family("all-simples"):
        a = catalog.get(key)
        assert is_simple(a)
        assert is_subdirectly_irreducible(a)
        for b in all_subalgebras(a):
            assert is_simple(b) == is_subdirectly_irreducible(b)
            assert is_simple(b)  # all subalgebras of catalog simples are simple


def test_trivial_algebra_not_simple():
    one = FiniteAlgebra("one", ("0",), ((0,),), ((0,),), ((0,),), (0,), 0, 0)
    assert not is_simple(one)
    assert not is_subdirectly_irreducible(one)
    assert not is_directly_indecomposable(one)


def test_direct_indecomposability():
    assert is_directly_indecomposable(catalog.get("D1"))
    sq = product(catalog.get("L1dm"), catalog.get("2e"))
    assert not is_directly_indecomposable(sq)


def test_restrict_partition():
    assert restrict_partition((0, 1, 2, 2), [0, 3]) == (0, 1)
    assert restrict_partition((0, 0, 1), [0, 1]) == (0, 0)


def test_cep_for_all_catalog_simples():
    for key in catalog.family("all-simples"):
        r = has_cep(catalog.get(key))
        assert isinstance(r, CepReport) and r.ok, (key, r.failures)


def test_primality_classification():
    assert classify_primality(catalog.get("2e")).verdict == "primal"
    assert classify_primality(catalog.get("2bare")).verdict == "primal"
    assert classify_primality(catalog.get("D3")).verdict == "primal"
    assert classify_primality(catalog.get("L6dm")).verdict == "primal"
    assert classify_primality(catalog.get("L1dm")).verdict == "semiprimal"
    assert classify_primality(catalog.get("L9dp")).verdict == "semiprimal"
    d1 = classify_primality(catalog.get("D1"))
    assert d1.verdict == "quasiprimal"
    # the a <-> b automorphism shows up as a non-identity internal iso
    assert any(not iso.is_identity for iso in d1.internal_isos)
    assert d1.automorphism_count == 2


def test_primality_requires_simple():
    sq = product(catalog.get("2e"), catalog.get("2e"))
    with pytest.raises(InputError):
        classify_primality(sq)


def test_internal_isos_of_semiprimal_are_identities():
    r = classify_primality(catalog.get("L2dm"))
    assert r.verdict == "semiprimal"
    assert r.internal_isos and all(iso.is_identity for iso in r.internal_isos)
