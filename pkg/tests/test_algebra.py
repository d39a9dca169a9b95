from __future__ import annotations

import pytest

from shw.algebra import (
    FiniteAlgebra,
    dumps,
    expand,
    from_json_dict,
    lattice_from_covers,
    loads,
    op_apply,
    product,
    subalgebra,
    to_json_dict,
    validate_lattice,
)
from shw.errors import InputError, SignatureError, StructuralError


def chain3(arrow=None, neg=None, name="c3"):
    return FiniteAlgebra(
        name, ("0", "a", "1"),
        join=((0, 1, 2), (1, 1, 2), (2, 2, 2)),
        meet=((0, 0, 0), (0, 1, 1), (0, 1, 2)),
        arrow=arrow, neg=neg, bot=0, top=2,
    )


def two(arrow=((1, 1), (0, 1))):
    return FiniteAlgebra("two", ("0", "1"),
                         join=((0, 1), (1, 1)), meet=((0, 0), (0, 1)),
                         arrow=arrow, neg=None, bot=0, top=1)


def test_structural_checks():
    with pytest.raises(StructuralError):
        FiniteAlgebra("bad", ("0", "0"), ((0,),), ((0,),), None, None, 0, 0)
    with pytest.raises(StructuralError):
        FiniteAlgebra("bad", ("0", "1"), ((0, 5), (1, 1)), ((0, 0), (0, 1)),
                      None, None, 0, 1)
    with pytest.raises(StructuralError):
        FiniteAlgebra("bad", ("0", "1"), ((0, 1), (1, 1)), ((0, 0),),
                      None, None, 0, 1)
    with pytest.raises(StructuralError):
        from_json_dict({"name": "x", "elements": ["0"]})


def test_validate_lattice_accepts_chain():
    assert validate_lattice(chain3()).ok


def test_validate_lattice_reports_law_failures_with_witness():
    broken = FiniteAlgebra("broken", ("0", "1"),
                           join=((0, 0), (0, 1)), meet=((0, 0), (0, 1)),
                           arrow=None, neg=None, bot=0, top=1)
    report = validate_lattice(broken)
    assert not report.ok
    laws = {f.law: f.witness for f in report.failures}
    assert "absorption-meet" in laws
    # first witness in lexicographic assignment order
    assert laws["absorption-meet"] == {"x": "1", "y": "0"}
    assert laws["bottom-unit"] == {"x": "1"}


def test_leq_and_constants():
    a = chain3()
    assert a.leq(0, 1) and a.leq(1, 2) and not a.leq(2, 1)
    assert a.index("a") == 1
    assert a.label(2) == "1"
    with pytest.raises(InputError):
        a.index("q")


def test_derived_operations():
    # arrow rows for 0, a, 1 giving a Heyting chain
    a = chain3(arrow=((2, 2, 2), (0, 2, 2), (0, 1, 2)), neg=(2, 1, 0))
    assert [a.star(x) for x in range(3)] == [2, 0, 0]
    assert a.dprime(1) == 1
    assert a.plus(1) == a.neg[a.star(a.neg[1])] == 2
    assert a.iter_primestar(1, 0) == 1
    assert a.iter_primestar(1, 2) == a.star(a.neg[a.star(a.neg[1])])


def test_derived_operations_require_signature():
    bare = chain3()
    with pytest.raises(SignatureError):
        bare.star(0)
    with pytest.raises(SignatureError):
        op_apply(chain3(arrow=((2, 2, 2), (0, 2, 2), (0, 1, 2))), "neg", [0])


def test_op_apply():
    a = chain3(arrow=((2, 2, 2), (0, 2, 2), (0, 1, 2)), neg=(2, 1, 0))
    assert op_apply(a, "join", (1, 2)) == 2
    assert op_apply(a, "star", (1,)) == 0
    assert op_apply(a, "plus", (0,)) == 2  # (0')*' = (1*)' = 0' = 1
    with pytest.raises(InputError):
        op_apply(a, "join", (1,))
    with pytest.raises(InputError):
        op_apply(a, "frobnicate", (1,))
    with pytest.raises(InputError):
        op_apply(a, "join", (1, 99))


def test_expand_schemes():
    base = chain3(arrow=((2, 2, 2), (0, 2, 2), (0, 1, 2)), name="L1")
    dm = expand(base, "dm")
    assert dm.name == "L1dm"
    assert dm.neg == (2, 1, 0)
    assert base.neg is None  # input untouched
    dp = expand(base, "dp")
    assert dp.neg == (2, 2, 0)
    assert validate_lattice(dm).failures == validate_lattice(base).failures


def test_expand_errors():
    base = chain3(arrow=((2, 2, 2), (0, 2, 2), (0, 1, 2)))
    with pytest.raises(InputError):
        expand(base, "e")  # scheme does not cover element a
    with pytest.raises(InputError):
        expand(base, "nonesuch")
    with pytest.raises(InputError):
        expand(expand(base, "dm"), "dm")


def test_lattice_from_covers_diamond():
    d = lattice_from_covers("M2", ("0", "a", "b", "1"),
                            [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    assert validate_lattice(d).ok
    assert d.join[d.index("a")][d.index("b")] == d.index("1")
    assert d.meet[d.index("a")][d.index("b")] == d.index("0")
    assert (d.bot, d.top) == (0, 3)


def test_lattice_from_covers_rejects_non_lattice():
    # two maximal elements: no top, no unique join
    with pytest.raises(InputError):
        lattice_from_covers("vee", ("0", "a", "b"), [("0", "a"), ("0", "b")])


def test_product_componentwise():
    t = two()
    p = product(t, t)
    assert p.size == 4
    assert validate_lattice(p).ok
    i = p.elements.index("(1,0)")
    j = p.elements.index("(0,1)")
    assert p.join[i][j] == p.top and p.meet[i][j] == p.bot
    assert p.arrow[i][j] == p.elements.index("(0,1)")


def test_product_signature_mismatch():
    with pytest.raises(SignatureError):
        product(two(), chain3())


def test_subalgebra_induced():
    a = chain3(arrow=((2, 2, 2), (0, 2, 2), (0, 1, 2)), neg=(2, 1, 0))
    s = subalgebra(a, [0, 2])
    assert s.elements == ("0", "1")
    assert s.arrow == ((1, 1), (0, 1))
    assert s.neg == (1, 0)
    with pytest.raises(InputError):
        subalgebra(a, [0, 1])  # not closed: a -> a = 1 missing
    with pytest.raises(InputError):
        subalgebra(a, [1, 2])  # constants missing


def test_json_roundtrip():
    a = chain3(arrow=((2, 2, 2), (0, 2, 2), (0, 1, 2)), neg=(2, 1, 0))
    assert loads(dumps(a)) == a
    bare = chain3()
    d = to_json_dict(bare)
    assert "arrow" not in d and "neg" not in d
    assert from_json_dict(d) == bare
    with pytest.raises(StructuralError):
        loads("{not json")
