"""Amalgamation instances and verdicts within a subvariety.

An amalgam is a pair of embeddings i: A -> B, j: A -> C between simples of
the variety.  ``decide_amalgamation`` scans the simples of the variety for
a common extension; since homomorphisms out of simples that separate 0 and
1 are automatically embeddings, a product amalgamates iff one of its
factors does, so scanning simples is a complete decision procedure.
``brute_force_amalgamation`` ignores that reduction and searches products
of simples and their subalgebras directly; it is the independent
cross-check, and can only answer "found" or "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

from . import catalog
from .algebra import FiniteAlgebra, product, subalgebra
from .errors import InputError
from .structure import Morphism, all_subuniverses, automorphisms, find_morphisms
from .varieties import ClosedSimpleSet


@lru_cache(maxsize=None)
def _embeddings(src_key: str, dst_key: str) -> tuple[Morphism, ...]:
    return tuple(find_morphisms(catalog.get(src_key), catalog.get(dst_key),
                                "embedding"))


@dataclass(frozen=True)
class Amalgam:
    base: str
    left: str
    right: str
    into_left: Morphism   # base -> left
    into_right: Morphism  # base -> right


@dataclass(frozen=True)
class Witness:
    target: str
    from_left: Morphism
    from_right: Morphism

    def validate(self, am: Amalgam) -> bool:
        f, g = self.from_left, self.from_right
        if not (f.check() and g.check() and f.is_injective and g.is_injective):
            return False
        size = am.into_left.source.size
        return all(f(am.into_left(x)) == g(am.into_right(x)) for x in range(size))


@dataclass(frozen=True)
class Verdict:
    amalgam: Amalgam
    kind: str  # "witness" | "obstructed" | "inconclusive"
    witness: Witness | None = None
    reasons: tuple[tuple[str, str], ...] = ()  # (candidate, why it failed)


def _compose(outer: Morphism, inner: Morphism) -> tuple[int, ...]:
    return tuple(outer.mapping[v] for v in inner.mapping)


def enumerate_amalgams(variety: ClosedSimpleSet) -> list[Amalgam]:
    """All amalgams over the variety, up to automorphisms of the base.

    Pairs (i, j) and (i a, j a) for an automorphism a of the base give the
    same amalgamation problem, so only the lexicographically least pair of
    each orbit is kept.
    """
    members = variety.members()
    out: list[Amalgam] = []
    for base in members:
        auts = automorphisms(catalog.get(base))
        for left in members:
            embs_l = _embeddings(base, left)
            if not embs_l:
                continue
            for right in members:
                embs_r = _embeddings(base, right)
                if not embs_r:
                    continue
                seen = set()
                for i in embs_l:
                    for j in embs_r:
                        orbit = min((_compose(i, a), _compose(j, a)) for a in auts)
                        if orbit in seen:
                            continue
                        seen.add(orbit)
                        src = catalog.get(base)
                        out.append(Amalgam(
                            base, left, right,
                            Morphism(src, catalog.get(left), orbit[0]),
                            Morphism(src, catalog.get(right), orbit[1])))
    return out


def decide_amalgamation(am: Amalgam, variety: ClosedSimpleSet) -> Verdict:
    """Search the simples of the variety for a common extension."""
    members = variety.members()
    for key in (am.base, am.left, am.right):
        if key not in members:
            raise InputError(f"{key} is not in the variety")
    n = am.into_left.source.size
    reasons = []
    for key in members:
        embs_l = _embeddings(am.left, key)
        if not embs_l:
            reasons.append((key, f"no embedding of {am.left}"))
            continue
        embs_r = _embeddings(am.right, key)
        if not embs_r:
            reasons.append((key, f"no embedding of {am.right}"))
            continue
        for f in embs_l:
            for g in embs_r:
                if all(f(am.into_left(x)) == g(am.into_right(x)) for x in range(n)):
                    return Verdict(am, "witness", Witness(key, f, g))
        reasons.append((key, "no pair of embeddings agrees on the base"))
    return Verdict(am, "obstructed", reasons=tuple(reasons))


@lru_cache(maxsize=None)
def _product_candidates(keys: tuple[str, ...]) -> tuple[FiniteAlgebra, ...]:
    """A product of catalog simples together with all its subalgebras."""
    if len(keys) == 1:
        big = catalog.get(keys[0])
    else:
        big = product(catalog.get(keys[0]), catalog.get(keys[1]))
    subs = all_subuniverses(big)
    return tuple(subalgebra(big, s) if len(s) != big.size else big for s in subs)


def brute_force_amalgamation(am: Amalgam, variety: ClosedSimpleSet,
                             max_factors: int = 2) -> Verdict:
    """Search products of at most max_factors simples (and subalgebras).

    Candidates are scanned in a fixed order: single factors first, then
    pairs.  A miss is reported as "inconclusive", never as a refutation.
    """
    if max_factors < 1:
        raise InputError("max_factors must be >= 1")
    members = variety.members()
    n = am.into_left.source.size
    pools = [(k,) for k in members]
    if max_factors >= 2:
        pools += list(combinations_with_replacement(members, 2))
    for keys in pools:
        for cand in _product_candidates(tuple(keys)):
            for f in find_morphisms(catalog.get(am.left), cand, "embedding"):
                fixed = {am.into_right(x): f(am.into_left(x)) for x in range(n)}
                gs = find_morphisms(catalog.get(am.right), cand, "embedding",
                                    fixed=fixed)
                if gs:
                    return Verdict(am, "witness", Witness(cand.name, f, gs[0]))
    return Verdict(am, "inconclusive")


@dataclass(frozen=True)
class SurveyRow:
    amalgam: Amalgam
    decided: Verdict
    brute: Verdict

    @property
    def consistent(self) -> bool:
        """No contradiction between the two procedures.

        The scan is a decision procedure; brute force can only confirm a
        witness or come back empty.  The pair is inconsistent only when
        one side finds a witness that fails validation or the brute force
        finds an extension the decision procedure ruled out.
        """
        if self.decided.kind == "witness":
            if not self.decided.witness.validate(self.amalgam):
                return False
            return self.brute.kind == "witness" and \
                self.brute.witness.validate(self.amalgam)
        return self.brute.kind == "inconclusive"


def survey(variety: ClosedSimpleSet, max_factors: int = 2) -> list[SurveyRow]:
    """Decide every amalgam of the variety both ways."""
    rows = []
    for am in enumerate_amalgams(variety):
        rows.append(SurveyRow(
            am,
            decide_amalgamation(am, variety),
            brute_force_amalgamation(am, variety, max_factors=max_factors)))
    return rows


def has_amalgamation_property(variety: ClosedSimpleSet) -> tuple[bool, list[Verdict]]:
    """The variety-level verdict plus the obstructed instances."""
    obstructed = []
    for am in enumerate_amalgams(variety):
        v = decide_amalgamation(am, variety)
        if v.kind != "witness":
            obstructed.append(v)
    return not obstructed, obstructed
