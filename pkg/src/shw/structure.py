"""Structural analysis: subuniverses, morphisms, congruences, primality.

Everything here is exhaustive search over small finite algebras.  Results
come back in canonical orders (subuniverses by size then membership,
morphisms by mapping tuple) so reports are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .algebra import FiniteAlgebra, product, subalgebra
from .errors import InputError

Partition = tuple[int, ...]


# -- subuniverses ------------------------------------------------------------

def subuniverse_closure(a: FiniteAlgebra, seed: Iterable[int] = ()) -> frozenset[int]:
    """Smallest subuniverse containing the seed (and the constants)."""
    members = {a.bot, a.top} | set(seed)
    for x in members:
        if not 0 <= x < a.size:
            raise InputError(f"{a.name}: seed element {x} out of range")
    tables = [t for t in (a.join, a.meet, a.arrow) if t is not None]
    queue = list(members)
    while queue:
        x = queue.pop()
        produced = []
        if a.neg is not None:
            produced.append(a.neg[x])
        for table in tables:
            row = table[x]
            for y in list(members):
                produced.append(row[y])
                produced.append(table[y][x])
        for v in produced:
            if v not in members:
                members.add(v)
                queue.append(v)
    return frozenset(members)


def all_subuniverses(a: FiniteAlgebra) -> list[frozenset[int]]:
    """Every subuniverse, sorted by size then by sorted membership.

    Found by growing: close the constants, then repeatedly extend each
    known subuniverse by one missing generator.  Every subuniverse is the
    closure of finitely many generators, so the walk reaches all of them.
    """
    first = subuniverse_closure(a)
    seen = {first}
    queue = [first]
    while queue:
        s = queue.pop()
        for x in range(a.size):
            if x not in s:
                t = subuniverse_closure(a, s | {x})
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def all_subalgebras(a: FiniteAlgebra) -> list[FiniteAlgebra]:
    return [subalgebra(a, s) for s in all_subuniverses(a)]


# -- morphisms ----------------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    @property
    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.target.size

    def check(self) -> bool:
        """Re-verify preservation of every operation and both constants."""
        a, b, m = self.source, self.target, self.mapping
        if m[a.bot] != b.bot or m[a.top] != b.top:
            return False
        for x in range(a.size):
            for y in range(a.size):
                if m[a.join[x][y]] != b.join[m[x]][m[y]]:
                    return False
                if m[a.meet[x][y]] != b.meet[m[x]][m[y]]:
                    return False
                if a.arrow is not None:
                    if b.arrow is None or m[a.arrow[x][y]] != b.arrow[m[x]][m[y]]:
                        return False
        if a.neg is not None:
            if b.neg is None:
                return False
            if any(m[a.neg[x]] != b.neg[m[x]] for x in range(a.size)):
                return False
        return True


def find_morphisms(a: FiniteAlgebra, b: FiniteAlgebra, kind: str = "hom",
                   fixed: Mapping[int, int] | None = None) -> list[Morphism]:
    """All maps a -> b of the given kind ("hom", "embedding", "iso").

    Backtracking assigns 0 and 1 first (forced), then the remaining
    elements in index order, pruning on operation-preservation for pairs
    whose result is already assigned.  ``fixed`` pre-assigns images.
    Results are sorted by mapping tuple.
    """
    if kind not in ("hom", "embedding", "iso"):
        raise InputError(f"unknown morphism kind {kind!r}")
    if a.has_arrow != b.has_arrow or a.has_neg != b.has_neg:
        return []
    injective = kind in ("embedding", "iso")
    if kind == "iso" and a.size != b.size:
        return []
    if injective and a.size > b.size:
        return []

    n = a.size
    mapping: list[int | None] = [None] * n
    used = [False] * b.size
    pre = {a.bot: b.bot, a.top: b.top}
    if fixed:
        for x, v in fixed.items():
            if not (0 <= x < n and 0 <= v < b.size):
                raise InputError("fixed assignment out of range")
            if pre.get(x, v) != v:
                return []
            pre[x] = v
    order = sorted(pre) + [x for x in range(n) if x not in pre]
    tables = [(a.join, b.join), (a.meet, b.meet)]
    if a.arrow is not None:
        tables.append((a.arrow, b.arrow))

    def consistent(x: int) -> bool:
        v = mapping[x]
        if a.neg is not None:
            w = mapping[a.neg[x]]
            if w is not None and b.neg[v] != w:
                return False
            for y in range(n):
                if a.neg[y] == x and mapping[y] is not None and b.neg[mapping[y]] != v:
                    return False
        for ta, tb in tables:
            for y in range(n):
                if mapping[y] is None:
                    continue
                r = mapping[ta[x][y]]
                if r is not None and tb[v][mapping[y]] != r:
                    return False
                r = mapping[ta[y][x]]
                if r is not None and tb[mapping[y]][v] != r:
                    return False
        return True

    found: list[Morphism] = []

    def place(i: int) -> None:
        if i == len(order):
            m = Morphism(a, b, tuple(mapping))  # type: ignore[arg-type]
            if m.check():
                found.append(m)
            return
        x = order[i]
        candidates = [pre[x]] if x in pre else range(b.size)
        for v in candidates:
            if injective and used[v]:
                continue
            mapping[x] = v
            used[v] = True
            if consistent(x):
                place(i + 1)
            mapping[x] = None
            used[v] = False

    place(0)
    found.sort(key=lambda m: m.mapping)
    return found


def automorphisms(a: FiniteAlgebra) -> list[Morphism]:
    return find_morphisms(a, a, "iso")


# -- congruences ---------------------------------------------------------------

def _normalize(parent: Sequence[int]) -> Partition:
    # canonical block numbering by first occurrence
    relabel: dict[int, int] = {}
    out = []
    for x in range(len(parent)):
        r = parent[x]
        if r not in relabel:
            relabel[r] = len(relabel)
        out.append(relabel[r])
    return tuple(out)


def _saturate(a: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Smallest congruence identifying the given pairs (pair propagation)."""
    parent = list(range(a.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tables = [t for t in (a.join, a.meet, a.arrow) if t is not None]
    queue = list(pairs)
    while queue:
        x, y = queue.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[rx] = ry
        if a.neg is not None:
            queue.append((a.neg[x], a.neg[y]))
        for table in tables:
            rowx, rowy = table[x], table[y]
            for c in range(a.size):
                queue.append((rowx[c], rowy[c]))
                queue.append((table[c][x], table[c][y]))
    return _normalize([find(x) for x in range(a.size)])


def principal_congruence(a: FiniteAlgebra, x: int, y: int) -> Partition:
    return _saturate(a, [(x, y)])


def _partition_pairs(p: Partition) -> list[tuple[int, int]]:
    rep: dict[int, int] = {}
    pairs = []
    for x, blk in enumerate(p):
        if blk in rep:
            pairs.append((rep[blk], x))
        else:
            rep[blk] = x
    return pairs


def congruence_join(a: FiniteAlgebra, p: Partition, q: Partition) -> Partition:
    return _saturate(a, _partition_pairs(p) + _partition_pairs(q))


def congruence_meet(p: Partition, q: Partition) -> Partition:
    return _normalize([p[x] * (max(q) + 1) + q[x] for x in range(len(p))])


def congruence_lattice(a: FiniteAlgebra) -> list[Partition]:
    """All congruences: join-closure of the principal ones, plus identity."""
    delta = tuple(range(a.size))
    found = {delta}
    for x, y in combinations(range(a.size), 2):
        found.add(principal_congruence(a, x, y))
    frontier = list(found)
    while frontier:
        p = frontier.pop()
        for q in list(found):
            j = congruence_join(a, p, q)
            if j not in found:
                found.add(j)
                frontier.append(j)
    return sorted(found)


def is_congruence(a: FiniteAlgebra, p: Partition) -> bool:
    """Independent compatibility check, used as a test oracle."""
    if len(p) != a.size:
        return False
    tables = [t for t in (a.join, a.meet, a.arrow) if t is not None]
    for x in range(a.size):
        for y in range(a.size):
            if p[x] != p[y]:
                continue
            if a.neg is not None and p[a.neg[x]] != p[a.neg[y]]:
                return False
            for t in tables:
                for c in range(a.size):
                    if p[t[x][c]] != p[t[y][c]] or p[t[c][x]] != p[t[c][y]]:
                        return False
    return True


def is_simple(a: FiniteAlgebra) -> bool:
    """Exactly two congruences (so one-element algebras are not simple)."""
    return len(congruence_lattice(a)) == 2


def is_subdirectly_irreducible(a: FiniteAlgebra) -> bool:
    delta = tuple(range(a.size))
    nontrivial = [p for p in congruence_lattice(a) if p != delta]
    if not nontrivial:
        return False
    monolith = nontrivial[0]
    for p in nontrivial[1:]:
        monolith = congruence_meet(monolith, p)
    return monolith != delta


def _composes_to_all(p: Partition, q: Partition) -> bool:
    # p o q covers every pair iff every p-block meets every q-block
    blocks_p = max(p) + 1
    blocks_q = max(q) + 1
    meets = set(zip(p, q))
    return len(meets) == blocks_p * blocks_q


def is_directly_indecomposable(a: FiniteAlgebra) -> bool:
    """No pair of complementary permuting factor congruences.

    One-element algebras are excluded (empty product).
    """
    if a.size == 1:
        return False
    delta = tuple(range(a.size))
    nabla = (0,) * a.size
    cons = [p for p in congruence_lattice(a) if p not in (delta, nabla)]
    for p, q in combinations(cons, 2):
        if congruence_meet(p, q) == delta and (_composes_to_all(p, q)
                                               or _composes_to_all(q, p)):
            return False
    return True


def restrict_partition(p: Partition, subset: Sequence[int]) -> Partition:
    """Induced partition on a subuniverse (given as sorted indices)."""
    return _normalize([p[x] for x in subset])


@dataclass(frozen=True)
class CepFailure:
    subuniverse: tuple[str, ...]
    partition: Partition


@dataclass(frozen=True)
class CepReport:
    algebra: str
    failures: tuple[CepFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def has_cep(a: FiniteAlgebra) -> CepReport:
    """Congruence extension: every congruence of every subalgebra is the
    restriction of a congruence of the whole algebra."""
    available = congruence_lattice(a)
    failures = []
    for s in all_subuniverses(a):
        sub = sorted(s)
        b = subalgebra(a, sub)
        restrictions = {restrict_partition(p, sub) for p in available}
        for q in congruence_lattice(b):
            if q not in restrictions:
                failures.append(CepFailure(tuple(a.elements[x] for x in sub), q))
    return CepReport(a.name, tuple(failures))


# -- primality ----------------------------------------------------------------

@dataclass(frozen=True)
class InternalIso:
    domain: tuple[int, ...]
    mapping: tuple[tuple[int, int], ...]  # (x, image) pairs

    @property
    def is_identity(self) -> bool:
        return all(x == y for x, y in self.mapping)


@dataclass(frozen=True)
class PrimalityReport:
    algebra: str
    verdict: str  # "primal" | "semiprimal" | "quasiprimal" | "not-quasiprimal"
    square_subuniverses: int
    internal_isos: tuple[InternalIso, ...]
    proper_subuniverses: int
    automorphism_count: int
    bad_subuniverse: tuple[tuple[int, int], ...] | None = None

    @property
    def quasiprimal(self) -> bool:
        return self.verdict != "not-quasiprimal"


def classify_primality(a: FiniteAlgebra) -> PrimalityReport:
    """Classify a simple algebra by the subuniverses of its square.

    Quasiprimal: every subuniverse of a x a is either a product of two
    subuniverses or the graph of an isomorphism between subalgebras, and
    every subalgebra is simple.  Semiprimal: quasiprimal with only
    identity internal isomorphisms.  Primal: semiprimal with no proper
    subalgebra and no nontrivial automorphism.
    """
    if not is_simple(a):
        raise InputError(f"{a.name}: primality classification needs a simple algebra")
    n = a.size
    square = product(a, a)
    isos: list[InternalIso] = []
    bad: tuple[tuple[int, int], ...] | None = None
    subs2 = all_subuniverses(square)
    for s in subs2:
        pairs = sorted(divmod(v, n) for v in s)
        dom = sorted({p for p, _ in pairs})
        cod = sorted({q for _, q in pairs})
        if len(pairs) == len(dom) * len(cod):
            continue  # full product of its projections
        functional = len(dom) == len(pairs) and len(cod) == len(pairs)
        if functional:
            m = dict(pairs)
            if _preserves(a, m):
                isos.append(InternalIso(tuple(dom), tuple(pairs)))
                continue
        if bad is None:
            bad = tuple(pairs)
    subs = all_subuniverses(a)
    all_sub_simple = all(is_simple(subalgebra(a, s)) for s in subs)
    autos = automorphisms(a)
    report = PrimalityReport(
        algebra=a.name,
        verdict="not-quasiprimal",
        square_subuniverses=len(subs2),
        internal_isos=tuple(isos),
        proper_subuniverses=len(subs) - 1,
        automorphism_count=len(autos),
        bad_subuniverse=bad,
    )
    if bad is not None or not all_sub_simple:
        return report
    verdict = "quasiprimal"
    if all(iso.is_identity for iso in isos):
        verdict = "semiprimal"
        if len(subs) == 1 and len(autos) == 1:
            verdict = "primal"
    return _replace_verdict(report, verdict)


def _preserves(a: FiniteAlgebra, m: dict[int, int]) -> bool:
    # the map respects every operation inside its (closed) domain
    dom = list(m)
    if m.get(a.bot) != a.bot or m.get(a.top) != a.top:
        return False
    tables = [t for t in (a.join, a.meet, a.arrow) if t is not None]
    for x in dom:
        if a.neg is not None and m.get(a.neg[x]) != a.neg[m[x]]:
            return False
        for y in dom:
            for t in tables:
                if m.get(t[x][y]) != t[m[x]][m[y]]:
                    return False
    return True


def _replace_verdict(r: PrimalityReport, verdict: str) -> PrimalityReport:
    from dataclasses import replace

    return replace(r, verdict=verdict)
