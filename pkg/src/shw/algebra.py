"""Finite bounded lattices with an arrow operation and optional dual negation.

An algebra here is a finite set with binary join, meet, arrow, an optional
unary negation, and designated bottom/top elements.  Operation tables are
stored row-major over element indices.  Everything is immutable; derived
operations (star, plus, double prime) are computed on the fly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from .errors import InputError, SignatureError, StructuralError

Row = tuple[int, ...]
Table = tuple[Row, ...]

# Negation schemes for expanding a bare algebra, keyed by scheme name.
# Values map element labels to element labels; expansion fails if the
# base algebra has elements the scheme does not cover.
NEG_SCHEMES: dict[str, dict[str, str]] = {
    "e": {"0": "1", "1": "0"},
    "dp": {"0": "1", "1": "0", "a": "1"},
    "dm": {"0": "1", "1": "0", "a": "a"},
    "dmorgan4": {"0": "1", "1": "0", "a": "a", "b": "b"},
}


def _as_table(rows: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(int(v) for v in row) for row in rows)


@dataclass(frozen=True)
class FiniteAlgebra:
    """A finite algebra (universe, join, meet, arrow, neg, 0, 1).

    ``arrow`` and ``neg`` may be absent: a bare bounded lattice omits both,
    an unexpanded algebra omits ``neg``.  Structural validity (square
    tables, in-range entries, distinct labels) is enforced at construction;
    lattice laws are checked separately by :func:`validate_lattice`.
    """

    name: str
    elements: tuple[str, ...]
    join: Table
    meet: Table
    arrow: Table | None
    neg: tuple[int, ...] | None
    bot: int
    top: int

    def __post_init__(self) -> None:
        n = len(self.elements)
        if n == 0:
            raise StructuralError(f"{self.name}: empty universe")
        if len(set(self.elements)) != n:
            raise StructuralError(f"{self.name}: duplicate element labels")
        for opname, table in (("join", self.join), ("meet", self.meet), ("arrow", self.arrow)):
            if table is None:
                continue
            if len(table) != n or any(len(row) != n for row in table):
                raise StructuralError(f"{self.name}: {opname} table is not {n}x{n}")
            for row in table:
                for v in row:
                    if not 0 <= v < n:
                        raise StructuralError(f"{self.name}: {opname} entry {v} out of range")
        if self.neg is not None:
            if len(self.neg) != n:
                raise StructuralError(f"{self.name}: neg table has wrong length")
            if any(not 0 <= v < n for v in self.neg):
                raise StructuralError(f"{self.name}: neg entry out of range")
        for c in (self.bot, self.top):
            if not 0 <= c < n:
                raise StructuralError(f"{self.name}: constant index {c} out of range")

    # -- basic accessors -------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def has_arrow(self) -> bool:
        return self.arrow is not None

    @property
    def has_neg(self) -> bool:
        return self.neg is not None

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise InputError(f"{self.name}: no element labeled {label!r}") from None

    def label(self, i: int) -> str:
        return self.elements[i]

    def leq(self, x: int, y: int) -> bool:
        return self.meet[x][y] == x

    # -- derived operations ----------------------------------------------

    def star(self, x: int) -> int:
        """x* = x -> 0."""
        if self.arrow is None:
            raise SignatureError(f"{self.name}: no arrow operation")
        return self.arrow[x][self.bot]

    def dprime(self, x: int) -> int:
        """x'' (double application of neg)."""
        if self.neg is None:
            raise SignatureError(f"{self.name}: no negation")
        return self.neg[self.neg[x]]

    def plus(self, x: int) -> int:
        """x+ = (x')*' (negation of the star of the negation)."""
        if self.neg is None:
            raise SignatureError(f"{self.name}: no negation")
        return self.neg[self.star(self.neg[x])]

    def iter_primestar(self, x: int, k: int) -> int:
        """k-fold application of x |-> (x')* for k >= 0."""
        if k < 0:
            raise InputError("iteration count must be >= 0")
        for _ in range(k):
            if self.neg is None:
                raise SignatureError(f"{self.name}: no negation")
            x = self.star(self.neg[x])
        return x

    def rename(self, name: str) -> "FiniteAlgebra":
        return replace(self, name=name)


@dataclass(frozen=True)
class LawFailure:
    law: str
    witness: dict[str, str]  # variable -> element label


@dataclass(frozen=True)
class ValidationReport:
    name: str
    failures: tuple[LawFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


# Lattice laws checked by validate_lattice, as (law name, arity, predicate).
def _lattice_laws(a: FiniteAlgebra):
    j, m = a.join, a.meet
    return [
        ("join-commutative", 2, lambda x, y: j[x][y] == j[y][x]),
        ("meet-commutative", 2, lambda x, y: m[x][y] == m[y][x]),
        ("join-associative", 3, lambda x, y, z: j[j[x][y]][z] == j[x][j[y][z]]),
        ("meet-associative", 3, lambda x, y, z: m[m[x][y]][z] == m[x][m[y][z]]),
        ("join-idempotent", 1, lambda x: j[x][x] == x),
        ("meet-idempotent", 1, lambda x: m[x][x] == x),
        ("absorption-join", 2, lambda x, y: j[x][m[x][y]] == x),
        ("absorption-meet", 2, lambda x, y: m[x][j[x][y]] == x),
        ("bottom-unit", 1, lambda x: j[x][a.bot] == x),
        ("top-unit", 1, lambda x: m[x][a.top] == x),
        ("meet-distributes", 3, lambda x, y, z: m[x][j[y][z]] == j[m[x][y]][m[x][z]]),
        ("join-distributes", 3, lambda x, y, z: j[x][m[y][z]] == m[j[x][y]][j[x][z]]),
    ]


_VARS = ("x", "y", "z")


def validate_lattice(a: FiniteAlgebra) -> ValidationReport:
    """Check the bounded distributive lattice laws exhaustively.

    Returns one failure per law, with the first witness in lexicographic
    assignment order.  Structural problems raise instead (see
    FiniteAlgebra.__post_init__).
    """
    failures = []
    n = a.size
    for law, arity, pred in _lattice_laws(a):
        for args in iproduct(range(n), repeat=arity):
            if not pred(*args):
                witness = {_VARS[i]: a.elements[v] for i, v in enumerate(args)}
                failures.append(LawFailure(law, witness))
                break
    return ValidationReport(a.name, tuple(failures))


def expand(base: FiniteAlgebra, scheme: str) -> FiniteAlgebra:
    """Attach a negation table to a bare algebra by named scheme.

    The input is never mutated.  Fails if the base already carries a
    negation, the scheme is unknown, or the scheme does not cover every
    element of the base.
    """
    if base.neg is not None:
        raise InputError(f"{base.name}: already has a negation")
    if scheme not in NEG_SCHEMES:
        raise InputError(f"unknown negation scheme {scheme!r}")
    mapping = NEG_SCHEMES[scheme]
    neg = []
    for lbl in base.elements:
        if lbl not in mapping:
            raise InputError(f"scheme {scheme!r} does not cover element {lbl!r} of {base.name}")
        neg.append(base.index(mapping[lbl]))
    return replace(base, name=f"{base.name}{scheme}" if scheme != "dmorgan4" else base.name,
                   neg=tuple(neg))


_UNARY_OPS = ("neg", "star", "plus", "dprime")
_BINARY_OPS = ("join", "meet", "arrow")


def op_apply(a: FiniteAlgebra, op: str, args: Sequence[int]) -> int:
    """Apply a named (possibly derived) operation to element indices."""
    for v in args:
        if not 0 <= v < a.size:
            raise InputError(f"{a.name}: element index {v} out of range")
    if op in _BINARY_OPS:
        if len(args) != 2:
            raise InputError(f"{op} expects 2 arguments, got {len(args)}")
        table = getattr(a, op)
        if table is None:
            raise SignatureError(f"{a.name}: no {op} operation")
        return table[args[0]][args[1]]
    if op in _UNARY_OPS:
        if len(args) != 1:
            raise InputError(f"{op} expects 1 argument, got {len(args)}")
        if op == "neg":
            if a.neg is None:
                raise SignatureError(f"{a.name}: no negation")
            return a.neg[args[0]]
        return getattr(a, op)(args[0])
    raise InputError(f"unknown operation {op!r}")


def lattice_from_covers(name: str, labels: Sequence[str],
                        covers: Iterable[tuple[str, str]]) -> FiniteAlgebra:
    """Build a bare lattice (no arrow, no neg) from its covering pairs.

    ``covers`` lists (lower, upper) pairs.  Joins and meets must exist and
    be unique, otherwise the input is rejected.
    """
    labels = tuple(labels)
    n = len(labels)
    idx = {lbl: i for i, lbl in enumerate(labels)}
    leq = [[i == j for j in range(n)] for i in range(n)]
    for lo, hi in covers:
        leq[idx[lo]][idx[hi]] = True
    # transitive closure
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    for i in range(n):
        for j in range(n):
            if i != j and leq[i][j] and leq[j][i]:
                raise InputError(f"{name}: cover relation has a cycle through "
                                 f"{labels[i]} and {labels[j]}")

    def bound(x: int, y: int, upper: bool) -> int:
        if upper:
            cands = [z for z in range(n) if leq[x][z] and leq[y][z]]
            best = [z for z in cands if all(leq[z][w] for w in cands)]
        else:
            cands = [z for z in range(n) if leq[z][x] and leq[z][y]]
            best = [z for z in cands if all(leq[w][z] for w in cands)]
        if len(best) != 1:
            kind = "join" if upper else "meet"
            raise InputError(f"{name}: no unique {kind} for {labels[x]}, {labels[y]}")
        return best[0]

    join = tuple(tuple(bound(i, j, True) for j in range(n)) for i in range(n))
    meet = tuple(tuple(bound(i, j, False) for j in range(n)) for i in range(n))
    bots = [i for i in range(n) if all(leq[i][j] for j in range(n))]
    tops = [i for i in range(n) if all(leq[j][i] for j in range(n))]
    if len(bots) != 1 or len(tops) != 1:
        raise InputError(f"{name}: missing bottom or top")
    return FiniteAlgebra(name, labels, join, meet, None, None, bots[0], tops[0])


def product(a: FiniteAlgebra, b: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    """Direct product with componentwise operations.

    Both factors must agree on which operations they carry.
    """
    if a.has_arrow != b.has_arrow or a.has_neg != b.has_neg:
        raise SignatureError(f"cannot form product of {a.name} and {b.name}: "
                             "signatures differ")
    na, nb = a.size, b.size
    labels = tuple(f"({la},{lb})" for la in a.elements for lb in b.elements)

    def pair(i: int, j: int) -> int:
        return i * nb + j

    def combine(ta: Table, tb: Table) -> Table:
        return tuple(
            tuple(pair(ta[ia][ja], tb[ib][jb]) for ja in range(na) for jb in range(nb))
            for ia in range(na) for ib in range(nb)
        )

    join = combine(a.join, b.join)
    meet = combine(a.meet, b.meet)
    arrow = combine(a.arrow, b.arrow) if a.has_arrow else None
    neg = None
    if a.has_neg:
        neg = tuple(pair(a.neg[ia], b.neg[ib]) for ia in range(na) for ib in range(nb))
    return FiniteAlgebra(name or f"{a.name} x {b.name}", labels, join, meet, arrow, neg,
                         pair(a.bot, b.bot), pair(a.top, b.top))


def subalgebra(a: FiniteAlgebra, universe: Iterable[int],
               name: str | None = None) -> FiniteAlgebra:
    """The induced algebra on a subuniverse, with dense re-indexing.

    The caller is responsible for closure; a non-closed subset raises.
    """
    keep = sorted(set(universe))
    pos = {v: i for i, v in enumerate(keep)}
    if a.bot not in pos or a.top not in pos:
        raise InputError(f"{a.name}: subset does not contain the constants")

    def restrict(table: Table | None) -> Table | None:
        if table is None:
            return None
        rows = []
        for x in keep:
            row = []
            for y in keep:
                v = table[x][y]
                if v not in pos:
                    raise InputError(f"{a.name}: subset not closed "
                                     f"({a.elements[x]}, {a.elements[y]} -> {a.elements[v]})")
                row.append(pos[v])
            rows.append(tuple(row))
        return tuple(rows)

    neg = None
    if a.neg is not None:
        neg = []
        for x in keep:
            v = a.neg[x]
            if v not in pos:
                raise InputError(f"{a.name}: subset not closed under negation")
            neg.append(pos[v])
        neg = tuple(neg)
    labels = tuple(a.elements[x] for x in keep)
    default = f"{a.name}|{{{','.join(labels)}}}"
    return FiniteAlgebra(name or default, labels, restrict(a.join), restrict(a.meet),
                         restrict(a.arrow), neg, pos[a.bot], pos[a.top])


# -- JSON round-trip ------------------------------------------------------

def to_json_dict(a: FiniteAlgebra) -> dict:
    d: dict = {
        "name": a.name,
        "elements": list(a.elements),
        "join": [list(r) for r in a.join],
        "meet": [list(r) for r in a.meet],
        "bot": a.bot,
        "top": a.top,
    }
    if a.arrow is not None:
        d["arrow"] = [list(r) for r in a.arrow]
    if a.neg is not None:
        d["neg"] = list(a.neg)
    return d


def from_json_dict(d: Mapping) -> FiniteAlgebra:
    try:
        name = d["name"]
        elements = tuple(d["elements"])
        join = _as_table(d["join"])
        meet = _as_table(d["meet"])
        bot = int(d["bot"])
        top = int(d["top"])
    except (KeyError, TypeError, ValueError) as e:
        raise StructuralError(f"malformed algebra object: {e}") from None
    arrow = _as_table(d["arrow"]) if "arrow" in d else None
    neg = tuple(int(v) for v in d["neg"]) if "neg" in d else None
    return FiniteAlgebra(name, elements, join, meet, arrow, neg, bot, top)


def dumps(a: FiniteAlgebra, indent: int | None = 2) -> str:
    return json.dumps(to_json_dict(a), indent=indent, sort_keys=True)


def loads(text: str) -> FiniteAlgebra:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructuralError(f"invalid JSON: {e}") from None
    return from_json_dict(d)
