"""Bounded search for algebras living on a fixed lattice.

The searcher fills in an arrow table, and a negation column when the
requirements mention ', cell by cell.  Negation cells come first, then
the arrow cells in row-major order (column-major is available for the
order-insensitivity cross-check).  Three structural requirements are
wired into the search itself:

  *  x -> x = 1           pins the diagonal,
  *  x ^ (x -> y) = x ^ y restricts cell (x, y) to {z : x ^ z = x ^ y},
  *  the two-cell instances of x ^ (y -> z) = x ^ ((x ^ y) -> (x ^ z))
     fire as soon as their later cell is assigned.

Requirements that read only the negation prune when the negation column
is complete; requirements whose arrows are all of the shape t -> 0 prune
once the first arrow column is complete.  Everything else waits for the
leaf, where every candidate is re-verified by the equational module
before it is emitted.  Solutions are reported sorted by table content,
so the output is independent of the cell order.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import permutations

from . import catalog
from .algebra import FiniteAlgebra, validate_lattice
from .equations import SUITES, Statement, get_suite, satisfies
from .errors import InputError, StructuralError
from .terms import (
    Arrow,
    Const,
    Identity,
    Join,
    Meet,
    Neg,
    Term,
    Var,
    desugar,
    parse_statement,
)


def default_timeout() -> float:
    return float(os.environ.get("SHW_TIMEOUT", "300"))


# -- search specification ---------------------------------------------------

@dataclass(frozen=True)
class SearchSpec:
    """What to search for: a lattice, requirements, and exclusions.

    ``require`` statements must hold in every solution; ``forbid``
    statements must fail.  The lattice is a pure reduct: no arrow, no
    negation.
    """

    lattice: FiniteAlgebra
    require: tuple[Statement, ...]
    forbid: tuple[Statement, ...] = ()
    max_solutions: int | None = None
    timeout: float | None = None  # None: SHW_TIMEOUT, default 300 s

    def __post_init__(self) -> None:
        if self.lattice.has_arrow or self.lattice.has_neg:
            raise InputError(f"{self.lattice.name}: search wants a bare "
                             "lattice; strip the operations first")
        report = validate_lattice(self.lattice)
        if not report.ok:
            raise StructuralError(
                f"{self.lattice.name}: not a bounded lattice "
                f"({report.failures[0].law})")
        if self.max_solutions is not None and self.max_solutions < 1:
            raise InputError("max_solutions must be positive")


def lattice_reduct(a: FiniteAlgebra) -> FiniteAlgebra:
    return replace(a, arrow=None, neg=None)


def build_spec(lattice: FiniteAlgebra, require, forbid=(),
               max_solutions: int | None = None,
               timeout: float | None = None) -> SearchSpec:
    """Assemble a SearchSpec from suite names, statement sources, or ASTs."""

    def stmts(spec_list) -> tuple[Statement, ...]:
        out: list[Statement] = []
        for item in spec_list:
            if isinstance(item, str):
                batch = SUITES[item].items if item in SUITES \
                    else (parse_statement(item),)
            else:
                batch = (item,)
            for s in batch:
                if s not in out:
                    out.append(s)
        return tuple(out)

    return SearchSpec(lattice_reduct(lattice), stmts(require), stmts(forbid),
                      max_solutions, timeout)


@dataclass(frozen=True)
class SearchResult:
    spec: SearchSpec
    solutions: tuple[FiniteAlgebra, ...]
    complete: bool
    reason: str  # "exhausted" | "timeout" | "limit"
    nodes: int
    elapsed: float


# -- statement classification ----------------------------------------------

def _atoms(stmt: Statement):
    if isinstance(stmt, Identity):
        return ((stmt.kind, desugar(stmt.lhs), desugar(stmt.rhs)),), ()
    prem = tuple((p.kind, desugar(p.lhs), desugar(p.rhs)) for p in stmt.premises)
    c = stmt.conclusion
    return ((c.kind, desugar(c.lhs), desugar(c.rhs)),), prem


def _star_only(t: Term) -> bool:
    # arrows may appear only as t -> 0, i.e. reads confined to column 0
    match t:
        case Var(_) | Const(_):
            return True
        case Arrow(l, r):
            return isinstance(r, Const) and r.value == 0 and _star_only(l)
        case _:
            l = getattr(t, "left", None)
            if l is not None:
                return _star_only(l) and _star_only(t.right)
            return _star_only(t.arg)


def _stmt_star_only(stmt: Statement) -> bool:
    concl, prem = _atoms(stmt)
    return all(_star_only(l) and _star_only(r) for _, l, r in concl + prem)


def _is_diagonal_top(stmt: Statement) -> bool:
    match stmt:
        case Identity("eq", Arrow(Var(a), Var(b)), Const(1)) if a == b:
            return True
        case Identity("eq", Const(1), Arrow(Var(a), Var(b))) if a == b:
            return True
    return False


def _is_meet_arrow_contraction(stmt: Statement) -> bool:
    match stmt:
        case Identity("eq",
                      Meet(Var(a), Arrow(Var(b), Var(c))),
                      Meet(Var(d), Var(e))):
            return a == b == d and c == e
    return False


def _is_meet_relativization(stmt: Statement) -> bool:
    match stmt:
        case Identity("eq",
                      Meet(Var(a), Arrow(Var(b), Var(c))),
                      Meet(Var(d), Arrow(Meet(Var(e), Var(f)),
                                         Meet(Var(g), Var(h))))):
            return a == d == e == g and b == f and c == h
    return False


# -- partial evaluation over half-filled tables -----------------------------

def _peval(t: Term, env, join, meet, arrow, neg, bot, top) -> int:
    """Evaluate against tables holding -1 for unassigned cells; -1 = unknown."""
    match t:
        case Var(name):
            return env[name]
        case Const(v):
            return bot if v == 0 else top
        case Meet(l, r):
            a = _peval(l, env, join, meet, arrow, neg, bot, top)
            if a < 0:
                return -1
            b = _peval(r, env, join, meet, arrow, neg, bot, top)
            return -1 if b < 0 else meet[a][b]
        case Arrow(l, r):
            a = _peval(l, env, join, meet, arrow, neg, bot, top)
            if a < 0:
                return -1
            b = _peval(r, env, join, meet, arrow, neg, bot, top)
            return -1 if b < 0 else arrow[a][b]
        case Join(l, r):
            a = _peval(l, env, join, meet, arrow, neg, bot, top)
            if a < 0:
                return -1
            b = _peval(r, env, join, meet, arrow, neg, bot, top)
            return -1 if b < 0 else join[a][b]
        case Neg(g):
            v = _peval(g, env, join, meet, arrow, neg, bot, top)
            return -1 if v < 0 else neg[v]
    raise TypeError(f"not a desugared term: {t!r}")


def _pcheck(concl, prem, env, join, meet, arrow, neg, bot, top) -> int:
    """-1 unknown, 0 violated, 1 holds."""

    def atom(kind, l, r):
        a = _peval(l, env, join, meet, arrow, neg, bot, top)
        if a < 0:
            return -1
        b = _peval(r, env, join, meet, arrow, neg, bot, top)
        if b < 0:
            return -1
        if kind == "eq":
            return 1 if a == b else 0
        if kind == "leq":
            return 1 if meet[a][b] == a else 0
        return 1 if a != b else 0

    pending = False
    for kind, l, r in prem:
        v = atom(kind, l, r)
        if v == 0:
            return 1  # vacuous
        if v < 0:
            pending = True
    if pending:
        return -1
    return atom(*concl[0])


# -- the searcher -----------------------------------------------------------

class _TimeUp(Exception):
    pass


class _Limit(Exception):
    pass


def _instances(stmt: Statement, n: int):
    concl, prem = _atoms(stmt)
    names = stmt.variables()
    envs = [dict(zip(names, vals))
            for vals in _tuples(n, len(names))]
    return [(concl, prem, env) for env in envs]


def _tuples(n: int, k: int):
    if k == 0:
        return [()]
    out = [()]
    for _ in range(k):
        out = [t + (v,) for t in out for v in range(n)]
    return out


def _prepare(spec: SearchSpec, cell_order: str):
    lat = spec.lattice
    n = lat.size
    join, meet = lat.join, lat.meet
    everything = spec.require + spec.forbid
    need_neg = any(s.requires_neg for s in everything)
    need_arrow = any(s.requires_arrow for s in everything)

    sh_diag = any(_is_diagonal_top(s) for s in spec.require)
    sh_cand = any(_is_meet_arrow_contraction(s) for s in spec.require)
    sh_rel = [s for s in spec.require if _is_meet_relativization(s)]

    arrow = [[-1] * n for _ in range(n)] if need_arrow else None
    neg = [-1] * n if need_neg else None
    if need_arrow and sh_diag:
        for x in range(n):
            arrow[x][x] = lat.top

    cells: list[tuple] = []
    if need_neg:
        cells += [("n", x) for x in range(n)]
    if need_arrow:
        if cell_order == "row-major":
            order = [(x, y) for x in range(n) for y in range(n)]
        elif cell_order == "column-major":
            order = [(x, y) for y in range(n) for x in range(n)]
        else:
            raise InputError(f"unknown cell order {cell_order!r}")
        cells += [("a", x, y) for x, y in order if arrow[x][y] < 0]

    cands = []
    for cell in cells:
        if cell[0] == "n":
            cands.append(list(range(n)))
        else:
            _, x, y = cell
            if sh_cand:
                cands.append([z for z in range(n) if meet[x][z] == meet[x][y]])
            else:
                cands.append(list(range(n)))

    depth_of = {cell: d for d, cell in enumerate(cells)}
    neg_boundary = n - 1 if need_neg else -1

    # two-cell instances of the relativized identity, keyed by the later cell
    buckets: dict[int, list[tuple[int, int, int, int, int]]] = {}
    if need_arrow and sh_rel:
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    my, mz = meet[x][y], meet[x][z]
                    d1 = depth_of.get(("a", y, z), -1)
                    d2 = depth_of.get(("a", my, mz), -1)
                    fire = max(d1, d2)
                    if fire >= 0:
                        buckets.setdefault(fire, []).append((x, y, z, my, mz))

    def classify(stmts):
        neg_only, star_only = [], []
        for s in stmts:
            if s.requires_neg and not s.requires_arrow:
                neg_only.append([i for i in _instances(s, n)])
            elif s.requires_arrow and _stmt_star_only(s):
                star_only.append([i for i in _instances(s, n)])
        return neg_only, star_only

    neg_req, star_req = classify(spec.require)
    neg_forb, star_forb = classify(spec.forbid)

    star_boundary = -1
    if need_arrow and (star_req or star_forb):
        col0 = [depth_of[("a", x, 0)] for x in range(n) if ("a", x, 0) in depth_of]
        star_boundary = max(col0) if col0 else len(cells) - 1

    return {
        "lat": lat, "n": n, "join": join, "meet": meet,
        "arrow": arrow, "neg": neg,
        "cells": cells, "cands": cands,
        "buckets": buckets,
        "neg_boundary": neg_boundary, "star_boundary": star_boundary,
        "neg_req": neg_req, "neg_forb": neg_forb,
        "star_req": star_req, "star_forb": star_forb,
    }


def _leaf_ok(alg: FiniteAlgebra, spec: SearchSpec) -> bool:
    return (all(satisfies(alg, s).holds for s in spec.require)
            and all(not satisfies(alg, s).holds for s in spec.forbid))


def _run(spec: SearchSpec, plan, deadline: float):
    lat, n = plan["lat"], plan["n"]
    join, meet = plan["join"], plan["meet"]
    arrow, neg = plan["arrow"], plan["neg"]
    cells, cands = plan["cells"], plan["cands"]
    buckets = plan["buckets"]
    bot, top = lat.bot, lat.top
    sols: list[FiniteAlgebra] = []
    nodes = 0
    limit = spec.max_solutions

    def group_ok(groups, forbid: bool) -> bool:
        # forbidden statements prune only once fully determined and holding
        for instances in groups:
            violated = False
            undetermined = False
            for concl, prem, env in instances:
                v = _pcheck(concl, prem, env, join, meet, arrow, neg, bot, top)
                if v == 0:
                    if not forbid:
                        return False
                    violated = True
                    break
                if v < 0:
                    undetermined = True
            if forbid and not violated and not undetermined:
                return False
        return True

    def emit() -> None:
        a_tab = tuple(tuple(r) for r in arrow) if arrow is not None else None
        n_tab = tuple(neg) if neg is not None else None
        alg = FiniteAlgebra(f"{lat.name}?", lat.elements, lat.join, lat.meet,
                            a_tab, n_tab, lat.bot, lat.top)
        if _leaf_ok(alg, spec):
            sols.append(alg)
            if limit is not None and len(sols) >= limit:
                raise _Limit

    def rec(d: int) -> None:
        nonlocal nodes
        if d < 2 and time.monotonic() > deadline:
            raise _TimeUp
        if d == len(cells):
            emit()
            return
        cell = cells[d]
        for v in cands[d]:
            nodes += 1
            if nodes % 2048 == 0 and time.monotonic() > deadline:
                raise _TimeUp
            if cell[0] == "n":
                neg[cell[1]] = v
                ok = group_ok(plan["neg_req"], forbid=False)
                if ok and d == plan["neg_boundary"]:
                    ok = group_ok(plan["neg_forb"], forbid=True)
            else:
                _, x, y = cell
                arrow[x][y] = v
                ok = True
                for ix, iy, iz, my, mz in buckets.get(d, ()):
                    a1, a2 = arrow[iy][iz], arrow[my][mz]
                    if a1 >= 0 and a2 >= 0 and meet[ix][a1] != meet[ix][a2]:
                        ok = False
                        break
                if ok and d == plan["star_boundary"]:
                    ok = (group_ok(plan["star_req"], forbid=False)
                          and group_ok(plan["star_forb"], forbid=True))
            if ok:
                rec(d + 1)
        if cell[0] == "n":
            neg[cell[1]] = -1
        else:
            arrow[cell[1]][cell[2]] = -1

    timed_out = False
    limited = False
    try:
        rec(0)
    except _TimeUp:
        timed_out = True
    except _Limit:
        limited = True
    return sols, nodes, timed_out, limited


def _shard_worker(payload):
    spec, cell_order, value = payload
    plan = _prepare(spec, cell_order)
    plan["cands"][0] = [value]
    deadline = time.monotonic() + (spec.timeout if spec.timeout is not None
                                   else default_timeout())
    return _run(spec, plan, deadline)


def enumerate_algebras(spec: SearchSpec, cell_order: str = "row-major",
                       jobs: int = 1) -> SearchResult:
    """All completions of the lattice satisfying the spec.

    Solutions are sorted by (negation, arrow) table content and renamed
    ``<lattice>#<index>``; the output is therefore identical for every
    cell order and shard count, which the tests exploit.
    """
    t0 = time.monotonic()
    plan = _prepare(spec, cell_order)
    budget = spec.timeout if spec.timeout is not None else default_timeout()

    if jobs > 1 and plan["cells"]:
        first = plan["cands"][0]
        sols: list[FiniteAlgebra] = []
        nodes, timed_out, limited = 0, False, False
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_shard_worker,
                             [(spec, cell_order, v) for v in first])
        for s, k, t, l in parts:
            sols.extend(s)
            nodes += k
            timed_out |= t
            limited |= l
        if spec.max_solutions is not None and len(sols) > spec.max_solutions:
            sols = sols[:spec.max_solutions]
            limited = True
    else:
        sols, nodes, timed_out, limited = _run(spec, plan, t0 + budget)

    key = lambda a: (a.neg or (), a.arrow or ())
    ordered = tuple(a.rename(f"{spec.lattice.name}#{i}")
                    for i, a in enumerate(sorted(sols, key=key)))
    if limited:
        complete, reason = False, "limit"
    elif timed_out:
        complete, reason = False, "timeout"
    else:
        complete, reason = True, "exhausted"
    return SearchResult(spec, ordered, complete, reason, nodes,
                        time.monotonic() - t0)


# -- small distributive lattices up to isomorphism --------------------------

_MID_LABELS = "abcdefghijklmnop"


def _strict_orders(m: int):
    """All transitive strict orders on 0..m-1 with edges only i < j."""
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if all((i, k) in rel
               for (i, j) in rel for (j2, k) in rel if j2 == j):
            yield rel


def _downset_lattice(m: int, rel) -> FiniteAlgebra:
    downs = []
    for s in range(1 << m):
        if all(not (s >> j & 1) or (s >> i & 1) for i, j in rel):
            downs.append(s)
    downs.sort(key=lambda s: (bin(s).count("1"), s))
    idx = {s: i for i, s in enumerate(downs)}
    k = len(downs)
    join = tuple(tuple(idx[a | b] for b in downs) for a in downs)
    meet = tuple(tuple(idx[a & b] for b in downs) for a in downs)
    labels = ["0"] + list(_MID_LABELS[:k - 2]) + (["1"] if k > 1 else [])
    return FiniteAlgebra("lat", tuple(labels), join, meet, None, None, 0, k - 1)


def _canonical_key(a: FiniteAlgebra) -> tuple:
    n = a.size
    best = None
    for p in permutations(range(n)):
        jt = [None] * n
        mt = [None] * n
        for x in range(n):
            jr = [0] * n
            mr = [0] * n
            for y in range(n):
                jr[p[y]] = p[a.join[x][y]]
                mr[p[y]] = p[a.meet[x][y]]
            jt[p[x]] = tuple(jr)
            mt[p[x]] = tuple(mr)
        key = (tuple(jt), tuple(mt))
        if best is None or key < best:
            best = key
    return best


def bounded_distributive_lattices(max_size: int) -> tuple[FiniteAlgebra, ...]:
    """All bounded distributive lattices of size 2..max_size, one per
    isomorphism class, as downset lattices of small strict orders."""
    if not 2 <= max_size <= 6:
        raise InputError("max_size must be between 2 and 6")
    found: dict[tuple, FiniteAlgebra] = {}
    for m in range(1, max_size):
        for rel in _strict_orders(m):
            lat = _downset_lattice(m, rel)
            if lat.size > max_size:
                continue
            key = _canonical_key(lat)
            if key not in found:
                found[key] = lat
    per_size: dict[int, int] = {}
    out = []
    for key in sorted(found):
        lat = found[key]
        i = per_size.get(lat.size, 0)
        per_size[lat.size] = i + 1
        out.append(lat.rename(f"lat{lat.size}.{i}"))
    return tuple(sorted(out, key=lambda a: (a.size, a.name)))


# -- the Stone property at small sizes --------------------------------------

@dataclass(frozen=True)
class LatticeTally:
    lattice: str
    size: int
    arrows: int
    negations: int
    screened: int  # pairs passing the level-1 + regularity screen
    violations: tuple[FiniteAlgebra, ...]


@dataclass(frozen=True)
class StoneScan:
    max_size: int
    tallies: tuple[LatticeTally, ...]
    complete: bool

    @property
    def holds(self) -> bool:
        return self.complete and all(not t.violations for t in self.tallies)


def exhaustive_stone_check(max_size: int, timeout: float | None = None) -> StoneScan:
    """Confirm x* v x** = 1 on every screened algebra of size <= max_size.

    For each bounded distributive lattice up to isomorphism, combine every
    arrow satisfying the SH suite with every negation satisfying DQD + DM,
    keep the pairs passing L1 and R, and test St on each.
    """
    if max_size > 5:
        raise InputError("max_size above 5 is out of practical range")
    l1 = get_suite("L1").items[0]
    reg = get_suite("R").items[0]
    st = get_suite("St").items[0]
    tallies = []
    complete = True
    for lat in bounded_distributive_lattices(max_size):
        arrows = enumerate_algebras(build_spec(lat, ("SH",), timeout=timeout))
        negs = enumerate_algebras(build_spec(lat, ("DQD", "DM"), timeout=timeout))
        complete &= arrows.complete and negs.complete
        screened = 0
        bad = []
        for i, witharrow in enumerate(arrows.solutions):
            for j, withneg in enumerate(negs.solutions):
                alg = replace(witharrow, neg=withneg.neg,
                              name=f"{lat.name}#a{i}n{j}")
                if satisfies(alg, l1).holds and satisfies(alg, reg).holds:
                    screened += 1
                    if not satisfies(alg, st).holds:
                        bad.append(alg)
        tallies.append(LatticeTally(lat.name, lat.size, len(arrows.solutions),
                                    len(negs.solutions), screened, tuple(bad)))
    return StoneScan(max_size, tuple(tallies), complete)


# -- the level-2 counterexample hunt ----------------------------------------

@dataclass(frozen=True)
class StoneOutcome:
    status: str  # "found" | "none" | "inconclusive"
    algebra: FiniteAlgebra | None
    result: SearchResult


def find_stone_counterexample_level2(lattice: FiniteAlgebra | None = None,
                                     timeout: float | None = None,
                                     jobs: int = 1) -> StoneOutcome:
    """First algebra on the lattice with SH + DQD + DM + L2 + R but not St.

    Defaults to the seven-element double diamond.  The search runs
    column-major: every requirement beyond SH reads only the negation and
    the first arrow column, so the pruning happens at the column boundary.
    """
    if lattice is None:
        lattice = catalog.double_diamond()
    spec = build_spec(lattice, ("SH", "DQD", "DM", "L2", "R"), ("St",),
                      max_solutions=1, timeout=timeout)
    result = enumerate_algebras(spec, cell_order="column-major", jobs=jobs)
    if result.solutions:
        return StoneOutcome("found", result.solutions[0], result)
    if result.complete:
        return StoneOutcome("none", None, result)
    return StoneOutcome("inconclusive", None, result)
