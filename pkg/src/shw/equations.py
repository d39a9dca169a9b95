"""Exhaustive satisfaction checking and the named identity suites.

A suite is an ordered list of identities/quasi-identities.  Primitive
suites live in ``suites/core.ids``; composites (DMSH, RDQDStSH1, ...) are
unions assembled here.  Satisfaction is decided by brute force over all
assignments, reporting the first counterexample in lexicographic
assignment order (variables sorted by name).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from itertools import product as iproduct
from typing import Iterable, Mapping

from .algebra import FiniteAlgebra
from .errors import InputError, SignatureError
from .terms import (
    Atom,
    Identity,
    QuasiIdentity,
    eval_term,
    parse_statement,
)

Statement = Identity | QuasiIdentity


@dataclass(frozen=True)
class SatisfactionResult:
    holds: bool
    witness: dict[str, int] | None = None

    def witness_labels(self, a: FiniteAlgebra) -> dict[str, str] | None:
        if self.witness is None:
            return None
        return {v: a.elements[i] for v, i in self.witness.items()}


def _atom_holds(a: FiniteAlgebra, at: Atom, env: Mapping[str, int]) -> bool:
    l = eval_term(a, at.lhs, env)
    r = eval_term(a, at.rhs, env)
    if at.kind == "eq":
        return l == r
    if at.kind == "leq":
        return a.meet[l][r] == l
    return l != r


def holds_at(a: FiniteAlgebra, stmt: Statement, env: Mapping[str, int]) -> bool:
    """Truth of a statement under one assignment."""
    if isinstance(stmt, Identity):
        return _atom_holds(a, Atom(stmt.kind, stmt.lhs, stmt.rhs), env)
    if all(_atom_holds(a, p, env) for p in stmt.premises):
        return _atom_holds(a, stmt.conclusion, env)
    return True


def _check_signature(a: FiniteAlgebra, stmt: Statement) -> None:
    if stmt.requires_neg and not a.has_neg:
        raise SignatureError(f"{a.name}: statement {stmt.source!r} needs a negation")
    if stmt.requires_arrow and not a.has_arrow:
        raise SignatureError(f"{a.name}: statement {stmt.source!r} needs an arrow")


def satisfies(a: FiniteAlgebra, stmt: Statement) -> SatisfactionResult:
    """Exhaustively check one statement; witness is the first failure."""
    _check_signature(a, stmt)
    varnames = stmt.variables()
    for values in iproduct(range(a.size), repeat=len(varnames)):
        env = dict(zip(varnames, values))
        if not holds_at(a, stmt, env):
            return SatisfactionResult(False, env)
    return SatisfactionResult(True)


def satisfies_quasi(a: FiniteAlgebra, q: QuasiIdentity) -> SatisfactionResult:
    if not isinstance(q, QuasiIdentity):
        raise InputError("satisfies_quasi expects a quasi-identity")
    return satisfies(a, q)


@dataclass(frozen=True)
class Suite:
    name: str
    items: tuple[Statement, ...]

    @property
    def requires_neg(self) -> bool:
        return any(s.requires_neg for s in self.items)

    @property
    def requires_arrow(self) -> bool:
        return any(s.requires_arrow for s in self.items)


@dataclass(frozen=True)
class ItemResult:
    source: str
    result: SatisfactionResult


@dataclass(frozen=True)
class SuiteReport:
    algebra: str
    suite: str
    results: tuple[ItemResult, ...]

    @property
    def holds(self) -> bool:
        return all(r.result.holds for r in self.results)

    def first_failure(self) -> ItemResult | None:
        for r in self.results:
            if not r.result.holds:
                return r
        return None


def satisfies_suite(a: FiniteAlgebra, suite: Suite | str) -> SuiteReport:
    """Check every statement of a suite; signature errors fail fast."""
    if isinstance(suite, str):
        suite = get_suite(suite)
    if suite.requires_neg and not a.has_neg:
        raise SignatureError(f"{a.name}: suite {suite.name} needs a negation")
    if suite.requires_arrow and not a.has_arrow:
        raise SignatureError(f"{a.name}: suite {suite.name} needs an arrow")
    results = tuple(ItemResult(s.source, satisfies(a, s)) for s in suite.items)
    return SuiteReport(a.name, suite.name, results)


# -- suite library ----------------------------------------------------------

_SECTION_RE = re.compile(r"\[([^\]]+)\]\s*$")
_LABEL_RE = re.compile(r"([A-Za-z0-9_-]+):\s*(.*)$")


def parse_ids_text(text: str, labeled: bool = False) -> dict[str, list[tuple[str, Statement]]]:
    """Parse a .ids file into {section: [(label, statement), ...]}."""
    sections: dict[str, list[tuple[str, Statement]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1).strip()
            if current in sections:
                raise InputError(f"line {lineno}: duplicate section {current!r}")
            sections[current] = []
            continue
        if current is None:
            raise InputError(f"line {lineno}: statement before any [section]")
        label = ""
        if labeled:
            lm = _LABEL_RE.match(line)
            if lm:
                label, line = lm.group(1), lm.group(2)
        stmt = parse_statement(line)
        if not label:
            label = f"{current}-{len(sections[current]) + 1}"
        sections[current].append((label, stmt))
    return sections


def _load_ids(filename: str, labeled: bool = False):
    text = resources.files(__package__).joinpath("suites").joinpath(filename).read_text()
    return parse_ids_text(text, labeled=labeled)


def _build_suites() -> dict[str, Suite]:
    primitive = _load_ids("core.ids")
    suites: dict[str, Suite] = {
        name: Suite(name, tuple(stmt for _, stmt in items))
        for name, items in primitive.items()
    }

    def merge(name: str, *parts: str) -> None:
        items: list[Statement] = []
        for part in parts:
            for stmt in suites[part].items:
                if stmt not in items:
                    items.append(stmt)
        suites[name] = Suite(name, tuple(items))

    merge("H", "SH", "SH4")
    merge("DQDSH", "SH", "DQD")
    merge("DMSH", "DQDSH", "DM")
    merge("DPCSH", "DQDSH", "PC")
    merge("DQDStSH", "DQDSH", "St")
    merge("DQDBSH", "DQDSH", "Bo")
    merge("DMSH1", "DMSH", "L1")
    merge("DMSH2", "DMSH", "L2")
    merge("RDMSH1", "DMSH1", "R")
    merge("RDMSH2", "DMSH2", "R")
    merge("RDQDSH1", "DQDSH", "L1", "R")
    merge("RDQDStSH1", "DQDStSH", "L1", "R")
    merge("RDPCSH1", "DPCSH", "L1", "R")
    merge("RDMH1", "RDMSH1", "SH4")
    merge("RDMcmSH1", "RDMSH1", "Co")
    return suites


SUITES: dict[str, Suite] = _build_suites()


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise InputError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}") from None


def suite_names() -> tuple[str, ...]:
    return tuple(sorted(SUITES))


# -- lemma groups ------------------------------------------------------------

# group name -> catalog family whose members it runs on
LEMMA_BINDINGS = {
    "dqd-basic": "all-simples",
    "regular-dm": "rdmsh1-simples",
    "stone-property": "rdmsh1-simples",
}


@dataclass(frozen=True)
class LemmaVerdict:
    algebra: str
    result: SatisfactionResult


@dataclass(frozen=True)
class LemmaItem:
    label: str
    source: str
    verdicts: tuple[LemmaVerdict, ...]

    @property
    def holds(self) -> bool:
        return all(v.result.holds for v in self.verdicts)


@dataclass(frozen=True)
class LemmaGroupReport:
    name: str
    family: str
    algebras: tuple[str, ...]
    items: tuple[LemmaItem, ...]

    @property
    def holds(self) -> bool:
        return all(item.holds for item in self.items)


def lemma_groups() -> dict[str, list[tuple[str, Statement]]]:
    return _load_ids("lemmas.ids", labeled=True)


def run_lemma_suite(groups: Iterable[str] | None = None) -> tuple[LemmaGroupReport, ...]:
    """Check every lemma group against its bound catalog family."""
    from . import catalog  # local import; catalog does not import this module

    wanted = set(groups) if groups is not None else None
    reports = []
    for name, items in lemma_groups().items():
        if wanted is not None and name not in wanted:
            continue
        family = LEMMA_BINDINGS[name]
        keys = catalog.family(family)
        checked = []
        for label, stmt in items:
            verdicts = tuple(
                LemmaVerdict(key, satisfies(catalog.get(key), stmt)) for key in keys
            )
            checked.append(LemmaItem(label, stmt.source, verdicts))
        reports.append(LemmaGroupReport(name, family, keys, tuple(checked)))
    return tuple(reports)
