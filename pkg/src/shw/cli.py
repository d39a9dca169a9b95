"""Batch command line front end.

Every command prints a deterministic text report, or a versioned JSON
payload under ``--json``.  Exit codes: 0 all checked properties hold,
1 a property fails (witnesses included in the output), 2 usage or input
error, 3 inconclusive (a search hit its timeout).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import amalgamation, bases, catalog, varieties
from .algebra import from_json_dict, to_json_dict, validate_lattice
from .equations import (
    get_suite,
    run_lemma_suite,
    satisfies,
    satisfies_suite,
    suite_names,
)
from .errors import ShwError
from .modelsearch import (
    build_spec,
    enumerate_algebras,
    exhaustive_stone_check,
    lattice_reduct,
)
from .structure import (
    all_subuniverses,
    automorphisms,
    classify_primality,
    congruence_lattice,
    has_cep,
    is_simple,
)
from .terms import parse_statement, parse_term, eval_term


@dataclass(frozen=True)
class CommandResult:
    code: int
    text: str
    payload: dict | None = None


def _labels(a, indices) -> list[str]:
    return [a.elements[i] for i in indices]


def _witness_str(witness: dict[str, str] | None) -> str:
    if not witness:
        return ""
    return "  [" + ", ".join(f"{k}={v}" for k, v in sorted(witness.items())) + "]"


def _blocks(partition) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for x, root in enumerate(partition):
        groups.setdefault(root, []).append(x)
    return [groups[r] for r in sorted(groups)]


# -- command handlers --------------------------------------------------------

def _cmd_catalog(args) -> CommandResult:
    if args.action == "list":
        entries = []
        lines = []
        for key in catalog.keys():
            a = catalog.get(key)
            entries.append({"key": key, "size": a.size,
                            "elements": list(a.elements),
                            "arrow": a.has_arrow, "neg": a.has_neg})
            lines.append(f"{key:8} size {a.size}  elements {','.join(a.elements)}")
        return CommandResult(0, "\n".join(lines),
                             {"schema": "shw.catalog-list/1", "entries": entries})
    doc = to_json_dict(catalog.get(args.key))
    text = json.dumps(doc, indent=2, sort_keys=True)
    return CommandResult(0, text, doc)


def _cmd_eval(args) -> CommandResult:
    a = catalog.get(args.key)
    term = parse_term(args.term)
    env = {}
    if args.assign:
        for piece in args.assign.split(","):
            name, _, label = piece.partition("=")
            if label not in a.elements:
                raise ShwError(f"{a.name} has no element {label!r}")
            env[name.strip()] = a.elements.index(label)
    value = a.elements[eval_term(a, term, env)]
    payload = {"schema": "shw.eval/1", "algebra": args.key, "term": args.term,
               "assignment": {k: a.elements[v] for k, v in env.items()},
               "value": value}
    return CommandResult(0, value, payload)


def _cmd_check(args) -> CommandResult:
    a = catalog.get(args.key)
    if args.suite:
        report = satisfies_suite(a, args.suite)
        items = [(r.source, r.result) for r in report.results]
        suite = args.suite
    else:
        stmt = parse_statement(args.identity)
        items = [(stmt.source, satisfies(a, stmt))]
        suite = None
    lines = []
    rows = []
    ok = True
    for source, res in items:
        w = res.witness_labels(a)
        ok &= res.holds
        lines.append(("ok   " if res.holds else "FAIL ") + source
                     + ("" if res.holds else _witness_str(w)))
        rows.append({"statement": source, "holds": res.holds, "witness": w})
    payload = {"schema": "shw.check/1", "algebra": args.key, "suite": suite,
               "items": rows, "holds": ok}
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


def _cmd_structure(args) -> CommandResult:
    a = catalog.get(args.key)
    payload: dict = {"schema": "shw.structure/1", "algebra": args.key,
                     "kind": args.what}
    if args.what == "subs":
        subs = [sorted(s) for s in all_subuniverses(a)]
        lines = [("{" + ",".join(_labels(a, s)) + "}") for s in subs]
        payload["subuniverses"] = [_labels(a, s) for s in subs]
        return CommandResult(0, "\n".join(lines), payload)
    if args.what == "cons":
        cons = congruence_lattice(a)
        rendered = [[_labels(a, b) for b in _blocks(p)] for p in cons]
        lines = ["|".join("{" + ",".join(b) + "}" for b in blocks)
                 for blocks in rendered]
        payload["congruences"] = rendered
        payload["count"] = len(cons)
        return CommandResult(0, "\n".join(lines), payload)
    if args.what == "autos":
        auts = automorphisms(a)
        maps = [{a.elements[x]: a.elements[m.mapping[x]] for x in range(a.size)}
                for m in auts]
        lines = [", ".join(f"{k}->{v}" for k, v in sorted(m.items()))
                 for m in maps]
        payload["automorphisms"] = maps
        return CommandResult(0, "\n".join(lines), payload)
    report = has_cep(a)
    payload["ok"] = report.ok
    payload["failures"] = [{"subuniverse": list(f.subuniverse)}
                           for f in report.failures]
    text = "cep holds" if report.ok else f"cep fails on {len(report.failures)} subalgebras"
    return CommandResult(0 if report.ok else 1, text, payload)


def _cmd_simple(args) -> CommandResult:
    a = catalog.get(args.key)
    count = len(congruence_lattice(a))
    simple = is_simple(a)
    text = "simple" if simple else f"not simple ({count} congruences)"
    payload = {"schema": "shw.simple/1", "algebra": args.key,
               "simple": simple, "congruences": count}
    return CommandResult(0 if simple else 1, text, payload)


def _cmd_primality(args) -> CommandResult:
    r = classify_primality(catalog.get(args.key))
    text = (f"{r.verdict}  (square subuniverses {r.square_subuniverses}, "
            f"internal isos {len(r.internal_isos)}, "
            f"proper subuniverses {r.proper_subuniverses}, "
            f"automorphisms {r.automorphism_count})")
    payload = {"schema": "shw.primality/1", "algebra": args.key,
               "verdict": r.verdict,
               "square_subuniverses": r.square_subuniverses,
               "internal_isos": len(r.internal_isos),
               "proper_subuniverses": r.proper_subuniverses,
               "automorphisms": r.automorphism_count}
    return CommandResult(0 if r.quasiprimal else 1, text, payload)


# the two readings of which chain expansions should be primal
_PRIMAL_READINGS = {
    "dm-only": ("2e", "2bare", "D3", "L5dm", "L6dm", "L7dm", "L8dm"),
    "dm-and-dp": ("2e", "2bare", "D3", "L5dm", "L6dm", "L7dm", "L8dm",
                  "L5dp", "L6dp", "L7dp", "L8dp"),
}


def _verify_lemmas(args) -> CommandResult:
    groups = run_lemma_suite([args.group] if args.group else None)
    lines = []
    out = []
    ok = True
    for g in groups:
        ok &= g.holds
        lines.append(f"{'ok  ' if g.holds else 'FAIL'} {g.name} "
                     f"({len(g.items)} statements on {len(g.algebras)} algebras)")
        items = []
        for item in g.items:
            failures = [{"algebra": v.algebra,
                         "witness": v.result.witness_labels(catalog.get(v.algebra))}
                        for v in item.verdicts if not v.result.holds]
            items.append({"label": item.label, "source": item.source,
                          "holds": item.holds, "failures": failures})
            if not item.holds:
                lines.append(f"      {item.label}: {failures}")
        out.append({"name": g.name, "family": g.family,
                    "algebras": list(g.algebras), "holds": g.holds,
                    "items": items})
    payload = {"schema": "shw.verify-lemmas/1", "groups": out, "holds": ok}
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


def _verify_bases(args) -> CommandResult:
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = [r for batch in pool.map(bases.check_entry, bases.BASE_ENTRIES)
                    for r in batch]
    else:
        rows = list(bases.verify_bases())
    lines = []
    out = []
    ok = True
    for row in rows:
        ok &= row.ok
        tag = "ok  " if row.ok else "FAIL"
        lines.append(f"{tag} {row.slug}[{row.base_index}] "
                     f"generators {','.join(row.generators)} "
                     f"expected {len(row.expected)} satisfied {len(row.satisfied)}")
        for d in row.discrepancies:
            lines.append(f"      {d.algebra}: {d.kind}"
                         + (f" {d.identity!r}{_witness_str(d.witness)}" if d.identity else "")
                         + (f"  ({d.certificate})" if d.certificate else ""))
        out.append({
            "slug": row.slug, "base_index": row.base_index,
            "identities": list(row.identities), "ambient": row.ambient,
            "generators": list(row.generators),
            "expected": list(row.expected), "satisfied": list(row.satisfied),
            "discrepancies": [
                {"algebra": d.algebra, "kind": d.kind, "identity": d.identity,
                 "witness": d.witness, "certificate": d.certificate}
                for d in row.discrepancies],
        })
    payload = {"schema": "shw.verify-bases/1", "rows": out, "ok": ok}
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


def _verify_lattice(args) -> CommandResult:
    rows = []
    lines = []
    ok = True
    for key in catalog.keys():
        report = validate_lattice(catalog.get(key))
        ok &= report.ok
        rows.append({"key": key, "ok": report.ok,
                     "failures": [{"law": f.law, "witness": f.witness}
                                  for f in report.failures]})
        lines.append(f"{'ok  ' if report.ok else 'FAIL'} {key}")
    payload = {"schema": "shw.verify-lattice/1", "entries": rows, "ok": ok}
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


def _verify_primality(args) -> CommandResult:
    verdicts = {}
    for key in catalog.family("all-simples"):
        verdicts[key] = classify_primality(catalog.get(key)).verdict
    primal = tuple(k for k, v in verdicts.items() if v == "primal")
    readings = {
        name: {"expected": list(keys), "matches": set(keys) == set(primal)}
        for name, keys in _PRIMAL_READINGS.items()
    }
    all_quasi = all(v != "not-quasiprimal" for v in verdicts.values())
    core_primal = {"2e", "2bare", "D3"} <= set(primal)
    lines = [f"{k:8} {v}" for k, v in verdicts.items()]
    lines.append(f"primal set: {','.join(primal)}")
    for name, r in readings.items():
        lines.append(f"reading {name}: {'matches' if r['matches'] else 'differs'}")
    ok = all_quasi and core_primal
    payload = {"schema": "shw.verify-primality/1", "verdicts": verdicts,
               "primal": list(primal), "readings": readings,
               "all_quasiprimal": all_quasi, "ok": ok}
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


def _verify_cep(args) -> CommandResult:
    rows = []
    lines = []
    ok = True
    for key in catalog.family("all-simples"):
        report = has_cep(catalog.get(key))
        ok &= report.ok
        rows.append({"algebra": key, "ok": report.ok})
        lines.append(f"{'ok  ' if report.ok else 'FAIL'} {key}")
    payload = {"schema": "shw.verify-cep/1", "reports": rows, "ok": ok}
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


def _verify_stone(args) -> CommandResult:
    st = get_suite("St").items[0]
    simple_rows = []
    simples_ok = True
    for key in catalog.family("rdmsh1-simples"):
        res = satisfies(catalog.get(key), st)
        simples_ok &= res.holds
        simple_rows.append({"algebra": key, "holds": res.holds,
                            "witness": res.witness_labels(catalog.get(key))})
    scan = exhaustive_stone_check(args.max_size)
    lines = [f"{'ok  ' if simples_ok else 'FAIL'} x* v x** = 1 on all "
             f"{len(simple_rows)} level-1 regular simples"]
    for t in scan.tallies:
        lines.append(f"{t.lattice}: arrows {t.arrows} negations {t.negations} "
                     f"screened {t.screened} violations {len(t.violations)}")
    lines.append(f"scan of size <= {args.max_size}: "
                 + ("complete, " if scan.complete else "INCOMPLETE, ")
                 + ("no violators" if scan.holds or not scan.complete else "VIOLATORS FOUND"))
    payload = {"schema": "shw.verify-stone/1",
               "simples": {"rows": simple_rows, "holds": simples_ok},
               "scan": {"max_size": scan.max_size, "complete": scan.complete,
                        "holds": scan.holds,
                        "tallies": [{"lattice": t.lattice, "size": t.size,
                                     "arrows": t.arrows,
                                     "negations": t.negations,
                                     "screened": t.screened,
                                     "violations": [to_json_dict(v)
                                                    for v in t.violations]}
                                    for t in scan.tallies]}}
    if not scan.complete:
        return CommandResult(3, "\n".join(lines), payload)
    ok = simples_ok and scan.holds
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


_VERIFY_HANDLERS = {
    "lemmas": _verify_lemmas,
    "bases": _verify_bases,
    "corollaries": _verify_bases,
    "lattice": _verify_lattice,
    "primality": _verify_primality,
    "cep": _verify_cep,
    "stone": _verify_stone,
}


def _cmd_variety(args) -> CommandResult:
    if args.action == "member":
        gens = args.gens.split(",")
        inside = varieties.in_variety(args.key, gens)
        payload = {"schema": "shw.variety-member/1", "key": args.key,
                   "generators": gens, "member": inside}
        return CommandResult(0 if inside else 1,
                             "member" if inside else "not a member", payload)
    count = varieties.subvariety_count(args.ambient)
    payload = {"schema": "shw.variety-count/1", "ambient": args.ambient,
               "count": count}
    return CommandResult(0, str(count), payload)


def _survey_variety(gens: list[str], oracle: bool):
    v = varieties.closure(gens, "rdqdstsh1")
    ams = amalgamation.enumerate_amalgams(v)
    rows = []
    obstructed = 0
    consistent = True
    for am in ams:
        verdict = amalgamation.decide_amalgamation(am, v)
        row = {"base": am.base, "left": am.left, "right": am.right,
               "verdict": verdict.kind}
        if verdict.kind == "witness":
            w = verdict.witness
            src = catalog.get(am.left)
            dst = catalog.get(w.target)
            row["witness"] = {
                "target": w.target,
                "left_map": {src.elements[x]: dst.elements[w.from_left(x)]
                             for x in range(src.size)},
                "right_map": {catalog.get(am.right).elements[x]:
                              dst.elements[w.from_right(x)]
                              for x in range(catalog.get(am.right).size)},
            }
            if not w.validate(am):
                consistent = False
        else:
            obstructed += 1
            row["reasons"] = [list(r) for r in verdict.reasons]
            if oracle:
                brute = amalgamation.brute_force_amalgamation(am, v)
                row["oracle"] = brute.kind
                consistent &= brute.kind == "inconclusive"
        rows.append(row)
    return {"generators": gens, "members": list(v.members()),
            "amalgams": len(ams), "obstructed": obstructed,
            "consistent": consistent, "rows": rows}


def _cmd_amalgam(args) -> CommandResult:
    surveys = []
    if args.variety:
        surveys.append(_survey_variety(args.variety.split(","), args.oracle))
    else:
        amb = varieties.get_ambient(args.all_subvarieties_of)
        for key in amb.keys:
            surveys.append(_survey_variety([key], args.oracle))
        surveys.append(_survey_variety(list(amb.keys), args.oracle))
    lines = []
    failing = []
    for s in surveys:
        tag = "ok  " if s["obstructed"] == 0 else "FAIL"
        lines.append(f"{tag} V({','.join(s['generators'])}): "
                     f"{s['amalgams']} amalgams, {s['obstructed']} obstructed")
        for row in s["rows"]:
            if row["verdict"] != "witness":
                lines.append(f"      ({row['base']}; {row['left']}, {row['right']})"
                             f" obstructed: " + "; ".join(
                                 f"{k}: {why}" for k, why in row["reasons"]))
        if s["obstructed"]:
            failing.append(s["generators"])
    claim_holds = not failing
    lines.append("reference claim: every subvariety amalgamates; computed: "
                 + ("agrees" if claim_holds else
                    "fails for " + "; ".join(f"V({','.join(g)})" for g in failing)))
    payload = {"schema": "shw.amalgam/1", "surveys": surveys,
               "claim": {"statement": "every subvariety amalgamates",
                         "holds": claim_holds,
                         "counterexamples": [list(g) for g in failing]}}
    return CommandResult(0 if claim_holds else 1, "\n".join(lines), payload)


def _cmd_search(args) -> CommandResult:
    if args.lattice in catalog.keys():
        lattice = lattice_reduct(catalog.get(args.lattice))
    else:
        path = Path(args.lattice)
        if not path.exists():
            raise ShwError(f"no catalog key or file named {args.lattice!r}")
        lattice = from_json_dict(json.loads(path.read_text()))
        lattice = lattice_reduct(lattice)
    require = args.require.split(",") if args.require else ()
    forbid = args.forbid.split(",") if args.forbid else ()
    spec = build_spec(lattice, require, forbid,
                      max_solutions=args.limit, timeout=args.timeout)
    result = enumerate_algebras(spec, cell_order=args.order, jobs=args.jobs)
    lines = [f"{len(result.solutions)} solutions, {result.reason} "
             f"({result.nodes} nodes, {result.elapsed:.2f}s)"]
    for s in result.solutions:
        lines.append(json.dumps(to_json_dict(s), sort_keys=True))
    payload = {"schema": "shw.search/1", "lattice": lattice.name,
               "require": list(require), "forbid": list(forbid),
               "complete": result.complete, "reason": result.reason,
               "nodes": result.nodes,
               "solutions": [to_json_dict(s) for s in result.solutions]}
    if result.reason == "timeout":
        return CommandResult(3, "\n".join(lines), payload)
    return CommandResult(0 if result.solutions else 1, "\n".join(lines), payload)


def _cmd_verify(args) -> CommandResult:
    return _VERIFY_HANDLERS[args.what](args)


# -- wiring ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="shw",
        description="verification workbench for semi-Heyting algebras "
                    "with a dually quasi-De Morgan negation")
    p.add_argument("--json", action="store_true",
                   help="emit a versioned JSON payload instead of text")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers where a command supports them")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list or export catalog algebras")
    c.add_argument("action", choices=["list", "export"])
    c.add_argument("key", nargs="?",
                   help="catalog key (required for export)")
    c.set_defaults(handler=_cmd_catalog)

    e = sub.add_parser("eval", help="evaluate a term in a catalog algebra")
    e.add_argument("key")
    e.add_argument("term")
    e.add_argument("--assign", default="",
                   help="comma separated variable=label pairs")
    e.set_defaults(handler=_cmd_eval)

    ch = sub.add_parser("check", help="check a suite or one statement")
    ch.add_argument("key")
    g = ch.add_mutually_exclusive_group(required=True)
    g.add_argument("--suite", choices=suite_names())
    g.add_argument("--identity", help="statement source text")
    ch.set_defaults(handler=_cmd_check)

    st = sub.add_parser("structure", help="subuniverses, congruences, "
                                          "automorphisms, congruence extension")
    st.add_argument("what", choices=["subs", "cons", "autos", "cep"])
    st.add_argument("key")
    st.set_defaults(handler=_cmd_structure)

    si = sub.add_parser("simple", help="is the algebra simple")
    si.add_argument("key")
    si.set_defaults(handler=_cmd_simple)

    pr = sub.add_parser("primality", help="primality classification")
    pr.add_argument("key")
    pr.set_defaults(handler=_cmd_primality)

    ve = sub.add_parser("verify", help="batch verification reports")
    ve.add_argument("what", choices=sorted(_VERIFY_HANDLERS))
    ve.add_argument("--group", help="restrict 'lemmas' to one group")
    ve.add_argument("--max-size", type=int, default=4, dest="max_size",
                    help="lattice size bound for 'stone'")
    ve.set_defaults(handler=_cmd_verify)

    va = sub.add_parser("variety", help="membership and counting")
    va_sub = va.add_subparsers(dest="action", required=True)
    vm = va_sub.add_parser("member")
    vm.add_argument("key")
    vm.add_argument("--gens", required=True,
                    help="comma separated generator keys")
    vm.set_defaults(handler=_cmd_variety)
    vc = va_sub.add_parser("count")
    vc.add_argument("--ambient", required=True,
                    choices=sorted(varieties.AMBIENTS))
    vc.set_defaults(handler=_cmd_variety)

    am = sub.add_parser("amalgam", help="amalgamation verdict tables")
    am_sub = am.add_subparsers(dest="action", required=True)
    ac = am_sub.add_parser("check")
    acg = ac.add_mutually_exclusive_group(required=True)
    acg.add_argument("--variety", help="comma separated generator keys")
    acg.add_argument("--all-subvarieties-of", dest="all_subvarieties_of",
                     choices=sorted(varieties.AMBIENTS),
                     help="every singleton generated subvariety plus the "
                          "full ambient")
    ac.add_argument("--oracle", action="store_true",
                    help="cross check obstructions with the brute force "
                         "product search")
    ac.set_defaults(handler=_cmd_amalgam)

    se = sub.add_parser("search", help="enumerate algebras on a lattice")
    se.add_argument("--lattice", required=True,
                    help="catalog key or JSON file")
    se.add_argument("--require", default="SH",
                    help="comma separated suite names or statements")
    se.add_argument("--forbid", default="",
                    help="comma separated suite names or statements")
    se.add_argument("--limit", type=int, default=None)
    se.add_argument("--timeout", type=float, default=None)
    se.add_argument("--order", default="row-major",
                    choices=["row-major", "column-major"])
    se.set_defaults(handler=_cmd_search)
    return p


def run(argv=None) -> CommandResult:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return CommandResult(int(e.code or 0), "")
    if args.command == "catalog" and args.action == "export" and not args.key:
        return CommandResult(2, "catalog export needs a key")
    try:
        result = args.handler(args)
    except ShwError as e:
        return CommandResult(2, f"error: {e}")
    if args.json and result.payload is not None:
        return CommandResult(result.code,
                             json.dumps(result.payload, indent=2,
                                        sort_keys=True),
                             result.payload)
    return result


def main(argv=None) -> int:
    result = run(argv)
    if result.text:
        stream = sys.stderr if result.code == 2 else sys.stdout
        print(result.text, file=stream)
    return result.code


if __name__ == "__main__":
    raise SystemExit(main())
