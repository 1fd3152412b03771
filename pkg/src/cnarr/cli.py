"""Command-line interface.

Exit codes: 0 success, 2 arrangement cannot be resolved, 3 non-generic or
invalid base, 4 oracle region cap exceeded, 5 oracle disagreement.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import catalogue as cat
from .invariants import compute_invariants
from .omcore import InvalidTopeError, parse_signs, sign_string
from .oracle import OracleCapError, OracleDisagreementError, build_region_lattice, cross_validate
from .shards import NonGenericBaseError, analyze, base_from_point, classify, find_cycle

SCHEMA = "1"
EXIT_OK, EXIT_RESOLVE, EXIT_BASE, EXIT_CAP, EXIT_DISAGREE = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def parse_point(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise CliError(EXIT_BASE, f"base point needs three coordinates, got {text!r}")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise CliError(EXIT_BASE, f"malformed base point {text!r}") from None


def _entries(args) -> list:
    path = args.catalogue or cat.default_path()
    try:
        return cat.load_catalogue(path, validate=False)
    except (OSError, cat.CatalogueError, ValueError, KeyError) as exc:
        raise CliError(EXIT_RESOLVE, f"cannot read catalogue {path}: {exc}") from None


def resolve_arrangement(args):
    if getattr(args, "normals", None):
        try:
            return cat.arrangement_from_file(args.normals), None
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(EXIT_RESOLVE, f"cannot read normals file: {exc}") from None
    if not getattr(args, "arrangement", None):
        raise CliError(EXIT_RESOLVE, "no arrangement given (use --arrangement or --normals)")
    name = args.arrangement
    if name.startswith("F1(") and name.endswith(")"):
        try:
            return cat.near_pencil(int(name[3:-1])), None
        except ValueError as exc:
            raise CliError(EXIT_RESOLVE, str(exc)) from None
    try:
        entry = cat.find_entry(_entries(args), name)
    except KeyError:
        raise CliError(EXIT_RESOLVE, f"unknown arrangement {name!r}") from None
    return entry.arrangement, entry


def resolve_bases(args, arr, required: bool = True) -> Optional[list]:
    chosen = [x for x in (args.base_point, args.base_tope, args.all_bases or None) if x]
    if len(chosen) > 1:
        raise CliError(EXIT_BASE, "give exactly one base selector")
    if not chosen:
        if required:
            raise CliError(EXIT_BASE, "a base selector is required (--base-point, --base-tope or --all-bases)")
        return None
    if args.all_bases:
        return list(arr.topes)
    try:
        if args.base_point:
            B = base_from_point(arr, parse_point(args.base_point))
        else:
            B = parse_signs(args.base_tope)
        analyze(arr, B)
    except NonGenericBaseError as exc:
        raise CliError(EXIT_BASE, f"non-generic base point: {exc}") from None
    except (InvalidTopeError, ValueError) as exc:
        raise CliError(EXIT_BASE, str(exc)) from None
    return [tuple(B)]


def _single_base(args, arr):
    bases = resolve_bases(args, arr)
    if len(bases) != 1:
        raise CliError(EXIT_BASE, "this command needs a single base region")
    return bases[0]


# formatting ----------------------------------------------------------------


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _region_doc(an) -> dict:
    _, adj = an.edge_index()
    cyc = find_cycle(adj)
    nodes = an.nodes()
    return {
        "base": sign_string(an.base),
        "shards": an.shard_count,
        "edges": sum(len(r) for r in adj),
        "acyclic": cyc is None,
        "witness_cycle": None if cyc is None else [nodes[k].label for k in cyc],
    }


# commands ------------------------------------------------------------------


def cmd_list(args) -> str:
    entries = _entries(args)
    if args.family:
        entries = [e for e in entries if e.family == args.family]
    rows = []
    for e in entries:
        cls = e.expected_classification or {}
        rows.append({
            "name": e.name, "m": e.m, "regions": e.expected_regions, "family": e.family,
            "field": e.field_id, "verdict": cls.get("verdict"),
            "cn_count": cls.get("cn_count"), "ncn_count": cls.get("ncn_count"),
        })
    fmt = args.format or "text"
    if fmt == "json":
        return _json({"schema": SCHEMA, "entries": rows})
    keys = ["name", "m", "regions", "family", "field", "verdict", "cn_count", "ncn_count"]
    if fmt == "csv":
        return _csv(keys, [[r[k] for k in keys] for r in rows])
    lines = [f"{r['name']:<14} m={r['m']:<3} r={r['regions']:<4} {r['family'] or '-':<9} {r['verdict'] or '-'}"
             for r in rows]
    return "\n".join(lines) + ("\n" if lines else "")


def cmd_classify(args) -> str:
    arr, _ = resolve_arrangement(args)
    bases = resolve_bases(args, arr)
    fmt = args.format or "json"
    if args.all_bases:
        result = classify(arr, args.jobs)
        regions = []
        for rep in result.per_region:
            an = analyze(arr, rep.base)
            regions.append(_region_doc(an))
        doc = {
            "schema": SCHEMA, "arrangement": arr.name, "bases": "all",
            "cn_count": result.cn_count, "ncn_count": result.ncn_count, "verdict": result.verdict,
            "regions": regions,
        }
    else:
        an = analyze(arr, bases[0])
        reg = _region_doc(an)
        doc = {"schema": SCHEMA, "arrangement": arr.name, **reg,
               "cn_count": int(reg["acyclic"]), "ncn_count": int(not reg["acyclic"]),
               "verdict": None}
        regions = [reg]
    if fmt == "json":
        return _json(doc)
    if fmt == "csv":
        keys = ["base", "shards", "edges", "acyclic"]
        return _csv(keys + ["witness_cycle"], [[r[k] for k in keys] + [" ".join(r["witness_cycle"] or [])] for r in regions])
    if fmt == "text":
        lines = [f"{arr.name}"]
        if args.all_bases:
            lines.append(f"verdict {doc['verdict']}  CN {doc['cn_count']}  NCN {doc['ncn_count']}")
        for r in regions if not args.all_bases else []:
            lines.append(f"base {r['base']}  shards {r['shards']}  edges {r['edges']}  acyclic {r['acyclic']}")
            if r["witness_cycle"]:
                lines.append("cycle " + " -> ".join(r["witness_cycle"]))
        return "\n".join(lines) + "\n"
    raise CliError(EXIT_RESOLVE, f"format {fmt} not supported for classify")


def cmd_shards(args) -> str:
    arr, _ = resolve_arrangement(args)
    B = _single_base(args, arr)
    an = analyze(arr, B)
    hs = [args.hyperplane - 1] if args.hyperplane else list(range(arr.m))
    for h in hs:
        if not 0 <= h < arr.m:
            raise CliError(EXIT_RESOLVE, f"hyperplane index out of range: {h + 1}")
    nodes = [n for n in an.nodes() if n.hyperplane in hs]
    fmt = args.format or "text"
    if fmt == "json":
        return _json({
            "schema": SCHEMA, "arrangement": arr.name, "base": sign_string(B), "shards": an.shard_count,
            "pre": {str(i + 1): [k + 1 for k in an.pre[i]] for i in hs},
            "covectors": [{"hyperplane": n.hyperplane + 1, "vector": str(n)} for n in nodes],
        })
    if fmt == "csv":
        return _csv(["hyperplane", "vector"], [[n.hyperplane + 1, str(n)] for n in nodes])
    return "".join(f"{n.hyperplane + 1}\t{n}\n" for n in nodes)


def cmd_digraph(args) -> str:
    arr, _ = resolve_arrangement(args)
    B = _single_base(args, arr)
    an = analyze(arr, B)
    fmt = args.format or "dot"
    if args.hyperplanes:
        edges = sorted((i + 1, j + 1) for j in range(arr.m) for i in an.pre[j])
        if fmt == "json":
            return _json({"schema": SCHEMA, "arrangement": arr.name, "base": sign_string(B),
                          "nodes": list(range(1, arr.m + 1)), "edges": edges})
        lines = ["digraph H {"] + [f"  {k};" for k in range(1, arr.m + 1)]
        lines += [f"  {i} -> {j};" for i, j in edges] + ["}"]
        return "\n".join(lines) + "\n"
    nodes = an.nodes()
    _, adj = an.edge_index()
    if fmt == "json":
        return _json({"schema": SCHEMA, "arrangement": arr.name, "base": sign_string(B),
                      "nodes": [n.label for n in nodes],
                      "edges": [[nodes[a].label, nodes[b].label] for a, row in enumerate(adj) for b in row]})
    lines = ["digraph Sh {"]
    lines += [f'  n{k} [label="{n.label}"];' for k, n in enumerate(nodes)]
    lines += [f"  n{a} -> n{b};" for a, row in enumerate(adj) for b in row]
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_invariants(args) -> str:
    if args.arrangement or args.normals:
        arr, entry = resolve_arrangement(args)
        items = [(arr, entry.expected_regions if entry else None)]
    else:
        items = [(e.arrangement, e.expected_regions) for e in _entries(args)]
    reports = []
    for arr, regions in items:
        rep = compute_invariants(arr, regions if regions is not None else len(arr.topes))
        reports.append((arr.name, rep))
    fmt = args.format or "json"
    if fmt == "json":
        docs = [{"arrangement": name, **rep.to_json()} for name, rep in reports]
        return _json({"schema": SCHEMA, "invariants": docs})
    if fmt == "csv":
        rows = []
        for name, rep in reports:
            t = " ".join(f"{k}:{v}" for k, v in rep.t_vector.items())
            r = " ".join(f"{k}:{v}" for k, v in rep.r_vector.items())
            ex = "" if rep.exponents is None else " ".join(map(str, rep.exponents))
            rows.append([name, rep.m, *rep.f_vector, rep.chambers, t, r, ex])
        return _csv(["name", "m", "f0", "f1", "f2", "chambers", "t", "r", "exponents"], rows)
    lines = []
    for name, rep in reports:
        ex = "-" if rep.exponents is None else ",".join(map(str, rep.exponents))
        lines.append(f"{name}: f={rep.f_vector} chambers={rep.chambers} t={rep.t_vector} exponents={ex}")
    return "\n".join(lines) + "\n"


def cmd_oracle(args) -> str:
    arr, _ = resolve_arrangement(args)
    if len(arr.topes) > 200:
        raise CliError(EXIT_CAP, f"{arr.name} has {len(arr.topes)} regions, above the oracle cap of 200")
    bases = resolve_bases(args, arr)
    results = []
    try:
        for B in bases:
            r = cross_validate(arr, B)
            results.append({"base": sign_string(r["base"]), "regions": r["regions"], "edges": r["edges"],
                            "acyclic": r["acyclic"], "lattice_cn": r["lattice_cn"],
                            "semidistributive": r["semidistributive"]})
    except OracleCapError as exc:
        raise CliError(EXIT_CAP, str(exc)) from None
    except OracleDisagreementError as exc:
        raise CliError(EXIT_DISAGREE, f"oracle disagreement: {exc}") from None
    fmt = args.format or "json"
    if fmt == "json":
        return _json({"schema": SCHEMA, "arrangement": arr.name, "checked": len(results),
                      "cn_count": sum(r["lattice_cn"] for r in results), "results": results})
    if fmt == "csv":
        keys = ["base", "regions", "edges", "acyclic", "lattice_cn", "semidistributive"]
        return _csv(keys, [[r[k] for k in keys] for r in results])
    return f"{arr.name}: {len(results)} bases checked, all assertions pass\n"


COMMANDS = {
    "list": cmd_list,
    "classify": cmd_classify,
    "shards": cmd_shards,
    "digraph": cmd_digraph,
    "invariants": cmd_invariants,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalogue", default=os.environ.get("CATALOGUE_PATH"),
                        help="catalogue JSON file (default: bundled data, or $CATALOGUE_PATH)")
    common.add_argument("--format", choices=["json", "csv", "dot", "text"])
    common.add_argument("--out", help="write output to this file instead of stdout")

    arrsel = argparse.ArgumentParser(add_help=False)
    g = arrsel.add_mutually_exclusive_group()
    g.add_argument("--arrangement", help='catalogue name such as "A(10,60)_3", or F1(m)')
    g.add_argument("--normals", help="JSON file with a user arrangement")

    basesel = argparse.ArgumentParser(add_help=False)
    basesel.add_argument("--base-point", help="interior point x,y,z (rationals or decimals)")
    basesel.add_argument("--base-tope", help="tope as a +/- string")
    basesel.add_argument("--all-bases", action="store_true")
    basesel.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")

    p = argparse.ArgumentParser(prog="cnarr", description="Congruence normality of rank-3 simplicial arrangements")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("list", parents=[common], help="list catalogue entries")
    sp.add_argument("--family", choices=list(cat.FAMILIES))
    sub.add_parser("classify", parents=[common, arrsel, basesel], help="shard-digraph classification")
    sp = sub.add_parser("shards", parents=[common, arrsel, basesel], help="dump shard covectors")
    sp.add_argument("--hyperplane", type=int, help="1-based hyperplane index")
    sp = sub.add_parser("digraph", parents=[common, arrsel, basesel], help="DOT/JSON of the forcing digraph")
    sp.add_argument("--hyperplanes", action="store_true", help="emit the hyperplane digraph instead")
    sub.add_parser("invariants", parents=[common, arrsel], help="combinatorial invariants")
    sub.add_parser("oracle", parents=[common, arrsel, basesel], help="brute-force lattice cross-validation")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
