"""Command-line front end.

Every subcommand prints one JSON report on stdout (``construct`` prints the
loop itself) and a short summary on stderr. Exit codes: 0 success,
1 negative verdict, 2 usage error, 3 budget or size guard exceeded.
"""

import argparse
import hashlib
import json
import os
import re
import sys
import time

import numpy as np

from . import __version__
from .construct import MAX_TABLE_ORDER, named_loop, paige_order
from .errors import (BudgetExceeded, CarrierTooLarge, MoufangError, NoIdentity,
                     NotLatinSquare, NotSylowPrime, TableTooLarge, UnknownName)
from .loopcore import associativity_witness, from_cayley_table, is_moufang

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- loop files ------------------------------------------------------------------

def table_hash(table):
    t = np.ascontiguousarray(table, dtype="<i4")
    return hashlib.sha256(t.tobytes()).hexdigest()


def loop_to_json(L):
    if L.order > MAX_TABLE_ORDER:
        raise TableTooLarge(f"refusing to emit a table of order {L.order}")
    d = {"name": L.name or "", "order": L.order, "table": L.table.tolist()}
    if L.labels is not None:
        d["labels"] = list(L.labels)
    return d


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def parse_loop_text(text):
    """Raw ``(table, labels, name)`` from Loop JSON or TSV text."""
    s = text.strip()
    if s.startswith("{"):
        d = json.loads(s)
        if "table" not in d and "descriptor" in d:
            raise TableTooLarge(f"descriptor-only loop of order {d.get('order')} has no table")
        table = np.asarray(d["table"], dtype=np.int64)
        if "order" in d and table.shape[0] != d["order"]:
            raise NotLatinSquare(f"order {d['order']} does not match table size {table.shape[0]}")
        return table, d.get("labels"), d.get("name") or None
    rows = [[int(v) for v in line.split("\t")] for line in s.splitlines() if line.strip()]
    if len({len(r) for r in rows}) != 1:
        raise NotLatinSquare("ragged TSV table")
    return np.asarray(rows, dtype=np.int64), None, None


def read_loop(path):
    return from_cayley_table(*parse_loop_text(_read_text(path)))


def write_loop(L, path):
    _emit(json.dumps(loop_to_json(L), separators=(",", ":")), path)


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def budget(default):
    env = os.environ.get("MOUFANG_BUDGET")
    return int(env) if env else default


def _elems(S):
    return S.to_list()


# --- subcommands --------------------------------------------------------------------
# each returns (results dict, exit code, loop or None for the input fingerprint)

def large_descriptor(name):
    """Descriptor for Paige constructions whose table exceeds the emission cap."""
    m = re.fullmatch(r"paige-(hat-)?q(\d+)", name.lower())
    if not m:
        return None
    q = int(m.group(2))
    order = paige_order(q)
    if m.group(1) and q % 2:
        order *= 2
    return {"name": name, "order": order,
            "descriptor": {"construction": "paige-hat" if m.group(1) else "paige", "q": q}}


def cmd_construct(args):
    try:
        L = named_loop(args.name)
    except TableTooLarge:
        d = large_descriptor(args.name)
        if d is None:
            raise
        _emit(json.dumps(d, separators=(",", ":")), args.output)
        print(f"{args.name}: order {d['order']} above {MAX_TABLE_ORDER}, wrote descriptor",
              file=sys.stderr)
        return None, EXIT_OK, None
    write_loop(L, args.output)
    print(f"constructed {args.name}: order {L.order}", file=sys.stderr)
    return None, EXIT_OK, L


def cmd_check(args):
    text = _read_text(args.file)
    res = {"latin": True, "identity": True}
    try:
        L = from_cayley_table(*parse_loop_text(text))
    except NotLatinSquare as e:
        return {"latin": False, "identity": None, "error": str(e)}, EXIT_NEGATIVE, None
    except NoIdentity as e:
        return {"latin": True, "identity": False, "error": str(e)}, EXIT_NEGATIVE, None
    ok, triple = is_moufang(L)
    w = associativity_witness(L, seed=args.seed)
    res.update(order=L.order, moufang=ok, moufang_witness=list(triple) if triple else None,
               associative=w is None, associativity_witness=list(w) if w else None)
    return res, EXIT_OK if ok else EXIT_NEGATIVE, L


def cmd_series(args):
    from .structure import chief_decomposition
    L = read_loop(args.file)
    return chief_decomposition(L).as_dict(), EXIT_OK, L


def cmd_sylow(args):
    from .structure import (find_p_sylow, find_quasi_p_sylow, quasi_sylow_order,
                            sylow_verdict)
    L = read_loop(args.file)
    p = args.p
    v = sylow_verdict(L, p)
    res = {"p": p, "verdict": "sylow" if v.sylow else "non-sylow", "witness_q": v.witnesses}
    if args.quasi:
        S = find_quasi_p_sylow(L, p)
        res.update(quasi_order=quasi_sylow_order(L, p), subloop_order=S.order, elements=_elems(S))
        return res, EXIT_OK, L
    if not v.sylow:
        return res, EXIT_NEGATIVE, L
    try:
        S = find_p_sylow(L, p)
    except NotSylowPrime as e:
        res["verdict"] = "non-sylow"
        res["witness_q"] = e.witnesses
        return res, EXIT_NEGATIVE, L
    res.update(subloop_order=S.order, elements=_elems(S))
    return res, EXIT_OK, L


def cmd_radical(args):
    from .structure import group_type_radical, gr_p
    L = read_loop(args.file)
    if args.grp is not None:
        R = gr_p(L, args.grp)
        res = {"radical": f"Gr_{args.grp}"}
    else:
        R = group_type_radical(L)
        res = {"radical": "Gr"}
    res.update(order=R.order, elements=_elems(R))
    return res, EXIT_OK, L


def cmd_triality(args):
    from .triality import named_archetype, verify_triality
    G = named_archetype(args.archetype)
    rep = verify_triality(G, extract=args.extract_loop)
    res = {"archetype": args.archetype, "carrier_order": G.size, **rep.as_dict()}
    if args.extract_loop and rep.loop is not None:
        rep.loop.name = f"M({args.archetype})"
        res["loop"] = loop_to_json(rep.loop)
        res["embedding"] = rep.embedding.tolist()
    return res, EXIT_OK if rep.ok else EXIT_NEGATIVE, rep.loop


def cmd_mlt(args):
    from .permgrp import inner_mapping_group, multiplication_group
    L = read_loop(args.file)
    G = inner_mapping_group(L) if args.inner else multiplication_group(L)
    res = {"group": "Inn" if args.inner else "Mlt", "degree": G.degree, "order": G.order(),
           "base": G.base, "orbit_lengths": G.orbit_lengths(),
           "strong_generators": len(G.strong_generators)}
    return res, EXIT_OK, L


def cmd_psinn(args):
    from .mappings import DEFAULT_BUDGET, psinn_group
    L = read_loop(args.file)
    P = psinn_group(L, budget=budget(DEFAULT_BUDGET))
    res = {"order": P.order, "generators": len(P.generators),
           "kernel_companions": P.kernel_companions()}
    return res, EXIT_OK, L


def cmd_modules(args):
    from .s3mod import table1_report
    rows = table1_report(chi=args.chi, surrogate=args.surrogate)
    agree = all(r["relations"] and r["triality"] == r["expected"] for r in rows)
    for r in rows:
        mark = "yes" if r["triality"] else "---"
        print(f"V_{r['index']}^({r['chi']}) dim {r['dim']} over F{r['field']}: {mark}"
              f" (expected {'yes' if r['expected'] else '---'})", file=sys.stderr)
    return {"rows": rows, "all_agree": agree}, EXIT_OK if agree else EXIT_NEGATIVE, None


# --- parser ---------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    ap = _Parser(prog="moufang", description="Finite Moufang loop toolkit.")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized prefilters")
    ap.add_argument("--timing", action="store_true", help="include wall time in the report")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="emit a named loop as Loop JSON")
    p.add_argument("name")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", help="Latin, identity, Moufang and associativity checks")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("series", help="chief series with factor kinds")
    p.add_argument("file")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("sylow", help="Sylow-prime verdict and witness subloop")
    p.add_argument("file")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--quasi", action="store_true")
    p.set_defaults(func=cmd_sylow)

    p = sub.add_parser("radical", help="group-type radical Gr or Gr_p")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--gr", action="store_true")
    g.add_argument("--grp", type=int)
    p.set_defaults(func=cmd_radical)

    p = sub.add_parser("triality", help="build and verify a triality archetype")
    p.add_argument("archetype")
    p.add_argument("--extract-loop", action="store_true")
    p.set_defaults(func=cmd_triality)

    p = sub.add_parser("mlt", help="multiplication or inner mapping group order")
    p.add_argument("file")
    p.add_argument("--inner", action="store_true")
    p.set_defaults(func=cmd_mlt)

    p = sub.add_parser("psinn", help="order of the pseudo-inner group")
    p.add_argument("file")
    p.set_defaults(func=cmd_psinn)

    p = sub.add_parser("modules", help="indecomposable S3-module table with verdicts")
    p.add_argument("--chi", type=int, choices=[0, 2, 3])
    p.add_argument("--surrogate", type=int, default=7)
    p.set_defaults(func=cmd_modules)
    return ap


def run(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        results, code, L = args.func(args)
    except (BudgetExceeded, TableTooLarge, CarrierTooLarge) as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (UnknownName, FileNotFoundError, ValueError, MoufangError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if results is None:
        return code
    report = {"command": argv, "version": __version__, "results": results}
    if L is not None:
        report["input"] = {"order": L.order, "table_hash": table_hash(L.table)}
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - t0, 3)
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    print(f"{args.command}: exit {code}", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
