"""qgrass command line.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import List, Optional

from . import exact
from .explorer import GraphFormatError, GraphValidationError, explore, export_native, find_pair, load_graph
from .graph import DEFAULT_CAP, CapExceeded, DistanceError, witness_pair
from .qarith import ParameterError, QParams
from .recover import KINDS, VARIANTS, PairVectors, gram_table, recover_from_vectors, recovery_coeffs, transition
from .euclid import hat
from .subspace import join, meet
from .suite import Context, anchors_covered, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample", type=int, default=None,
                   help="pairs per distance; also forces sampled mode (no global enumeration)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest vertex count to enumerate")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--out", default=None, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qgrass", description="Grassmann graph Euclidean representation toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the invariant suite")
    _common(p)
    p.add_argument("--only", action="append", default=None, help="run only the named check (repeatable)")

    p = sub.add_parser("gram", help="emit a Gram or transition table")
    _common(p)
    p.add_argument("--kind", choices=KINDS + ("transition",), default="geometric")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--variant", choices=VARIANTS, default="full")
    p.add_argument("--direction", choices=("geo->comb", "comb->geo"), default="geo->comb")

    p = sub.add_parser("recover", help="recover meet and join hats on a witness pair")
    _common(p)
    p.add_argument("--i", type=int, default=None, help="distance (default: every 1 < i < k)")

    p = sub.add_parser("export-graph", help="write the native graph in the text format")
    _common(p)

    p = sub.add_parser("explore", help="run the three diagnostics on a graph file")
    _common(p)
    p.add_argument("graph")
    p.add_argument("--pair", default=None, help="'x,y' vertex ids (default: vertex 0 and a vertex at --distance)")
    p.add_argument("--distance", type=int, default=2)
    p.add_argument("--sources", type=int, default=8, help="vertices used to validate intersection numbers")
    return ap


def _params(args) -> QParams:
    return QParams(args.q, args.n, args.k)


def _context(args) -> Context:
    params = _params(args)
    cap = args.cap
    if args.sample is not None:
        cap = 0  # sampled mode: no global enumeration
    return Context(params, seed=args.seed, sample=args.sample or 20, cap=cap)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: List[List[object]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    ctx = _context(args)
    results = run_suite(ctx, args.only)
    if args.only and len(results) != len(set(args.only)):
        raise UsageError(f"unknown check name in {args.only}")
    ok = all(r.status != "fail" for r in results)
    mode = "full" if ctx.full else "sampled"
    if args.format == "json":
        _emit(args, _json({
            "params": ctx.params.as_dict(),
            "seed": ctx.seed,
            "mode": mode,
            "passed": ok,
            "anchors_covered": anchors_covered(),
            "checks": [r.to_json() for r in results],
        }))
    elif args.format == "csv":
        rows = [["check", "status", "seconds", "anchors"]]
        rows += [[r.name, r.status, f"{r.seconds:.3f}", "; ".join(r.anchors)] for r in results]
        _emit(args, _csv(rows))
    else:
        p = ctx.params
        lines = [f"verify q={p.q} n={p.n} k={p.k} seed={ctx.seed} mode={mode}"]
        for r in results:
            lines.append(f"{r.status.upper():4}  {r.seconds:7.2f}s  {r.name}  [{', '.join(r.anchors)}]")
            if r.status != "pass":
                lines.append("      " + json.dumps(r.detail, default=str, ensure_ascii=False))
        counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "skip")}
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gram(args) -> int:
    params = _params(args)
    if args.kind == "transition":
        table = transition(args.direction, args.variant, params, args.i)
    else:
        table = gram_table(args.kind, params, args.i)
    data = table.to_json()
    if args.format == "json":
        _emit(args, _json(data))
        return EXIT_OK
    rows_lab = data["labels"]
    cols_lab = data.get("col_labels", rows_lab)
    entries = table.entries
    if args.format == "csv":
        rows = [[""] + list(cols_lab)]
        rows += [[lab] + [exact.fmt(v) for v in row] for lab, row in zip(rows_lab, entries)]
        _emit(args, _csv(rows))
    else:
        width = max(len(exact.fmt(v)) for row in entries for v in row) + 2
        lines = [data["kind"] + f"  (q={params.q}, n={params.n}, k={params.k}, i={args.i})"]
        lines.append(" " * 10 + "".join(c.rjust(width) for c in cols_lab))
        for lab, row in zip(rows_lab, entries):
            lines.append(lab.ljust(10) + "".join(exact.fmt(v).rjust(width) for v in row))
        if "det" in data:
            lines.append(f"det = {exact.fmt(table.det)}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_recover(args) -> int:
    params = _params(args)
    ks = [args.i] if args.i is not None else list(range(2, params.k))
    if not ks:
        raise UsageError("no interior distance 1 < i < k")
    rng = random.Random(args.seed)
    records = []
    for i in ks:
        if not 1 < i < params.k:
            raise ParameterError(f"need 1 < i < k={params.k}, got i={i}")
        x, y, _ = witness_pair(params, i, rng)
        pv = PairVectors.of(x, y, params)
        hc, hs = hat(meet(x, y)), hat(join(x, y))
        for v in VARIANTS:
            cap, plus = recovery_coeffs(v, params, i)
            got_c, got_s = recover_from_vectors(pv, v)
            records.append({
                "i": i,
                "variant": v,
                "x": x.serialize(),
                "y": y.serialize(),
                "meet_coeffs": [exact.fmt(c) for c in cap],
                "join_coeffs": [exact.fmt(c) for c in plus],
                "meet_ok": got_c == hc,
                "join_ok": got_s == hs,
            })
    ok = all(r["meet_ok"] and r["join_ok"] for r in records)
    if args.format == "json":
        _emit(args, _json({"params": params.as_dict(), "seed": args.seed, "passed": ok, "records": records}))
    elif args.format == "csv":
        rows = [["i", "variant", "meet_coeffs", "join_coeffs", "meet_ok", "join_ok"]]
        rows += [[r["i"], r["variant"], " ".join(r["meet_coeffs"]), " ".join(r["join_coeffs"]),
                  r["meet_ok"], r["join_ok"]] for r in records]
        _emit(args, _csv(rows))
    else:
        lines = []
        for r in records:
            status = "OK" if r["meet_ok"] and r["join_ok"] else "MISMATCH"
            lines.append(f"i={r['i']} {r['variant']:5}  meet ({', '.join(r['meet_coeffs'])})"
                         f"  join ({', '.join(r['join_coeffs'])})  equality {status}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export(args) -> int:
    if not args.out:
        raise UsageError("export-graph needs --out PATH")
    params = _params(args)
    g = export_native(args.out, params, args.cap)
    sys.stderr.write(f"wrote {len(g)} vertices to {args.out}\n")
    return EXIT_OK


def cmd_explore(args) -> int:
    G = load_graph(args.graph, validate=True, n_sources=args.sources, seed=args.seed)
    if args.pair:
        try:
            x, y = (int(t) for t in args.pair.split(","))
        except ValueError:
            raise UsageError(f"--pair must look like 'x,y', got {args.pair!r}") from None
        if not (0 <= x < G.vertex_count and 0 <= y < G.vertex_count):
            raise UsageError("--pair ids outside the graph")
    else:
        x, y = find_pair(G, args.distance)
    rep = explore(G, x, y)
    if args.format == "json":
        _emit(args, _json(rep))
    elif args.format == "csv":
        rows = [["value", "count", "allowed"]]
        allowed = set(map(str, rep["allowed_values"]))
        rows += [[s["value"], s["count"], str(s["value"]) in allowed] for s in rep["spectrum"]]
        _emit(args, _csv(rows))
    else:
        p3 = rep["problem3"]
        pr = rep["pair"]
        lines = [
            f"graph q={G.params.q} n={G.params.n} k={G.params.k}, {G.vertex_count} vertices (validated)",
            f"pair x'={pr['x']} y'={pr['y']} at distance {pr['i']}; |B|={pr['|B|']} |C|={pr['|C|']}",
            f"allowed values: {rep['allowed_values']}",
            "observed: " + ", ".join(f"{s['value']} x{s['count']}" for s in rep["spectrum"]),
            f"problem 1 (values allowed): {rep['problem1_flag']}",
            f"problem 2 (partner classes {list(rep['partner_class_sizes'].values())} equitable): "
            f"{rep['problem2_equitable']}",
        ]
        if p3 is None:
            lines.append("problem 3: no vertex attains the top allowed value")
        else:
            lines.append(f"problem 3 (class of {p3['set_value']}, size {p3['set_size']}: closed={p3['closed']}, "
                         f"diameter {p3['diameter']} vs {p3['expected_diameter']}): {p3['flag']}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "gram": cmd_gram,
    "recover": cmd_recover,
    "export-graph": cmd_export,
    "explore": cmd_explore,
}


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command != "explore":
            _params(args)  # validate before any work
        return COMMANDS[args.command](args)
    except (ParameterError, DistanceError, CapExceeded, UsageError,
            GraphFormatError, GraphValidationError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
