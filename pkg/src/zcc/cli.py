"""Command-line front end: count, weighted, lattice, betti, interpolate,
report, verify.

All persisted output is canonical JSON (sorted keys, exact rationals as
"a/b" strings, integers as JSON integers, never floats) or a lossy CSV
projection.  Identical invocations produce byte-identical output.

Exit codes: 0 success, 1 validation error, 2 guard or inconsistency error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .census import (CensusSpec, DEFAULT_POINT_GUARD, burnside_count,
                     enumerate_ordered, enumerate_unordered, run_census)
from .charpoly import ONE, parse_charpoly
from .errors import (GuardError, InconsistencyError, StabilizationCapError,
                     StructureError, ValidationError)
from .ffield import make_field
from .homology import complement_betti, complement_contributions
from .nlattice import (build_lattice, classify_edges, eval_int_poly, mobius,
                       point_count_polynomial)
from .stabkit import (_field_for, interpolate_in_q, lefschetz_report,
                      normalized_coefficients)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


# ---------------------------------------------------------------------------
# Flag parsing helpers
# ---------------------------------------------------------------------------


def _parse_d(text: str) -> tuple:
    try:
        d = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad degree vector {text!r}") from exc
    if not d or any(x < 0 for x in d):
        raise ValidationError(f"bad degree vector {text!r}")
    return d


def _parse_q(text: str):
    if "^" in text:
        p_str, _, e_str = text.partition("^")
        try:
            return make_field(int(p_str), int(e_str))
        except ValueError as exc:
            raise ValidationError(f"bad field size {text!r}") from exc
    try:
        q = int(text)
    except ValueError as exc:
        raise ValidationError(f"bad field size {text!r}") from exc
    return _field_for(q)


def _parse_int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"bad integer list {text!r}") from exc


def _parse_samples(text: str) -> list:
    out = []
    for item in text.split(","):
        q_str, sep, v_str = item.partition("=")
        if not sep:
            raise ValidationError(f"bad sample {item!r}; use q=value")
        try:
            out.append((int(q_str), Fraction(v_str)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad sample {item!r}") from exc
    return out


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("ZCC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValidationError(f"bad ZCC_THREADS {env!r}") from exc
    return 1


def _guard(args) -> int:
    return 10 ** 18 if args.unsafe_guard else DEFAULT_POINT_GUARD


# ---------------------------------------------------------------------------
# Output rendering
# ---------------------------------------------------------------------------


def render_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _emit(args, payload, csv_rows=None) -> None:
    if args.format == "csv":
        if csv_rows is None:
            raise ValidationError("csv output is not supported by this subcommand")
        text = render_csv(csv_rows)
    else:
        text = render_json(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _census_csv(result) -> list:
    d = result.to_json_dict()
    header = sorted(d)
    return [header, [d[k] for k in header]]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_count(args) -> int:
    field = _parse_q(args.q)
    spec = CensusSpec(d=_parse_d(args.d), n=args.n, field=field, poly=ONE,
                      mode=args.mode)
    result = run_census(spec, guard=_guard(args), threads=_threads(args),
                        factor_seed=args.factor_seed)
    _emit(args, result.to_json_dict(), _census_csv(result))
    return 0


def _cmd_weighted(args) -> int:
    field = _parse_q(args.q)
    d = _parse_d(args.d)
    poly = parse_charpoly(args.poly, m=len(d))
    if args.mode == "ordered":
        raise ValidationError("ordered census is unweighted; use `count`")
    spec = CensusSpec(d=d, n=args.n, field=field, poly=poly, mode=args.mode)
    result = run_census(spec, guard=_guard(args), threads=_threads(args),
                        factor_seed=args.factor_seed)
    _emit(args, result.to_json_dict(), _census_csv(result))
    return 0


def _cmd_lattice(args) -> int:
    lattice = build_lattice(_parse_d(args.d), args.n,
                            guard=10 ** 6 if args.unsafe_guard else 10)
    mob = mobius(lattice)
    edges = classify_edges(lattice)
    coeffs = point_count_polynomial(lattice, args.dimx)
    payload = {
        "d": list(lattice.d),
        "n": lattice.n,
        "num_elements": lattice.size,
        "elements": [
            {
                "blocks": [[list(pt) for pt in block] for block in part.blocks],
                "num_blocks": part.num_blocks,
                "mobius": mob.from_bottom[i],
            }
            for i, part in enumerate(lattice.elements)
        ],
        "covers": [list(c) for c in lattice.covers],
        "edge_counts": {t.value: c for t, c in edges.items()},
        "mobius_top": mob.from_bottom[-1] if lattice.size else None,
        "point_count_coefficients": list(coeffs),
    }
    _emit(args, payload)
    return 0


def _cmd_betti(args) -> int:
    lattice = build_lattice(_parse_d(args.d), args.n,
                            guard=10 ** 6 if args.unsafe_guard else 10)
    betti = complement_betti(lattice, args.dimx)
    contribs = complement_contributions(lattice, args.dimx)
    payload = {
        "d": list(lattice.d),
        "n": lattice.n,
        "dim_x": args.dimx,
        "betti": betti.as_list(),
        "contributions": [
            {
                "element": idx,
                "blocks": [[list(pt) for pt in block]
                           for block in lattice.elements[idx].blocks],
                "codimension": cd,
                "by_degree": {str(i): r for i, r in sorted(contrib.items())},
            }
            for idx, cd, contrib in contribs
        ],
    }
    rows = [["degree", "rank"]] + [[i, b] for i, b in enumerate(betti.as_list())]
    _emit(args, payload, rows)
    return 0


def _cmd_interpolate(args) -> int:
    samples = _parse_samples(args.samples)
    poly = interpolate_in_q(samples, expected_degree=args.expected_degree)
    payload = {
        "samples": [[q, str(v)] for q, v in poly.samples],
        "degree": poly.degree,
        "coefficients": [str(c) for c in poly.coefficients],
    }
    if args.topdim is not None:
        payload["normalized"] = [
            str(c) for c in normalized_coefficients(poly, args.topdim)]
    rows = [["power", "coefficient"]] + [
        [k, str(c)] for k, c in enumerate(poly.coefficients)]
    _emit(args, payload, rows)
    return 0


def _cmd_report(args) -> int:
    if args.config:
        clashing = [name for value, name in
                    ((args.m, "--m"), (args.n, "--n"), (args.d_list, "--d-list"),
                     (args.q_list, "--q-list"), (args.polys, "--polys"),
                     (args.truncation, "--truncation")) if value is not None]
        if clashing:
            raise ValidationError(
                f"--config conflicts with {', '.join(clashing)}")
        with open(args.config, "r", encoding="utf-8") as handle:
            cfg = json.load(handle)
        m = int(cfg.get("m", 2))
        n = int(cfg.get("n", 1))
        d_list = [int(x) for x in cfg["d_list"]]
        q_list = [int(x) for x in cfg["q_list"]]
        poly_texts = [str(s) for s in cfg.get("polys", ["1"])]
        truncation = cfg.get("truncation")
    else:
        for flag, name in ((args.m, "--m"), (args.n, "--n"),
                           (args.d_list, "--d-list"), (args.q_list, "--q-list")):
            if flag is None:
                raise ValidationError(f"{name} is required without --config")
        m, n = args.m, args.n
        d_list = _parse_int_list(args.d_list)
        q_list = _parse_int_list(args.q_list)
        poly_texts = (args.polys or "1").split(";")
        truncation = args.truncation
    reports = {}
    for text in poly_texts:
        poly = parse_charpoly(text, m=m)
        rep = lefschetz_report(d_list, n, m, poly, q_list,
                               truncation=truncation, guard=_guard(args),
                               threads=_threads(args))
        reports[text] = rep.to_json_dict()
    rows = [["poly", "d", "c_i..."]]
    for text in sorted(reports):
        for pt in reports[text]["points"]:
            rows.append([text, "|".join(str(x) for x in pt["d"])] + pt["normalized"])
    _emit(args, {"reports": reports}, rows)
    return 0


VERIFY_GRID = {
    "d_vectors": [(2,), (3,), (1,1), (2,1), (2,2)],
    "n_values": [1, 2],
    "q_values": [2, 3],
    "polys": ["1", "X[1,1]"],
}


def _cmd_verify(args) -> int:
    checks = []
    all_pass = True

    def add(kind, params, ok, lhs, rhs):
        nonlocal all_pass
        all_pass = all_pass and ok
        checks.append({
            "check": kind, "params": params, "ok": ok,
            "lhs": str(lhs), "rhs": str(rhs),
        })
        line = "PASS" if ok else "FAIL"
        sys.stderr.write(f"{line} {kind} {params}: {lhs} vs {rhs}\n")

    guard = _guard(args)
    threads = _threads(args)
    for q in VERIFY_GRID["q_values"]:
        field = make_field(q)
        for d in VERIFY_GRID["d_vectors"]:
            for n in VERIFY_GRID["n_values"]:
                params = f"d={d} n={n} q={q}"
                ordered = enumerate_ordered(
                    CensusSpec(d, n, field, ONE, "ordered"), guard)
                if not (len(d) == 1 and n == 1):
                    lattice = build_lattice(d, n)
                    nq = eval_int_poly(point_count_polynomial(lattice, 1), q)
                    add("ordered=lattice", params,
                        ordered.point_count == nq, ordered.point_count, nq)
                for text in VERIFY_GRID["polys"]:
                    poly = parse_charpoly(text, m=len(d))
                    unordered = enumerate_unordered(
                        CensusSpec(d, n, field, poly, "unordered"), guard, threads)
                    burnside = burnside_count(
                        CensusSpec(d, n, field, poly, "burnside"), guard)
                    add("unordered=burnside", params + f" P={text}",
                        (unordered.total, unordered.point_count)
                        == (burnside.total, burnside.point_count),
                        unordered.total, burnside.total)
    payload = {"all_pass": all_pass, "checks": checks}
    _emit(args, payload)
    return 0 if all_pass else 2


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _add_common(sub) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--output", default=None, help="write output to a file")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker count (default: ZCC_THREADS or 1)")
    sub.add_argument("--unsafe-guard", action="store_true",
                     help="lift desk-scale size guards (deliberate large runs)")
    sub.add_argument("--factor-seed", type=int, default=0,
                     help="extra seed mixed into derandomized factorization "
                          "(results are seed-invariant)")


def build_parser() -> _Parser:
    parser = _Parser(prog="zcc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("count", help="unweighted point count")
    p.add_argument("--d", required=True, help="degree vector, e.g. 2,2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", required=True, help="field size p or p^e")
    p.add_argument("--mode", choices=("ordered", "unordered", "burnside"),
                   default="unordered")
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = subs.add_parser("weighted", help="census weighted by a statistic")
    p.add_argument("--d", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--poly", required=True, help='statistic, e.g. "X[1,1]^2-2"')
    p.add_argument("--mode", choices=("unordered", "burnside"),
                   default="unordered")
    _add_common(p)
    p.set_defaults(func=_cmd_weighted)

    p = subs.add_parser("lattice", help="export the n-equals partition lattice")
    p.add_argument("--d", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dimx", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_lattice)

    p = subs.add_parser("betti", help="complement Betti numbers")
    p.add_argument("--d", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dimx", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_betti)

    p = subs.add_parser("interpolate", help="exact interpolation in q")
    p.add_argument("--samples", required=True, help="q=value pairs, e.g. 2=2,3=6,5=20")
    p.add_argument("--expected-degree", type=int, default=None)
    p.add_argument("--topdim", type=int, default=None,
                   help="also emit normalized coefficients for this top dimension")
    _add_common(p)
    p.set_defaults(func=_cmd_interpolate)

    p = subs.add_parser("report", help="stabilization report over a degree sweep")
    p.add_argument("--config", default=None, help="JSON sweep configuration file")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d-list", default=None, help="e.g. 1,2,3")
    p.add_argument("--q-list", default=None, help="e.g. 2,3,5,7,11,13,17")
    p.add_argument("--polys", default=None, help="semicolon-separated statistics")
    p.add_argument("--truncation", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_report)

    p = subs.add_parser("verify", help="run the built-in oracle-triangle grid")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (GuardError, InconsistencyError, StructureError,
            StabilizationCapError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
