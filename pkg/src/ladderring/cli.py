"""Command-line front end.

Subcommands: decompose | verify-conjecture | verify-identity |
verify-smooth | census | kl | width | jacquet.  Exit codes: 0 success,
1 disagreement/violation found, 2 usage or parse error, 3 resource
abort.  With --json, stdout carries one record per line with keys
kind/inputs/result/agree; reports are deterministic in (flags, seed)
and identical for any worker count (timings go to stderr).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import sweeps
from .decompose import product_irreducibles, product_ladders
from .jacquet import indicator_multiplicity, jacquet_pairs_ladder
from .klengine import KLCacheError, backend_name, format_poly, get_engine
from .perms import avoids, format_permutation, parse_permutation
from .segments import (is_ladder, min_ladder_cover, parse_multisegment,
                       width)

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def default_cache_path() -> str:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache")
    return os.path.join(base, "ladderring", "kl-v1.cache")


class Reporter:
    """Collects records; emits JSON lines or human text on stdout."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.violations = 0

    def record(self, kind: str, inputs, result, agree: bool) -> None:
        if not agree:
            self.violations += 1
        if self.as_json:
            print(json.dumps({"kind": kind, "inputs": inputs,
                              "result": result, "agree": agree},
                             sort_keys=True, separators=(",", ":")))
        elif not agree:
            print(f"DISAGREE {kind}: inputs={inputs} result={result}")

    def text(self, line: str) -> None:
        if not self.as_json:
            print(line)

    def summary(self, kind: str, scope, result) -> int:
        agree = self.violations == 0
        if self.as_json:
            print(json.dumps({"kind": kind, "inputs": scope,
                              "result": result, "agree": agree},
                             sort_keys=True, separators=(",", ":")))
        else:
            status = "OK" if agree else f"{self.violations} violation(s)"
            print(f"{kind}: {result} -> {status}")
        return EXIT_OK if agree else EXIT_DISAGREE


def _load_cache(args) -> None:
    if args.no_cache:
        return
    path = args.cache or default_cache_path()
    if os.path.exists(path):
        try:
            get_engine().load_cache(path)
        except (KLCacheError, OSError) as exc:
            print(f"ignoring unusable KL cache {path}: {exc}", file=sys.stderr)


def _save_cache(args) -> None:
    if args.no_cache:
        return
    eng = get_engine()
    if eng.dirty:
        path = args.cache or default_cache_path()
        try:
            eng.save_cache(path)
        except OSError as exc:
            print(f"could not persist KL cache {path}: {exc}", file=sys.stderr)


# -- subcommands -----------------------------------------------------------------


def cmd_decompose(args, rep: Reporter) -> int:
    m1 = parse_multisegment(args.m1)
    m2 = parse_multisegment(args.m2)
    ladders = is_ladder(m1) and is_ladder(m2)
    if args.indicator and not ladders:
        raise SystemExit2("--indicator needs two ladder factors")
    result = (product_ladders(m1, m2) if ladders
              else product_irreducibles([m1, m2]))
    for w, mult in result.sorted_items():
        sigma = result.factor(w)
        entry = {
            "w": format_permutation(w),
            "multisegment": str(sigma),
            "multiplicity": mult,
            "width": width(sigma),
            "avoids321": avoids(w, (3, 2, 1)),
            "avoids3412": avoids(w, (3, 4, 1, 2)),
        }
        if args.indicator:
            entry["indicator"] = indicator_multiplicity(sigma, m1, m2)
        if rep.as_json:
            rep.record("factor", {"m1": str(m1), "m2": str(m2)}, entry, True)
        else:
            extra = f"  indicator={entry['indicator']}" if args.indicator else ""
            rep.text(f"m^{entry['w']}  = {entry['multisegment']}  "
                     f"x{mult}  width={entry['width']}  "
                     f"avoids321={entry['avoids321']}  "
                     f"avoids3412={entry['avoids3412']}{extra}")
    rep.text(f"{len(result.mults)} irreducible factor(s)")
    return EXIT_OK


def _run_pair_sweep(pairs, chunk_fn, kind: str, scope, args,
                    rep: Reporter) -> int:
    """Shared driver for the conjecture and smooth sweeps."""
    n = sweeps.load_pair_tasks(pairs, want_all_reports=rep.as_json)
    ranges = sweeps.chunk_ranges(n, max(64, min(4096, n // max(args.workers * 16, 1) + 1)))
    checked = 0
    t0 = time.time()
    for count, reports in sweeps.run_tasks(ranges, chunk_fn, args.workers,
                                           chunksize=1):
        checked += count
        for report in reports:
            if rep.as_json or not report.agree:
                rep.record(kind, {"m1": report.m1, "m2": report.m2},
                           _report_payload(report), report.agree)
        if checked % 100000 < count:
            print(f"... {checked}/{n} pairs, {time.time()-t0:.0f}s",
                  file=sys.stderr)
    result = {"instances": checked, "violations": rep.violations}
    print(f"wall-time {time.time()-t0:.1f}s [{backend_name()} KL kernel]",
          file=sys.stderr)
    return rep.summary(f"{kind}-summary", scope, result)


def cmd_verify_conjecture(args, rep: Reporter) -> int:
    if args.mode == "exhaustive":
        pairs = sweeps.sorted_by_system(
            sweeps.enumerate_ladder_pairs(args.max_total, args.window))
        scope = {"mode": "exhaustive", "max_total": args.max_total,
                 "window": args.window, "seed": None}
    else:
        pairs = sweeps.sorted_by_system(sweeps.random_ladder_pairs(
            args.total, args.window, args.count, args.seed))
        scope = {"mode": "random", "total": args.total, "count": args.count,
                 "window": args.window, "seed": args.seed}
    get_engine().warm(min(args.max_total if args.mode == "exhaustive" else args.total, 6))
    return _run_pair_sweep(pairs, sweeps.conjecture_chunk, "conjecture",
                           scope, args, rep)


def _report_payload(report: sweeps.PairReport) -> dict:
    return {
        "candidates": report.candidates,
        "factors": report.factors,
        "disagreements": list(report.disagreements),
        "multiplicity": list(report.multiplicity_violations),
        "width": list(report.width_violations),
        "pattern": list(report.pattern_violations),
    }


def cmd_verify_identity(args, rep: Reporter) -> int:
    from .perms import enumerate_avoiders
    t0 = time.time()
    total_checked = 0
    for n in range(1, args.n + 1):
        zs = list(enumerate_avoiders(n, [(3, 2, 1)]))
        for ztxt, value, ok in sweeps.run_tasks(
                zs, sweeps.verify_identity_term, args.workers, chunksize=8):
            total_checked += 1
            if not ok:
                rep.record("identity", {"z": ztxt}, {"sum": value}, False)
    print(f"wall-time {time.time()-t0:.1f}s [{backend_name()} KL kernel]",
          file=sys.stderr)
    scope = {"mode": "identity", "n": args.n, "window": None, "seed": None}
    return rep.summary("identity-summary", scope,
                       {"avoiders_checked": total_checked,
                        "violations": rep.violations})


def cmd_verify_smooth(args, rep: Reporter) -> int:
    if args.instances:
        if len(args.instances) % 2:
            raise SystemExit2("instances must come in pairs")
        texts = args.instances
        pairs = [(parse_multisegment(texts[i]), parse_multisegment(texts[i + 1]))
                 for i in range(0, len(texts), 2)]
        for m1, m2 in pairs:
            if not (is_ladder(m1) and is_ladder(m2)):
                raise SystemExit2(f"not a ladder pair: {m1} {m2}")
        scope = {"mode": "instances", "count": len(pairs),
                 "window": None, "seed": None}
    else:
        pairs = sweeps.sorted_by_system(
            sweeps.enumerate_ladder_pairs(args.max_total, args.window))
        scope = {"mode": "exhaustive", "max_total": args.max_total,
                 "window": args.window, "seed": None}
    get_engine().warm(min(args.max_total, 6))
    return _run_pair_sweep(pairs, sweeps.smooth_chunk, "smooth",
                           scope, args, rep)


def cmd_census(args, rep: Reporter) -> int:
    counts = sweeps.census_counts(args.n, with_kl=args.kl if args.kl else None)
    ok = (counts["avoid_321"] == counts["catalan"]
          and counts["avoid_321_3412"] == counts["fibonacci"]
          and counts.get("smooth_kl", counts["smooth_pattern"])
          == counts["smooth_pattern"])
    rep.record("census", {"n": args.n}, counts, ok)
    if not rep.as_json:
        line = (f"n={args.n}: |avoid 321| = {counts['avoid_321']} "
                f"(Catalan {counts['catalan']}), "
                f"|avoid 321,3412| = {counts['avoid_321_3412']} "
                f"(Fibonacci {counts['fibonacci']}), "
                f"|smooth| = {counts['smooth_pattern']}")
        if "smooth_kl" in counts:
            line += f" (KL census {counts['smooth_kl']})"
        rep.text(line)
    return EXIT_OK if ok else EXIT_DISAGREE


def cmd_kl(args, rep: Reporter) -> int:
    w = parse_permutation(args.w)
    x = parse_permutation(args.x, size_hint=len(w))
    if len(x) != len(w):
        raise SystemExit2("x and w must have the same size")
    poly = get_engine().poly(x, w)
    if rep.as_json:
        rep.record("kl", {"x": format_permutation(x), "w": format_permutation(w)},
                   {"coefficients": list(poly), "at_one": sum(poly)}, True)
    else:
        rep.text(format_poly(poly))
    return EXIT_OK


def cmd_width(args, rep: Reporter) -> int:
    m = parse_multisegment(args.m)
    ladders = min_ladder_cover(m)
    if rep.as_json:
        rep.record("width", {"m": str(m)},
                   {"width": width(m), "cover": [str(c) for c in ladders]}, True)
    else:
        rep.text(str(width(m)))
        for c in ladders:
            rep.text(f"  {c}")
    return EXIT_OK


def cmd_jacquet(args, rep: Reporter) -> int:
    m = parse_multisegment(args.m)
    if not is_ladder(m):
        raise SystemExit2(f"{m} is not a ladder")
    pairs = jacquet_pairs_ladder(m)
    if rep.as_json:
        for left, right in pairs:
            rep.record("jacquet-pair", {"m": str(m)},
                       {"left": str(left), "right": str(right)}, True)
    else:
        rep.text(f"{len(pairs)} pairs")
        for left, right in pairs:
            rep.text(f"  {left} (x) {right}")
    return EXIT_OK


# -- driver ----------------------------------------------------------------------


class SystemExit2(Exception):
    """Usage-level error: exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ladderring",
        description="decomposition rules for products of ladder representations")
    p.add_argument("--json", action="store_true", help="structured line records")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int, default=8,
                   help="support window bound for verification sweeps")
    p.add_argument("--cache", default=None, help="KL cache file path")
    p.add_argument("--no-cache", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose a product of two irreducibles")
    d.add_argument("m1")
    d.add_argument("m2")
    d.add_argument("--indicator", action="store_true",
                   help="also compute indicator multiplicities (ladder pairs)")
    d.set_defaults(fn=cmd_decompose)

    c = sub.add_parser("verify-conjecture",
                       help="ground truth vs the 321+indicator rule over ladder pairs")
    c.add_argument("--max-total", type=int, default=6)
    c.add_argument("--window", type=int, default=argparse.SUPPRESS,
                   help="support window bound (also a global flag)")
    c.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    c.add_argument("--total", type=int, default=8, help="segment total in random mode")
    c.add_argument("--count", type=int, default=200, help="instances in random mode")
    c.set_defaults(fn=cmd_verify_conjecture)

    i = sub.add_parser("verify-identity",
                       help="signed interleaved KL sums equal 1 on 321-avoiders")
    i.add_argument("--n", type=int, default=7)
    i.set_defaults(fn=cmd_verify_identity)

    s = sub.add_parser("verify-smooth",
                       help="indicator equals ground truth on smooth keys")
    s.add_argument("--max-total", type=int, default=5)
    s.add_argument("--window", type=int, default=argparse.SUPPRESS,
                   help="support window bound (also a global flag)")
    s.add_argument("instances", nargs="*",
                   help="explicit ladder pairs m1 m2 m1' m2' ...")
    s.set_defaults(fn=cmd_verify_smooth)

    n = sub.add_parser("census", help="pattern-avoidance and smoothness censuses")
    n.add_argument("--n", type=int, required=True)
    n.add_argument("--kl", action="store_true",
                   help="force the KL smoothness census (slow for n > 6)")
    n.set_defaults(fn=cmd_census)

    k = sub.add_parser("kl", help="print P_{x,w}")
    k.add_argument("x")
    k.add_argument("w")
    k.set_defaults(fn=cmd_kl)

    wd = sub.add_parser("width", help="width and a minimal ladder cover")
    wd.add_argument("m")
    wd.set_defaults(fn=cmd_width)

    j = sub.add_parser("jacquet", help="Jacquet pairs of a ladder")
    j.add_argument("m")
    j.set_defaults(fn=cmd_jacquet)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    rep = Reporter(args.json)
    try:
        _load_cache(args)
        code = args.fn(args, rep)
        _save_cache(args)
        return code
    except (SystemExit2, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("aborted", file=sys.stderr)
        return EXIT_RESOURCE
    except MemoryError:
        print("out of memory", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
