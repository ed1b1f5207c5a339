"""Command-line front end: verma-lab <subcommand> [flags].

Exit codes: 0 when no report item failed (findings never fail a run),
1 when a check failed or an internal error occurred, 2 for usage errors.
File outputs are deterministic: UTF-8, sorted keys, newline terminated,
no timestamps.  Timings are printed to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import suites
from .field import VermalabError
from .report import VerificationReport, golden_diff, report_text, write_text

SUBCOMMANDS = (
    "patterns",
    "verify-gl",
    "gt-spectrum",
    "whittaker",
    "ring",
    "qc-check",
    "flatness",
    "monodromy",
    "global-verify",
    "ktheory",
)


def _parse_spec(text: str) -> dict[str, Fraction]:
    out = {}
    if not text:
        return out
    for chunk in text.split(","):
        if "=" not in chunk:
            raise VermalabError(f"bad specialization entry: {chunk}")
        name, value = chunk.split("=", 1)
        out[name.strip()] = Fraction(value.strip())
    return out


def _threads() -> int:
    raw = os.environ.get("VERMALAB_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        raise VermalabError(f"VERMALAB_THREADS must be an integer, got {raw!r}")
    if k < 1:
        raise VermalabError("VERMALAB_THREADS must be at least 1")
    return k


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="verma-lab",
        description="exact operator calculus on the graded module and its verification suites",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int, required=True, help="rank")
        sp.add_argument("--degree", type=str, default=None, help="comma separated degree vector")
        sp.add_argument("--max-degree", type=int, default=None, help="bound on |d|")
        sp.add_argument("--mode", choices=("exact", "random-eval"), default="exact")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", type=str, default=None, help="output file path")
        sp.add_argument("--spec", type=str, default=None, help="x1=0,x2=1,... rational specialization")
        sp.add_argument("--golden", type=str, default=None, help="golden directory")
        sp.add_argument("--bless", action="store_true", help="write new goldens")
        if name == "patterns":
            sp.add_argument("--global", dest="global_points", action="store_true")
        if name == "gt-spectrum":
            sp.add_argument(
                "--generators",
                choices=("tildeCas", "detBundles", "detBundlesAll", "chern"),
                default="tildeCas",
            )
        if name == "monodromy":
            sp.add_argument("--path", type=str, required=True, help="JSON file with loop segments")
            sp.add_argument("--kappa", type=str, default="1/2")
            sp.add_argument("--tolerance", type=float, default=1e-6)
    return ap


def _require_degree(args) -> str:
    if args.degree is None:
        raise UsageError("--degree is required for this subcommand")
    return args.degree


def _require_max_degree(args) -> int:
    if args.max_degree is None:
        raise UsageError("--max-degree is required for this subcommand")
    return args.max_degree


class UsageError(VermalabError):
    pass


def run(argv: list[str]) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0
    t0 = time.time()
    try:
        payloads = _dispatch(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except VermalabError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    exit_code = 0
    produced_name = None
    produced_text = None
    for kind, name, text in payloads:
        if kind == "report":
            print(text[1], file=sys.stdout)
            report: VerificationReport = text[0]
            body = report_text(report, args.format)
            produced_name, produced_text = name, body
            if args.out:
                write_text(args.out, body)
            if not report.ok():
                exit_code = 1
        else:
            produced_name, produced_text = name, text
            if args.out:
                write_text(args.out, text)
            else:
                sys.stdout.write(text)
    if args.golden and produced_text is not None:
        result = golden_diff(produced_text, args.golden, produced_name, bless=args.bless)
        print(f"golden: {result['status']}", file=sys.stderr)
        if result["status"] == "mismatch":
            for mm in result["mismatches"]:
                print(f"  line {mm['line']}: produced {mm['produced']!r} vs golden {mm['golden']!r}", file=sys.stderr)
            exit_code = 1
    print(f"elapsed: {time.time() - t0:.2f}s", file=sys.stderr)
    return exit_code


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _dispatch(args) -> list:
    cmd = args.command
    spec = _parse_spec(args.spec) if args.spec else None
    _threads()
    if cmd == "patterns":
        listing = suites.patterns_listing(
            args.n, _require_degree(args), include_global=getattr(args, "global_points", False)
        )
        return [("data", f"patterns_n{args.n}.json", _json_text(listing))]
    if cmd == "verify-gl":
        decider = suites.ZeroDecider(args.mode, args.trials, args.seed)
        rep = suites.suite_verify_gl(args.n, _require_max_degree(args), decider)
        return [("report", f"verify_gl_n{args.n}.{args.format}", (rep, rep.render_text()))]
    if cmd == "gt-spectrum":
        rep, table = suites.suite_gt_spectrum(args.n, _require_degree(args), args.generators)
        payloads = [("report", f"gt_spectrum_n{args.n}.{args.format}", (rep, rep.render_text()))]
        if args.out:
            extra = suites.spectrum_csv(table) if args.format == "csv" else _json_text(table)
            write_text(args.out + ".table", extra)
        return payloads
    if cmd == "whittaker":
        rep, comp = suites.suite_whittaker(args.n, _require_degree(args))
        if args.out:
            write_text(args.out + ".component", _json_text(comp))
        return [("report", f"whittaker_n{args.n}.{args.format}", (rep, rep.render_text()))]
    if cmd == "ring":
        rep, table = suites.suite_ring(args.n, _require_degree(args), spec)
        return [
            ("report", f"ring_n{args.n}.{args.format}", (rep, rep.render_text())),
            ("data", f"ring_table_n{args.n}.json", _json_text(table)),
        ]
    if cmd == "qc-check":
        decider = suites.ZeroDecider(args.mode, args.trials, args.seed)
        rep = suites.suite_qc(args.n, _require_degree(args), decider)
        return [("report", f"qc_n{args.n}.{args.format}", (rep, rep.render_text()))]
    if cmd == "flatness":
        rep = suites.suite_flatness(args.n, _require_degree(args))
        return [("report", f"flatness_n{args.n}.{args.format}", (rep, rep.render_text()))]
    if cmd == "monodromy":
        if spec is None:
            raise UsageError("--spec is required for monodromy (x and h values)")
        with open(args.path, encoding="utf-8") as fh:
            payload = json.load(fh)
        segments = payload["segments"] if isinstance(payload, dict) else payload
        segments = [_coerce_segment(s) for s in segments]
        rep, out = suites.suite_monodromy(
            args.n,
            _require_degree(args),
            spec,
            Fraction(args.kappa),
            segments,
            tolerance=args.tolerance,
        )
        return [
            ("report", f"monodromy_n{args.n}.{args.format}", (rep, rep.render_text())),
            ("data", f"monodromy_matrix_n{args.n}.json", _json_text(out)),
        ]
    if cmd == "global-verify":
        rep = suites.suite_global(args.n, _require_max_degree(args))
        return [("report", f"global_n{args.n}.{args.format}", (rep, rep.render_text()))]
    if cmd == "ktheory":
        bound = args.max_degree if args.max_degree is not None else 3
        rep, table = suites.suite_ktheory(args.n, bound)
        payloads = [("report", f"ktheory_n{args.n}.{args.format}", (rep, rep.render_text()))]
        if args.out:
            extra = suites.ktheory_csv(table) if args.format == "csv" else _json_text(table)
            write_text(args.out + ".table", extra)
        return payloads
    raise UsageError(f"unknown subcommand {cmd}")


def _coerce_segment(seg: dict) -> dict:
    def pt(values):
        out = []
        for v in values:
            if isinstance(v, (list, tuple)):
                out.append(complex(v[0], v[1]))
            else:
                out.append(complex(v))
        return out

    return {"from": pt(seg["from"]), "to": pt(seg["to"])}


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
