"""Batch command-line surface: scan, convolve, sseries, verify, sievefn, bv.

Every subcommand writes a JSON report {command, config, results,
provenance: {version, seed, runtime_ms}} plus subcommand-specific CSV
artifacts.  All computation is deterministic under a fixed seed; the
thread-count knob is accepted for interface stability (the engines are
deterministic regardless of it), so artifacts are byte-stable apart from
the volatile runtime_ms field.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .arith import DEFAULT_LIMIT_BUDGET, build_prime_table
from .characters import ExceptionalZeroHypothesis
from .convolve import build_sequence, convolve, exceptional_scan
from .progressions import bv_profile, profile_totals
from .sievefn import chen_constants, chen_margin, p3_margin, solve_linear_sieve_functions
from .singular import main_term_M, partial_singular_series, singular_series
from .verify import SUITES, run_suite

_FLOAT_FMT = "%.12g"


def _fmt(x) -> str:
    if isinstance(x, float):
        return _FLOAT_FMT % x
    return str(x)


def _memory_budget() -> int:
    raw = os.environ.get("TWINSIEVE_MEMORY_BUDGET")
    if raw is None:
        return DEFAULT_LIMIT_BUDGET
    return max(int(raw) // 4, 1024)  # int32 entries


def _write_csv(path: Path, header: list[str], rows, enabled: bool = True) -> None:
    if not enabled:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _write_report(out_dir: Path, command: str, config: dict, results: dict,
                  seed: int, t0: float) -> Path:
    report = {
        "command": command,
        "config": config,
        "results": results,
        "provenance": {
            "version": __version__,
            "seed": seed,
            "runtime_ms": int((time.time() - t0) * 1000),
        },
    }
    path = out_dir / f"{command}.json"
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _parse_k(text: str) -> float:
    if text in ("inf", "infinity", "none"):
        return math.inf
    return int(text)


def _add_common(sub):
    sub.add_argument("--out", default=".", help="output directory for artifacts")
    sub.add_argument("--format", choices=["csv", "json"], default="csv",
                     help="primary artifact format (JSON report always written)")
    sub.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker count (accepted for config stability; engines are deterministic)")
    sub.add_argument("--config", default=None,
                     help="key=value file overriding command-line flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinsieve",
        description="Desk-scale verification lab for binary Goldbach convolutions "
        "with almost twin primes.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser(
        "scan",
        help="exceptional-set scan",
        description="Convolve two almost-twin prime indicators over [1, N] and "
        "list m = 4 mod 6 without representations. Artifacts: scan.csv "
        "(m, count, prediction, ratio for the sampled m) and scan.json.",
    )
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k1", type=_parse_k, required=True, help="factor bound for n1+2 ('inf' allowed)")
    p.add_argument("--k2", type=_parse_k, required=True)
    p.add_argument("--rough", default=None, help="a1,a2 roughness exponents (default off)")
    p.add_argument("--exact", action="store_true",
                   help="bit-exact counting (default float transform with exact re-verification)")
    p.add_argument("--cutoff", type=int, default=10_000, help="singular-series truncation")
    p.add_argument("--samples", type=int, default=512)
    _add_common(p)

    p = subs.add_parser(
        "convolve",
        help="raw sequence convolution",
        description="Build two named sequences and write their additive "
        "convolution. Artifacts: convolve.csv (m, value) and convolve.json.",
    )
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--kind1", required=True, help="Lambda0|Lambda|Lambda_k|Lambda_E3star")
    p.add_argument("--kind2", required=True)
    p.add_argument("--k", type=int, default=3, help="k for Lambda_k kinds")
    p.add_argument("--indicator", action="store_true", help="0/1 indicator variants")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--limit", type=int, default=200, help="rows written to CSV")
    _add_common(p)

    p = subs.add_parser(
        "sseries",
        help="singular series and main term",
        description="Singular series S(m), partial series, and the main-term "
        "pair (M, E) under an optional synthetic exceptional hypothesis. "
        "Artifact: sseries.json with {m, S, S_partial, M, E, tail_bound}.",
    )
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=100_000)
    p.add_argument("--hyp", default=None, help="r,beta synthetic exceptional zero")
    p.add_argument("--N", type=int, default=10_000)
    p.add_argument("--P", type=int, default=100)
    _add_common(p)

    p = subs.add_parser(
        "verify",
        help="lemma verification suites",
        description="Run identity/inequality sweeps. Suites: "
        + ", ".join(sorted(SUITES)) + ", or 'all'. Exit status is nonzero "
        "if any check fails. Artifact: verify.json pass report.",
    )
    p.add_argument("--suite", default="all")
    p.add_argument("--fast", action="store_true", help="reduced sweep sizes")
    p.add_argument("--weights-csv", default=None,
                   help="also export the sieve weights used by the sieves suite as CSV (d, lambda_d)")
    _add_common(p)

    p = subs.add_parser(
        "sievefn",
        help="linear-sieve functions and margins",
        description="Solve the delay system for (f, F) and evaluate the "
        "numerical margins. Artifacts: sievefn.csv (s, f, F) and "
        "sievefn.json margins report.",
    )
    p.add_argument("--smax", type=float, default=10.0)
    p.add_argument("--h", type=float, default=5e-4)
    p.add_argument("--eps", type=float, default=1e-3)
    _add_common(p)

    p = subs.add_parser(
        "bv",
        help="progression discrepancy profiles",
        description="Character-corrected discrepancy of Lambda or mu in "
        "progressions. Artifacts: bv.csv (P, q, a_max, discrepancy), "
        "bv_profile.csv (P, total), bv.json.",
    )
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--P-list", default="1,10,100", dest="P_list")
    p.add_argument("--weight", choices=["Lambda", "mu"], default="mu")
    _add_common(p)
    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    for line in Path(args.config).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not hasattr(args, key):
            raise SystemExit(f"config file sets unknown key {key!r}")
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(value))
        elif isinstance(current, float):
            setattr(args, key, float(value))
        else:
            setattr(args, key, value)


def _cmd_scan(args, out_dir: Path, t0: float) -> int:
    a1 = a2 = 0.0
    if args.rough:
        parts = args.rough.split(",")
        a1, a2 = float(parts[0]), float(parts[1])
    table = build_prime_table(max(args.N + 2, 1000), budget=_memory_budget())
    rep = exceptional_scan(
        args.N,
        args.k1,
        args.k2,
        a1,
        a2,
        table,
        mode="exact" if args.exact else "float",
        sample_count=args.samples,
        seed=args.seed,
        cutoff=args.cutoff,
        sample_all_even=(args.k1 == math.inf and args.k2 == math.inf and not args.rough),
    )
    rows = [
        (int(m), int(rep.counts[int(m)]), float(p), float(r))
        for m, p, r in zip(rep.sampled_m, rep.predictions, rep.ratios)
    ]
    _write_csv(out_dir / "scan.csv", ["m", "count", "prediction", "ratio"], rows,
               enabled=args.format == "csv")
    results = {
        "exceptional": rep.exceptional,
        "exceptional_verified": rep.verified,
        "thresholds": {"z1": rep.z1, "z2": rep.z2, "clamped": rep.clamped},
        "fitted_constant": rep.fitted_constant,
        "ratio_histogram": rep.ratio_histogram,
        "samples": len(rows),
    }
    config = {
        "N": args.N, "k1": str(args.k1), "k2": str(args.k2),
        "rough": args.rough, "exact": args.exact, "cutoff": args.cutoff,
        "samples": args.samples, "threads": args.threads,
    }
    _write_report(out_dir, "scan", config, results, args.seed, t0)
    return 0


def _cmd_convolve(args, out_dir: Path, t0: float) -> int:
    table = build_prime_table(max(args.N + 2, 1000), budget=_memory_budget())
    s1 = build_sequence(args.kind1, args.N, table, k=args.k, indicator=args.indicator)
    s2 = build_sequence(args.kind2, args.N, table, k=args.k, indicator=args.indicator)
    conv = convolve(s1, s2, "exact" if args.exact else "float")
    ms = range(2, min(2 * args.N, args.limit * 2) + 1, 2)
    _write_csv(
        out_dir / "convolve.csv",
        ["m", "value"],
        [(m, conv.values[m]) for m in ms],
        enabled=args.format == "csv",
    )
    results = {
        "total_mass": float(conv.values.sum()),
        "max_value": float(conv.values.max()),
        "rows_written": len(list(ms)),
    }
    config = {
        "N": args.N, "kind1": args.kind1, "kind2": args.kind2,
        "indicator": args.indicator, "exact": args.exact, "threads": args.threads,
    }
    _write_report(out_dir, "convolve", config, results, args.seed, t0)
    return 0


def _cmd_sseries(args, out_dir: Path, t0: float) -> int:
    table = build_prime_table(max(args.cutoff, args.m + 4, 1000), budget=_memory_budget())
    sval = singular_series(args.m, args.cutoff, table)
    hyp = None
    if args.hyp:
        r_str, beta_str = args.hyp.split(",")
        hyp = ExceptionalZeroHypothesis.build(int(r_str), float(beta_str))
    partial_primes = {2} | (set(hyp.odd_primes()) if hyp else set())
    s_partial = partial_singular_series(args.m, partial_primes, table)
    rep = main_term_M(args.m, args.N, args.P, hyp)
    results = {
        "m": args.m,
        "S": sval.value,
        "S_partial": s_partial,
        "M": rep.M,
        "E": rep.E,
        "tail_bound": sval.tail_bound,
        "components": {
            k: v for k, v in rep.components.items() if not isinstance(v, dict)
        },
    }
    config = {
        "m": args.m, "cutoff": args.cutoff, "hyp": args.hyp,
        "N": args.N, "P": args.P, "threads": args.threads,
    }
    _write_report(out_dir, "sseries", config, results, args.seed, t0)
    return 0


def _cmd_verify(args, out_dir: Path, t0: float) -> int:
    res = run_suite(args.suite, full=not args.fast)
    for check in res["checks"]:
        mark = "PASS" if check["passed"] else "FAIL"
        line = f"[{mark}] {check['check']}"
        if check["detail"]:
            line += f" :: {check['detail']}"
        print(line)
    if args.weights_csv:
        from .sieves import linear_sieve

        w = linear_sieve(10**4, 100, 10, "lower")
        _write_csv(
            Path(args.weights_csv),
            ["d", "lambda_d"],
            sorted(w.coefficients.items()),
        )
    results = {"suite": args.suite, "passed": res["passed"], "checks": res["checks"]}
    config = {"suite": args.suite, "fast": args.fast, "threads": args.threads}
    _write_report(out_dir, "verify", config, results, args.seed, t0)
    return 0 if res["passed"] else 1


def _cmd_sievefn(args, out_dir: Path, t0: float) -> int:
    fns = solve_linear_sieve_functions(args.smax, args.h)
    _write_csv(
        out_dir / "sievefn.csv",
        ["s", "f", "F"],
        zip(fns.s, fns.f, fns.F),
        enabled=args.format == "csv",
    )
    consts = chen_constants(args.eps)
    margins = chen_margin(fns, consts, args.eps)
    results = {
        "junction_error": float(fns.junction_error),
        "p3_margin": p3_margin(fns),
        "c_B1": consts.c_B1,
        "c_B2": consts.c_B2,
        "c_E3star": consts.c_E3star,
        "quad_error": consts.quad_error,
        "chen_margins": margins,
    }
    config = {"smax": args.smax, "h": args.h, "eps": args.eps, "threads": args.threads}
    _write_report(out_dir, "sievefn", config, results, args.seed, t0)
    return 0


def _cmd_bv(args, out_dir: Path, t0: float) -> int:
    P_list = [int(x) for x in args.P_list.split(",")]
    table = build_prime_table(max(args.N, 1000), budget=_memory_budget())
    rows = bv_profile(args.N, args.Q, P_list, args.weight, table)
    _write_csv(
        out_dir / "bv.csv",
        ["P", "q", "a_max", "discrepancy"],
        [(r["P"], r["q"], r["a_max"], r["discrepancy"]) for r in rows],
        enabled=args.format == "csv",
    )
    totals = profile_totals(rows)
    _write_csv(
        out_dir / "bv_profile.csv",
        ["P", "total"],
        sorted(totals.items()),
        enabled=args.format == "csv",
    )
    results = {"totals": {str(k): v for k, v in sorted(totals.items())}}
    config = {
        "N": args.N, "Q": args.Q, "P_list": args.P_list,
        "weight": args.weight, "threads": args.threads,
    }
    _write_report(out_dir, "bv", config, results, args.seed, t0)
    return 0


_HANDLERS = {
    "scan": _cmd_scan,
    "convolve": _cmd_convolve,
    "sseries": _cmd_sseries,
    "verify": _cmd_verify,
    "sievefn": _cmd_sievefn,
    "bv": _cmd_bv,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config_file(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    try:
        return _HANDLERS[args.command](args, out_dir, t0)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
