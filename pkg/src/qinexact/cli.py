"""Command-line interface: gen, run, compare, verify-bounds.

Exit codes: 0 success, 1 usage or input error, 2 a bound check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional

from . import bench
from .bench import MethodSpec
from .plotting import plot_gaps
from .problems import generate_best_approx, generate_fts, load_problem, save_problem
from .subgradient import RULES
from .verify import SUITES, check_vi_stopping, run_suite

EXIT_OK, EXIT_USAGE, EXIT_BOUND = 0, 1, 2

# file-configurable options and their defaults; flags left unset fall back here
RUN_DEFAULTS = {"iters": 2000, "q": 0.9, "eps": 1e-3, "delta": 1e-3, "L0": 1.0,
                "out": "out", "timing": False, "stop_on_certificate": False}
COMPARE_DEFAULTS = dict(RUN_DEFAULTS, methods=None, jobs=1)
GEN_DEFAULTS = {"problem": None, "n": None, "t": 25, "seed": 0, "out": None}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _merge(args, defaults: dict) -> dict:
    """Config file values under explicit flags, defaults under both."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(cfg) - set(defaults) - {"problem_file"}
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(cfg)
    for key in list(defaults) + ["problem_file"]:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _load(opts: dict):
    path = opts.get("problem_file")
    if not path:
        raise UsageError("a problem file is required (--problem-file)")
    if not os.path.exists(path):
        raise UsageError(f"problem file not found: {path}")
    try:
        return load_problem(path)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(str(exc)) from exc


def _spec(name: str, opts: dict) -> MethodSpec:
    try:
        return MethodSpec(name, iters=int(opts["iters"]), q=float(opts["q"]),
                          eps=float(opts["eps"]), delta=float(opts["delta"]),
                          L0=float(opts["L0"]),
                          stop_on_certificate=bool(opts["stop_on_certificate"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_gen(args) -> int:
    opts = _merge(args, GEN_DEFAULTS)
    kind, n = opts["problem"], opts["n"]
    if kind is None or n is None:
        raise UsageError("gen needs --problem and --n")
    try:
        if kind == "best-approx":
            prob = generate_best_approx(int(n), int(opts["seed"]))
        elif kind == "fts":
            prob = generate_fts(int(n), int(opts["t"]), int(opts["seed"]))
        else:
            raise UsageError(f"unknown problem kind {kind!r}")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    path = opts["out"] or f"{kind}-n{n}-seed{opts['seed']}.json"
    save_problem(prob, path)
    print(path)
    f_star = prob.known_f_star(prob.feasible_set())
    if f_star is None and kind == "best-approx":
        f_star = float(bench.f_min_for(prob).value)
    if f_star is not None:
        print(f"f* = {f_star:.17g}")
    return EXIT_OK


def cmd_run(args) -> int:
    opts = _merge(args, RUN_DEFAULTS)
    if not args.method:
        raise UsageError("run needs --method")
    problem = _load(opts)
    spec = _spec(args.method, opts)
    ref = bench.f_min_for(problem)
    if spec.name == "polyak" and ref.source != "analytic":
        raise UsageError(f"polyak needs the exact optimal value; it is unknown for "
                         f"{problem.kind} problems")
    os.makedirs(opts["out"], exist_ok=True)
    summary = bench.execute(problem, spec, ref, opts["out"], timing=bool(opts["timing"]))
    print(f"{spec.name}: final gap {summary['final_gap']:.6g} after "
          f"{summary['iterations']} iterations, {summary['oracle_calls']} oracle calls, "
          f"f_min from {ref.source}")
    return EXIT_OK


def cmd_compare(args) -> int:
    opts = _merge(args, COMPARE_DEFAULTS)
    problem = _load(opts)
    ref = bench.f_min_for(problem)
    methods = opts["methods"]
    if methods is None:
        methods = ["ufgm"] + [r for r in RULES if r != "polyak" or ref.source == "analytic"]
    elif isinstance(methods, str):
        methods = [m for m in methods.split(",") if m.strip()]
    if not methods:
        raise UsageError("empty method list")
    specs = [_spec(m, opts) for m in methods]
    os.makedirs(opts["out"], exist_ok=True)
    results = bench.compare(problem, specs, opts["out"], jobs=int(opts["jobs"]),
                            timing=bool(opts["timing"]), ref=ref)
    report = bench.ranking_text(results, ref)
    bench.write_atomic(os.path.join(opts["out"], "ranking.txt"), report)
    plot_gaps({r["method"]: r["gaps"] for r in results if "gaps" in r},
              os.path.join(opts["out"], "gaps.svg"),
              title=f"{problem.kind}, n={problem.n}, T={problem.T}")
    sys.stdout.write(report)
    failed = [r["method"] for r in results if "error" in r]
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_verify_bounds(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    rows = []
    ok = True
    for name in suites:
        checks = run_suite(name)
        by_case: dict[str, list] = {}
        for c in checks:
            by_case.setdefault(c.case, []).append(c)
            rows.append(c)
        for case, cs in by_case.items():
            failed = [c.N for c in cs if not c.passed]
            ok &= not failed
            worst = max(cs, key=lambda c: c.measured - c.bound)
            status = "PASS" if not failed else f"FAIL at N={failed[:5]}"
            print(f"{name:<8} {case:<24} N=1..{cs[-1].N:<5} worst gap-bound "
                  f"{worst.measured - worst.bound:+.3e}  {status}")
        if name == "vi":
            stop_ok, info = check_vi_stopping()
            ok &= stop_ok
            print(f"{'vi':<8} {'stopping rule':<24} N={info['N']:<9} S_N={info['S_N']:.6g} "
                  f"threshold={info['threshold']:.6g}  {'PASS' if stop_ok else 'FAIL'}")
    if args.out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "case", "N", "measured", "bound", "passed"])
        for c in rows:
            w.writerow([c.suite, c.case, c.N, format(c.measured, ".17g"),
                        format(c.bound, ".17g"), int(c.passed)])
        bench.write_atomic(args.out, buf.getvalue())
    return EXIT_OK if ok else EXIT_BOUND


def _add_run_options(p, with_method: bool):
    p.add_argument("--problem-file", dest="problem_file")
    p.add_argument("--config", help="JSON file of option values; flags take precedence")
    if with_method:
        p.add_argument("--method", help=f"one of {', '.join(bench.METHODS)}")
    else:
        p.add_argument("--methods", help="comma-separated list (default: ufgm and all "
                                         "applicable step rules)")
        p.add_argument("--jobs", type=int, help="parallel worker processes")
    p.add_argument("--iters", type=int, help="iteration budget (default 2000)")
    p.add_argument("--q", type=float, help="model degree (default 0.9)")
    p.add_argument("--eps", type=float, help="universal-method accuracy (default 1e-3)")
    p.add_argument("--delta", type=float, help="constant model error for gm/fgm")
    p.add_argument("--L0", type=float, help="initial smoothness guess")
    p.add_argument("--out", help="output directory (default ./out)")
    p.add_argument("--timing", action="store_true", default=None,
                   help="fill the elapsed_ms column (breaks byte-reproducibility)")
    p.add_argument("--stop-on-certificate", dest="stop_on_certificate",
                   action="store_true", default=None,
                   help="stop ufgm once its accuracy certificate holds")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qinexact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    g = sub.add_parser("gen", help="generate a problem file")
    g.add_argument("--problem", choices=("best-approx", "fts"))
    g.add_argument("--n", type=int)
    g.add_argument("--t", type=int, help="number of anchors for fts (default 25)")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="output path")
    g.add_argument("--config")
    g.set_defaults(func=cmd_gen)
    r = sub.add_parser("run", help="run one method and write its trace")
    _add_run_options(r, True)
    r.set_defaults(func=cmd_run)
    c = sub.add_parser("compare", help="run ufgm against the step-size baselines")
    _add_run_options(c, False)
    c.set_defaults(func=cmd_compare)
    v = sub.add_parser("verify-bounds", help="check solvers against their rate bounds")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--out", help="write every check to this CSV")
    v.set_defaults(func=cmd_verify_bounds)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qinexact {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
