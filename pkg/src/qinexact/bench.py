"""Benchmark runs on the geometric test problems."""
from __future__ import annotations

import json
import os
import tempfile
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .fgm import DeltaSchedule, run_adaptive_fgm
from .gm import GmConfig, run_adaptive_gm
from .model import make_holder_oracle
from .problems import ReferenceValue, reference_fmin
from .subgradient import RULES, StepRule, run_projected_subgradient
from .trace import RunResult, trace_to_csv

SOLVERS = ("ufgm", "gm", "fgm")
METHODS = SOLVERS + RULES


def resolve_method(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in METHODS:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return key


@dataclass
class MethodSpec:
    """One method with its settings.

    ``q`` and ``eps`` drive the universal method; ``delta`` and ``q`` set the
    constant-error model for ``gm`` and ``fgm``; ``params`` overrides step-rule
    constants.
    """

    name: str
    iters: int = 2000
    q: float = 0.9
    eps: float = 1e-3
    delta: float = 1e-3
    L0: float = 1.0
    stop_on_certificate: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.name = resolve_method(self.name)
        if self.iters < 1:
            raise ValueError("iters must be at least 1")


def f_min_for(problem, fset=None) -> ReferenceValue:
    return reference_fmin(problem, fset)


def run_method(problem, spec: MethodSpec, f_star: Optional[float] = None) -> RunResult:
    """Run one method from the problem's standard start on its unit ball.

    ``f_star`` is only consulted by the Polyak rule, which refuses to run
    without it.
    """
    fset = problem.feasible_set()
    x0 = problem.start_point()
    if spec.name in SOLVERS:
        delta = None if spec.name == "ufgm" else spec.delta
        oracle = make_holder_oracle(problem.subgrad, problem.f, problem.holder_L,
                                    problem.holder_nu, spec.q, delta_rule=delta)
        cfg = GmConfig(L0=spec.L0, max_iters=spec.iters, keep_iterates=False)
        if spec.name == "ufgm":
            return run_adaptive_fgm(oracle, fset, x0, DeltaSchedule.universal(spec.eps), cfg,
                                    stop_on_certificate=spec.stop_on_certificate)
        if spec.name == "fgm":
            return run_adaptive_fgm(oracle, fset, x0, DeltaSchedule.constant(spec.delta), cfg)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return run_adaptive_gm(oracle, fset, x0, cfg)
    params = dict(spec.params)
    if spec.name == "polyak":
        if f_star is None:
            raise ValueError("polyak needs the exact optimal value, which this problem "
                             "does not provide")
        params["f_star"] = f_star
    return run_projected_subgradient(problem.f, problem.subgrad, fset, x0,
                                     StepRule(spec.name, params), spec.iters,
                                     keep_iterates=False)


def write_atomic(path, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def summarize(result: RunResult, spec: MethodSpec, ref: ReferenceValue,
              wall_s: float) -> dict:
    final = result.final_f
    return {
        "method": spec.name,
        "iterations": result.n_iters,
        "status": result.status,
        "final_f_hat": final,
        "final_gap": final - ref.value,
        "oracle_calls": result.oracle_calls,
        "wall_time_s": wall_s,
        "f_min": ref.value,
        "f_min_source": ref.source,
        "f_min_certificate": ref.certificate,
        "settings": {"iters": spec.iters, "q": spec.q, "eps": spec.eps,
                     "delta": spec.delta, "L0": spec.L0, "params": spec.params},
    }


def execute(problem, spec: MethodSpec, ref: ReferenceValue, out_dir,
            timing: bool = False) -> dict:
    """Run ``spec`` and write ``<method>.csv`` and ``<method>.summary.json``."""
    f_star = ref.value if ref.source == "analytic" else None
    t0 = time.perf_counter()
    result = run_method(problem, spec, f_star)
    wall = time.perf_counter() - t0
    summary = summarize(result, spec, ref, wall)
    write_atomic(os.path.join(out_dir, f"{spec.name}.csv"),
                 trace_to_csv(result, ref.value, timing=timing))
    write_atomic(os.path.join(out_dir, f"{spec.name}.summary.json"),
                 json.dumps(summary, indent=2, sort_keys=True) + "\n")
    summary["gaps"] = [f - ref.value for f in result.f_hat_history]
    return summary


def _execute_safe(args):
    problem, spec, ref, out_dir, timing = args
    try:
        return execute(problem, spec, ref, out_dir, timing)
    except Exception as exc:  # keep the other methods' results
        return {"method": spec.name, "error": f"{type(exc).__name__}: {exc}"}


def compare(problem, specs: list[MethodSpec], out_dir, jobs: int = 1,
            timing: bool = False, ref: Optional[ReferenceValue] = None) -> list[dict]:
    """Run every method spec; return summaries sorted by method name.

    A failing method is reported with an ``error`` entry instead of
    aborting the others.
    """
    if not specs:
        raise ValueError("no methods to compare")
    ref = ref or f_min_for(problem)
    tasks = [(problem, s, ref, out_dir, timing) for s in specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_execute_safe, tasks))
    else:
        results = [_execute_safe(t) for t in tasks]
    return sorted(results, key=lambda r: r["method"])


def ranking(results: list[dict]) -> list[dict]:
    """Successful runs by final gap (ties by name), failures last."""
    ok = sorted((r for r in results if "error" not in r),
                key=lambda r: (r["final_gap"], r["method"]))
    bad = sorted((r for r in results if "error" in r), key=lambda r: r["method"])
    return ok + bad


def ranking_text(results: list[dict], ref: ReferenceValue) -> str:
    lines = [f"f_min = {ref.value:.17g} ({ref.source}, certificate {ref.certificate:.3g})",
             f"{'rank':>4}  {'method':<14} {'final_gap':>24} {'oracle_calls':>12}"]
    for i, r in enumerate(ranking(results), start=1):
        if "error" in r:
            lines.append(f"{'-':>4}  {r['method']:<14} failed: {r['error']}")
        else:
            lines.append(f"{i:>4}  {r['method']:<14} {r['final_gap']:>24.17g} "
                         f"{r['oracle_calls']:>12d}")
    return "\n".join(lines) + "\n"
