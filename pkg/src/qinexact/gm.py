"""Adaptive inexact gradient method for (delta, L, q)-models."""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InfeasibleStart, LineSearchExhausted
from .model import InexactOracle, ModelEvaluation, check_degree
from .sets import FeasibleSet, prox_linear, prox_model
from .trace import RunResult


@dataclass
class GmConfig:
    """Settings shared by the adaptive gradient-type solvers.

    ``line_search_cap`` is the number of doublings allowed per iteration.
    ``target_gap`` needs ``f_star``.  ``L_min`` floors the halved trial
    constant so that ``1/L`` cannot overflow once the iterates stop moving.
    """

    L0: float = 1.0
    max_iters: int = 1000
    target_gap: Optional[float] = None
    f_star: Optional[float] = None
    line_search_cap: int = 60
    keep_iterates: bool = True
    L_min: float = 1e-12

    def __post_init__(self):
        if self.L0 <= 0:
            raise ValueError("L0 must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.line_search_cap < 1:
            raise ValueError("line_search_cap must be at least 1")
        if self.target_gap is not None and self.f_star is None:
            raise ValueError("target_gap requires f_star")


def model_step(m: ModelEvaluation, anchor, weight, fset) -> np.ndarray:
    g = getattr(m, "g", None)
    if g is not None:
        return prox_linear(g, anchor, weight, fset)
    return prox_model(m, anchor, weight, fset)


def acceptance_rhs(m: ModelEvaluation, x_new, L, delta, q) -> float:
    """Right side of the upper model test at the candidate ``x_new``."""
    r = float(np.linalg.norm(x_new - m.center))
    return m.f_center + m.psi(x_new) + 0.5 * L * r * r + delta * r ** q


def check_start(fset: FeasibleSet, x0) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 1 or x0.size != fset.dim:
        raise ValueError(f"start has shape {x0.shape}, set dimension is {fset.dim}")
    if not fset.contains(x0):
        raise InfeasibleStart(f"start point violates the set by {fset.violation(x0):.3g}")
    return x0


def run_adaptive_gm(oracle: InexactOracle, fset: FeasibleSet, x0,
                    config: Optional[GmConfig] = None) -> RunResult:
    """Adaptive gradient method.

    Each iteration tries ``L_k / 2`` first and doubles until the candidate
    passes the upper model test with the error read at the current center.
    The output is the ``1/L``-weighted average of the iterates.
    """
    config = config or GmConfig()
    x = check_start(fset, x0)
    if not oracle.lower_bound_holds:
        warnings.warn("oracle does not certify the lower model bound; "
                      "the rate guarantee assumes it", stacklevel=2)
    q = check_degree(oracle.degree)
    t0 = time.perf_counter()

    m = oracle(x)
    calls = 1
    L = float(config.L0)
    res = RunResult(method="gm", point=x.copy(), f_hat_exact=oracle.exact_f is not None)
    res.extras["delta_k"] = []
    if config.keep_iterates:
        res.iterates.append(x.copy())
    weight_sum = 0.0
    avg = np.zeros_like(x)

    for _ in range(config.max_iters):
        delta = m.delta_at_center
        trial = max(L / 2, config.L_min)
        for tests in range(1, config.line_search_cap + 2):
            x_new = model_step(m, x, trial, fset)
            m_new = oracle(x_new)
            calls += 1
            if m_new.f_center <= acceptance_rhs(m, x_new, trial, delta, q):
                break
            trial *= 2
        else:
            raise LineSearchExhausted(
                f"no constant up to {trial / 2:.3g} passed the test at iteration {res.n_iters}")
        L = trial
        weight_sum += 1 / L
        avg += (x_new - avg) * ((1 / L) / weight_sum)

        if oracle.exact_f is not None:
            f_hat = float(oracle.exact_f(avg))
        else:
            f_hat = m_new.f_center
        res.f_hat_history.append(f_hat)
        res.L_history.append(L)
        res.line_search_counts.append(tests)
        res.calls_history.append(calls)
        res.extras["delta_k"].append(delta)
        res.elapsed_ms.append(1e3 * (time.perf_counter() - t0))
        if config.keep_iterates:
            res.iterates.append(x_new.copy())
        x, m = x_new, m_new
        if config.target_gap is not None and f_hat - config.f_star <= config.target_gap:
            res.status = "target_gap"
            break

    res.point = fset.project(avg) if not fset.contains(avg) else avg
    res.oracle_calls = calls
    res.meta.update(L0=config.L0, q=q, oracle=oracle.name)
    return res


def gm_bound(N: int, L: float, R: float, delta: float, q: float) -> float:
    """Rate of the adaptive gradient method after ``N`` iterations."""
    if N < 1:
        raise ValueError("N must be at least 1")
    q = check_degree(q)
    return 2 * L * R * R / N + 2 * (math.sqrt(2) * R) ** q * delta / N ** (q / 2)
