"""Projected subgradient baselines with classical step-size rules."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ZeroGradient
from .gm import check_start
from .sets import FeasibleSet
from .trace import RunResult

RULES = ("constant", "fixed_length", "nonsum", "sqrsum_nonsum", "quad_grad",
         "adagrad", "polyak", "adamirror")

DEFAULTS = {
    "constant": {"c": 0.1},
    "fixed_length": {"c": 0.2},
    "nonsum": {"c": 0.1},
    "sqrsum_nonsum": {"c": 0.5},
    "quad_grad": {"c": 0.2},
    "adagrad": {"theta0": 1 / math.sqrt(2), "alpha": 1e-8},
    "polyak": {"f_star": None},
    "adamirror": {"c": math.sqrt(2), "m": -1.0},
}

_DIVIDES_BY_NORM = {"fixed_length", "quad_grad", "polyak", "adamirror"}


@dataclass
class StepRule:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = self.kind.replace("-", "_")
        if kind not in RULES:
            raise ValueError(f"unknown step rule {self.kind!r}; choose from {', '.join(RULES)}")
        self.kind = kind
        merged = dict(DEFAULTS[kind])
        merged.update(self.params)
        self.params = merged
        for key, val in merged.items():
            if key in ("f_star", "m"):
                continue
            if val is None or val <= 0:
                raise ValueError(f"{kind}: parameter {key} must be positive")
        if kind == "polyak" and (merged["f_star"] is None or not math.isfinite(merged["f_star"])):
            raise ValueError("polyak needs a finite f_star")
        if kind == "adamirror" and merged["m"] < -1:
            raise ValueError("adamirror needs m >= -1")

    @property
    def averaging(self) -> str:
        if self.kind == "quad_grad":
            return "gamma"
        if self.kind == "adamirror":
            return "gamma_pow"
        return "uniform"

    def weight(self, gamma: float) -> float:
        """Averaging weight attached to the iterate at which ``gamma`` was computed."""
        if self.averaging == "uniform":
            return 1.0
        if self.averaging == "gamma":
            return gamma
        return gamma ** (-self.params["m"])


def step_size(rule: StepRule, k: int, grad_norm: float, f_val: float,
              grad_norm_sq_sum: float) -> float:
    """Step ``gamma_k`` (``k >= 1``); ``grad_norm_sq_sum`` includes step ``k``."""
    if k < 1:
        raise ValueError("k starts at 1")
    p = rule.params
    if rule.kind in _DIVIDES_BY_NORM and grad_norm == 0:
        raise ZeroGradient(f"{rule.kind} divides by a zero subgradient")
    if rule.kind == "constant":
        return p["c"]
    if rule.kind == "fixed_length":
        return p["c"] / grad_norm
    if rule.kind == "nonsum":
        return p["c"] / math.sqrt(k)
    if rule.kind == "sqrsum_nonsum":
        return p["c"] / k
    if rule.kind == "quad_grad":
        return p["c"] / grad_norm ** 2
    if rule.kind == "adagrad":
        return p["theta0"] / math.sqrt(grad_norm_sq_sum + p["alpha"])
    if rule.kind == "polyak":
        return (f_val - p["f_star"]) / grad_norm ** 2
    return p["c"] / (grad_norm * math.sqrt(k))


def run_projected_subgradient(f: Callable, subgrad: Callable, fset: FeasibleSet, x0,
                              rule: StepRule, iters: int,
                              keep_iterates: bool = True) -> RunResult:
    """``x_{k+1} = P(x_k - gamma_k g_k)`` with the rule's running average.

    The average after ``k`` steps combines ``x_1 = x0, ..., x_k`` with the
    weights of the steps taken from them; ``f_hat_history[k-1]`` is ``f`` at
    that average.  A zero subgradient ends the run with status
    ``"zero_gradient"``.
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    x = check_start(fset, x0)
    t0 = time.perf_counter()
    res = RunResult(method=rule.kind, point=x.copy(), gamma_history=[])
    res.extras["weight"] = []
    if keep_iterates:
        res.iterates.append(x.copy())
    sq_sum = 0.0
    wsum = 0.0
    avg = np.zeros_like(x)
    for k in range(1, iters + 1):
        g = np.asarray(subgrad(x), dtype=float)
        fx = float(f(x))
        gn = float(np.linalg.norm(g))
        if gn == 0:
            res.status = "zero_gradient"
            break
        sq_sum += gn * gn
        gamma = step_size(rule, k, gn, fx, sq_sum)
        wk = rule.weight(gamma)
        wsum += wk
        avg += (x - avg) * (wk / wsum)
        x = fset.project(x - gamma * g)
        res.gamma_history.append(gamma)
        res.extras["weight"].append(wk)
        res.f_hat_history.append(float(f(avg)))
        res.calls_history.append(k)
        res.elapsed_ms.append(1e3 * (time.perf_counter() - t0))
        if keep_iterates:
            res.iterates.append(x.copy())
    # a zero subgradient certifies the current iterate as optimal
    res.point = x if res.status == "zero_gradient" else avg
    res.oracle_calls = len(res.gamma_history) + (res.status == "zero_gradient")
    res.meta.update(rule=rule.kind, params=dict(rule.params), last_iterate=x)
    return res
