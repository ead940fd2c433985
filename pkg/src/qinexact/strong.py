"""Gradient method with a (delta, L, mu, q)-oracle for strongly convex problems."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .gm import check_start
from .model import check_degree
from .sets import FeasibleSet, prox_linear
from .trace import RunResult


@dataclass
class StrongOracle:
    """Pair ``(f_value, g)`` sandwiching ``f`` between two quadratics.

    ``mu/2 r^2 <= f(x) - f_value - <g, x - y> <= L/2 r^2 + delta r^q``
    with ``r = |x - y|``.
    """

    evaluate: Callable[[np.ndarray], tuple]
    delta: float
    L: float
    mu: float
    degree: float
    exact_f: Optional[Callable[[np.ndarray], float]] = None

    def __post_init__(self):
        self.degree = check_degree(self.degree)
        if self.L <= 0 or self.mu <= 0:
            raise ValueError("L and mu must be positive")
        if self.mu > self.L:
            raise ValueError("mu must not exceed L")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")

    def __call__(self, y):
        f_val, g = self.evaluate(np.asarray(y, dtype=float))
        return float(f_val), np.asarray(g, dtype=float)

    def sandwich(self, x, y) -> tuple[float, float, float]:
        """``(lower, middle, upper)`` of the defining inequality at ``(x, y)``."""
        if self.exact_f is None:
            raise ValueError("oracle has no exact_f")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        f_val, g = self(y)
        r = float(np.linalg.norm(x - y))
        mid = float(self.exact_f(x)) - f_val - float(g @ (x - y))
        return 0.5 * self.mu * r * r, mid, 0.5 * self.L * r * r + self.delta * r ** self.degree


def quadratic_strong_oracle(H, L: float, mu: float, delta: float = 0.0,
                            q: float = 1.0, center=None) -> StrongOracle:
    """Exact first-order information of ``0.5 (x-c)^T H (x-c)`` with declared constants.

    Declaring ``L`` below the largest eigenvalue of ``H`` is legitimate on a
    bounded set when ``delta`` absorbs the excess curvature; see
    :func:`excess_curvature_delta`.
    """
    H = np.asarray(H, dtype=float)
    c = np.zeros(H.shape[0]) if center is None else np.asarray(center, dtype=float)

    def f(x):
        d = x - c
        return 0.5 * float(d @ H @ d)

    def evaluate(y):
        return f(y), H @ (y - c)

    return StrongOracle(evaluate, delta, L, mu, q, exact_f=f)


def excess_curvature_delta(lam_max: float, L: float, q: float, diameter: float) -> float:
    """Smallest ``delta`` with ``(lam_max - L)/2 r^2 <= delta r^q`` for ``r <= diameter``."""
    if lam_max <= L:
        return 0.0
    return 0.5 * (lam_max - L) * diameter ** (2 - q)


def run_strong_gm(oracle: StrongOracle, fset: FeasibleSet, x0, iters: int,
                  best_from: str = "proof", keep_iterates: bool = True) -> RunResult:
    """Projected gradient steps with the oracle's fixed ``L``.

    ``f_hat_history[k-1]`` is ``f`` at the best iterate after ``k`` steps.
    ``best_from="proof"`` searches ``x_1 .. x_k`` (the points the rate
    argument actually controls); ``"statement"`` searches ``x_0 .. x_{k-1}``.
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    if best_from not in ("proof", "statement"):
        raise ValueError("best_from must be 'proof' or 'statement'")
    x = check_start(fset, x0)
    t0 = time.perf_counter()
    res = RunResult(method="strong-gm", point=x.copy(),
                    f_hat_exact=oracle.exact_f is not None)
    res.extras["step_norm"] = []
    f_val, g = oracle(x)
    calls = 1

    def fval(point, oracle_value):
        return float(oracle.exact_f(point)) if oracle.exact_f is not None else oracle_value

    f_hist = [fval(x, f_val)]
    pts = [x.copy()]
    best_i = None
    for k in range(1, iters + 1):
        x_new = prox_linear(g, x, oracle.L, fset)
        res.extras["step_norm"].append(float(np.linalg.norm(x_new - x)))
        f_val, g = oracle(x_new)
        calls += 1
        f_hist.append(fval(x_new, f_val))
        pts.append(x_new.copy())
        cand = k if best_from == "proof" else k - 1
        if best_i is None or f_hist[cand] < f_hist[best_i]:
            best_i = cand
        res.f_hat_history.append(f_hist[best_i])
        res.L_history.append(oracle.L)
        res.calls_history.append(calls)
        res.elapsed_ms.append(1e3 * (time.perf_counter() - t0))
        x = x_new
    res.point = pts[best_i]
    res.iterates = pts if keep_iterates else []
    res.oracle_calls = calls
    res.meta.update(best_from=best_from, best_index=best_i, f_values=f_hist)
    return res


def strong_bound(k: int, L: float, mu: float, r0: float, delta: float, q: float,
                 step_norms: Sequence[float]) -> float:
    """Linear-rate bound with the history-weighted error sum.

    ``step_norms[j] = |x_{j+1} - x_j|``; the most recent step gets weight 1.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(step_norms) < k:
        raise ValueError(f"need {k} step norms, got {len(step_norms)}")
    q = check_degree(q)
    rho = 1 - mu / L
    tail = sum(rho ** i * step_norms[k - 1 - i] ** q for i in range(k))
    return 0.5 * L * r0 * r0 * math.exp(-k * mu / L) + delta * tail
