"""Adaptive inexact fast gradient method, its restarted and universal variants."""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import LineSearchExhausted
from .gm import GmConfig, acceptance_rhs, check_start, model_step
from .model import InexactOracle, check_degree
from .sets import FeasibleSet
from .trace import RunResult


@dataclass
class DeltaSchedule:
    """Error level used in the fast method's line search.

    ``constant`` mode uses ``value``, or the oracle's own error at the
    extrapolation point when ``value`` is None.  ``universal`` mode uses
    ``alpha * eps / (4 (sqrt(2) R)^q A)`` for the trial's weights.
    """

    mode: str = "constant"
    value: Optional[float] = None
    eps: Optional[float] = None
    R: Optional[float] = None
    q: Optional[float] = None

    def __post_init__(self):
        if self.mode not in ("constant", "universal"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.mode == "constant" and self.value is not None and self.value < 0:
            raise ValueError("delta must be nonnegative")
        if self.mode == "universal" and (self.eps is None or self.eps <= 0):
            raise ValueError("universal schedule needs eps > 0")

    @classmethod
    def constant(cls, value: Optional[float] = None) -> "DeltaSchedule":
        return cls("constant", value=value)

    @classmethod
    def universal(cls, eps: float, R: Optional[float] = None,
                  q: Optional[float] = None) -> "DeltaSchedule":
        return cls("universal", eps=eps, R=R, q=q)

    def delta(self, alpha: float, A_next: float, oracle_delta: float) -> float:
        if self.mode == "constant":
            return oracle_delta if self.value is None else float(self.value)
        return alpha * self.eps / (4 * (math.sqrt(2) * self.R) ** self.q * A_next)


def solve_alpha(L_next: float, A: float) -> float:
    """Largest root of ``L a^2 - a - A = 0``."""
    if L_next <= 0:
        raise ValueError("L must be positive")
    if A < 0:
        raise ValueError("A must be nonnegative")
    return (1 + math.sqrt(1 + 4 * L_next * A)) / (2 * L_next)


def run_adaptive_fgm(oracle: InexactOracle, fset: FeasibleSet, x0,
                     schedule: Optional[DeltaSchedule] = None,
                     config: Optional[GmConfig] = None,
                     stop_on_certificate: bool = True) -> RunResult:
    """Adaptive fast gradient method.

    In universal mode the run stops once ``A_N >= 2 R^2 / eps``, which
    certifies ``f(x_N) - f* <= R^2 / A_N + eps / 2 <= eps``; pass
    ``stop_on_certificate=False`` to spend the whole budget instead.
    """
    config = config or GmConfig()
    schedule = schedule or DeltaSchedule.constant()
    x = check_start(fset, x0)
    q = check_degree(oracle.degree)
    universal = schedule.mode == "universal"
    if universal:
        R = schedule.R if schedule.R is not None else math.sqrt(fset.radius_sq)
        schedule = DeltaSchedule.universal(
            schedule.eps, R, q if schedule.q is None else schedule.q)
    t0 = time.perf_counter()

    u = x.copy()
    A = 0.0
    L = float(config.L0)
    calls = 0
    res = RunResult(method="ufgm" if universal else "fgm", point=x.copy(),
                    f_hat_exact=oracle.exact_f is not None)
    for key in ("A_k", "alpha_k", "delta_k"):
        res.extras[key] = []
    res.aux["y"], res.aux["u"] = [], []
    if config.keep_iterates:
        res.iterates.append(x.copy())

    for _ in range(config.max_iters):
        trial = max(L / 2, config.L_min)
        for tests in range(1, config.line_search_cap + 2):
            alpha = solve_alpha(trial, A)
            A_next = A + alpha
            y = (alpha * u + A * x) / A_next
            my = oracle(y)
            delta = schedule.delta(alpha, A_next, my.delta_at_center)
            u_new = model_step(my, u, 1 / alpha, fset)
            x_new = (alpha * u_new + A * x) / A_next
            mx = oracle(x_new)
            calls += 2
            if mx.f_center <= acceptance_rhs(my, x_new, trial, delta, q):
                break
            trial *= 2
        else:
            raise LineSearchExhausted(
                f"no constant up to {trial / 2:.3g} passed the test at iteration {res.n_iters}")
        L, A, u, x = trial, A_next, u_new, x_new

        f_hat = float(oracle.exact_f(x)) if oracle.exact_f is not None else mx.f_center
        res.f_hat_history.append(f_hat)
        res.L_history.append(L)
        res.line_search_counts.append(tests)
        res.calls_history.append(calls)
        res.extras["A_k"].append(A)
        res.extras["alpha_k"].append(alpha)
        res.extras["delta_k"].append(delta)
        res.aux["y"].append(y)
        res.aux["u"].append(u.copy())
        res.elapsed_ms.append(1e3 * (time.perf_counter() - t0))
        if config.keep_iterates:
            res.iterates.append(x.copy())
        if config.target_gap is not None and f_hat - config.f_star <= config.target_gap:
            res.status = "target_gap"
            break
        if universal and stop_on_certificate and A >= 2 * schedule.R ** 2 / schedule.eps:
            res.status = "certificate"
            break

    res.point = x
    res.oracle_calls = calls
    res.meta.update(L0=config.L0, q=q, oracle=oracle.name, final_L=L)
    if universal:
        res.meta.update(eps=schedule.eps, R=schedule.R,
                        certificate=schedule.R ** 2 / A + schedule.eps / 2)
    return res


def fgm_bound(N: int, L: float, R: float, delta: float, q: float) -> float:
    """Rate of the adaptive fast gradient method after ``N`` iterations."""
    if N < 1:
        raise ValueError("N must be at least 1")
    q = check_degree(q)
    return (8 * L * R * R / (N + 1) ** 2
            + 2 * (2 * math.sqrt(2) * R) ** q * delta / N ** (1.5 * q - 1))


def restart_schedule(mu: float, L: float, eps: float, r: float) -> tuple[int, int]:
    """``(N, p)``: iterations per restart and number of restarts."""
    if mu <= 0 or eps <= 0 or L <= 0 or r <= 0:
        raise ValueError("mu, L, eps and r must be positive")
    N = math.ceil(4 * math.sqrt(L / mu))
    p = max(1, math.ceil(math.log2(r * r / eps) + 1))
    return N, p


def admissible_delta(mu: float, L: float, eps: float, r: float, q: float) -> float:
    """Largest oracle error for which restarts still reach ``|x - x*|^2 <= eps``."""
    q = check_degree(q)
    return mu * eps / (2 ** (q + 4) * r ** q) * math.ceil(
        (4 * math.sqrt(L / mu)) ** (1.5 * q - 1))


def run_restarted_fgm(oracle: InexactOracle, fset: FeasibleSet, x0, mu: float,
                      L: float, eps: float, r: float,
                      q: Optional[float] = None) -> RunResult:
    """Restarted fast gradient method for a ``mu``-strongly convex objective.

    ``r`` must bound ``|x0 - x*|``.  Each segment warm-starts the line search
    from the previous segment's final constant.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if eps <= 0:
        raise ValueError("eps must be positive")
    q = oracle.degree if q is None else check_degree(q)
    N, p = restart_schedule(mu, L, eps, r)
    x = check_start(fset, x0)
    d_ok = admissible_delta(mu, L, eps, r, q)
    d_oracle = oracle.delta_at(x)
    if d_oracle > d_ok:
        warnings.warn(f"oracle error {d_oracle:.3g} exceeds the admissible "
                      f"{d_ok:.3g}; the eps guarantee does not apply", stacklevel=2)

    out = RunResult(method="restarted-fgm", point=x.copy(),
                    f_hat_exact=oracle.exact_f is not None)
    out.iterates.append(x.copy())
    out.aux["restart_points"] = [x.copy()]
    L0 = float(L)
    calls = 0
    for _ in range(p):
        seg = run_adaptive_fgm(oracle, fset, x, DeltaSchedule.constant(),
                               GmConfig(L0=L0, max_iters=N))
        out.f_hat_history += seg.f_hat_history
        out.L_history += seg.L_history
        out.line_search_counts += seg.line_search_counts
        out.calls_history += [calls + c for c in seg.calls_history]
        for key, vals in seg.extras.items():
            out.extras.setdefault(key, []).extend(vals)
        out.iterates += seg.iterates[1:]
        calls += seg.oracle_calls
        x = seg.point
        L0 = seg.meta["final_L"]
        out.aux["restart_points"].append(x.copy())
    out.point = x
    out.oracle_calls = calls
    out.meta.update(N=N, p=p, admissible_delta=d_ok, oracle_delta=d_oracle, q=q)
    return out


def epsilon_of_q(delta: float, q: float, r: float, mu: float, L: float) -> float:
    """Accuracy reachable by restarts for a given oracle error and degree."""
    q = check_degree(q)
    if delta < 0 or r <= 0 or mu <= 0 or L <= 0:
        raise ValueError("delta must be nonnegative; r, mu, L positive")
    return (2 ** (q + 4) * r ** q / mu) * math.ceil(
        (4 * math.sqrt(L / mu)) ** (1 - 1.5 * q)) * delta


def universal_complexity_bound(eps: float, R: float,
                               holder_pairs: Sequence[tuple[float, float]]) -> float:
    """Iteration bound of the universal method, minimized over ``(nu, L_nu)`` pairs."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not holder_pairs:
        raise ValueError("need at least one (nu, L_nu) pair")
    best = math.inf
    for nu, L_nu in holder_pairs:
        if not 0 <= nu <= 1 or L_nu <= 0:
            raise ValueError(f"invalid Hoelder pair ({nu}, {L_nu})")
        val = 2 ** ((3 + 5 * nu) / (1 + 3 * nu)) * (
            L_nu * R ** (1 + nu) / eps) ** (2 / (1 + 3 * nu))
        best = min(best, val)
    return best
