"""Synthetic certified-oracle scenarios checking each solver against its rate bound.

Every suite returns a list of :class:`BoundCheck` rows, one per iteration
count and case, with the measured gap next to the bound it must respect.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .fgm import (DeltaSchedule, fgm_bound, restart_schedule, run_adaptive_fgm,
                  run_restarted_fgm)
from .gm import GmConfig, gm_bound, run_adaptive_gm
from .model import make_absolute_noise_oracle, make_exact_oracle
from .sets import EuclideanBall
from .strong import (excess_curvature_delta, quadratic_strong_oracle, run_strong_gm,
                     strong_bound)
from .vi import bilinear_saddle, run_mirror_prox, saddle_gap, saddle_to_vi, vi_bound

SUITES = ("gm", "fgm", "restart", "strong", "vi")
SLACK = 1e-9


@dataclass
class BoundCheck:
    suite: str
    case: str
    N: int
    measured: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.bound + SLACK


def _half_sq(x):
    return 0.5 * float(x @ x)


def _ident(x):
    return np.asarray(x, dtype=float)


def suite_gm(N: int = 1000, deltas=(0.0, 0.1), dim: int = 2,
             L0s=(1.0, 0.3)) -> list[BoundCheck]:
    """Adaptive gradient method on ``0.5 |x|^2`` over the unit ball with absolute noise.

    A starting guess ``L0 < 1`` makes the line search overshoot to a constant
    that does not land on the minimizer in one step.
    """
    ball = EuclideanBall.unit(dim)
    x0 = np.zeros(dim)
    x0[0] = 1.0
    R = math.sqrt(_half_sq(x0))
    out = []
    for Delta in deltas:
        for L0 in L0s:
            oracle = make_absolute_noise_oracle(_ident, _half_sq, 1.0, Delta, seed=7)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                res = run_adaptive_gm(oracle, ball, x0, GmConfig(L0=L0, max_iters=N))
            for k, f in enumerate(res.f_hat_history, start=1):
                out.append(BoundCheck("gm", f"Delta={Delta:g},L0={L0:g}", k, f,
                                      gm_bound(k, 1.0, R, Delta, 1.0)))
    return out


def suite_fgm(N: int = 500, cases=((0.0, 1.0), (0.01, 0.5), (0.01, 1.0), (0.01, 1.5)),
              dim: int = 2, L0s=(1.0, 0.3)) -> list[BoundCheck]:
    """Fast gradient method on ``0.5 |x|^2``; an exact oracle declared with error ``delta``."""
    ball = EuclideanBall.unit(dim)
    x0 = np.zeros(dim)
    x0[0] = 1.0
    R = math.sqrt(_half_sq(x0))
    out = []
    for delta, q in cases:
        for L0 in L0s:
            oracle = make_exact_oracle(_ident, _half_sq, 1.0, degree=q, delta=delta)
            res = run_adaptive_fgm(oracle, ball, x0, DeltaSchedule.constant(delta),
                                   GmConfig(L0=L0, max_iters=N))
            for k, f in enumerate(res.f_hat_history, start=1):
                out.append(BoundCheck("fgm", f"delta={delta:g},q={q:g},L0={L0:g}", k, f,
                                      fgm_bound(k, 1.0, R, delta, q)))
    return out


def suite_restart(eps: float = 1e-4, dim: int = 2) -> list[BoundCheck]:
    """Restarts on ``0.5 |x|^2`` (``mu = L = 1``): squared distance after each restart."""
    ball = EuclideanBall.unit(dim)
    x0 = np.zeros(dim)
    x0[0] = 1.0
    oracle = make_exact_oracle(_ident, _half_sq, 1.0)
    res = run_restarted_fgm(oracle, ball, x0, mu=1.0, L=1.0, eps=eps, r=1.0)
    N, p = restart_schedule(1.0, 1.0, eps, 1.0)
    out = []
    for j, x in enumerate(res.aux["restart_points"][1:], start=1):
        # each restart at least halves the squared distance
        out.append(BoundCheck("restart", f"N={N},p={p}", j, float(x @ x), 2.0 ** -j))
    out.append(BoundCheck("restart", f"N={N},p={p}", p, float(res.point @ res.point), eps))
    return out


def strong_problem(delta: float):
    """Diagonal quadratic on the ball of radius ``sqrt(2)`` with ``mu = 0.1``, ``L = 1``.

    With ``delta > 0`` the second curvature exceeds the declared ``L`` by the
    largest amount ``delta`` can absorb over the ball's diameter.
    """
    ball = EuclideanBall(np.zeros(2), math.sqrt(2.0))
    lam = 1.0
    if delta > 0:
        diam = 2 * ball.radius
        lam = 1.0 + 2 * delta / diam
        assert excess_curvature_delta(lam, 1.0, 1.0, diam) <= delta + 1e-15
    oracle = quadratic_strong_oracle(np.diag([0.1, lam]), L=1.0, mu=0.1, delta=delta, q=1.0)
    return oracle, ball, np.array([1.0, 1.0])


def suite_strong(iters: int = 200, deltas=(0.0, 0.05)) -> list[BoundCheck]:
    out = []
    for delta in deltas:
        oracle, ball, x0 = strong_problem(delta)
        res = run_strong_gm(oracle, ball, x0, iters)
        r0 = float(np.linalg.norm(x0))
        steps = res.extras["step_norm"]
        for k, f in enumerate(res.f_hat_history, start=1):
            out.append(BoundCheck("strong", f"delta={delta:g}", k, f,
                                  strong_bound(k, oracle.L, oracle.mu, r0, delta, 1.0, steps)))
    return out


def skew_saddle(scale: float = 1.5):
    B = scale * np.array([[0.0, 1.0], [-1.0, 0.0]])
    Q = EuclideanBall.unit(2)
    return bilinear_saddle(B, Q, Q), float(np.linalg.norm(B, 2))


VI_START = np.array([0.6, -0.3, 0.2, 0.7])


def suite_vi(N: int = 500) -> list[BoundCheck]:
    """Mirror Prox on a skew bilinear saddle over two unit balls, ``delta = 0``."""
    problem, L = skew_saddle()
    model = saddle_to_vi(problem)
    P = problem.product
    z0 = VI_START
    D = P.diameter_sq(z0)
    n1 = problem.Q1.dim
    out = []

    def gap(w):
        return saddle_gap(problem, w[:n1], w[n1:])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BudgetExceeded)
        res = run_mirror_prox(model, P, z0, eps=1e-12, L0=L, max_iters=N, gap_fn=gap)
    for k, g in enumerate(res.f_hat_history, start=1):
        out.append(BoundCheck("vi", "skew-bilinear", k, g, vi_bound(k, L, D, 0.0, 1.0)))
    return out


def check_vi_stopping(eps: float = 0.05) -> tuple[bool, dict]:
    """Whether Mirror Prox stops at the first ``N`` with ``S_N >= D / (2 eps)``."""
    problem, L = skew_saddle()
    model = saddle_to_vi(problem)
    res = run_mirror_prox(model, problem.product, VI_START, eps=eps, L0=L, max_iters=100000)
    S = res.extras["S_k"]
    thr = res.meta["threshold"]
    ok = (res.status == "certificate" and S[-1] >= thr
          and all(s < thr for s in S[:-1]))
    return ok, {"N": len(S), "S_N": S[-1], "threshold": thr}


def run_suite(name: str) -> list[BoundCheck]:
    funcs = {"gm": suite_gm, "fgm": suite_fgm, "restart": suite_restart,
             "strong": suite_strong, "vi": suite_vi}
    if name not in funcs:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return funcs[name]()
