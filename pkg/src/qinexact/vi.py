"""Generalized Mirror Prox for variational inequalities and saddle problems."""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BudgetExceeded, LineSearchExhausted, MissingGapEvaluator
from .gm import check_start
from .model import _point_rng, _unit_direction, check_degree
from .sets import EuclideanBall, FeasibleSet, ProductSet, prox_linear
from .trace import RunResult


@dataclass
class VIModel:
    """Model ``psi(x, y)`` of a variational inequality.

    ``prox_step(y, z, L)`` returns ``argmin_x psi(x, y) + L/2 |x - z|^2``
    over the model's set.  Operator models also carry the (possibly noisy)
    ``operator`` used by the solver and the ``true_operator`` used for gap
    reporting; affine ones carry ``matrix`` and ``offset``.
    """

    psi: Callable[[np.ndarray, np.ndarray], float]
    delta: float
    degree: float
    prox_step: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    operator: Optional[Callable] = None
    true_operator: Optional[Callable] = None
    matrix: Optional[np.ndarray] = None
    offset: Optional[np.ndarray] = None
    fset: Optional[FeasibleSet] = None
    name: str = "vi-model"

    def true_psi(self, x, y) -> float:
        if self.true_operator is None:
            return self.psi(x, y)
        return float(self.true_operator(y) @ (x - y))


def operator_model(g, fset: FeasibleSet, delta: float = 0.0, q: float = 1.0,
                   noise: float = 0.0, seed: int = 0, matrix=None, offset=None,
                   name: str = "operator") -> VIModel:
    """``psi(x, y) = <g(y), x - y>``, optionally with absolute operator noise.

    Noise of size ``noise`` is a deterministic function of the query point.
    """
    q = check_degree(q)
    if delta < 0 or noise < 0:
        raise ValueError("delta and noise must be nonnegative")

    def noisy(y):
        gy = np.asarray(g(y), dtype=float)
        if noise > 0:
            gy = gy + noise * _unit_direction(_point_rng(seed, y), gy.size)
        return gy

    op = noisy if noise > 0 else (lambda y: np.asarray(g(y), dtype=float))

    def psi(x, y):
        return float(op(y) @ (np.asarray(x, dtype=float) - y))

    def prox_step(y, z, L):
        return prox_linear(op(y), z, L, fset)

    return VIModel(psi, float(delta), q, prox_step, operator=op,
                   true_operator=lambda y: np.asarray(g(y), dtype=float),
                   matrix=None if matrix is None else np.asarray(matrix, dtype=float),
                   offset=None if offset is None else np.asarray(offset, dtype=float),
                   fset=fset, name=name)


def affine_operator_model(M, b, fset: FeasibleSet, **kwargs) -> VIModel:
    M = np.asarray(M, dtype=float)
    b = np.zeros(M.shape[0]) if b is None else np.asarray(b, dtype=float)
    return operator_model(lambda y: M @ y + b, fset, matrix=M, offset=b, **kwargs)


def _dist(a, b):
    return float(np.linalg.norm(a - b))


def mirror_prox_test(model: VIModel, z, w, z_new, L) -> tuple[float, float]:
    """``(lhs, rhs)`` of the extragradient acceptance inequality."""
    a, b = _dist(w, z), _dist(w, z_new)
    q = model.degree
    lhs = model.psi(z_new, z)
    rhs = (model.psi(z_new, w) + model.psi(w, z) + 0.5 * L * (a * a + b * b)
           + 0.5 * model.delta * (a ** q + b ** q))
    return lhs, rhs


def run_mirror_prox(model: VIModel, fset: FeasibleSet, z0, eps: float, L0: float = 1.0,
                    max_iters: int = 10000, line_search_cap: int = 60,
                    gap_fn: Optional[Callable[[np.ndarray], float]] = None,
                    L_min: float = 1e-12) -> RunResult:
    """Adaptive Mirror Prox.

    Stops once ``S_N = sum 1/L_k >= D / (2 eps)`` with ``D`` the squared
    diameter of the set anchored at ``z0``.  Hitting ``max_iters`` first
    returns the result with status ``"budget_exceeded"`` and a
    :class:`BudgetExceeded` warning.  ``gap_fn`` is evaluated at every
    averaged point and recorded as ``f_hat``.
    """
    if eps <= 0 or L0 <= 0:
        raise ValueError("eps and L0 must be positive")
    z = check_start(fset, z0)
    D = fset.diameter_sq(z)
    threshold = D / (2 * eps)
    t0 = time.perf_counter()
    res = RunResult(method="mirror-prox", point=z.copy())
    res.extras["S_k"] = []
    if gap_fn is not None:
        res.extras["vi_gap"] = []
    res.aux["w"] = []
    res.iterates.append(z.copy())
    L = float(L0)
    S = 0.0
    avg = np.zeros_like(z)
    calls = 0
    res.status = "budget_exceeded"
    for _ in range(max_iters):
        trial = max(L / 2, L_min)
        calls += 1
        for tests in range(1, line_search_cap + 2):
            w = model.prox_step(z, z, trial)
            z_new = model.prox_step(w, z, trial)
            calls += 1
            lhs, rhs = mirror_prox_test(model, z, w, z_new, trial)
            if lhs <= rhs:
                break
            trial *= 2
        else:
            raise LineSearchExhausted(
                f"no constant up to {trial / 2:.3g} passed the test at iteration {res.n_iters}")
        L = trial
        S += 1 / L
        avg += (w - avg) * ((1 / L) / S)
        res.L_history.append(L)
        res.line_search_counts.append(tests)
        res.calls_history.append(calls)
        res.extras["S_k"].append(S)
        res.aux["w"].append(w)
        res.iterates.append(z_new.copy())
        if gap_fn is not None:
            gap = float(gap_fn(avg))
            res.extras["vi_gap"].append(gap)
            res.f_hat_history.append(gap)
        else:
            res.f_hat_history.append(math.nan)
        res.elapsed_ms.append(1e3 * (time.perf_counter() - t0))
        z = z_new
        if S >= threshold:
            res.status = "certificate"
            break
    if res.status == "budget_exceeded":
        warnings.warn(f"S_N = {S:.4g} below the stopping threshold {threshold:.4g} "
                      f"after {max_iters} iterations", BudgetExceeded, stacklevel=2)
    res.point = avg if fset.contains(avg) else fset.project(avg)
    res.oracle_calls = calls
    res.meta.update(D=D, threshold=threshold, eps=eps, L0=L0)
    return res


def vi_bound(N: int, L: float, D: float, delta: float, q: float) -> float:
    """Rate of Mirror Prox on the weak (or duality) gap after ``N`` iterations."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if D <= 0:
        raise ValueError("D must be positive")
    q = check_degree(q)
    return L * D / N + 3 * math.sqrt(2 * D / 3) ** q * delta / N ** (q / 2)


def _max_linear(fset: FeasibleSet, c) -> Optional[float]:
    if isinstance(fset, EuclideanBall):
        return fset.max_linear(c)
    if isinstance(fset, ProductSet):
        cu, cv = fset.split(c)
        a, b = _max_linear(fset.first, cu), _max_linear(fset.second, cv)
        if a is not None and b is not None:
            return a + b
    return None


def weak_gap(model: VIModel, fset: FeasibleSet, w_hat, steps: int = 200,
             fd_step: float = 1e-7) -> tuple[float, bool]:
    """``max_u <g(u), w_hat - u>`` over the set, with an exactness flag.

    Closed form for skew affine operators over balls (the objective is then
    linear in ``u``); otherwise a fixed-budget projected gradient ascent,
    labeled approximate.
    """
    w_hat = np.asarray(w_hat, dtype=float)
    M, b = model.matrix, model.offset
    if M is not None and np.allclose(M, -M.T, atol=1e-14):
        lin = _max_linear(fset, M.T @ w_hat - b)
        if lin is not None:
            return float(b @ w_hat) + lin, True
    g = model.true_operator or model.operator

    def phi(u):
        return float(g(u) @ (w_hat - u))

    if M is not None:
        def grad(u):
            return M.T @ (w_hat - u) - (M @ u + b)
        step = 1.0 / (2 * max(np.linalg.norm(M, 2), 1e-12))
    else:
        def grad(u):
            e = np.eye(u.size)
            return np.array([(phi(u + fd_step * e[i]) - phi(u - fd_step * e[i])) / (2 * fd_step)
                             for i in range(u.size)])
        step = 0.1
    u = fset.project(w_hat)
    best = phi(u)
    for _ in range(steps):
        u = fset.project(u + step * grad(u))
        best = max(best, phi(u))
    return best, False


@dataclass
class SaddleProblem:
    """``min_{u in Q1} max_{v in Q2} f(u, v)`` with gradient access."""

    f: Callable
    grad_u: Callable
    grad_v: Callable
    Q1: FeasibleSet
    Q2: FeasibleSet
    gap_evaluator: Optional[Callable] = None

    @property
    def product(self) -> ProductSet:
        return ProductSet(self.Q1, self.Q2)

    def split(self, x):
        return self.product.split(x)


def bilinear_saddle(B, Q1: EuclideanBall, Q2: EuclideanBall) -> SaddleProblem:
    """``f(u, v) = u^T B v`` over two balls, with a closed-form duality gap."""
    B = np.asarray(B, dtype=float)

    def gap(u_hat, v_hat):
        return Q2.max_linear(B.T @ u_hat) + Q1.max_linear(-(B @ v_hat))

    return SaddleProblem(lambda u, v: float(u @ B @ v), lambda u, v: B @ v,
                         lambda u, v: B.T @ u, Q1, Q2, gap)


def noisy_saddle_delta(noise: float) -> float:
    """Degree-1 error certified for absolute noise ``noise`` on each gradient block.

    The concatenated noise has norm at most ``sqrt(2) noise``; monotonicity
    and the extragradient inequality each see a difference of two noise
    vectors, hence the factor 4.
    """
    return 4 * math.sqrt(2) * noise


def saddle_to_vi(problem: SaddleProblem, delta: float = 0.0, q: float = 1.0,
                 noise: float = 0.0, seed: int = 0) -> VIModel:
    """Operator model ``G(u, v) = (grad_u f, -grad_v f)`` over ``Q1 x Q2``.

    With ``noise > 0`` each block of ``G`` is perturbed by at most ``noise``
    and the model's error is raised to :func:`noisy_saddle_delta`.
    """
    P = problem.product
    n1 = problem.Q1.dim
    if noise > 0 and q != 1:
        raise ValueError("operator noise certifies degree q = 1 only")

    def G(x):
        x = np.asarray(x, dtype=float)
        if x.size != P.dim:
            raise ValueError(f"point has size {x.size}, product set has {P.dim}")
        u, v = x[:n1], x[n1:]
        gu = np.asarray(problem.grad_u(u, v), dtype=float)
        gv = np.asarray(problem.grad_v(u, v), dtype=float)
        if gu.size != n1 or gv.size != P.dim - n1:
            raise ValueError("gradient blocks do not match the set dimensions")
        return np.concatenate([gu, -gv])

    def noisy(x):
        out = G(x)
        if noise > 0:
            rng = _point_rng(seed, np.asarray(x, dtype=float))
            out[:n1] += noise * _unit_direction(rng, n1)
            out[n1:] += noise * _unit_direction(rng, P.dim - n1)
        return out

    model = operator_model(noisy, P, delta=max(delta, noisy_saddle_delta(noise)), q=q,
                           name="saddle")
    model.true_operator = G
    return model


def saddle_gap(problem: SaddleProblem, u_hat, v_hat) -> float:
    """``max_v f(u_hat, v) - min_u f(u, v_hat)``."""
    if problem.gap_evaluator is None:
        raise MissingGapEvaluator("this saddle problem has no gap evaluator")
    return float(problem.gap_evaluator(np.asarray(u_hat, dtype=float),
                                       np.asarray(v_hat, dtype=float)))
