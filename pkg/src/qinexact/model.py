"""Inexact (delta, L, q)-models of a convex function and oracle constructors.

A model of degree ``q`` at a point ``y`` is a pair ``(f_center, psi)`` with
``psi`` convex, ``psi(y) = 0`` and

    f(x) - f_center - psi(x) <= L/2 * |x - y|^2 + delta * |x - y|^q.

Oracles built here return :class:`LinearModel` evaluations, i.e.
``psi(x) = <g, x - y>``.  Noise is a deterministic function of
``(seed, y)``: querying the same point twice returns the same model, which
keeps point-dependent error rules and trace replays consistent.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

Vector = np.ndarray
DeltaRule = Union[float, Callable[[Vector], float], None]


def check_degree(q: float) -> float:
    q = float(q)
    if not 0.0 <= q < 2.0:
        raise ValueError(f"degree q must lie in [0, 2), got {q}")
    return q


@dataclass
class ModelEvaluation:
    """Model of ``f`` at ``center``.

    ``psi`` maps ``x`` to the model increment; ``psi_grad`` is optional and
    only used by the generic prox solver.
    """

    center: Vector
    f_center: float
    psi: Callable[[Vector], float]
    delta_at_center: float
    degree: float
    psi_grad: Optional[Callable[[Vector], Vector]] = None


@dataclass
class LinearModel(ModelEvaluation):
    g: Vector = field(default=None)

    @classmethod
    def build(cls, center, f_center, g, delta, degree) -> "LinearModel":
        center = np.asarray(center, dtype=float)
        g = np.asarray(g, dtype=float)

        def psi(x):
            return float(g @ (np.asarray(x, dtype=float) - center))

        return cls(center=center, f_center=float(f_center), psi=psi,
                   delta_at_center=float(delta), degree=degree,
                   psi_grad=lambda x: g, g=g)


@dataclass
class InexactOracle:
    """Source of (delta, L, q)-model evaluations.

    Attributes
    ----------
    evaluate : callable
        ``y -> ModelEvaluation``.
    degree : float
        The exponent ``q``.
    delta_rule : float, callable or None
        Constant error, a rule ``y -> delta``, or ``None`` when the error is
        supplied per iteration by the solver (universal schedule).
    lower_bound_holds : bool
        True when ``f(x) - f_center - psi(x) >= 0`` is guaranteed.
    L_valid : float or callable
        Certified smoothness constant; a callable ``delta -> L`` when the
        constant depends on the error level (Hoelder models).
    exact_f : callable, optional
        True objective, for diagnostics and gap reporting.
    """

    evaluate: Callable[[Vector], ModelEvaluation]
    degree: float
    delta_rule: DeltaRule
    lower_bound_holds: bool
    L_valid: Union[float, Callable[[float], float]]
    exact_f: Optional[Callable[[Vector], float]] = None
    name: str = "oracle"

    def __post_init__(self):
        self.degree = check_degree(self.degree)

    def __call__(self, y) -> ModelEvaluation:
        return self.evaluate(np.asarray(y, dtype=float))

    def delta_at(self, y) -> float:
        rule = self.delta_rule
        if rule is None:
            return 0.0
        if callable(rule):
            return float(rule(np.asarray(y, dtype=float)))
        return float(rule)

    def certified_L(self, delta: Optional[float] = None) -> float:
        if callable(self.L_valid):
            if delta is None:
                raise ValueError("this oracle's L depends on delta; pass delta")
            return float(self.L_valid(delta))
        return float(self.L_valid)


def model_residual(oracle: InexactOracle, x, y) -> float:
    """``f(x) - f_center(y) - psi(x, y)`` using the oracle's exact ``f``."""
    if oracle.exact_f is None:
        raise ValueError("oracle has no exact_f")
    m = oracle(y)
    x = np.asarray(x, dtype=float)
    return float(oracle.exact_f(x) - m.f_center - m.psi(x))


def collapse_to_q0(delta: float, q: float, rho: float) -> tuple[float, float]:
    """Absorb ``delta * r**q`` into a quadratic plus a constant.

    Returns ``(q * rho, delta_hat)`` such that for every ``r >= 0``
    ``delta * r**q <= (q * rho / 2) * r**2 + delta_hat``.
    """
    q = check_degree(q)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta == 0:
        return q * rho, 0.0
    # exponents grow like 1/(2 - q); stay in log space
    log_hat = (math.log((2 - q) / 2) + 2 / (2 - q) * math.log(delta)
               - q / (2 - q) * math.log(rho))
    return q * rho, math.exp(log_hat) if log_hat < 709.0 else math.inf


def _point_rng(seed: int, y: Vector) -> np.random.Generator:
    digest = hashlib.blake2b(np.ascontiguousarray(y, dtype=float).tobytes(),
                             digest_size=8).digest()
    return np.random.default_rng([int(seed), int.from_bytes(digest, "little")])


def _unit_direction(rng: np.random.Generator, n: int) -> Vector:
    u = rng.standard_normal(n)
    nrm = np.linalg.norm(u)
    while nrm == 0:
        u = rng.standard_normal(n)
        nrm = np.linalg.norm(u)
    return u / nrm


def make_exact_oracle(grad, f, L_f: float, degree: float = 1.0,
                      delta: float = 0.0) -> InexactOracle:
    """Exact first-order oracle, declared as a ``(delta, L_f, degree)``-model.

    An exact oracle is a valid model for any declared ``delta >= 0`` and
    degree; a positive declaration only loosens the solvers' line search.
    """

    def evaluate(y):
        return LinearModel.build(y, f(y), grad(y), delta, degree)

    return InexactOracle(evaluate, degree, float(delta), True, float(L_f),
                         exact_f=f, name="exact")


def make_relative_noise_oracle(grad, f, L_f: float, alpha: float, seed: int = 0,
                               fraction: float = 1.0) -> InexactOracle:
    """Gradient with relative error ``|g - grad f| <= alpha |grad f|``.

    The certified error is point dependent: ``alpha / (1 - alpha) * |g(y)|``
    with degree 1 and ``L = L_f``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must lie in [0, 1]")

    def noisy_grad(y):
        gy = np.asarray(grad(y), dtype=float)
        size = fraction * alpha * np.linalg.norm(gy)
        if size == 0:
            return gy
        return gy + size * _unit_direction(_point_rng(seed, y), gy.size)

    def delta_rule(y):
        return alpha / (1 - alpha) * float(np.linalg.norm(noisy_grad(y)))

    def evaluate(y):
        g = noisy_grad(y)
        delta = alpha / (1 - alpha) * float(np.linalg.norm(g))
        return LinearModel.build(y, f(y), g, delta, 1.0)

    return InexactOracle(evaluate, 1.0, delta_rule, False, float(L_f),
                         exact_f=f, name="relative-noise")


def make_absolute_noise_oracle(grad, f, L_f: float, Delta: float, seed: int = 0,
                               fraction: float = 1.0) -> InexactOracle:
    """Gradient with absolute error ``|g - grad f| <= Delta``; delta = Delta, q = 1."""
    if Delta < 0:
        raise ValueError("Delta must be nonnegative")
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must lie in [0, 1]")
    Delta = float(Delta)

    def evaluate(y):
        g = np.asarray(grad(y), dtype=float)
        if Delta > 0 and fraction > 0:
            g = g + fraction * Delta * _unit_direction(_point_rng(seed, y), g.size)
        return LinearModel.build(y, f(y), g, Delta, 1.0)

    return InexactOracle(evaluate, 1.0, Delta, Delta == 0, float(L_f),
                         exact_f=f, name="absolute-noise")


def make_shifted_point_oracle(grad, f, L_f: float, Delta: float, seed: int = 0,
                              fraction: float = 1.0) -> InexactOracle:
    """Gradient evaluated at a point within ``Delta`` of the query.

    The model is of degree 1 with ``delta = Delta * L_f`` and ``L = L_f``.
    """
    if Delta < 0:
        raise ValueError("Delta must be nonnegative")
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must lie in [0, 1]")
    Delta = float(Delta)

    def shifted(y):
        if Delta == 0 or fraction == 0:
            return y
        return y + fraction * Delta * _unit_direction(_point_rng(seed, y), y.size)

    def evaluate(y):
        g = np.asarray(grad(shifted(y)), dtype=float)
        return LinearModel.build(y, f(y), g, Delta * L_f, 1.0)

    return InexactOracle(evaluate, 1.0, Delta * float(L_f), Delta == 0,
                         float(L_f), exact_f=f, name="shifted-point")


def holder_L(delta: float, nu: float, q: float, L_nu: float,
             certified: bool = True) -> float:
    """Smoothness constant trading Hoelder continuity for a ``delta r^q`` term.

    Returns ``L`` with ``L_nu/(1+nu) r^(1+nu) <= L/2 r^2 + delta r^q`` for all
    ``r >= 0`` when ``certified`` is true.  ``certified=False`` returns the
    commonly quoted closed form, which is half the admissible value.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not 0 <= nu <= 1:
        raise ValueError("nu must lie in [0, 1]")
    if not 0 <= q < 1 + nu:
        raise ValueError("q must lie in [0, 1 + nu)")
    if L_nu <= 0:
        raise ValueError("L_nu must be positive")
    a = L_nu / (1 + nu)
    s = 1 + nu - q
    # log space: the constant blows up as q approaches 1 + nu.  The maximizing
    # r makes the certified value exactly twice the closed form.
    log_val = math.log(s / (2 - q)) + (2 - q) / s * math.log(a)
    if nu < 1:
        log_val += (1 - nu) / s * math.log((1 - nu) / (delta * (2 - q)))
    if certified:
        log_val += math.log(2.0)
    return math.exp(log_val) if log_val < 709.0 else math.inf


def make_holder_oracle(subgrad, f, L_nu: float, nu: float, q: float,
                       delta_rule: DeltaRule = None) -> InexactOracle:
    """Exact subgradient model of a function with Hoelder subgradients.

    ``delta_rule=None`` leaves the error level to the solver's schedule; the
    certified ``L`` is then a function of the delta actually used.
    """
    q = check_degree(q)
    if q >= 1 + nu:
        raise ValueError("q must be smaller than 1 + nu")

    def L_of(delta):
        if nu == 1:
            return float(L_nu)
        return holder_L(delta, nu, q, L_nu, certified=True)

    def evaluate(y):
        d = 0.0 if delta_rule is None else (
            float(delta_rule(y)) if callable(delta_rule) else float(delta_rule))
        return LinearModel.build(y, f(y), subgrad(y), d, q)

    L_valid: Union[float, Callable[[float], float]] = L_of
    if nu == 1:
        L_valid = float(L_nu)
    elif delta_rule is not None and not callable(delta_rule):
        L_valid = L_of(float(delta_rule))
    return InexactOracle(evaluate, q, delta_rule, True, L_valid, exact_f=f,
                         name="holder")
