"""Convex feasible sets and the prox steps taken over them."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .model import ModelEvaluation


class FeasibleSet:
    """Closed convex set with Euclidean projection.

    Subclasses implement :meth:`project`, :attr:`radius_sq` and
    :meth:`diameter_sq`.  ``radius_sq`` is an ``R**2`` with
    ``0.5 * |x - y|**2 <= R**2`` for all members; ``diameter_sq(z0)`` bounds
    ``max |x - z0|**2`` over the set.
    """

    tol = 1e-12
    dim: int

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def violation(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x) -> bool:
        return self.violation(x) <= self.tol

    @property
    def radius_sq(self) -> float:
        raise NotImplementedError

    def diameter_sq(self, anchor) -> float:
        raise NotImplementedError


class EuclideanBall(FeasibleSet):
    def __init__(self, center, radius: float = 1.0):
        self.center = np.asarray(center, dtype=float)
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self.dim = self.center.size

    @classmethod
    def unit(cls, n: int) -> "EuclideanBall":
        return cls(np.zeros(n), 1.0)

    def project(self, x):
        d = np.asarray(x, dtype=float) - self.center
        nrm = np.linalg.norm(d)
        if nrm <= self.radius:
            return self.center + d
        return self.center + d * (self.radius / nrm)

    def violation(self, x):
        d = np.linalg.norm(np.asarray(x, dtype=float) - self.center)
        return max(0.0, float(d) - self.radius)

    @property
    def radius_sq(self):
        return 2.0 * self.radius ** 2

    def diameter_sq(self, anchor):
        off = np.linalg.norm(np.asarray(anchor, dtype=float) - self.center)
        return float((self.radius + off) ** 2)

    def max_linear(self, c) -> float:
        """``max <c, x>`` over the ball."""
        c = np.asarray(c, dtype=float)
        return float(c @ self.center + self.radius * np.linalg.norm(c))

    def __repr__(self):
        return f"EuclideanBall(dim={self.dim}, radius={self.radius})"


class Box(FeasibleSet):
    """Axis-aligned box; a utility set beyond the ball experiments."""

    def __init__(self, lower, upper):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        if np.any(self.lower > self.upper):
            raise ValueError("lower must not exceed upper")
        self.dim = self.lower.size

    def project(self, x):
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)

    @property
    def radius_sq(self):
        return 0.5 * float(np.sum((self.upper - self.lower) ** 2))

    def diameter_sq(self, anchor):
        a = np.asarray(anchor, dtype=float)
        far = np.maximum(np.abs(a - self.lower), np.abs(self.upper - a))
        return float(np.sum(far ** 2))


class ProductSet(FeasibleSet):
    """``first x second`` with the norm ``sqrt(|u|^2 + |v|^2)``."""

    def __init__(self, first: FeasibleSet, second: FeasibleSet):
        self.first = first
        self.second = second
        self.dim = first.dim + second.dim

    def split(self, x):
        x = np.asarray(x, dtype=float)
        return x[: self.first.dim], x[self.first.dim:]

    def project(self, x):
        u, v = self.split(x)
        return np.concatenate([self.first.project(u), self.second.project(v)])

    @property
    def radius_sq(self):
        return self.first.radius_sq + self.second.radius_sq

    def diameter_sq(self, anchor):
        u, v = self.split(anchor)
        return self.first.diameter_sq(u) + self.second.diameter_sq(v)


def _check_args(anchor, weight, fset):
    if weight <= 0:
        raise ValueError("weight must be positive")
    anchor = np.asarray(anchor, dtype=float)
    if anchor.ndim != 1 or anchor.size != fset.dim:
        raise ValueError(f"anchor has shape {anchor.shape}, set dimension is {fset.dim}")
    return anchor


def prox_linear(g, anchor, weight: float, fset: FeasibleSet) -> np.ndarray:
    """``argmin_{x in set} <g, x> + weight/2 |x - anchor|^2``."""
    anchor = _check_args(anchor, weight, fset)
    g = np.asarray(g, dtype=float)
    if g.shape != anchor.shape:
        raise ValueError(f"g has shape {g.shape}, anchor has shape {anchor.shape}")
    return fset.project(anchor - g / weight)


def projected_gradient_solver(fun, grad, x0, fset: FeasibleSet, lipschitz: float,
                              tol: float = 1e-12, max_iter: int = 20000) -> np.ndarray:
    """Accelerated projected gradient for a smooth strongly convex subproblem."""
    x = fset.project(x0)
    y = x.copy()
    t = 1.0
    step = 1.0 / lipschitz
    for _ in range(max_iter):
        x_new = fset.project(y - step * grad(y))
        if fun(x_new) > fun(x):  # function-value restart
            y, t = x.copy(), 1.0
            continue
        if np.linalg.norm(x_new - x) <= tol * (1 + np.linalg.norm(x)):
            return x_new
        t_new = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
        y = x_new + ((t - 1) / t_new) * (x_new - x)
        x, t = x_new, t_new
    return x


def prox_model(model: ModelEvaluation, anchor, weight: float, fset: FeasibleSet,
               inner_solver: Optional[Callable] = None,
               psi_lipschitz: float = 0.0) -> np.ndarray:
    """``argmin_{x in set} psi(x) + weight/2 |x - anchor|^2`` for a general model.

    ``inner_solver(fun, grad, x0, fset, lipschitz)`` defaults to
    :func:`projected_gradient_solver`; ``psi_lipschitz`` bounds the curvature
    of ``psi`` so the default solver can pick its step.
    """
    anchor = _check_args(anchor, weight, fset)
    g = getattr(model, "g", None)
    if g is not None and inner_solver is None:
        return prox_linear(g, anchor, weight, fset)
    if model.psi_grad is None:
        raise ValueError("general models need psi_grad for the inner solver")

    def fun(x):
        return model.psi(x) + 0.5 * weight * float(np.sum((x - anchor) ** 2))

    def grad(x):
        return np.asarray(model.psi_grad(x), dtype=float) + weight * (x - anchor)

    solver = inner_solver or projected_gradient_solver
    x = np.asarray(solver(fun, grad, anchor, fset, weight + psi_lipschitz), dtype=float)
    if not fset.contains(x):
        raise ValueError("inner solver returned an infeasible point")
    return x
