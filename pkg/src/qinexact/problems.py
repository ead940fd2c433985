"""Geometric test problems: best approximation and Fermat-Torricelli-Steiner."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fgm import DeltaSchedule, run_adaptive_fgm
from .gm import GmConfig
from .model import make_holder_oracle
from .sets import EuclideanBall, FeasibleSet
from .subgradient import StepRule, run_projected_subgradient

FILE_FORMAT = "qinexact-problem"
FILE_VERSION = 1
RNG_NAME = "numpy.random.default_rng (PCG64), uniform [0, 1)"


class _DistanceSum:
    """``f(x) = mean_j |x - A_j|`` over the rows of ``anchors``."""

    kind = ""
    # subgradients have norm <= 1, so their variation is at most 2 (nu = 0)
    holder_nu = 0.0
    holder_L = 2.0

    def __init__(self, anchors, seed: Optional[int] = None):
        self.anchors = np.atleast_2d(np.asarray(anchors, dtype=float))
        self.seed = seed

    @property
    def n(self) -> int:
        return self.anchors.shape[1]

    @property
    def T(self) -> int:
        return self.anchors.shape[0]

    def f(self, x) -> float:
        return float(np.mean(np.linalg.norm(self.anchors - x, axis=1)))

    __call__ = f

    def subgrad(self, x) -> np.ndarray:
        d = np.asarray(x, dtype=float) - self.anchors
        nrm = np.linalg.norm(d, axis=1)
        scale = np.divide(1.0, nrm, out=np.zeros_like(nrm), where=nrm > 0)
        return (d * scale[:, None]).mean(axis=0)

    def start_point(self) -> np.ndarray:
        return np.full(self.n, 1 / math.sqrt(self.n))

    def feasible_set(self) -> EuclideanBall:
        return EuclideanBall.unit(self.n)

    def known_f_star(self, fset: FeasibleSet) -> Optional[float]:
        """Closed-form optimum when all anchors coincide and the set is a ball."""
        if isinstance(fset, EuclideanBall) and np.all(self.anchors == self.anchors[0]):
            return max(0.0, float(np.linalg.norm(self.anchors[0] - fset.center)) - fset.radius)
        return None

    def to_text(self) -> str:
        rows = ",\n".join("    [" + ", ".join(format(v, ".17g") for v in row) + "]"
                          for row in self.anchors)
        head = {
            "format": FILE_FORMAT, "version": FILE_VERSION, "kind": self.kind,
            "n": self.n, "T": self.T, "seed": self.seed, "rng": RNG_NAME,
        }
        body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items())
        return "{\n" + body + ',\n  "anchors": [\n' + rows + "\n  ]\n}\n"


class BestApproximation(_DistanceSum):
    """``f(x) = |x - A|``."""

    kind = "best-approx"

    @property
    def A(self) -> np.ndarray:
        return self.anchors[0]

    def minimizer(self, fset: EuclideanBall) -> np.ndarray:
        return fset.project(self.A)


class FermatTorricelliSteiner(_DistanceSum):
    """``f(x) = (1/T) sum_j |x - A_j|``."""

    kind = "fts"


def generate_best_approx(n: int, seed: int) -> BestApproximation:
    """Point with uniform ``[0, 1)`` coordinates rescaled to norm 10."""
    if n < 1:
        raise ValueError("n must be at least 1")
    u = np.random.default_rng(seed).random(n)
    return BestApproximation(10.0 * u / np.linalg.norm(u), seed=seed)


def generate_fts(n: int, T: int, seed: int) -> FermatTorricelliSteiner:
    if n < 1 or T < 1:
        raise ValueError("n and T must be at least 1")
    return FermatTorricelliSteiner(np.random.default_rng(seed).random((T, n)), seed=seed)


def save_problem(problem: _DistanceSum, path) -> None:
    with open(path, "w") as fh:
        fh.write(problem.to_text())


def load_problem(path) -> _DistanceSum:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("format") != FILE_FORMAT:
        raise ValueError(f"{path}: not a problem file")
    if data.get("version") != FILE_VERSION:
        raise ValueError(f"{path}: unsupported version {data.get('version')}")
    cls = {"best-approx": BestApproximation, "fts": FermatTorricelliSteiner}.get(data["kind"])
    if cls is None:
        raise ValueError(f"{path}: unknown problem kind {data['kind']!r}")
    prob = cls(np.array(data["anchors"], dtype=float), seed=data.get("seed"))
    if prob.n != data["n"] or prob.T != data["T"]:
        raise ValueError(f"{path}: anchor array does not match n/T")
    return prob


@dataclass
class ReferenceValue:
    """Best objective value found and a bound on its distance to the optimum.

    ``value - certificate <= f* <= value``.
    """

    value: float
    certificate: float
    source: str

    def __float__(self):
        return self.value

    @property
    def lower(self) -> float:
        return self.value - self.certificate


def reference_fmin(problem: _DistanceSum, fset: Optional[FeasibleSet] = None,
                   budget: int = 100_000, eps: float = 1e-8, q: float = 0.9,
                   polish_iters: int = 2000) -> ReferenceValue:
    """High-accuracy optimum for the comparison plots.

    Uses the closed form when available, otherwise a universal fast gradient
    run followed by a small-step subgradient polish.  The certificate is the
    universal method's ``R^2 / A_N + eps / 2``.
    """
    fset = fset or problem.feasible_set()
    exact = problem.known_f_star(fset)
    if exact is not None:
        return ReferenceValue(exact, 0.0, "analytic")
    oracle = make_holder_oracle(problem.subgrad, problem.f, problem.holder_L,
                                problem.holder_nu, q)
    x0 = fset.project(problem.start_point())
    run = run_adaptive_fgm(oracle, fset, x0, DeltaSchedule.universal(eps),
                           GmConfig(L0=1.0, max_iters=budget, keep_iterates=False))
    best = float(problem.f(run.point))
    polish = run_projected_subgradient(
        problem.f, problem.subgrad, fset, run.point,
        StepRule("nonsum", {"c": max(run.meta["certificate"], 1e-12)}),
        polish_iters, keep_iterates=True)
    best = min([best] + [float(problem.f(x)) for x in polish.iterates])
    return ReferenceValue(best, float(run.meta["certificate"]),
                          f"ufgm(eps={eps:g}, q={q:g}, iters={run.n_iters})+polish")
