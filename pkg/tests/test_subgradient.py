import math

import numpy as np
import pytest

from qinexact import (EuclideanBall, StepRule, ZeroGradient, generate_best_approx,
                      run_projected_subgradient, step_size)
from qinexact.subgradient import RULES


def norm_f(x):
    return float(np.linalg.norm(x))


def norm_sg(x):
    n = np.linalg.norm(x)
    return x / n if n > 0 else np.zeros_like(x)


class TestStepSize:
    def test_constant(self):
        assert step_size(StepRule("constant"), 7, 3.0, 1.0, 9.0) == 0.1

    def test_adamirror(self):
        assert step_size(StepRule("adamirror"), 4, 1.0, 0.0, 4.0) == pytest.approx(
            math.sqrt(2) / 2)

    def test_polyak_at_optimum(self):
        assert step_size(StepRule("polyak", {"f_star": 2.0}), 1, 1.0, 2.0, 1.0) == 0.0

    def test_others(self):
        assert step_size(StepRule("fixed_length"), 1, 4.0, 0.0, 16.0) == pytest.approx(0.05)
        assert step_size(StepRule("nonsum"), 4, 1.0, 0.0, 1.0) == pytest.approx(0.05)
        assert step_size(StepRule("sqrsum_nonsum"), 5, 1.0, 0.0, 1.0) == pytest.approx(0.1)
        assert step_size(StepRule("quad_grad"), 1, 2.0, 0.0, 4.0) == pytest.approx(0.05)
        assert step_size(StepRule("adagrad", {"alpha": 1e-300}), 1, 1.0, 0.0, 2.0) == \
            pytest.approx(0.5)

    @pytest.mark.parametrize("kind", ["fixed_length", "quad_grad", "adamirror"])
    def test_zero_gradient(self, kind):
        with pytest.raises(ZeroGradient):
            step_size(StepRule(kind), 1, 0.0, 0.0, 0.0)

    def test_k_starts_at_one(self):
        with pytest.raises(ValueError):
            step_size(StepRule("constant"), 0, 1.0, 0.0, 1.0)


class TestRule:
    def test_hyphen_alias(self):
        assert StepRule("fixed-length").kind == "fixed_length"

    def test_averaging(self):
        assert StepRule("quad_grad").averaging == "gamma"
        assert StepRule("adamirror").averaging == "gamma_pow"
        assert StepRule("adamirror").weight(0.5) == 0.5
        assert StepRule("constant").weight(7.0) == 1.0

    @pytest.mark.parametrize("kind, params", [("bogus", {}), ("constant", {"c": 0.0}),
                                              ("polyak", {}), ("polyak", {"f_star": math.inf}),
                                              ("adamirror", {"m": -2.0}),
                                              ("adagrad", {"theta0": -1.0})])
    def test_rejects(self, kind, params):
        with pytest.raises(ValueError):
            StepRule(kind, params)


def test_constant_single_step_on_best_approx():
    prob = generate_best_approx(20, seed=1)
    x0 = prob.start_point()
    res = run_projected_subgradient(prob.f, prob.subgrad, prob.feasible_set(), x0,
                                    StepRule("constant"), 1)
    expected = prob.feasible_set().project(x0 - 0.1 * prob.subgrad(x0))
    np.testing.assert_allclose(res.iterates[1], expected)
    assert res.f_hat_history == [prob.f(x0)]


def test_reproducible_and_weighted_average():
    ball = EuclideanBall.unit(3)
    x0 = np.array([0.5, -0.5, 0.5])
    runs = [run_projected_subgradient(norm_f, norm_sg, ball, x0, StepRule("quad_grad"), 30)
            for _ in range(2)]
    np.testing.assert_array_equal(runs[0].point, runs[1].point)
    r = runs[0]
    w = np.array(r.extras["weight"])
    np.testing.assert_allclose(w, r.gamma_history)
    pts = np.array(r.iterates[:len(w)])
    np.testing.assert_allclose(r.point, (w[:, None] * pts).sum(0) / w.sum(), atol=1e-14)


def test_adagrad_steps_nonincreasing():
    prob = generate_best_approx(30, seed=3)
    res = run_projected_subgradient(prob.f, prob.subgrad, prob.feasible_set(),
                                    prob.start_point(), StepRule("adagrad"), 200)
    g = res.gamma_history
    assert all(b <= a for a, b in zip(g, g[1:]))


def test_polyak_fejer():
    prob = generate_best_approx(30, seed=4)
    fset = prob.feasible_set()
    xs = prob.minimizer(fset)
    res = run_projected_subgradient(prob.f, prob.subgrad, fset, prob.start_point(),
                                    StepRule("polyak", {"f_star": prob.f(xs)}), 100)
    d = [np.linalg.norm(x - xs) for x in res.iterates]
    assert all(b <= a + 1e-12 for a, b in zip(d, d[1:]))


def test_zero_gradient_stops():
    res = run_projected_subgradient(norm_f, norm_sg, EuclideanBall.unit(2), np.zeros(2),
                                    StepRule("fixed_length"), 10)
    assert res.status == "zero_gradient" and res.oracle_calls == 1
    np.testing.assert_array_equal(res.point, np.zeros(2))


@pytest.mark.parametrize("kind", [k for k in RULES if k != "polyak"])
def test_every_rule_descends_on_norm(kind):
    res = run_projected_subgradient(norm_f, norm_sg, EuclideanBall.unit(2),
                                    np.array([0.8, 0.0]), StepRule(kind), 300)
    assert res.f_hat_history[-1] < 0.8


def test_rejects_iters():
    with pytest.raises(ValueError):
        run_projected_subgradient(norm_f, norm_sg, EuclideanBall.unit(2), np.zeros(2),
                                  StepRule("constant"), 0)
