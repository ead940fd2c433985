import numpy as np
import pytest

from qinexact import Box, EuclideanBall, ProductSet, prox_linear, prox_model
from qinexact.model import LinearModel, ModelEvaluation


def test_unit_ball_radii():
    ball = EuclideanBall.unit(3)
    assert ball.radius_sq == 2.0
    assert ball.diameter_sq(np.zeros(3)) == 1.0
    assert ball.diameter_sq(np.array([1.0, 0, 0])) == 4.0


def test_ball_projection_radial():
    ball = EuclideanBall.unit(2)
    np.testing.assert_allclose(ball.project([2.0, 0.0]), [1.0, 0.0])
    np.testing.assert_array_equal(ball.project([0.3, 0.1]), [0.3, 0.1])


def test_shifted_ball():
    ball = EuclideanBall([1.0, 1.0], 2.0)
    np.testing.assert_allclose(ball.project([1.0, 5.0]), [1.0, 3.0])
    assert ball.max_linear([0.0, 1.0]) == 3.0
    assert ball.diameter_sq([2.0, 1.0]) == 9.0


def test_box():
    box = Box([0, 0], [1, 2])
    np.testing.assert_array_equal(box.project([-1, 3]), [0, 2])
    assert box.radius_sq == 2.5
    assert box.diameter_sq([0.5, 0.0]) == 0.25 + 4.0
    with pytest.raises(ValueError):
        Box([1], [0])


def test_product_blockwise():
    P = ProductSet(EuclideanBall.unit(2), Box([0], [1]))
    np.testing.assert_allclose(P.project([3.0, 4.0, 2.0]), [0.6, 0.8, 1.0])
    u, v = P.split([1, 2, 3])
    assert u.tolist() == [1, 2] and v.tolist() == [3]
    assert P.dim == 3


class TestProxLinear:
    def test_pure_projection(self):
        ball = EuclideanBall.unit(2)
        np.testing.assert_allclose(prox_linear(np.zeros(2), [2.0, 0.0], 1.0, ball), [1.0, 0.0])

    def test_hand_value(self):
        ball = EuclideanBall.unit(2)
        np.testing.assert_allclose(prox_linear([2.0, 0.0], [1.0, 0.0], 0.5, ball), [-1.0, 0.0])

    def test_optimality_condition(self):
        rng = np.random.default_rng(0)
        ball = EuclideanBall.unit(3)
        for _ in range(20):
            g, a = rng.normal(size=3), rng.normal(size=3) * 2
            w = rng.uniform(0.1, 3)
            xp = prox_linear(g, a, w, ball)
            for x in (ball.project(rng.normal(size=3)) for _ in range(20)):
                assert (g + w * (xp - a)) @ (x - xp) >= -1e-9

    @pytest.mark.parametrize("w", [0.0, -1.0])
    def test_rejects_weight(self, w):
        with pytest.raises(ValueError):
            prox_linear(np.zeros(2), np.zeros(2), w, EuclideanBall.unit(2))

    def test_rejects_dimension(self):
        with pytest.raises(ValueError):
            prox_linear(np.zeros(3), np.zeros(2), 1.0, EuclideanBall.unit(2))
        with pytest.raises(ValueError):
            prox_linear(np.zeros(3), np.zeros(3), 1.0, EuclideanBall.unit(2))


class TestProxModel:
    def test_linear_agrees(self):
        ball = EuclideanBall.unit(2)
        m = LinearModel.build([0.2, 0.1], 0.0, [1.0, -2.0], 0.0, 1.0)
        a = np.array([0.4, 0.4])
        np.testing.assert_allclose(prox_model(m, a, 2.0, ball),
                                   prox_linear(m.g, a, 2.0, ball), atol=1e-10)
        solved = prox_model(m, a, 2.0, ball,
                            inner_solver=lambda f, g, x0, s, lip: s.project(a - m.g / 2.0))
        np.testing.assert_allclose(solved, prox_linear(m.g, a, 2.0, ball), atol=1e-10)

    def test_quadratic_model_grid(self):
        # psi(x) = |x - c|^2 - |y - c|^2, checked against a brute-force disk grid
        c = np.array([1.5, 0.5])
        y = np.zeros(2)
        m = ModelEvaluation(y, 0.0, lambda x: float((x - c) @ (x - c) - c @ c), 0.0, 1.0,
                            psi_grad=lambda x: 2 * (x - c))
        ball = EuclideanBall.unit(2)
        a = np.array([-0.5, 0.2])
        w = 1.0
        xs = prox_model(m, a, w, ball, psi_lipschitz=2.0)
        ax = np.arange(-1, 1.0005, 1e-3)
        gx, gy = np.meshgrid(ax, ax)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        pts = pts[np.sum(pts ** 2, axis=1) <= 1]
        vals = np.sum((pts - c) ** 2, axis=1) + 0.5 * w * np.sum((pts - a) ** 2, axis=1)
        assert np.linalg.norm(xs - pts[np.argmin(vals)]) <= 2e-3
        # the unconstrained optimum (2c + w a)/(2 + w) lies inside the disk here
        inner = (2 * c + w * a) / (2 + w)
        assert np.linalg.norm(inner) < 1
        np.testing.assert_allclose(xs, inner, atol=1e-8)

    def test_fixed_point(self):
        ball = EuclideanBall.unit(2)
        m = LinearModel.build([0.1, 0.1], 0.0, [0.0, 0.0], 0.0, 1.0)
        np.testing.assert_array_equal(prox_model(m, [0.3, 0.2], 1.0, ball), [0.3, 0.2])

    def test_needs_gradient(self):
        m = ModelEvaluation(np.zeros(2), 0.0, lambda x: 0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            prox_model(m, np.zeros(2), 1.0, EuclideanBall.unit(2))

    def test_infeasible_inner(self):
        m = LinearModel.build([0.0, 0.0], 0.0, [1.0, 0.0], 0.0, 1.0)
        with pytest.raises(ValueError):
            prox_model(m, np.zeros(2), 1.0, EuclideanBall.unit(2),
                       inner_solver=lambda *a: np.array([5.0, 0.0]))
