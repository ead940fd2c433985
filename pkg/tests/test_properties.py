import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qinexact import (Box, EuclideanBall, StepRule, collapse_to_q0, fgm_bound, gm_bound,
                      holder_L, prox_linear, solve_alpha, step_size)
from qinexact.subgradient import RULES

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
vec3 = arrays(np.float64, 3, elements=finite)
pos = st.floats(1e-3, 1e3)
degree = st.floats(0.0, 1.99)
common = settings(max_examples=200, deadline=None)


@common
@given(vec3, st.floats(0.1, 5))
def test_ball_projection_idempotent(x, r):
    ball = EuclideanBall(np.zeros(3), r)
    p = ball.project(x)
    assert np.linalg.norm(p) <= r * (1 + 1e-12)
    np.testing.assert_allclose(ball.project(p), p, atol=1e-12)


@common
@given(vec3, vec3)
def test_projection_nonexpansive(x, y):
    for s in (EuclideanBall.unit(3), Box([-1, 0, -2], [1, 1, 0])):
        assert np.linalg.norm(s.project(x) - s.project(y)) <= np.linalg.norm(x - y) + 1e-9


@common
@given(vec3, vec3, pos, st.floats(0.1, 10))
def test_prox_scaling(g, a, w, c):
    # scaling gradient and weight together leaves the prox point unchanged
    ball = EuclideanBall.unit(3)
    a = ball.project(a)
    np.testing.assert_allclose(prox_linear(g, a, w, ball), prox_linear(c * g, a, c * w, ball),
                               atol=1e-9)


@common
@given(st.floats(0, 10), degree, pos, st.floats(0, 100))
def test_collapse_dominates(delta, q, rho, r):
    inc, dhat = collapse_to_q0(delta, q, rho)
    assert delta * r ** q <= 0.5 * inc * r * r + dhat + 1e-9 * (1 + delta * r ** q)


@common
@given(st.floats(1e-3, 1), st.floats(0, 0.99), st.floats(0, 1.5), st.floats(0.1, 10),
       st.floats(1e-6, 1e3))
def test_holder_L_certifies(delta, nu, q, L_nu, r):
    assume(q < 1 + nu)
    L = holder_L(delta, nu, q, L_nu)
    lhs = L_nu / (1 + nu) * r ** (1 + nu)
    assert lhs <= 0.5 * L * r * r + delta * r ** q + 1e-9 * max(1.0, lhs)


@common
@given(pos, st.floats(0, 1e4))
def test_solve_alpha_root(L, A):
    a = solve_alpha(L, A)
    assert a > 0
    assert abs(L * a * a - a - A) <= 1e-9 * max(1.0, L * a * a)
    # the new cumulative weight equals L alpha^2
    assert math.isclose(A + a, L * a * a, rel_tol=1e-9, abs_tol=1e-12)


@common
@given(st.sampled_from([r for r in RULES if r != "polyak"]), st.integers(1, 10_000),
       st.floats(1e-3, 1e3))
def test_step_positive(kind, k, gn):
    assert step_size(StepRule(kind), k, gn, 0.0, gn * gn * k) > 0


@common
@given(st.integers(1, 10_000), pos, pos, st.floats(0, 1), st.floats(0.01, 1.99))
def test_bounds_decrease_in_N(N, L, R, delta, q):
    assert gm_bound(N + 1, L, R, delta, q) <= gm_bound(N, L, R, delta, q) * (1 + 1e-12)
    if q >= 2 / 3:
        assert fgm_bound(N + 1, L, R, delta, q) <= fgm_bound(N, L, R, delta, q) * (1 + 1e-12)
