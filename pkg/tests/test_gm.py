import math

import numpy as np
import pytest

from qinexact import (EuclideanBall, GmConfig, InfeasibleStart, LineSearchExhausted,
                      gm_bound, make_absolute_noise_oracle, make_exact_oracle,
                      run_adaptive_gm)
from qinexact.model import InexactOracle, LinearModel


def half_sq(x):
    return 0.5 * float(x @ x)


def ident(x):
    return np.asarray(x, dtype=float)


BALL = EuclideanBall.unit(2)


def test_first_step_hand_simulation():
    # trial L = 0.5: candidate (-1, 0); test 0.5 <= 0.5 - 2 + 1 = -0.5 fails.
    # trial L = 1: candidate (0, 0); test 0 <= 0.5 - 1 + 0.5 = 0 holds.
    x0 = np.array([1.0, 0.0])
    for L, cand, holds in [(0.5, [-1.0, 0.0], False), (1.0, [0.0, 0.0], True)]:
        c = np.array(cand)
        rhs = half_sq(x0) + x0 @ (c - x0) + 0.5 * L * (c - x0) @ (c - x0)
        assert bool(half_sq(c) <= rhs) is holds
    res = run_adaptive_gm(make_exact_oracle(ident, half_sq, 1.0), BALL, x0,
                          GmConfig(L0=1.0, max_iters=1))
    assert res.line_search_counts == [2]
    assert res.L_history == [1.0]
    np.testing.assert_array_equal(res.iterates[1], [0.0, 0.0])
    assert res.oracle_calls == 3


def test_fixed_point():
    res = run_adaptive_gm(make_exact_oracle(ident, half_sq, 1.0), BALL, np.zeros(2),
                          GmConfig(max_iters=20))
    assert all(np.all(x == 0) for x in res.iterates)
    assert all(c == 1 for c in res.line_search_counts)


def test_floor_keeps_weights_finite():
    res = run_adaptive_gm(make_exact_oracle(ident, half_sq, 1.0), BALL, np.zeros(2),
                          GmConfig(max_iters=2000))
    assert min(res.L_history) == GmConfig().L_min
    assert np.all(np.isfinite(res.point))


def test_noise_envelope_1000():
    o = make_absolute_noise_oracle(ident, half_sq, 1.0, 0.1, seed=1)
    x0 = np.array([1.0, 0.0])
    with pytest.warns(UserWarning, match="lower model bound"):
        res = run_adaptive_gm(o, BALL, x0, GmConfig(max_iters=1000))
    R = math.sqrt(0.5)
    assert res.f_hat_history[-1] <= gm_bound(1000, 1.0, R, 0.1, 1.0)


def test_line_search_bounded_calls():
    L = 8.0
    o = make_exact_oracle(lambda x: L * x, lambda x: 0.5 * L * float(x @ x), L)
    N = 50
    res = run_adaptive_gm(o, BALL, np.array([0.6, 0.8]), GmConfig(L0=0.5, max_iters=N))
    assert max(res.L_history) <= 2 * max(L, 0.5)
    assert sum(res.line_search_counts) <= 2 * N + math.log2(2 * L / 0.5) + 1


def test_target_gap_stops():
    cfg = GmConfig(L0=0.3, max_iters=500, target_gap=1e-6, f_star=0.0)
    res = run_adaptive_gm(make_exact_oracle(ident, half_sq, 1.0), BALL, [1.0, 0.0], cfg)
    assert res.status == "target_gap" and res.n_iters < 500
    assert res.f_hat_history[-1] <= 1e-6


def test_errors():
    with pytest.raises(InfeasibleStart):
        run_adaptive_gm(make_exact_oracle(ident, half_sq, 1.0), BALL, [2.0, 0.0])
    with pytest.raises(ValueError):
        run_adaptive_gm(make_exact_oracle(ident, half_sq, 1.0), BALL, [0.0, 0.0, 0.0])

    # an oracle whose f values ignore its own model can never pass the test
    def liar(y):
        return LinearModel.build(y, 1e6 * float(np.sum(np.abs(y))) + 1.0 * (y[0] < 0.9),
                                 np.ones(2), 0.0, 1.0)

    bad = InexactOracle(liar, 1.0, 0.0, True, 1.0)
    with pytest.raises(LineSearchExhausted):
        run_adaptive_gm(bad, BALL, [0.9, 0.0], GmConfig(line_search_cap=3))


@pytest.mark.parametrize("kw", [dict(L0=0.0), dict(max_iters=0), dict(line_search_cap=0),
                                dict(target_gap=1e-3)])
def test_config_rejects(kw):
    with pytest.raises(ValueError):
        GmConfig(**kw)


class TestBound:
    def test_plug_in(self):
        assert gm_bound(1, 1.0, 1.0, 0.0, 1.0) == 2.0

    def test_halves(self):
        assert gm_bound(20, 1.0, 1.0, 0.0, 0.5) == pytest.approx(gm_bound(10, 1.0, 1.0, 0.0, 0.5) / 2)

    def test_value(self):
        # 0.02 + 2 sqrt(2) 0.1 / 10
        assert gm_bound(100, 1.0, 1.0, 0.1, 1.0) == pytest.approx(0.048284271247461905, rel=1e-12)

    def test_rejects(self):
        with pytest.raises(ValueError):
            gm_bound(0, 1.0, 1.0, 0.0, 1.0)
