import math

import numpy as np
import pytest

from dynamics.excited import excited_F, excited_coefficients, mixedness_ratio, uncertainty_gamma, wigner01_h
from dynamics.gaussian import reduced_A
from dynamics.state import ModeState
from dynamics.wigner import uncertainty_omega, wigner_marginal

def test_F_static():
    f1, f2 = excited_F(1.0, 4.0, 0.0, 0.0, math.pi / 4)
    assert f1.imag == pytest.approx(0.0)
    assert f2 == pytest.approx(0.29)

def test_F_rate_difference():
    f1, _ = excited_F(1.0, 1.0, 1.0, 0.0, math.pi / 4)
    assert f1.real == pytest.approx(-0.03125)
    assert f1.imag == pytest.approx(-0.125)

def test_decoupled_sector():
    coeffs = excited_coefficients(ModeState.static(1.5, 2.5, 0.0, r1=0.3, r2=-0.2))
    assert coeffs.r == pytest.approx(1.0)
    assert coeffs.F1 == pytest.approx(0.0)
    h0, h1, h2, h3 = coeffs.h
    assert h0 == pytest.approx(1.0)
    assert (h1, h2, h3) == pytest.approx((0.0, 0.0, 0.0))

def test_gamma_at_zero_angle():
    coeffs = excited_coefficients(ModeState.static(1.0, 3.0, 0.0))
    assert coeffs.gamma == pytest.approx(1.0)

def test_h_quarter_turn():
    h0, *_ = wigner01_h(1.0, 4.0, 0.0, 0.0, math.pi / 4)
    assert h0 == pytest.approx(0.0, abs=1e-15)

def test_h2_static():
    state = ModeState.static(1.0, 2.0, math.pi / 8)
    _, _, h2, _ = wigner01_h(*state.args)
    s2 = math.sin(math.pi / 8) ** 2
    assert h2 == pytest.approx(4.0 * s2 * state.D ** 2 / state.eta_bar ** 2)

def test_gamma_matches_helper(static_state):
    coeffs = excited_coefficients(static_state)
    gamma = uncertainty_gamma(wigner01_h(*static_state.args), wigner_marginal(*static_state.args))
    assert coeffs.gamma == pytest.approx(gamma)

def test_quench_sector(quench_series):
    coeffs = excited_coefficients(quench_series)
    omega, _ = uncertainty_omega(*quench_series.args)
    assert coeffs.r.shape == quench_series.w1.shape
    assert np.all(coeffs.r < 1.0)
    assert np.all(coeffs.r > 0.0)
    assert np.all(coeffs.gamma >= omega - 1e-12)

def test_mixedness_ratio_pure_reference():
    # α = 0 leaves both sectors pure
    state = ModeState.static(1.2, 2.0, 0.0, r1=0.4, r2=0.1)
    coeffs = excited_coefficients(state)
    assert mixedness_ratio(coeffs, reduced_A(*state.args)) == pytest.approx(1.0)

def test_mixedness_ratio_on_series(quench_series):
    state = quench_series.at(250)
    coeffs = excited_coefficients(state)
    assert mixedness_ratio(coeffs, reduced_A(*state.args)) == pytest.approx(coeffs.r)
