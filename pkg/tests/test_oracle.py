import math

import numpy as np
import pytest

from config.settings import settings
from core.exceptions import GridInadequacyError, ValidationError
from dynamics.entanglement import spectral, von_neumann_entropy
from dynamics.excited import wigner01_h
from dynamics.gaussian import Party, density_kernel, purity, reduced_A, reduced_B
from dynamics.oracle import (
    GridSpec, eval_psi, grid_entropy, grid_for_state, grid_moments, grid_purity, grid_spectrum, grid_wigner,
    partial_trace, psi_on_grid,
)
from dynamics.state import ModeState
from dynamics.wigner import second_moments, wigner_marginal

def reduced_on_grid(state, n=0, m=0, party=Party.A):
    grid = grid_for_state(state, n, m)
    psi = psi_on_grid(n, m, state, grid)
    return grid, psi, partial_trace(psi, grid.spacing, party, grid.axis())

class TestWavefunction:
    def test_ground_peak(self):
        assert eval_psi(0, 0, 0.0, 0.0, ModeState.static(1.0, 1.0, 0.0)) == pytest.approx(1.0 / math.sqrt(math.pi))

    def test_excited_norm(self, static_state):
        grid = grid_for_state(static_state, 0, 1)
        psi = psi_on_grid(0, 1, static_state, grid)
        assert np.sum(np.abs(psi) ** 2) * grid.spacing ** 2 == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("levels", [(9, 0), (0, -1)])
    def test_level_bounds(self, static_state, levels):
        with pytest.raises(ValidationError):
            eval_psi(*levels, 0.0, 0.0, static_state)

class TestGrid:
    def test_even_points(self):
        with pytest.raises(ValidationError):
            GridSpec(5.0, 64)

    def test_refined_halves_spacing(self):
        grid = GridSpec(4.0, 65)
        assert grid.refined().spacing == pytest.approx(grid.spacing / 2)

    def test_default_size(self, static_state):
        grid = grid_for_state(static_state)
        assert grid.points == settings.oracle.grid_points
        assert grid.half_width == pytest.approx(8.0 * math.sqrt(0.3125))

    def test_points_below_minimum(self, static_state):
        with pytest.raises(ValidationError):
            grid_for_state(static_state, points=33)

    def test_grid_too_large(self, static_state, monkeypatch):
        monkeypatch.setattr(settings.oracle, "nyquist_factor", 1e4)
        with pytest.raises(GridInadequacyError) as excinfo:
            grid_for_state(static_state)
        assert excinfo.value.details["needed"] > settings.oracle.max_grid_points

    def test_window_too_narrow(self, static_state):
        with pytest.raises(GridInadequacyError):
            psi_on_grid(0, 0, static_state, GridSpec(0.5, 65))

    def test_trace_check(self, static_state):
        grid = GridSpec(0.5, 65)
        psi = psi_on_grid(0, 0, static_state, grid, check_norm=False)
        with pytest.raises(GridInadequacyError):
            partial_trace(psi, grid.spacing)

class TestGroundSector:
    def test_product_state_is_pure(self):
        _, _, rho = reduced_on_grid(ModeState.static(1.0, 4.0, 0.0))
        assert grid_purity(rho) == pytest.approx(1.0, abs=1e-8)

    def test_static_purity_and_spectrum(self, static_state):
        _, _, rho = reduced_on_grid(static_state)
        assert grid_purity(rho) == pytest.approx(0.8, abs=1e-8)
        assert rho.hermiticity < 1e-14
        np.testing.assert_allclose(grid_spectrum(rho)[:3], [8 / 9, 8 / 81, 8 / 729], atol=1e-8)

    def test_party_b(self, static_state):
        _, _, rho = reduced_on_grid(static_state, party=Party.B)
        assert grid_purity(rho) == pytest.approx(float(purity(reduced_B(*static_state.args))), abs=1e-8)

    def test_kernel_after_quench(self, quench_oracle_states):
        state = quench_oracle_states.at(3)
        grid, _, rho = reduced_on_grid(state)
        X, XP = np.meshgrid(grid.axis(), grid.axis(), indexing="ij")
        expected = density_kernel(reduced_A(*state.args), X, XP)
        assert np.abs(rho.matrix - expected).max() < 1e-6

    @pytest.mark.parametrize("index", [0, 2, 3, 4])
    def test_entropy_after_quench(self, quench_oracle_states, index):
        state = quench_oracle_states.at(index)
        _, _, rho = reduced_on_grid(state)
        analytic = von_neumann_entropy(spectral(reduced_A(*state.args)))
        assert grid_entropy(grid_spectrum(rho)) == pytest.approx(float(analytic), abs=settings.oracle.entropy_tol)

    def test_moments(self, quench_oracle_states):
        state = quench_oracle_states.at(4)
        grid, psi, _ = reduced_on_grid(state)
        x2, p2 = second_moments(wigner_marginal(*state.args))
        grid_x2, grid_p2 = grid_moments(psi, grid)
        assert grid_x2 == pytest.approx(float(x2), abs=1e-8)
        assert grid_p2 == pytest.approx(float(p2), abs=1e-8)

class TestGridWigner:
    @pytest.fixture(autouse=True)
    def fine_momentum(self, monkeypatch):
        monkeypatch.setattr(settings.oracle, "nyquist_factor", 20.0)

    def test_ground_marginal(self, quench_oracle_states):
        state = quench_oracle_states.at(2)
        grid, _, rho = reduced_on_grid(state)
        p = np.linspace(-2.0, 2.0, 9)
        centre = np.abs(grid.axis()) <= 1.0
        numeric = grid_wigner(rho, p)[centre]
        X, P = np.meshgrid(grid.axis()[centre], p, indexing="ij")
        np.testing.assert_allclose(numeric, wigner_marginal(*state.args)(X, P), atol=1e-6)

    def test_excited_marginal(self):
        state = ModeState.static(1.0, 2.0, math.pi / 8)
        grid, _, rho01 = reduced_on_grid(state, 0, 1)
        p = np.linspace(-2.0, 2.0, 9)
        centre = np.abs(grid.axis()) <= 1.0
        numeric = grid_wigner(rho01, p)[centre]
        X, P = np.meshgrid(grid.axis()[centre], p, indexing="ij")
        h0, h1, h2, h3 = wigner01_h(*state.args)
        expected = wigner_marginal(*state.args)(X, P) * (h0 + h1 * X ** 2 + h2 * P ** 2 + 2 * h3 * X * P)
        np.testing.assert_allclose(numeric, expected, atol=1e-6)
