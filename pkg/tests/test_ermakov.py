import math

import numpy as np
import pandas as pd
import pytest

from core.exceptions import DomainError, ValidationError
from dynamics.ermakov import (
    FrequencyProfile, QuenchProfile, TabulatedFrequency, ermakov_invariant, free_b, inverted_b, level_energy,
    quench_b, solve_ermakov, write_trajectory_csv,
)
from dynamics.model import FrequencySchedule, build_model

class TestClosedForms:
    def test_quench_b(self):
        t = np.linspace(0.0, 10.0, 11)
        np.testing.assert_allclose(quench_b(1.3, 1.3, t), 1.0, atol=1e-15)
        assert quench_b(2.0, 0.5, math.pi) == pytest.approx(4.0)
        assert quench_b(2.0, 0.5, 0.0) == 1.0

    def test_quench_b_rejects_zero_final(self):
        with pytest.raises(DomainError) as excinfo:
            quench_b(2.0, 0.0, 1.0)
        assert "free_b" in excinfo.value.details["hint"]

    def test_free_b(self):
        assert free_b(1.0, 0.0) == 1.0
        assert free_b(1.0, 1.0) == pytest.approx(math.sqrt(2.0))
        assert free_b(1.0, 3.0) == pytest.approx(3.162278, abs=1e-6)

    def test_inverted_b(self):
        assert inverted_b(1.0, 0.7, 0.0) == 1.0
        expected = math.sqrt((1.49 / 0.98) * math.cosh(1.4) - 0.51 / 0.98)
        assert inverted_b(1.0, 0.7, 1.0) == pytest.approx(expected, rel=1e-12)
        assert inverted_b(1.0, 0.7, 1.0) == pytest.approx(1.658263, abs=1e-6)
        t = np.linspace(0.0, 3.0, 7)
        np.testing.assert_allclose(inverted_b(0.8, 0.8, t), np.sqrt(np.cosh(1.6 * t)), rtol=1e-13)

class TestSolveErmakov:
    def test_constant_frequency(self):
        t = np.linspace(0.0, 10.0, 101)
        traj = solve_ermakov(lambda s: 4.0, t)
        assert traj.method.startswith("numeric")
        np.testing.assert_allclose(traj.b, 1.0, atol=1e-9)
        np.testing.assert_allclose(traj.tau, t, atol=1e-9)
        np.testing.assert_allclose(traj.omega_prime, 2.0, atol=1e-8)
        assert traj.level_energy(0) == pytest.approx(1.0)
        assert level_energy(3, 0.5) == pytest.approx(1.75)
        assert traj.level_energy(2) == pytest.approx(5.0)

    def test_initial_conditions_exact(self):
        t = np.linspace(0.0, 5.0, 11)
        for profile in (QuenchProfile(4.0, 0.25), QuenchProfile(1.0, 0.0), QuenchProfile(1.0, -0.49)):
            for method in ("auto", "numeric"):
                traj = solve_ermakov(profile, t, method=method)
                assert traj.b[0] == 1.0
                assert traj.bdot[0] == 0.0

    @pytest.mark.parametrize("profile, label", [
        (QuenchProfile(4.0, 0.25), "closed-form:quench"),
        (QuenchProfile(1.0, 0.0), "closed-form:free"),
        (QuenchProfile(1.0, -0.49), "closed-form:inverted"),
    ])
    def test_numeric_matches_closed_form(self, profile, label):
        t = np.linspace(0.0, 5.0, 251)
        closed = solve_ermakov(profile, t)
        numeric = solve_ermakov(profile, t, method="numeric")
        assert closed.method == label
        assert numeric.method == "numeric:DOP853"
        np.testing.assert_allclose(numeric.b, closed.b, rtol=1e-8, atol=0)
        np.testing.assert_allclose(numeric.bdot, closed.bdot, rtol=1e-8, atol=1e-8)
        np.testing.assert_allclose(numeric.tau, closed.tau, atol=1e-8)

    def test_quench_matches_quench_b(self):
        t = np.linspace(0.0, 20.0, 401)
        numeric = solve_ermakov(QuenchProfile(4.0, 0.25), t, method="numeric")
        assert np.max(np.abs(numeric.b - quench_b(2.0, 0.5, t))) < 1e-8

    def test_quench_model_mode(self):
        modes = build_model(FrequencySchedule(kind="quench", omega1_i=1, omega1_f=1.3,
                                              omega2_i=1.5, omega2_f=1.8, J=1.1))
        t = np.linspace(0.0, 10.0, 201)
        closed = solve_ermakov(modes.profile(1), t, mode=1)
        numeric = solve_ermakov(modes.profile(1), t, mode=1, method="numeric")
        assert np.max(np.abs(numeric.b - closed.b)) < 1e-8

    def test_quench_phase_is_continuous(self):
        t = np.linspace(0.0, 30.0, 6001)
        traj = solve_ermakov(QuenchProfile(4.0, 0.25), t)
        assert np.all(np.diff(traj.tau) > 0)
        rate = np.gradient(traj.tau, t)
        np.testing.assert_allclose(rate[1:-1], 1.0 / traj.b[1:-1] ** 2, rtol=5e-3)

    def test_invariant_vanishes(self):
        t = np.linspace(0.0, 10.0, 101)
        for profile in (QuenchProfile(4.0, 0.25), QuenchProfile(1.0, 0.0), QuenchProfile(1.0, -0.49)):
            traj = solve_ermakov(profile, t)
            scale = 1.0 + np.max(traj.b) ** 4
            assert np.max(np.abs(ermakov_invariant(traj))) < 1e-10 * scale
            assert np.max(np.abs(traj.residual())) < 1e-10 * scale

    def test_difference_residual_on_smooth_profile(self):
        t = np.linspace(0.0, 10.0, 4001)
        traj = solve_ermakov(lambda s: 1.0 + 0.5 * np.sin(s), t)
        assert traj.method.startswith("numeric")
        assert np.max(np.abs(traj.difference_residual())) < 1e-4
        # stored b̈ comes from the right-hand side
        assert np.max(np.abs(traj.residual())) < 1e-12

    def test_difference_residual_needs_three_samples(self):
        traj = solve_ermakov(QuenchProfile(1.0, 2.0), [0.0, 1.0])
        with pytest.raises(ValidationError):
            traj.difference_residual()

    def test_profile_is_abstract(self):
        with pytest.raises(TypeError):
            FrequencyProfile()

    def test_tabulated_profile(self):
        samples = np.linspace(0.0, 6.0, 61)
        table = TabulatedFrequency(samples, np.full_like(samples, 2.25))
        traj = solve_ermakov(table, np.linspace(0.0, 5.0, 51))
        np.testing.assert_allclose(traj.b, 1.0, atol=1e-9)

    def test_grid_past_table_end(self):
        table = TabulatedFrequency([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
        with pytest.raises(ValidationError):
            solve_ermakov(table, np.linspace(0.0, 3.0, 4))

    @pytest.mark.parametrize("grid", [[0.5, 1.0], [0.0, 2.0, 1.0], []])
    def test_bad_grid(self, grid):
        with pytest.raises(ValidationError):
            solve_ermakov(QuenchProfile(1.0, 1.0), grid)

    def test_nonpositive_initial_frequency(self):
        with pytest.raises(DomainError):
            solve_ermakov(QuenchProfile(-1.0, 1.0), [0.0, 1.0])

    def test_closed_requires_piecewise_constant(self):
        with pytest.raises(ValidationError):
            solve_ermakov(lambda s: 1.0 + 0.1 * s, [0.0, 1.0], method="closed")

    def test_trajectory_csv(self, tmp_path):
        traj = solve_ermakov(QuenchProfile(4.0, 0.25), np.linspace(0.0, 1.0, 5))
        path = write_trajectory_csv(traj, tmp_path / "traj" / "mode1.csv")
        frame = pd.read_csv(path, float_precision="round_trip")
        assert list(frame.columns) == ["t", "b", "bdot", "tau", "omega_prime"]
        assert len(frame) == 5
        np.testing.assert_allclose(frame["b"], traj.b, rtol=1e-15)
