import math

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from core.exceptions import ScheduleError
from dynamics.model import (
    FrequencySchedule, ScheduleKind, build_model, check_constant_alpha, normal_mode_frequencies,
    rotation_angle, signed_square,
)

class TestRotationAngle:
    def test_decoupled(self):
        assert rotation_angle(1.0, 4.0, 0.0) == 0.0

    def test_degenerate_frequencies_follow_coupling_sign(self):
        assert rotation_angle(2.25, 2.25, 1.1) == pytest.approx(math.pi / 4)
        assert rotation_angle(2.25, 2.25, -1.1) == pytest.approx(-math.pi / 4)

    def test_quench_parameters(self):
        assert rotation_angle(1.69, 3.24, 1.1) == pytest.approx(-0.478513, abs=1e-6)

    def test_range(self, rng):
        w1 = rng.uniform(0.1, 10.0, 10_000)
        w2 = rng.uniform(0.1, 10.0, 10_000)
        j = rng.uniform(-5.0, 5.0, 10_000)
        alpha = rotation_angle(w1, w2, j)
        assert np.all(np.abs(alpha) <= math.pi / 4 + 1e-15)

class TestNormalModeFrequencies:
    def test_decoupled_identity(self):
        assert normal_mode_frequencies(1.0, 4.0, 0.0) == pytest.approx((1.0, 4.0))

    def test_zero_mode(self):
        wt1, wt2 = normal_mode_frequencies(1.0, 4.0, 2.0)
        assert wt1 == pytest.approx(0.0, abs=1e-12)
        assert wt2 == pytest.approx(5.0)

    def test_quench_parameters(self):
        wt1, wt2 = normal_mode_frequencies(1.69, 3.24, 1.1)
        assert wt1 == pytest.approx(1.11940, abs=1e-5)
        assert wt2 == pytest.approx(3.81060, abs=1e-5)
        assert wt1 * wt2 == pytest.approx(1.69 * 3.24 - 1.21, rel=1e-12)

    def test_trace_and_determinant_preserved(self, rng):
        w1 = rng.uniform(0.1, 10.0, 10_000)
        w2 = rng.uniform(0.1, 10.0, 10_000)
        j = rng.uniform(-5.0, 5.0, 10_000)
        wt1, wt2 = normal_mode_frequencies(w1, w2, j)
        assert np.all(np.abs((wt1 + wt2) - (w1 + w2)) <= 1e-12 * (w1 + w2))
        assert np.all(np.abs(wt1 * wt2 - (w1 * w2 - j * j)) <= 1e-10 * np.maximum(1.0, w1 * w2))

    def test_branch_matches_rotation_angle(self, rng):
        w1 = rng.uniform(0.1, 10.0, 10_000)
        w2 = rng.uniform(0.1, 10.0, 10_000)
        j = rng.uniform(-5.0, 5.0, 10_000)
        wt1, _ = normal_mode_frequencies(w1, w2, j)
        np.testing.assert_allclose(wt1, w1 + j * np.tan(rotation_angle(w1, w2, j)), rtol=1e-9, atol=1e-9)

def test_signed_square():
    assert signed_square("0.7i") == pytest.approx(-0.49)
    assert signed_square("0.7j") == pytest.approx(-0.49)
    assert signed_square(2.0) == 4.0
    assert signed_square("1.5") == 2.25

class TestBuildModel:
    def test_quench(self):
        modes = build_model(FrequencySchedule(kind="quench", omega1_i=1, omega1_f=1.3,
                                              omega2_i=1.5, omega2_f=1.8, J=1.1))
        assert modes.alpha == pytest.approx(-0.478513, abs=1e-6)
        assert modes.wtilde1_sq_final == pytest.approx(1.11940, abs=1e-5)
        assert modes.wtilde1_sq_initial + modes.wtilde2_sq_initial == pytest.approx(1.0 + 2.25)
        assert modes.wtilde1_sq_initial * modes.wtilde2_sq_initial == pytest.approx(2.25 - 1.21)

    def test_toy_models(self):
        toy1 = build_model(FrequencySchedule(kind="toy1", alpha=math.pi / 4, wtilde1_i=1, wtilde1_f=0,
                                             wtilde2_i=2, wtilde2_f=0.5))
        assert toy1.wtilde1_sq_final == 0.0
        assert toy1.wtilde2_sq_final == pytest.approx(0.25)
        assert toy1.inverted == (False, False)

        toy2 = build_model(FrequencySchedule(kind=ScheduleKind.TOY2, alpha=math.pi / 4, wtilde1_i=1,
                                             wtilde1_f="0.7i", wtilde2_i=2, wtilde2_f=0.5))
        assert toy2.wtilde1_sq_final == pytest.approx(-0.49)
        assert toy2.inverted == (True, False)

    def test_tabulated_constant_alpha(self):
        schedule = FrequencySchedule(kind="tabulated", samples_t=[0, 1, 2], omega1_sq=[1, 2, 3],
                                     omega2_sq=[4, 5, 6], coupling=[1, 1, 1])
        modes = build_model(schedule)
        assert modes.alpha == pytest.approx(0.5 * math.atan(-2.0 / 3.0))
        assert modes.tables is not None
        assert modes.profile(1)(0.0) == pytest.approx(modes.wtilde1_sq_initial)

    def test_tabulated_rejects_varying_alpha(self):
        with pytest.raises(ScheduleError) as excinfo:
            FrequencySchedule(kind="tabulated", samples_t=[0, 1, 2], omega1_sq=[1, 1, 1],
                              omega2_sq=[4, 4, 4], coupling=[1, 1, 1.5])
        assert excinfo.value.details["sample_index"] == 2

    def test_check_constant_alpha_uncoupled(self):
        assert check_constant_alpha([1, 1], [4, 4], [0, 0]) == 0.0

    @pytest.mark.parametrize("changes", [
        {"J": None},
        {"omega1_i": 0.0},
        {"omega2_f": -1.0},
    ])
    def test_invalid_quench(self, changes):
        data = dict(kind="quench", omega1_i=1, omega1_f=1.3, omega2_i=1.5, omega2_f=1.8, J=1.1)
        data.update(changes)
        with pytest.raises(PydanticValidationError):
            FrequencySchedule(**data)

    def test_alpha_out_of_range(self):
        with pytest.raises(PydanticValidationError):
            FrequencySchedule(kind="toy1", alpha=1.0, wtilde1_i=1, wtilde1_f=0, wtilde2_i=2, wtilde2_f=0.5)

    def test_bad_imaginary_literal(self):
        with pytest.raises(PydanticValidationError):
            FrequencySchedule(kind="toy2", alpha=0.5, wtilde1_i=1, wtilde1_f="0.7k", wtilde2_i=2, wtilde2_f=0.5)
