#!/usr/bin/env python3
"""
Frequency Schedules and Normal Modes
频率参数表与简正模对角化
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from core.exceptions import ScheduleError
from dynamics.ermakov import FrequencyProfile, QuenchProfile, TabulatedFrequency

# 常数旋转角条件的相对容差
ALPHA_RATIO_RTOL = 1e-10

_IMAGINARY = re.compile(r"^\s*([0-9.eE+-]+)\s*[ij]\s*$")

class ScheduleKind(str, Enum):
    """参数表类型"""
    TOY1 = "toy1"
    TOY2 = "toy2"
    QUENCH = "quench"
    NORMAL_MODES = "normal_modes"
    TABULATED = "tabulated"

def signed_square(value: Union[float, str]) -> float:
    """
    Square of a normal-mode frequency, accepting imaginary input.

    "0.7i" (or "0.7j") encodes an imaginary frequency and maps to -0.49;
    plain numbers and numeric strings map to their square.
    """
    if isinstance(value, str):
        match = _IMAGINARY.match(value)
        if match:
            return -float(match.group(1)) ** 2
        value = float(value)
    return float(value) ** 2

def rotation_angle(omega1_sq, omega2_sq, J):
    """
    Rotation angle alpha = atan(2J / (w1^2 - w2^2)) / 2 in [-pi/4, pi/4].

    Degenerate frequencies give sign(J) * pi/4; J = 0 gives 0.
    """
    w1, w2, j = np.broadcast_arrays(
        np.asarray(omega1_sq, dtype=float),
        np.asarray(omega2_sq, dtype=float),
        np.asarray(J, dtype=float),
    )
    diff = w1 - w2
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = 0.5 * np.arctan(2.0 * j / diff)
    alpha = np.where(diff == 0, np.sign(j) * (np.pi / 4), alpha)
    alpha = np.where(j == 0, 0.0, alpha)
    return alpha[()]

def normal_mode_frequencies(omega1_sq, omega2_sq, J):
    """
    简正模频率平方 (w~1^2, w~2^2)

    w~1,2^2 = [(w1^2 + w2^2) ± eps(w1^2 - w2^2) sqrt((w1^2 - w2^2)^2 + 4J^2)] / 2
    with eps(0) = +1. The root without cancellation is formed directly and the
    other one from the determinant w1^2 w2^2 - J^2, which keeps both the trace
    and the determinant exact to rounding.
    """
    w1, w2, j = np.broadcast_arrays(
        np.asarray(omega1_sq, dtype=float),
        np.asarray(omega2_sq, dtype=float),
        np.asarray(J, dtype=float),
    )
    trace = w1 + w2
    diff = w1 - w2
    det = w1 * w2 - j * j
    root = np.hypot(diff, 2.0 * j)

    with np.errstate(divide="ignore", invalid="ignore"):
        plus_direct = 0.5 * (trace + root)
        minus_direct = 0.5 * (trace - root)
        plus = np.where(trace >= 0, plus_direct,
                        np.where(minus_direct != 0, det / minus_direct, plus_direct))
        minus = np.where(trace >= 0,
                         np.where(plus_direct != 0, det / plus_direct, minus_direct),
                         minus_direct)

    eps = np.where(diff >= 0, 1.0, -1.0)
    wt1 = np.where(eps > 0, plus, minus)
    wt2 = np.where(eps > 0, minus, plus)
    return wt1[()], wt2[()]

class FrequencySchedule(BaseModel):
    """
    Time-dependent parameters of the coupled pair (hbar = m = 1).

    quench: physical endpoints omega{1,2}_{i,f} and the coupling J.
    toy1 / toy2 / normal_modes: alpha plus normal-mode endpoints
    wtilde{1,2}_{i,f}; finals may be imaginary ("0.7i") or zero.
    normal_modes may instead carry sampled wtilde^2 tables.
    tabulated: samples of (t, w1^2, w2^2, J); alpha must stay constant.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ScheduleKind

    omega1_i: Optional[float] = None
    omega1_f: Optional[float] = None
    omega2_i: Optional[float] = None
    omega2_f: Optional[float] = None
    J: Optional[float] = None

    alpha: Optional[float] = None
    wtilde1_i: Optional[float] = None
    wtilde1_f: Optional[Union[float, str]] = None
    wtilde2_i: Optional[float] = None
    wtilde2_f: Optional[Union[float, str]] = None

    samples_t: Optional[List[float]] = None
    omega1_sq: Optional[List[float]] = None
    omega2_sq: Optional[List[float]] = None
    coupling: Optional[List[float]] = None
    wtilde1_sq_samples: Optional[List[float]] = None
    wtilde2_sq_samples: Optional[List[float]] = None

    @field_validator("wtilde1_f", "wtilde2_f")
    @classmethod
    def _parse_final(cls, value):
        if value is not None:
            signed_square(value)
        return value

    @model_validator(mode="after")
    def _check_kind(self):
        kind = self.kind
        if kind == ScheduleKind.QUENCH:
            missing = [name for name in ("omega1_i", "omega1_f", "omega2_i", "omega2_f", "J")
                       if getattr(self, name) is None]
            if missing:
                raise ValueError(f"quench schedule requires {', '.join(missing)}")
            if self.omega1_i <= 0 or self.omega2_i <= 0:
                raise ValueError("initial frequencies must be strictly positive")
            if self.omega1_f < 0 or self.omega2_f < 0:
                raise ValueError("final frequencies must be non-negative")
        elif kind == ScheduleKind.TABULATED:
            self._check_table(("samples_t", "omega1_sq", "omega2_sq", "coupling"))
            if self.omega1_sq[0] <= 0 or self.omega2_sq[0] <= 0:
                raise ValueError("initial frequencies must be strictly positive")
            check_constant_alpha(self.omega1_sq, self.omega2_sq, self.coupling)
        else:
            if self.alpha is None or self.wtilde1_i is None or self.wtilde2_i is None:
                raise ValueError(f"{kind.value} schedule requires alpha, wtilde1_i and wtilde2_i")
            if not -math.pi / 4 - 1e-12 <= self.alpha <= math.pi / 4 + 1e-12:
                raise ValueError(f"alpha must lie in [-pi/4, pi/4], got {self.alpha}")
            if self.wtilde1_i <= 0 or self.wtilde2_i <= 0:
                raise ValueError("initial frequencies must be strictly positive")
            if self.wtilde1_sq_samples is not None or self.wtilde2_sq_samples is not None:
                if kind != ScheduleKind.NORMAL_MODES:
                    raise ValueError("sampled normal-mode tables are only valid for kind=normal_modes")
                self._check_table(("samples_t", "wtilde1_sq_samples", "wtilde2_sq_samples"))
            elif self.wtilde1_f is None or self.wtilde2_f is None:
                raise ValueError(f"{kind.value} schedule requires wtilde1_f and wtilde2_f")
        return self

    def _check_table(self, names: Tuple[str, ...]):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind.value} schedule requires {', '.join(missing)}")
        lengths = {len(getattr(self, name)) for name in names}
        if len(lengths) != 1:
            raise ValueError(f"sample arrays {', '.join(names)} differ in length")
        t = np.asarray(self.samples_t, dtype=float)
        if t.size < 2 or t[0] != 0 or np.any(np.diff(t) <= 0):
            raise ValueError("samples_t must start at 0 and be strictly increasing (>= 2 samples)")

def check_constant_alpha(omega1_sq, omega2_sq, coupling) -> float:
    """
    Verify 2J/(w1^2 - w2^2) is the same at every sample and return alpha.

    Raises ScheduleError naming the worst-offending sample.
    """
    w1 = np.asarray(omega1_sq, dtype=float)
    w2 = np.asarray(omega2_sq, dtype=float)
    j = np.asarray(coupling, dtype=float)
    diff = w1 - w2

    defined = ~((diff == 0) & (j == 0))
    if not np.any(defined):
        return 0.0

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = 2.0 * j / diff
    ref_index = int(np.argmax(defined))
    ref = ratio[ref_index]

    if np.isinf(ref):
        deviation = np.where(ratio == ref, 0.0, np.inf)
    else:
        scale = abs(ref) if ref != 0 else 1.0
        with np.errstate(invalid="ignore"):
            deviation = np.abs(ratio - ref) / scale
    deviation = np.where(defined, deviation, 0.0)

    worst = int(np.argmax(deviation))
    if deviation[worst] > ALPHA_RATIO_RTOL:
        raise ScheduleError(
            f"Rotation angle is not constant: 2J/(w1^2-w2^2) at sample {worst} is "
            f"{ratio[worst]:.12g}, expected {ref:.12g}",
            sample_index=worst,
            ratio=float(ratio[worst]),
            details={"reference_ratio": float(ref), "relative_deviation": float(deviation[worst])},
        )
    return float(rotation_angle(w1[ref_index], w2[ref_index], j[ref_index]))

@dataclass(frozen=True)
class NormalModes:
    """Rotation angle and per-mode frequency^2 endpoints (negative = inverted)."""

    alpha: float
    wtilde1_sq_initial: float
    wtilde2_sq_initial: float
    wtilde1_sq_final: float
    wtilde2_sq_final: float
    tables: Optional[Tuple[TabulatedFrequency, TabulatedFrequency]] = None

    def profile(self, mode: int) -> FrequencyProfile:
        """Frequency^2 profile of normal mode 1 or 2 for the Ermakov solver."""
        if mode not in (1, 2):
            raise ValueError(f"mode must be 1 or 2, got {mode}")
        if self.tables is not None:
            return self.tables[mode - 1]
        if mode == 1:
            return QuenchProfile(self.wtilde1_sq_initial, self.wtilde1_sq_final)
        return QuenchProfile(self.wtilde2_sq_initial, self.wtilde2_sq_final)

    @property
    def inverted(self) -> Tuple[bool, bool]:
        return self.wtilde1_sq_final < 0, self.wtilde2_sq_final < 0

def build_model(schedule: FrequencySchedule) -> NormalModes:
    """
    参数表 -> 简正模

    quench uses the post-quench parameters for alpha and applies the same J
    to both epochs; toy and normal_modes kinds take alpha and the normal-mode
    endpoints as given.
    """
    kind = schedule.kind

    if kind == ScheduleKind.QUENCH:
        w1i, w2i = schedule.omega1_i ** 2, schedule.omega2_i ** 2
        w1f, w2f = schedule.omega1_f ** 2, schedule.omega2_f ** 2
        alpha = rotation_angle(w1f, w2f, schedule.J)
        init1, init2 = normal_mode_frequencies(w1i, w2i, schedule.J)
        fin1, fin2 = normal_mode_frequencies(w1f, w2f, schedule.J)
        return NormalModes(float(alpha), float(init1), float(init2), float(fin1), float(fin2))

    if kind == ScheduleKind.TABULATED:
        alpha = check_constant_alpha(schedule.omega1_sq, schedule.omega2_sq, schedule.coupling)
        wt1, wt2 = normal_mode_frequencies(schedule.omega1_sq, schedule.omega2_sq, schedule.coupling)
        return _tabulated_modes(alpha, schedule.samples_t, wt1, wt2)

    if schedule.wtilde1_sq_samples is not None:
        return _tabulated_modes(schedule.alpha, schedule.samples_t,
                                schedule.wtilde1_sq_samples, schedule.wtilde2_sq_samples)

    return NormalModes(
        alpha=float(schedule.alpha),
        wtilde1_sq_initial=schedule.wtilde1_i ** 2,
        wtilde2_sq_initial=schedule.wtilde2_i ** 2,
        wtilde1_sq_final=signed_square(schedule.wtilde1_f),
        wtilde2_sq_final=signed_square(schedule.wtilde2_f),
    )

def _tabulated_modes(alpha: float, t, wt1_sq, wt2_sq) -> NormalModes:
    table1 = TabulatedFrequency(t, wt1_sq)
    table2 = TabulatedFrequency(t, wt2_sq)
    return NormalModes(
        alpha=float(alpha),
        wtilde1_sq_initial=float(table1.initial),
        wtilde2_sq_initial=float(table2.initial),
        wtilde1_sq_final=float(table1.values[-1]),
        wtilde2_sq_final=float(table2.values[-1]),
        tables=(table1, table2),
    )

if __name__ == "__main__":
    print(f"alpha(1.69, 3.24, 1.1) = {rotation_angle(1.69, 3.24, 1.1):.6f}")
    print(f"modes(1.69, 3.24, 1.1) = {normal_mode_frequencies(1.69, 3.24, 1.1)}")
    quench = FrequencySchedule(kind="quench", omega1_i=1, omega1_f=1.3, omega2_i=1.5, omega2_f=1.8, J=1.1)
    print(build_model(quench))
