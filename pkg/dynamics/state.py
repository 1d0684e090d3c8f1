#!/usr/bin/env python3
"""
Mode State
每个时刻的 (ω′₁, ω′₂, ḃ₁/b₁, ḃ₂/b₂, α) 状态包
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.exceptions import DomainError, ValidationError
from dynamics.ermakov import ErmakovTrajectory

@dataclass(frozen=True, eq=False)
class ModeState:
    """
    Per-time inputs shared by every closed form.

    w1, w2 are the effective frequencies ω′ⱼ = ω̃ⱼ(0)/bⱼ², r1, r2 the rates
    ḃⱼ/bⱼ. They may be scalars or equal-shaped arrays (one entry per time
    sample). tau and omega0 only enter the wavefunction phases.
    """

    w1: np.ndarray
    w2: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    alpha: float
    tau1: np.ndarray = 0.0
    tau2: np.ndarray = 0.0
    omega1_0: float = None
    omega2_0: float = None

    def __post_init__(self):
        for name in ("w1", "w2", "r1", "r2", "tau1", "tau2"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.omega1_0 is None:
            object.__setattr__(self, "omega1_0", float(np.ravel(self.w1)[0]))
        if self.omega2_0 is None:
            object.__setattr__(self, "omega2_0", float(np.ravel(self.w2)[0]))

    @classmethod
    def static(cls, w1: float, w2: float, alpha: float, r1: float = 0.0, r2: float = 0.0) -> "ModeState":
        """Time-independent state (b = 1 unless rates are given)."""
        return cls(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha)

    @classmethod
    def from_trajectories(cls, first: ErmakovTrajectory, second: ErmakovTrajectory, alpha: float) -> "ModeState":
        if first.t.shape != second.t.shape or not np.array_equal(first.t, second.t):
            raise ValidationError("mode trajectories must share one time grid", field="t_grid")
        return cls(
            w1=first.omega_prime, w2=second.omega_prime,
            r1=first.rate, r2=second.rate,
            alpha=alpha,
            tau1=first.tau, tau2=second.tau,
            omega1_0=first.omega0, omega2_0=second.omega0,
        )

    @property
    def args(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, float]:
        return self.w1, self.w2, self.r1, self.r2, self.alpha

    @property
    def size(self) -> int:
        return int(np.size(self.w1))

    @property
    def c2(self) -> float:
        return np.cos(self.alpha) ** 2

    @property
    def s2(self) -> float:
        return np.sin(self.alpha) ** 2

    @property
    def D(self) -> np.ndarray:
        return self.w1 * self.s2 + self.w2 * self.c2

    @property
    def D_tilde(self) -> np.ndarray:
        return self.w1 * self.c2 + self.w2 * self.s2

    @property
    def eta_bar(self) -> np.ndarray:
        return self.D * self.D_tilde + self.s2 * self.c2 * (self.r1 - self.r2) ** 2

    def require_positive(self) -> "ModeState":
        for name in ("w1", "w2"):
            value = getattr(self, name)
            if np.any(~(value > 0)):
                bad = float(np.ravel(value)[np.argmax(np.ravel(~(value > 0)))])
                raise DomainError(f"effective frequency {name} must be positive, got {bad}",
                                  parameter=name, value=bad)
        return self

    def at(self, index: int) -> "ModeState":
        """Scalar state at one time sample."""
        def pick(value):
            return float(value) if value.ndim == 0 else float(value[index])

        return ModeState(
            w1=pick(self.w1), w2=pick(self.w2), r1=pick(self.r1), r2=pick(self.r2),
            alpha=self.alpha, tau1=pick(self.tau1), tau2=pick(self.tau2),
            omega1_0=self.omega1_0, omega2_0=self.omega2_0,
        )
