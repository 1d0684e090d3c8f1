#!/usr/bin/env python3
"""
Ermakov Scale Factors
单模尺度因子 b(t), 相位 τ(t) 与有效频率 ω'(t)
"""

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from config.settings import settings
from core.exceptions import DomainError, IntegrationError, ValidationError
from core.logger import log_solver_run

class FrequencyProfile(ABC):
    """ω̃²(t) for one normal mode; `initial` is ω̃²(0)."""

    initial: float

    @abstractmethod
    def __call__(self, t):
        ...

def level_energy(n: int, omega0: float) -> float:
    """(n + ½) ω̃(0), the phase rate of level n."""
    return (n + 0.5) * omega0

@dataclass(frozen=True)
class QuenchProfile(FrequencyProfile):
    """Piecewise-constant ω̃²: `initial` at t = 0, `final` from t = 0⁺ on."""

    initial: float
    final: float

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.final)[()]

class TabulatedFrequency(FrequencyProfile):
    """Sampled ω̃²(t), cubic-spline interpolated."""

    def __init__(self, t: Sequence[float], values: Sequence[float]):
        self.t = np.asarray(t, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.t.ndim != 1 or self.t.shape != self.values.shape or self.t.size < 2:
            raise ValidationError("frequency table needs matching 1-D arrays with at least 2 samples", field="table")
        if self.t[0] != 0 or np.any(np.diff(self.t) <= 0):
            raise ValidationError("frequency table times must start at 0 and increase strictly", field="table")
        self.initial = float(self.values[0])
        self._spline = CubicSpline(self.t, self.values)

    @property
    def t_max(self) -> float:
        return float(self.t[-1])

    def __call__(self, t):
        return self._spline(t)[()]

class CallableFrequency(FrequencyProfile):
    """User-supplied ω̃²(t) callable."""

    def __init__(self, func: Callable[[float], float]):
        self.func = func
        self.initial = float(func(0.0))

    def __call__(self, t):
        return self.func(t)

@dataclass(frozen=True, eq=False)
class ErmakovTrajectory:
    """Sampled Ermakov solution of one normal mode."""

    mode: int
    t: np.ndarray
    b: np.ndarray
    bdot: np.ndarray
    bddot: np.ndarray
    tau: np.ndarray
    omega0_sq: float
    omega_sq_t: np.ndarray
    method: str = "closed-form"

    def __len__(self) -> int:
        return self.t.size

    @property
    def omega0(self) -> float:
        return float(np.sqrt(self.omega0_sq))

    @property
    def omega_prime(self) -> np.ndarray:
        return self.omega0 / self.b ** 2

    @property
    def rate(self) -> np.ndarray:
        """ḃ/b"""
        return self.bdot / self.b

    def level_energy(self, n: int) -> float:
        return level_energy(n, self.omega0)

    def residual(self) -> np.ndarray:
        """
        b̈ + ω̃²(t) b − ω̃²(0)/b³ at every sample, using the stored b̈.

        On the numeric path b̈ is the ODE right-hand side, so this is zero up
        to rounding; use `difference_residual` for an independent check.
        """
        return self.bddot + self.omega_sq_t * self.b - self.omega0_sq / self.b ** 3

    def difference_residual(self) -> np.ndarray:
        """Same residual with b̈ from second-order differences of ḃ."""
        if self.t.size < 3:
            raise ValidationError("difference residual needs at least 3 samples", field="t_grid")
        bddot = np.gradient(self.bdot, self.t, edge_order=2)
        return bddot + self.omega_sq_t * self.b - self.omega0_sq / self.b ** 3

    def truncate(self, count: int) -> "ErmakovTrajectory":
        return ErmakovTrajectory(
            mode=self.mode, t=self.t[:count], b=self.b[:count], bdot=self.bdot[:count],
            bddot=self.bddot[:count], tau=self.tau[:count], omega0_sq=self.omega0_sq,
            omega_sq_t=self.omega_sq_t[:count], method=self.method,
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.t,
            "b": self.b,
            "bdot": self.bdot,
            "tau": self.tau,
            "omega_prime": self.omega_prime,
        })

def _require_positive(name: str, value: float, hint: str = None):
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}", parameter=name, value=value, hint=hint)

def _from_square(u, du, d2u):
    """b = √u with analytic ḃ, b̈."""
    b = np.sqrt(u)
    bdot = du / (2.0 * b)
    bddot = d2u / (2.0 * b) - du * du / (4.0 * b ** 3)
    return b, bdot, bddot

def _quench_parts(omega_i: float, omega_f: float, t):
    x = omega_f * np.asarray(t, dtype=float)
    k_sq = (omega_i / omega_f) ** 2
    u = np.cos(x) ** 2 + k_sq * np.sin(x) ** 2
    du = omega_f * (k_sq - 1.0) * np.sin(2.0 * x)
    d2u = 2.0 * omega_f ** 2 * (k_sq - 1.0) * np.cos(2.0 * x)

    # atan2 branch followed continuously across half periods
    turns = np.floor(x / np.pi + 0.5)
    reduced = x - turns * np.pi
    tau = (np.arctan2((omega_i / omega_f) * np.sin(reduced), np.cos(reduced)) + turns * np.pi) / omega_i
    return u, du, d2u, tau

def _free_parts(omega_i: float, t):
    t = np.asarray(t, dtype=float)
    u = 1.0 + omega_i ** 2 * t ** 2
    du = 2.0 * omega_i ** 2 * t
    d2u = np.full_like(t, 2.0 * omega_i ** 2)
    tau = np.arctan(omega_i * t) / omega_i
    return u, du, d2u, tau

def _inverted_parts(omega_i: float, omega_f: float, t):
    y = omega_f * np.asarray(t, dtype=float)
    k_sq = (omega_i / omega_f) ** 2
    u = np.cosh(y) ** 2 + k_sq * np.sinh(y) ** 2
    du = omega_f * (1.0 + k_sq) * np.sinh(2.0 * y)
    d2u = 2.0 * omega_f ** 2 * (1.0 + k_sq) * np.cosh(2.0 * y)
    tau = np.arctan((omega_i / omega_f) * np.tanh(y)) / omega_i
    return u, du, d2u, tau

def quench_b(omega_i: float, omega_f: float, t):
    """
    Sudden quench ωᵢ → ω_f:
    b² = cos²(ω_f t) + (ωᵢ/ω_f)² sin²(ω_f t), period π/ω_f.
    """
    _require_positive("omega_f", omega_f, hint="use free_b for omega_f = 0 or inverted_b for imaginary omega_f")
    _require_positive("omega_i", omega_i)
    u, _, _, _ = _quench_parts(omega_i, omega_f, t)
    return np.sqrt(u)[()]

def free_b(omega_i: float, t):
    """ω_f = 0: b² = 1 + ωᵢ²t²."""
    _require_positive("omega_i", omega_i)
    u, _, _, _ = _free_parts(omega_i, t)
    return np.sqrt(u)[()]

def inverted_b(omega_i: float, omega_f: float, t):
    """
    Imaginary final frequency i·ω_f:
    b² = cosh²(ω_f t) + (ωᵢ/ω_f)² sinh²(ω_f t).
    """
    _require_positive("omega_f", omega_f)
    _require_positive("omega_i", omega_i)
    u, _, _, _ = _inverted_parts(omega_i, omega_f, t)
    return np.sqrt(u)[()]

def closed_form_parts(initial_sq: float, final_sq: float, t) -> Tuple[np.ndarray, ...]:
    """
    (b, ḃ, b̈, τ, label) for a piecewise-constant ω̃², dispatched on the
    sign of the post-quench ω̃².
    """
    _require_positive("omega_sq(0)", initial_sq)
    omega_i = float(np.sqrt(initial_sq))
    if final_sq > 0:
        u, du, d2u, tau = _quench_parts(omega_i, float(np.sqrt(final_sq)), t)
        label = "closed-form:quench"
    elif final_sq == 0:
        u, du, d2u, tau = _free_parts(omega_i, t)
        label = "closed-form:free"
    else:
        u, du, d2u, tau = _inverted_parts(omega_i, float(np.sqrt(-final_sq)), t)
        label = "closed-form:inverted"
    b, bdot, bddot = _from_square(u, du, d2u)
    return b, bdot, bddot, tau, label

def _as_profile(omega_sq) -> FrequencyProfile:
    if isinstance(omega_sq, FrequencyProfile):
        return omega_sq
    if callable(omega_sq):
        return CallableFrequency(omega_sq)
    if isinstance(omega_sq, (tuple, list)) and len(omega_sq) == 2:
        return TabulatedFrequency(*omega_sq)
    raise ValidationError("omega_sq must be a frequency profile, a callable or a (t, values) table",
                          field="omega_sq")

def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValidationError("t_grid must be a non-empty 1-D array", field="t_grid")
    if t[0] != 0:
        raise ValidationError(f"t_grid must start at 0, got {t[0]}", field="t_grid", value=float(t[0]))
    if np.any(np.diff(t) <= 0):
        raise ValidationError("t_grid must be strictly increasing", field="t_grid")
    return t

def solve_ermakov(
    omega_sq: Union[FrequencyProfile, Callable, Tuple],
    t_grid,
    mode: int = 1,
    method: str = "auto",
) -> ErmakovTrajectory:
    """
    求解 b̈ + ω̃²(t) b = ω̃²(0)/b³, b(0)=1, ḃ(0)=0, 并积分 τ = ∫ ds/b².

    Args:
        omega_sq: ω̃²(t) profile, callable or (t, values) table
        t_grid: sample times, starting at 0 and strictly increasing
        mode: normal-mode label carried on the trajectory
        method: "auto" (closed form when piecewise constant), "closed" or "numeric"

    Returns:
        ErmakovTrajectory on t_grid
    """
    profile = _as_profile(omega_sq)
    t = _check_grid(t_grid)
    _require_positive("omega_sq(0)", profile.initial)

    if method not in ("auto", "closed", "numeric"):
        raise ValidationError(f"unknown Ermakov method '{method}'", field="method", value=method)
    if isinstance(profile, TabulatedFrequency) and t[-1] > profile.t_max:
        raise ValidationError(
            f"t_grid ends at {t[-1]} beyond the frequency table ({profile.t_max})",
            field="t_grid", value=float(t[-1]),
        )

    start = time.perf_counter()
    if isinstance(profile, QuenchProfile) and method != "numeric":
        b, bdot, bddot, tau, label = closed_form_parts(profile.initial, profile.final, t)
        omega_sq_t = np.full_like(t, profile.final)
    elif method == "closed":
        raise ValidationError("closed forms exist only for piecewise-constant frequencies", field="method")
    else:
        try:
            b, bdot, bddot, tau, omega_sq_t = _integrate(profile, t, mode)
        except IntegrationError as e:
            log_solver_run(mode, settings.solver.method, t.size, time.perf_counter() - start,
                           success=False, error=e.message)
            raise
        label = f"numeric:{settings.solver.method}"

    b = np.array(b, dtype=float, copy=True)
    bdot = np.array(bdot, dtype=float, copy=True)
    b[0], bdot[0] = 1.0, 0.0

    log_solver_run(mode, label, t.size, time.perf_counter() - start)
    return ErmakovTrajectory(
        mode=mode, t=t, b=b, bdot=bdot, bddot=np.asarray(bddot, dtype=float),
        tau=np.asarray(tau, dtype=float), omega0_sq=float(profile.initial),
        omega_sq_t=np.asarray(omega_sq_t, dtype=float), method=label,
    )

def _integrate(profile: FrequencyProfile, t: np.ndarray, mode: int):
    omega0_sq = profile.initial

    def rhs(s, y):
        b, bdot, _ = y
        return [bdot, -profile(s) * b + omega0_sq / b ** 3, 1.0 / (b * b)]

    if t.size == 1:
        state = np.array([[1.0], [0.0], [0.0]])
    else:
        sol = solve_ivp(
            rhs, (0.0, float(t[-1])), [1.0, 0.0, 0.0],
            method=settings.solver.method,
            t_eval=t,
            rtol=settings.solver.rtol,
            atol=settings.solver.atol,
            max_step=settings.solver.max_step,
        )
        if sol.status != 0 or sol.y.shape[1] != t.size:
            last_good = float(sol.t[-1]) if sol.t.size else 0.0
            raise IntegrationError(
                f"Ermakov integration failed for mode {mode}: {sol.message}",
                last_good_time=last_good,
                details={"mode": mode, "samples_completed": int(sol.t.size)},
            )
        state = sol.y

    b, bdot, tau = state
    if np.any(b <= 0):
        bad = int(np.argmax(b <= 0))
        raise IntegrationError(
            f"Scale factor of mode {mode} became non-positive",
            last_good_time=float(t[bad - 1]) if bad > 0 else 0.0,
        )
    omega_sq_t = np.vectorize(profile, otypes=[float])(t)
    bddot = -omega_sq_t * b + omega0_sq / b ** 3
    return b, bdot, bddot, tau, omega_sq_t

def ermakov_invariant(trajectory: ErmakovTrajectory) -> np.ndarray:
    """ω̃²(0) − b³(b̈ + ω̃²(t) b), zero along an exact solution."""
    b = trajectory.b
    return trajectory.omega0_sq - b ** 3 * (trajectory.bddot + trajectory.omega_sq_t * b)

def write_trajectory_csv(trajectory: ErmakovTrajectory, path: Union[str, Path]) -> Path:
    """Dump (t, b, ḃ, τ, ω′) for debugging."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trajectory.to_frame().to_csv(path, index=False, float_format="%.17g")
    return path

if __name__ == "__main__":
    grid = np.linspace(0.0, 20.0, 2001)
    closed = solve_ermakov(QuenchProfile(4.0, 0.25), grid)
    numeric = solve_ermakov(QuenchProfile(4.0, 0.25), grid, method="numeric")
    print(f"max |b_closed - b_numeric| = {np.abs(closed.b - numeric.b).max():.2e}")
    print(f"max |tau_closed - tau_numeric| = {np.abs(closed.tau - numeric.tau).max():.2e}")
