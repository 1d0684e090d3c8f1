#!/usr/bin/env python3
"""
Numerical Oracle
网格上的波函数、数值偏迹与本征分解, 用于独立校验全部解析结果
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import eigvalsh

from config.settings import settings
from core.exceptions import GridInadequacyError, ValidationError
from dynamics.ermakov import level_energy
from dynamics.gaussian import Party
from dynamics.hermite import hermite_functions
from dynamics.state import ModeState
from dynamics.wigner import wigner_marginal, wigner_marginal_B

MAX_ORACLE_LEVEL = 8
NORM_TOLERANCE = 1e-4
EIGEN_CLIP = 1e-12

@dataclass(frozen=True)
class GridSpec:
    """Symmetric grid [−L, L] with an odd number of points."""

    half_width: float
    points: int

    def __post_init__(self):
        if self.points % 2 == 0 or self.points < 3:
            raise ValidationError(f"grid point count must be odd and >= 3, got {self.points}",
                                  field="points", value=self.points)
        if not self.half_width > 0:
            raise ValidationError(f"grid half-width must be positive, got {self.half_width}",
                                  field="half_width", value=self.half_width)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points)

    def refined(self) -> "GridSpec":
        """Same window, half the spacing."""
        return GridSpec(self.half_width, 2 * self.points - 1)

@dataclass(frozen=True, eq=False)
class DiscretizedDensity:
    """N×N samples ρ(xᵢ, xⱼ) on a uniform axis."""

    matrix: np.ndarray
    spacing: float
    axis: np.ndarray
    party: Party = Party.A

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)) * self.spacing)

    @property
    def hermiticity(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

def _spreads(state: ModeState) -> Tuple[float, float]:
    """Largest position and momentum standard deviations over both oscillators."""
    sigma_x, sigma_p = 0.0, 0.0
    for marginal in (wigner_marginal(*state.args), wigner_marginal_B(*state.args)):
        x2, p2, _ = marginal.covariance()
        sigma_x = max(sigma_x, math.sqrt(float(x2)))
        sigma_p = max(sigma_p, math.sqrt(float(p2)))
    return sigma_x, sigma_p

def grid_for_state(state: ModeState, n: int = 0, m: int = 0, points: Optional[int] = None) -> GridSpec:
    """
    选择覆盖态的网格

    Half-width is width_factor times the largest position spread; the spacing
    must resolve nyquist_factor times the largest momentum spread. Excited
    levels widen both by √(2·max(n, m) + 1). An explicit point count is used
    as given (coarse convergence runs); otherwise the default count grows
    until the Nyquist condition holds.

    Raises:
        GridInadequacyError: when more than max_grid_points would be needed
    """
    cfg = settings.oracle
    sigma_x, sigma_p = _spreads(state)
    widen = math.sqrt(2 * max(n, m) + 1)
    half_width = cfg.width_factor * sigma_x * widen

    if points is not None:
        if points < cfg.min_grid_points:
            raise ValidationError(f"grid needs at least {cfg.min_grid_points} points, got {points}",
                                  field="points", value=points)
        return GridSpec(half_width, points)

    max_spacing = math.pi / (cfg.nyquist_factor * sigma_p * widen)
    needed = int(math.ceil(2.0 * half_width / max_spacing)) + 1
    needed += 1 - needed % 2
    count = max(cfg.grid_points, cfg.min_grid_points, needed)
    if count > cfg.max_grid_points:
        raise GridInadequacyError(
            f"state needs {count} grid points per axis (limit {cfg.max_grid_points})",
            details={"needed": count, "half_width": half_width, "sigma_p": sigma_p},
        )
    return GridSpec(half_width, count)

def _mode_factor(level: int, y, w, r, omega0, tau):
    """ψₙ(y) = ω′^{1/4} hₙ(√ω′ y) e^{iry²/2} e^{−i(n+½)ω̃(0)τ}"""
    return (w ** 0.25 * hermite_functions(level, math.sqrt(w) * y)[level]
            * np.exp(0.5j * r * y * y)
            * np.exp(-1j * level_energy(level, omega0) * tau))

def eval_psi(n: int, m: int, x1, x2, state: ModeState) -> np.ndarray:
    """
    ψₙ,ₘ(x₁, x₂) = ψₙ(y₁) ψₘ(y₂) with y₁ = x₁cosα − x₂sinα, y₂ = x₁sinα + x₂cosα
    """
    if not (0 <= n <= MAX_ORACLE_LEVEL and 0 <= m <= MAX_ORACLE_LEVEL):
        raise ValidationError(f"oracle levels must lie in [0, {MAX_ORACLE_LEVEL}], got ({n}, {m})",
                              field="levels", value=[n, m])
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    c, s = math.cos(state.alpha), math.sin(state.alpha)
    y1 = x1 * c - x2 * s
    y2 = x1 * s + x2 * c
    first = _mode_factor(n, y1, float(state.w1), float(state.r1), state.omega1_0, float(state.tau1))
    second = _mode_factor(m, y2, float(state.w2), float(state.r2), state.omega2_0, float(state.tau2))
    return (first * second)[()]

def psi_on_grid(n: int, m: int, state: ModeState, grid: GridSpec, check_norm: bool = True) -> np.ndarray:
    """ψ[i, j] = ψₙ,ₘ(xᵢ, xⱼ)"""
    axis = grid.axis()
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    psi = eval_psi(n, m, x1, x2, state)
    if check_norm:
        norm = float(np.sum(np.abs(psi) ** 2) * grid.spacing ** 2)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise GridInadequacyError(
                f"wavefunction norm on grid is {norm:.8f}",
                deviation=abs(norm - 1.0),
                details={"points": grid.points, "half_width": grid.half_width},
            )
    return psi

def partial_trace(psi: np.ndarray, spacing: float, party: Party = Party.A,
                  axis: Optional[np.ndarray] = None) -> DiscretizedDensity:
    """
    ρᴬ = Δ ψψᴴ (x₂ summed), ρᴮ = Δ ψᵀψ* (x₁ summed)

    Raises:
        GridInadequacyError: trace deviates from 1 by more than the oracle trace tolerance
    """
    party = Party(party)
    amplitudes = psi if party == Party.A else psi.T
    rho = amplitudes @ amplitudes.conj().T * spacing
    rho = 0.5 * (rho + rho.conj().T)
    if axis is None:
        half = 0.5 * spacing * (rho.shape[0] - 1)
        axis = np.linspace(-half, half, rho.shape[0])
    density = DiscretizedDensity(matrix=rho, spacing=spacing, axis=axis, party=party)

    deviation = abs(density.trace - 1.0)
    if deviation > settings.oracle.trace_tol:
        raise GridInadequacyError(f"partial trace has trace {density.trace:.8f}", deviation=deviation)
    return density

def grid_spectrum(d: DiscretizedDensity) -> np.ndarray:
    """Eigenvalues of Δ·ρ, descending."""
    return eigvalsh(d.matrix * d.spacing)[::-1]

def grid_entropy(eigs) -> float:
    eigs = np.asarray(eigs, dtype=float)
    kept = eigs[eigs > EIGEN_CLIP]
    return float(-np.sum(kept * np.log(kept)))

def grid_purity(d: DiscretizedDensity) -> float:
    """Tr ρ² = Δ² Σ|ρᵢⱼ|²"""
    return float(np.sum(np.abs(d.matrix) ** 2) * d.spacing ** 2)

def grid_moments(psi: np.ndarray, grid: GridSpec, party: Party = Party.A) -> Tuple[float, float]:
    """
    (⟨x²⟩, ⟨p²⟩) of one oscillator

    ⟨p²⟩ = ∫|∂ψ/∂x|² with the derivative taken spectrally along that
    oscillator's axis.
    """
    axis_index = 0 if Party(party) == Party.A else 1
    x = grid.axis()
    dx = grid.spacing
    shape = [1, 1]
    shape[axis_index] = -1
    weight = np.abs(psi) ** 2

    x2 = float(np.sum(weight * x.reshape(shape) ** 2) * dx * dx)

    k = 2.0 * np.pi * np.fft.fftfreq(grid.points, d=dx)
    derivative = np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(psi, axis=axis_index), axis=axis_index)
    p2 = float(np.sum(np.abs(derivative) ** 2) * dx * dx)
    return x2, p2

def grid_wigner(d: DiscretizedDensity, p) -> np.ndarray:
    """
    W(xᵢ, p) = (Δ/π) Σₘ e^{−2ipmΔ} ρ[i−m, i+m] on the density axis

    Same sign convention as the closed forms. Returns shape (N, len(p)).
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    rho = d.matrix
    size = rho.shape[0]
    index = np.arange(size)
    wigner = np.zeros((size, p.size), dtype=complex)
    for shift in range(-(size - 1) // 2, (size - 1) // 2 + 1):
        rows = index[abs(shift): size - abs(shift)]
        values = np.zeros(size, dtype=complex)
        values[rows] = rho[rows - shift, rows + shift]
        wigner += values[:, None] * np.exp(-2j * p[None, :] * shift * d.spacing)
    return np.real(wigner) * d.spacing / np.pi

if __name__ == "__main__":
    state = ModeState.static(1.0, 4.0, np.pi / 4)
    grid = grid_for_state(state)
    psi = psi_on_grid(0, 0, state, grid)
    rho = partial_trace(psi, grid.spacing, axis=grid.axis())
    eigs = grid_spectrum(rho)
    print(f"grid: {grid.points} points, L={grid.half_width:.3f}")
    print(f"purity={grid_purity(rho):.8f} entropy={grid_entropy(eigs):.8f} top={eigs[:3]}")
    print(f"moments={grid_moments(psi, grid)}")
