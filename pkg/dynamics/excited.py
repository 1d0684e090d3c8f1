#!/usr/bin/env python3
"""
Ground / First-Excited Sector
(0,1) 态的约化密度系数、混合度比 r(t) 与不确定度 Γ(t)
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from dynamics.gaussian import ReducedGaussian, reduced_A
from dynamics.state import ModeState
from dynamics.wigner import MarginalWigner, wigner_marginal

@dataclass(frozen=True, eq=False)
class ExcitedCoefficients:
    """
    ρ₍₀,₁₎(x, x′) = 2ω′₂ ρ₍₀,₀₎(x, x′)[cos²α/(2D) + F₁x² + F₁*x′² + F₂xx′]

    F₁ is kept as explicit real and imaginary parts. r, h and gamma are
    filled in by excited_coefficients.
    """

    F1_real: np.ndarray
    F1_imag: np.ndarray
    F2: np.ndarray
    omega2_prime: np.ndarray
    alpha: float
    r: Optional[np.ndarray] = None
    h: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = None
    gamma: Optional[np.ndarray] = None

    @property
    def F1(self):
        return (self.F1_real + 1j * self.F1_imag)[()]

def excited_F(w1, w2, r1, r2, alpha) -> Tuple[complex, np.ndarray]:
    """(F₁, F₂)"""
    state = ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha).require_positive()
    f1_re, f1_im, f2 = _f_parts(state)
    return np.asarray(f1_re + 1j * f1_im)[()], np.asarray(f2)[()]

def _f_parts(state: ModeState):
    w1, w2 = state.w1, state.w2
    c2, s2 = state.c2, state.s2
    D = state.D
    dw = w1 - w2
    dr = state.r1 - state.r2
    a3 = s2 * c2 * (dw ** 2 + dr ** 2) / (4.0 * D)

    scale = s2 * c2 / (4.0 * D ** 2)
    f1_re = scale * (dw * (w1 * (1.0 + s2) + w2 * c2) - c2 * dr ** 2)
    f1_im = scale * (-2.0 * w1 * dr)
    f2 = (2.0 * a3 * c2 + w1 * s2) / D
    return f1_re, f1_im, f2

def mixedness_ratio(coeffs: ExcitedCoefficients, g: ReducedGaussian):
    """r = Tr[ρ₍₀,₁₎²] / Tr[ρ₍₀,₀₎²], evaluated in real arithmetic."""
    a1, a3 = g.a1, g.a3
    c2 = np.cos(coeffs.alpha) ** 2
    D = g.D
    f_sum = 2.0 * coeffs.F1_real
    f_abs2 = coeffs.F1_real ** 2 + coeffs.F1_imag ** 2
    f2 = coeffs.F2
    norm = a1 * (a1 + 2.0 * a3)

    quartic = (a1 ** 2 * (f_sum ** 2 + 4.0 * f_abs2 + f2 ** 2)
               + a3 ** 2 * (3.0 * f_sum ** 2 + 3.0 * f2 * (2.0 * f_sum + f2))
               + 2.0 * a1 * a3 * (f_sum ** 2 + 4.0 * f_abs2 + f2 * (3.0 * f_sum + f2)))
    value = 4.0 * coeffs.omega2_prime ** 2 * (
        c2 ** 2 / (4.0 * D ** 2)
        + c2 / (4.0 * D * norm) * (f_sum * a1 + (f_sum + f2) * a3)
        + quartic / (16.0 * norm ** 2)
    )
    return np.asarray(value)[()]

def wigner01_h(w1, w2, r1, r2, alpha) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    (h₀, h₁, h₂, h₃) with W₍₀,₁₎ = W₍₀,₀₎ (h₀ + h₁x² + h₂p² + 2h₃xp)
    """
    state = ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha).require_positive()
    w1, w2, r1, r2 = state.w1, state.w2, state.r1, state.r2
    c2, s2 = state.c2, state.s2
    D, D_tilde, eta = state.D, state.D_tilde, state.eta_bar
    dr = r1 - r2

    first = w1 * D_tilde + c2 * r1 * dr
    second = w1 * r2 * s2 + w2 * r1 * c2
    scale = 2.0 * w2 * s2 / eta ** 2

    h0 = w1 * w2 / eta * np.cos(2.0 * state.alpha)
    h1 = scale * (first ** 2 + second ** 2)
    h2 = scale * (D ** 2 + c2 ** 2 * dr ** 2)
    h3 = scale * (c2 * dr * first + D * second)
    return tuple(np.asarray(h)[()] for h in (h0, h1, h2, h3))

def uncertainty_gamma(h, marginal: MarginalWigner):
    """Γ = 4⟨x₁²⟩⟨p₁²⟩ of the (0,1) marginal."""
    h0, h1, h2, h3 = h
    a1, a2, a3 = marginal.alpha1, marginal.alpha2, marginal.alpha3
    inv_d = marginal.eta_bar / marginal.omega_product
    position = h0 * a2 + h2 / 2.0 + 1.5 * inv_d * (h1 * a2 ** 2 + h2 * a3 ** 2 + 2.0 * h3 * a2 * a3)
    momentum = h0 * a1 + h1 / 2.0 + 1.5 * inv_d * (h2 * a1 ** 2 + h1 * a3 ** 2 + 2.0 * h3 * a1 * a3)
    return np.asarray(inv_d ** 2 * position * momentum)[()]

def excited_coefficients(state: ModeState) -> ExcitedCoefficients:
    """F₁, F₂, r, h and Γ for every sample of state."""
    state.require_positive()
    f1_re, f1_im, f2 = _f_parts(state)
    coeffs = ExcitedCoefficients(
        F1_real=np.asarray(f1_re)[()], F1_imag=np.asarray(f1_im)[()], F2=np.asarray(f2)[()],
        omega2_prime=np.asarray(state.w2)[()], alpha=state.alpha,
    )
    g = reduced_A(*state.args)
    h = wigner01_h(*state.args)
    gamma = uncertainty_gamma(h, wigner_marginal(*state.args))
    return replace(coeffs, r=mixedness_ratio(coeffs, g), h=h, gamma=gamma)

if __name__ == "__main__":
    print(f"F(1,4,0,0,pi/4) = {excited_F(1.0, 4.0, 0.0, 0.0, np.pi / 4)}")
    print(f"F(1,1,1,0,pi/4) = {excited_F(1.0, 1.0, 1.0, 0.0, np.pi / 4)}")
    coeffs = excited_coefficients(ModeState.static(1.0, 2.0, np.pi / 8))
    print(f"r={coeffs.r:.6f} Gamma={coeffs.gamma:.6f}")
