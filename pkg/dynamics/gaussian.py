#!/usr/bin/env python3
"""
Reduced Gaussian Density
真空态约化密度矩阵的高斯系数与纯度
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from dynamics.state import ModeState

# a3 在 alpha≈0 附近的相消误差
A3_CLAMP = 1e-14

class Party(str, Enum):
    """子系统"""
    A = "A"
    B = "B"

@dataclass(frozen=True, eq=False)
class ReducedGaussian:
    """
    ρ(x, x′) = √(2a₁/π) exp[−(a₁+a₃−ia₂)x² − (a₁+a₃+ia₂)x′² + 2a₃xx′]

    Party A carries (a₁, a₂, a₃), party B the tilde set. D, D̃ and η̄ are
    shared by both parties.
    """

    party: Party
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    D: np.ndarray
    D_tilde: np.ndarray
    eta_bar: np.ndarray
    omega_product: np.ndarray

    def at(self, index: int) -> "ReducedGaussian":
        def pick(value):
            value = np.asarray(value)
            return float(value) if value.ndim == 0 else float(value[index])

        return ReducedGaussian(
            party=self.party, a1=pick(self.a1), a2=pick(self.a2), a3=pick(self.a3),
            D=pick(self.D), D_tilde=pick(self.D_tilde), eta_bar=pick(self.eta_bar),
            omega_product=pick(self.omega_product),
        )

def _reduced(party: Party, w1, w2, r1, r2, alpha) -> ReducedGaussian:
    state = ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha).require_positive()
    c2, s2 = state.c2, state.s2
    D, D_tilde = state.D, state.D_tilde
    w1, w2, r1, r2 = state.w1, state.w2, state.r1, state.r2

    if party == Party.A:
        denom = D
        a2 = (w1 * r2 * s2 + w2 * r1 * c2) / (2.0 * denom)
    else:
        denom = D_tilde
        a2 = (w1 * r2 * c2 + w2 * r1 * s2) / (2.0 * denom)

    a1 = w1 * w2 / (2.0 * denom)
    a3 = s2 * c2 * ((w1 - w2) ** 2 + (r1 - r2) ** 2) / (4.0 * denom)
    a3 = np.where((a3 < 0) & (a3 > -A3_CLAMP), 0.0, a3)

    return ReducedGaussian(
        party=party, a1=a1[()], a2=a2[()], a3=a3[()],
        D=D[()], D_tilde=D_tilde[()], eta_bar=state.eta_bar[()],
        omega_product=(w1 * w2)[()],
    )

def reduced_A(w1, w2, r1, r2, alpha) -> ReducedGaussian:
    """Reduced density of oscillator 1 (x₂ traced out)."""
    return _reduced(Party.A, w1, w2, r1, r2, alpha)

def reduced_B(w1, w2, r1, r2, alpha) -> ReducedGaussian:
    """Reduced density of oscillator 2 (x₁ traced out)."""
    return _reduced(Party.B, w1, w2, r1, r2, alpha)

def reduced_density(state: ModeState, party: Party = Party.A) -> ReducedGaussian:
    return _reduced(Party(party), *state.args)

def purity(g: ReducedGaussian):
    """Tr ρ² = √(a₁/(a₁+2a₃)) = √(ω′₁ω′₂/η̄)."""
    return np.sqrt(g.a1 / (g.a1 + 2.0 * g.a3))[()]

def density_kernel(g: ReducedGaussian, x, xp) -> np.ndarray:
    """Closed-form ρ(x, x′) on broadcast x, x′ (scalar coefficient set)."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    a1, a2, a3 = float(g.a1), float(g.a2), float(g.a3)
    exponent = (-(a1 + a3 - 1j * a2) * x ** 2
                - (a1 + a3 + 1j * a2) * xp ** 2
                + 2.0 * a3 * x * xp)
    return np.sqrt(2.0 * a1 / np.pi) * np.exp(exponent)

if __name__ == "__main__":
    g = reduced_A(1.0, 4.0, 0.0, 0.0, np.pi / 4)
    print(f"a1={g.a1:.6f} a3={g.a3:.6f} D={g.D:.3f} purity={purity(g):.6f}")
