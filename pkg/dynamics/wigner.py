#!/usr/bin/env python3
"""
Wigner Phase-Space Forms
两模Wigner函数系数、边缘分布、二阶矩与不确定度 Ω(t)
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from dynamics.gaussian import Party
from dynamics.state import ModeState

@dataclass(frozen=True, eq=False)
class FullWigner:
    """
    W(x₁,x₂,p₁,p₂) = π⁻² exp[−A₁x₁² − A₂x₂² − B₁p₁² − B₂p₂² + 2A₃x₁x₂
                            + 2B₃p₁p₂ + 2F(x₁p₂ + x₂p₁) + 2D₁₁x₁p₁ + 2D₂₂x₂p₂]
    """

    A1: float
    A2: float
    A3: float
    B1: float
    B2: float
    B3: float
    F: float
    D11: float
    D22: float

    def precision_matrix(self) -> np.ndarray:
        """M with exponent −vᵀMv, v = (x₁, x₂, p₁, p₂); det M = 1."""
        m = np.zeros(np.shape(self.A1) + (4, 4))
        m[..., 0, 0] = self.A1
        m[..., 1, 1] = self.A2
        m[..., 2, 2] = self.B1
        m[..., 3, 3] = self.B2
        for (i, j), value in {
            (0, 1): -self.A3,
            (2, 3): -self.B3,
            (0, 3): -self.F,
            (1, 2): -self.F,
            (0, 2): -self.D11,
            (1, 3): -self.D22,
        }.items():
            m[..., i, j] = value
            m[..., j, i] = value
        return m

    def __call__(self, x1, x2, p1, p2):
        exponent = (-self.A1 * x1 ** 2 - self.A2 * x2 ** 2 - self.B1 * p1 ** 2 - self.B2 * p2 ** 2
                    + 2 * self.A3 * x1 * x2 + 2 * self.B3 * p1 * p2
                    + 2 * self.F * (x1 * p2 + x2 * p1)
                    + 2 * self.D11 * x1 * p1 + 2 * self.D22 * x2 * p2)
        return np.exp(exponent) / np.pi ** 2

@dataclass(frozen=True, eq=False)
class MarginalWigner:
    """W(x, p) = π⁻¹ √(ω′₁ω′₂/η̄) exp(−α₁x² − α₂p² + 2α₃xp) for one party."""

    alpha1: np.ndarray
    alpha2: np.ndarray
    alpha3: np.ndarray
    eta_bar: np.ndarray
    omega_product: np.ndarray
    party: Party = Party.A

    @property
    def determinant(self):
        """α₁α₂ − α₃², equal to ω′₁ω′₂/η̄"""
        return self.alpha1 * self.alpha2 - self.alpha3 ** 2

    @property
    def norm(self):
        return self.omega_product / self.eta_bar

    def covariance(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(⟨x²⟩, ⟨p²⟩, ⟨xp⟩_W)"""
        two_d = 2.0 * self.determinant
        return self.alpha2 / two_d, self.alpha1 / two_d, self.alpha3 / two_d

    def __call__(self, x, p):
        exponent = -self.alpha1 * x ** 2 - self.alpha2 * p ** 2 + 2 * self.alpha3 * x * p
        return np.sqrt(self.norm) * np.exp(exponent) / np.pi

@dataclass(frozen=True, eq=False)
class WignerForm:
    full: Optional[FullWigner] = None
    marginal: Optional[MarginalWigner] = None

def wigner_full(w1, w2, r1, r2, alpha) -> FullWigner:
    state = ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha).require_positive()
    w1, w2, r1, r2 = state.w1, state.w2, state.r1, state.r2
    c2, s2 = state.c2, state.s2
    sc = np.sin(state.alpha) * np.cos(state.alpha)
    prod = w1 * w2

    return FullWigner(
        A1=(prod * state.D_tilde + w2 * r1 ** 2 * c2 + w1 * r2 ** 2 * s2) / prod,
        A2=(prod * state.D + w2 * r1 ** 2 * s2 + w1 * r2 ** 2 * c2) / prod,
        A3=sc * (prod * (w1 - w2) + w2 * r1 ** 2 - w1 * r2 ** 2) / prod,
        B1=state.D / prod,
        B2=state.D_tilde / prod,
        B3=-sc * (w1 - w2) / prod,
        F=sc * (w2 * r1 - w1 * r2) / prod,
        D11=-(w2 * r1 * c2 + w1 * r2 * s2) / prod,
        D22=-(w2 * r1 * s2 + w1 * r2 * c2) / prod,
    )

def _marginal(party: Party, state: ModeState) -> MarginalWigner:
    state.require_positive()
    w1, w2, r1, r2 = state.w1, state.w2, state.r1, state.r2
    c2, s2 = state.c2, state.s2
    if party == Party.B:
        # x₂ sees the rotation with sin² and cos² exchanged
        c2, s2 = s2, c2
    eta = state.eta_bar
    prod = w1 * w2
    D = w1 * s2 + w2 * c2
    D_tilde = w1 * c2 + w2 * s2

    return MarginalWigner(
        alpha1=((D_tilde * prod + w2 * r1 ** 2 * c2 + w1 * r2 ** 2 * s2) / eta)[()],
        alpha2=(D / eta)[()],
        alpha3=(-(w2 * r1 * c2 + w1 * r2 * s2) / eta)[()],
        eta_bar=np.asarray(eta)[()],
        omega_product=np.asarray(prod)[()],
        party=party,
    )

def wigner_marginal(w1, w2, r1, r2, alpha) -> MarginalWigner:
    """Marginal of party A over (x₁, p₁)."""
    return _marginal(Party.A, ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha))

def wigner_marginal_B(w1, w2, r1, r2, alpha) -> MarginalWigner:
    """Marginal of party B over (x₂, p₂)."""
    return _marginal(Party.B, ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha))

def wigner_form(state: ModeState) -> WignerForm:
    return WignerForm(full=wigner_full(*state.args), marginal=_marginal(Party.A, state))

def second_moments(w) -> Tuple[np.ndarray, np.ndarray]:
    """
    ⟨x²⟩ = D/(2ω′₁ω′₂), ⟨p²⟩ = ½[D̃ + r₁²cos²α/ω′₁ + r₂²sin²α/ω′₂] for party A

    Accepts a MarginalWigner or a WignerForm carrying one.
    """
    marginal = w.marginal if isinstance(w, WignerForm) else w
    x2, p2, _ = marginal.covariance()
    return np.asarray(x2)[()], np.asarray(p2)[()]

def uncertainty_omega(w1, w2, r1, r2, alpha) -> Tuple[np.ndarray, np.ndarray]:
    """
    (Ω, Ω̃) = four times (Δx Δp)² for oscillator 1 and oscillator 2

    Ω = (c²/ω′₁ + s²/ω′₂)[(ω′₁ + r₁²/ω′₁)c² + (ω′₂ + r₂²/ω′₂)s²]
    """
    state = ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha).require_positive()
    w1, w2, r1, r2 = state.w1, state.w2, state.r1, state.r2
    c2, s2 = state.c2, state.s2
    k1 = w1 + r1 ** 2 / w1
    k2 = w2 + r2 ** 2 / w2
    omega = (c2 / w1 + s2 / w2) * (k1 * c2 + k2 * s2)
    omega_tilde = (s2 / w1 + c2 / w2) * (k1 * s2 + k2 * c2)
    return np.asarray(omega)[()], np.asarray(omega_tilde)[()]

if __name__ == "__main__":
    m = wigner_marginal(1.0, 4.0, 0.0, 0.0, np.pi / 4)
    print(f"<x^2>, <p^2> = {second_moments(m)}")
    print(f"Omega, Omega~ = {uncertainty_omega(1.0, 4.0, 0.0, 0.0, np.pi / 4)}")
    full = wigner_full(1.0, 4.0, 0.3, -0.2, 0.4)
    print(f"det M = {np.linalg.det(full.precision_matrix()):.12f}")
