#!/usr/bin/env python3
"""
Entanglement Measures
谱分解、Rényi/von Neumann熵与Schmidt分解
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from core.exceptions import TruncationError, ValidationError
from dynamics.gaussian import Party, ReducedGaussian, reduced_A, reduced_B
from dynamics.hermite import hermite_functions
from dynamics.state import ModeState

# Schmidt级数尾项上限 ξ^N
SCHMIDT_TAIL_TOL = 1e-10
MAX_SCHMIDT_TERMS = 4000

@dataclass(frozen=True, eq=False)
class SpectralData:
    """ρ = Σ pₙ fₙ fₙ*, pₙ = (1−ξ)ξⁿ"""

    epsilon: np.ndarray
    xi: np.ndarray
    party: Party = Party.A

@dataclass(frozen=True, eq=False)
class SchmidtData:
    """
    Schmidt angles of ψ₀,₀.

    theta is the principal value of atan(Z₂/Z₁); parity (±1) records the
    half-turn that the principal branch drops, sign(sin2α·Z₁).
    """

    kappa: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    parity: np.ndarray

def spectral(g: ReducedGaussian) -> SpectralData:
    """ε = 2√(a₁(a₁+2a₃)), ξ = a₃/(a₁+a₃+ε/2)"""
    epsilon = 2.0 * np.sqrt(g.a1 * (g.a1 + 2.0 * g.a3))
    xi = g.a3 / (g.a1 + g.a3 + 0.5 * epsilon)
    return SpectralData(epsilon=np.asarray(epsilon)[()], xi=np.asarray(xi)[()], party=g.party)

def eigenvalue(n: int, s: SpectralData):
    if n < 0:
        raise ValidationError(f"eigenvalue index must be non-negative, got {n}", field="n", value=n)
    return ((1.0 - s.xi) * np.power(s.xi, n))[()]

def eigenvalues(s: SpectralData, count: int) -> np.ndarray:
    """p₀..p_{count−1} along the last axis."""
    xi = np.asarray(s.xi, dtype=float)[..., None]
    return (1.0 - xi) * np.power(xi, np.arange(count))

def renyi_entropy(s: SpectralData, n: int):
    """Sₙ = [n ln(1−ξ) − ln(1−ξⁿ)]/(1−n), integer n ≥ 2."""
    if int(n) != n or n < 2:
        raise ValidationError(f"Renyi order must be an integer >= 2, got {n}", field="renyi_orders", value=n)
    return renyi_continuation(s, float(n))

def renyi_continuation(s: SpectralData, order: float):
    """The Rényi formula at a real order > 0, order ≠ 1."""
    if order <= 0 or order == 1:
        raise ValidationError(f"Renyi order must be positive and != 1, got {order}", field="order", value=order)
    xi = np.asarray(s.xi, dtype=float)
    value = (order * np.log1p(-xi) - np.log1p(-np.power(xi, order))) / (1.0 - order)
    return value[()]

def von_neumann_entropy(s: SpectralData):
    xi = np.asarray(s.xi, dtype=float)
    return (-np.log1p(-xi) - xlogy(xi, xi) / (1.0 - xi))[()]

def min_entropy(s: SpectralData):
    """S∞ = −ln(1−ξ)"""
    return (-np.log1p(-np.asarray(s.xi, dtype=float)))[()]

def trace_rho_squared(s: SpectralData):
    """Σ pₙ² = (1−ξ)/(1+ξ)"""
    xi = np.asarray(s.xi, dtype=float)
    return ((1.0 - xi) / (1.0 + xi))[()]

def eigenfunction(n: int, x, s: SpectralData, a2: float) -> np.ndarray:
    """fₙ(x) = ε^{1/4} hₙ(√ε x) e^{i a₂ x²}"""
    x = np.asarray(x, dtype=float)
    epsilon = float(s.epsilon)
    return epsilon ** 0.25 * hermite_functions(n, np.sqrt(epsilon) * x)[n] * np.exp(1j * a2 * x * x)

def reconstruct_density(s: SpectralData, a2: float, x, xp, terms: int) -> np.ndarray:
    """Partial Mehler sum Σ_{n<terms} pₙ fₙ(x) fₙ*(x′) on the x × x′ grid."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    epsilon = float(s.epsilon)
    root = np.sqrt(epsilon)
    left = epsilon ** 0.25 * hermite_functions(terms - 1, root * x) * np.exp(1j * a2 * x * x)
    right = epsilon ** 0.25 * hermite_functions(terms - 1, root * xp) * np.exp(1j * a2 * xp * xp)
    weights = eigenvalues(s, terms)
    return (left.T * weights) @ np.conj(right)

def schmidt_data(w1, w2, r1, r2, alpha) -> SchmidtData:
    state = ModeState(w1=w1, w2=w2, r1=r1, r2=r2, alpha=alpha).require_positive()
    c2, s2 = state.c2, state.s2
    dw = state.w1 - state.w2
    dr = state.r1 - state.r2
    kappa = np.sqrt(1.0 + s2 * c2 * (dw ** 2 + dr ** 2) / (state.w1 * state.w2))
    z1 = dw
    z2 = dr / kappa

    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(z1 == 0, np.sign(z2) * (np.pi / 2), np.arctan(z2 / z1))
        denom = z1 ** 2 + kappa * z2 ** 2
        phi = np.where(denom == 0, 0.0, np.arctan((kappa - 1.0) * z1 * z2 / denom))

    sin2a = math.sin(2.0 * state.alpha)
    parity = np.sign(sin2a * z1)
    parity = np.where(parity == 0, math.copysign(1.0, sin2a) if sin2a != 0 else 1.0, parity)

    return SchmidtData(
        kappa=kappa[()], z1=z1[()], z2=np.asarray(z2)[()],
        theta=np.asarray(theta)[()], phi=np.asarray(phi)[()], parity=np.asarray(parity)[()],
    )

def schmidt_terms(xi: float, tol: float = SCHMIDT_TAIL_TOL) -> int:
    """Smallest N with ξᴺ < tol."""
    if xi <= 0:
        return 1
    return max(1, int(math.ceil(math.log(tol) / math.log(xi))) + 1)

def schmidt_reconstruct(x1, x2, state: ModeState, terms: Optional[int] = None) -> np.ndarray:
    """
    ψ₀,₀(x₁, x₂) rebuilt from its Schmidt series

    Σₙ √pₙ [fₙ(x₁) e^{−inθ/2} e^{−i(E₀τ₁−φ/4)}] [parityⁿ f̃ₙ(x₂) e^{−inθ/2} e^{−i(E₀τ₂−φ/4)}]

    Args:
        x1, x2: broadcastable coordinates
        state: scalar ModeState at one time
        terms: number of retained terms; chosen from ξ when omitted

    Raises:
        TruncationError: when the dropped tail ξᴺ is not below 1e-10
    """
    w1, w2, r1, r2, alpha = state.args
    g_a = reduced_A(w1, w2, r1, r2, alpha)
    g_b = reduced_B(w1, w2, r1, r2, alpha)
    s_a, s_b = spectral(g_a), spectral(g_b)
    schmidt = schmidt_data(w1, w2, r1, r2, alpha)

    xi = float(s_a.xi)
    if terms is None:
        terms = schmidt_terms(xi)
        if terms > MAX_SCHMIDT_TERMS:
            raise TruncationError(xi=xi, terms=MAX_SCHMIDT_TERMS, tail_bound=xi ** MAX_SCHMIDT_TERMS)
    tail = xi ** terms if xi > 0 else 0.0
    if tail >= SCHMIDT_TAIL_TOL:
        raise TruncationError(xi=xi, terms=terms, tail_bound=tail)

    x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    eps_a, eps_b = float(s_a.epsilon), float(s_b.epsilon)
    h_a = hermite_functions(terms - 1, np.sqrt(eps_a) * x1)
    h_b = hermite_functions(terms - 1, np.sqrt(eps_b) * x2)

    n = np.arange(terms).reshape((terms,) + (1,) * x1.ndim)
    weights = np.sqrt(eigenvalues(s_a, terms)).reshape(n.shape)
    phase = np.exp(-1j * n * float(schmidt.theta)) * float(schmidt.parity) ** n
    series = np.sum(weights * phase * h_a * h_b, axis=0)

    envelope = ((eps_a * eps_b) ** 0.25
                * np.exp(1j * (float(g_a.a2) * x1 ** 2 + float(g_b.a2) * x2 ** 2)))
    global_phase = np.exp(-1j * (0.5 * state.omega1_0 * float(state.tau1)
                                 + 0.5 * state.omega2_0 * float(state.tau2)
                                 - 0.5 * float(schmidt.phi)))
    return (series * envelope * global_phase)[()]

if __name__ == "__main__":
    g = reduced_A(1.0, 4.0, 0.0, 0.0, np.pi / 4)
    s = spectral(g)
    print(f"epsilon={s.epsilon:.6f} xi={s.xi:.6f}")
    print(f"S_von={von_neumann_entropy(s):.6f} S_2={renyi_entropy(s, 2):.6f} S_inf={min_entropy(s):.6f}")
    state = ModeState.static(1.0, 2.0, np.pi / 4)
    print(f"psi_schmidt(0.3, -0.7) = {schmidt_reconstruct(0.3, -0.7, state)}")
