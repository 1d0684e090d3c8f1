#!/usr/bin/env python3
"""
Normalized Hermite Functions
归一化Hermite函数(三项递推)
"""

import numpy as np

# 超过该幅值时把因子挪到对数尺度里
_RESCALE_THRESHOLD = 1e100

def hermite_functions(n_max: int, u) -> np.ndarray:
    """
    Hermite functions h_0..h_{n_max} at points u.

    h_n(u) = H_n(u) exp(-u^2/2) / sqrt(2^n n! sqrt(pi)), orthonormal on the
    real line. The Gaussian factor is kept on a separate log scale and the
    recurrence is rescaled whenever it grows past 1e100, so large orders at
    large |u| neither overflow nor flush to zero early.

    Returns an array of shape (n_max + 1,) + np.shape(u).
    """
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")

    u = np.asarray(u, dtype=float)
    out = np.empty((n_max + 1,) + u.shape)

    log_scale = -0.5 * u * u
    prev = np.zeros_like(u)
    curr = np.full_like(u, np.pi ** -0.25)
    out[0] = curr * np.exp(log_scale)

    for n in range(n_max):
        nxt = np.sqrt(2.0 / (n + 1)) * u * curr - np.sqrt(n / (n + 1)) * prev
        prev, curr = curr, nxt

        big = np.abs(curr) > _RESCALE_THRESHOLD
        if np.any(big):
            factor = np.where(big, np.abs(curr), 1.0)
            curr = curr / factor
            prev = prev / factor
            log_scale = log_scale + np.log(factor)

        out[n + 1] = curr * np.exp(log_scale)

    return out

def hermite_function(n: int, u) -> np.ndarray:
    """Single Hermite function h_n(u)."""
    return hermite_functions(n, u)[n]

if __name__ == "__main__":
    grid = np.linspace(-10, 10, 4001)
    funcs = hermite_functions(6, grid)
    gram = funcs @ funcs.T * (grid[1] - grid[0])
    print(f"max |gram - I| = {np.abs(gram - np.eye(7)).max():.2e}")
    print(f"h_500(30) = {hermite_function(500, 30.0):.6e}")
