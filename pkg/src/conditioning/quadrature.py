"""
Phase-Space Integration

Two independent ways of integrating polynomial-times-Gaussian integrands over
the phase plane: a closed form based on Gaussian moments and a fixed-step
tensor grid.
"""

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=4)
def phase_space_grid(step: float, half_width: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Square grid of (δr, δi) points covering [−half_width, half_width]²

    The arrays are cached and read-only.
    """
    count = int(round(2.0 * half_width / step)) + 1
    axis = np.linspace(-half_width, half_width, count)
    delta_r, delta_i = np.meshgrid(axis, axis, indexing='ij')
    delta_r.setflags(write=False)
    delta_i.setflags(write=False)
    return delta_r, delta_i


def grid_integral(values: np.ndarray, step: float) -> float:
    return float(np.sum(values) * step * step)


def gaussian_even_moments(variance: float, order: int) -> list[float]:
    """E[u^(2a)] for a = 0..order of a centred normal variable"""
    return [variance**a * math.prod(range(1, 2 * a, 2)) for a in range(order + 1)]


def laguerre_gaussian_integral(
    constant: float,
    quadratic: np.ndarray,
    precision: np.ndarray,
    n: int,
) -> float:
    """
    Closed form of ∫ (constant + δᵀBδ) · L_n(4|δ|²) · exp(−δᵀPδ) d²δ

    Args:
        constant: Constant polynomial term
        quadratic: Symmetric 2x2 matrix B
        precision: Positive definite 2x2 matrix P
        n: Laguerre degree; n = 0 integrates the bare polynomial

    Returns:
        float: Value of the integral
    """
    covariance = np.linalg.inv(precision) / 2.0
    variances, rotation = np.linalg.eigh(covariance)
    rotated = rotation.T @ quadratic @ rotation
    b11, b22 = rotated[0, 0], rotated[1, 1]

    first = gaussian_even_moments(variances[0], n + 1)
    second = gaussian_even_moments(variances[1], n + 1)

    # |δ|² is rotation invariant and the u1·u2 cross term averages to zero.
    total = 0.0
    for k in range(n + 1):
        weight = math.comb(n, k) * (-4.0) ** k / math.factorial(k)
        inner = 0.0
        for j in range(k + 1):
            inner += math.comb(k, j) * (
                constant * first[j] * second[k - j]
                + b11 * first[j + 1] * second[k - j]
                + b22 * first[j] * second[k - j + 1]
            )
        total += weight * inner

    return float(math.pi / math.sqrt(np.linalg.det(precision)) * total)
