"""Per-level noisy initiator matrices and the per-vertex bias they induce."""

from __future__ import annotations

import math

import numpy as np

from .params import DerivedParams, GeneratorMatrix, check_noise


def perturb(matrix: GeneratorMatrix, mu):
    """Entries of the noisy matrix for noise value(s) ``mu``.

    Off-diagonals move by +mu; the diagonal gives up 2*mu split in
    proportion to t1 and t4, so the four entries still sum to 1.
    Returns an array of shape ``mu.shape + (4,)``.
    """
    t1, t2, t3, t4 = matrix.entries
    mu = np.asarray(mu, dtype=float)
    diag = t1 + t4
    return np.stack(
        [t1 - 2.0 * mu * t1 / diag, t2 + mu, t3 + mu, t4 - 2.0 * mu * t4 / diag],
        axis=-1,
    )


def draw_noise(levels: int, amplitude: float, rng: np.random.Generator) -> np.ndarray:
    """One uniform perturbation in [-amplitude, amplitude] per level."""
    return rng.uniform(-amplitude, amplitude, size=levels)


def noisy_matrices(
    matrix: GeneratorMatrix, levels: int, amplitude: float, rng: np.random.Generator
) -> list[GeneratorMatrix]:
    check_noise(matrix, amplitude)
    mu = draw_noise(levels, amplitude, rng)
    return matrices_from_noise(matrix, mu)


def matrices_from_noise(matrix: GeneratorMatrix, mu) -> list[GeneratorMatrix]:
    return [GeneratorMatrix(*map(float, row)) for row in perturb(matrix, mu)]


def level_ratios(matrix: GeneratorMatrix, level_matrices) -> tuple[np.ndarray, np.ndarray]:
    """(alpha_i, beta_i): each level's row-0 and row-1 mass relative to T's."""
    sigma = matrix.sigma
    sig_i = np.array([lm.t1 + lm.t2 - 0.5 for lm in level_matrices])
    return (0.5 + sig_i) / (0.5 + sigma), (0.5 - sig_i) / (0.5 - sigma)


def vertex_bias(matrix: GeneratorMatrix, level_matrices, vertex: int) -> float:
    """rho_v: product of alpha_i over v's zero bits and beta_i over its one bits.

    Level i (0-based) decides bit ``levels - 1 - i`` of the id, matching the
    generator's most-significant-first assembly.
    """
    levels = len(level_matrices)
    if not 0 <= vertex < (1 << levels):
        raise ValueError(f"vertex {vertex} out of range for {levels} levels")
    alpha, beta = level_ratios(matrix, level_matrices)
    bits = [(vertex >> (levels - 1 - i)) & 1 for i in range(levels)]
    log_rho = math.fsum(math.log(beta[i]) if z else math.log(alpha[i]) for i, z in enumerate(bits))
    return math.exp(log_rho)


def vertex_lambda(dp: DerivedParams, matrix: GeneratorMatrix, level_matrices, vertex: int) -> float:
    return dp.lam * vertex_bias(matrix, level_matrices, vertex)
