import math

import numpy as np
import pytest

from skglab.errors import NoiseTooLarge
from skglab.noise import level_ratios, matrices_from_noise, noisy_matrices, perturb, vertex_bias, vertex_lambda
from skglab.params import GeneratorMatrix, derived_from

G500 = GeneratorMatrix(0.57, 0.19, 0.19, 0.05)


def test_forced_noise_value():
    (m,) = matrices_from_noise(G500, [0.1])
    assert m.entries == pytest.approx((0.38613, 0.29, 0.29, 0.03387), abs=1e-5)
    assert math.fsum(m.entries) == pytest.approx(1.0, abs=1e-12)


def test_zero_amplitude_is_identity():
    mats = noisy_matrices(G500, 16, 0.0, np.random.default_rng(1))
    assert all(m == G500 for m in mats)
    assert vertex_bias(G500, mats, 12345) == 1.0


def test_noisy_matrices_are_valid_and_deterministic():
    a = noisy_matrices(G500, 16, 0.18, np.random.default_rng(7))
    b = noisy_matrices(G500, 16, 0.18, np.random.default_rng(7))
    assert a == b and len(a) == 16
    for m in a:
        assert min(m.entries) > 0
        assert math.fsum(m.entries) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(NoiseTooLarge):
        noisy_matrices(G500, 16, 0.2, np.random.default_rng(7))


def test_noisy_matrices_are_unbiased():
    rng = np.random.default_rng(3)
    b = 0.1
    mu = rng.uniform(-b, b, 100_000)
    entries = perturb(G500, mu)
    se = entries.std(axis=0, ddof=1) / math.sqrt(len(mu))
    assert np.all(np.abs(entries.mean(axis=0) - np.array(G500.entries)) <= 3 * se)


def test_bias_of_all_zeros_vertex_is_product_of_alpha():
    mats = noisy_matrices(G500, 12, 0.1, np.random.default_rng(5))
    alpha, beta = level_ratios(G500, mats)
    assert vertex_bias(G500, mats, 0) == pytest.approx(np.prod(alpha), rel=1e-12)
    assert vertex_bias(G500, mats, (1 << 12) - 1) == pytest.approx(np.prod(beta), rel=1e-12)
    # only the top bit set: level 0 contributes beta, the rest alpha
    assert vertex_bias(G500, mats, 1 << 11) == pytest.approx(beta[0] * np.prod(alpha[1:]), rel=1e-12)


def test_bias_log_mean_is_small():
    levels, c = 16, 0.4
    b = c / math.sqrt(levels)
    rng = np.random.default_rng(11)
    logs = [math.log(vertex_bias(G500, noisy_matrices(G500, levels, b, rng), 0)) for _ in range(10_000)]
    assert abs(np.mean(logs)) <= 0.1


def test_vertex_lambda():
    dp = derived_from(G500, 10, 16 << 10)
    mats = noisy_matrices(G500, 10, 0.05, np.random.default_rng(2))
    assert vertex_lambda(dp, G500, mats, 3) == pytest.approx(dp.lam * vertex_bias(G500, mats, 3))
    with pytest.raises(ValueError):
        vertex_bias(G500, mats, 1 << 10)
