"""Closed-form predictions for SKG graphs.

Everything works in log space. Probabilities that would underflow are
returned as exact zeros (any exp argument below ``EXP_FLOOR``).

Slices: for even ``levels``, slice ``r`` (``-levels/2 <= r <= levels/2``)
holds the ``C(levels, levels/2 + r)`` vertices whose ids have exactly
``levels/2 + r`` zero bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import AsymmetricMatrix, SliceOutOfRange, TauIsOne
from .params import DerivedParams, GeneratorMatrix, require_even

EXP_FLOOR = -700.0
EXACT_BINOMIAL_MAX_LEVELS = 60


class Flagged(NamedTuple):
    """A value computed outside the regime where its approximation is claimed."""

    value: float
    out_of_regime: bool


def _exp(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(np.maximum(x, EXP_FLOOR))
    return np.where(x < EXP_FLOOR, 0.0, out)


# --- slices -----------------------------------------------------------------


def _check_slice(levels: int, r) -> None:
    half = levels // 2
    r = np.asarray(r)
    if np.any(r < -half) or np.any(r > half):
        raise SliceOutOfRange(f"slice index must lie in [{-half}, {half}], got {r}")


def slice_indices(levels: int) -> np.ndarray:
    require_even(levels)
    half = levels // 2
    return np.arange(-half, half + 1)


def slice_size(levels: int, r: int) -> int:
    require_even(levels)
    _check_slice(levels, r)
    return math.comb(levels, levels // 2 + int(r))


def log_slice_size(levels: int, r):
    """ln C(levels, levels/2 + r), vectorised over ``r``."""
    require_even(levels)
    _check_slice(levels, r)
    k = levels // 2 + np.asarray(r)
    if levels <= EXACT_BINOMIAL_MAX_LEVELS:
        vals = np.vectorize(lambda kk: math.log(math.comb(levels, int(kk))), otypes=[float])(k)
        return vals if vals.ndim else float(vals)
    out = gammaln(levels + 1.0) - gammaln(k + 1.0) - gammaln(levels - k + 1.0)
    return out if np.ndim(out) else float(out)


def log_slice_out_probability(dp: DerivedParams, r):
    levels = dp.levels
    require_even(levels)
    _check_slice(levels, r)
    r = np.asarray(r, dtype=float)
    half = levels / 2
    lo = math.log(0.5 + dp.sigma)
    hi = math.log(0.5 - dp.sigma)
    out = (half + r) * lo + (half - r) * hi
    return out if out.ndim else float(out)


def slice_out_probability(dp: DerivedParams, r):
    """Probability that one insertion produces an out-edge at a given slice-r vertex."""
    out = _exp(log_slice_out_probability(dp, r))
    return out if out.ndim else float(out)


def _require_symmetric(matrix: GeneratorMatrix) -> None:
    if not matrix.is_symmetric:
        raise AsymmetricMatrix(f"requires t2 == t3, got t2={matrix.t2}, t3={matrix.t3}")


def slice_incident_probability(dp: DerivedParams, matrix: GeneratorMatrix, r):
    """Probability that one insertion touches a slice-r vertex (in or out).

    The self-loop overlap term is dropped, so this is exactly twice the
    out-edge probability.
    """
    _require_symmetric(matrix)
    out = 2.0 * np.asarray(slice_out_probability(dp, r))
    return out if out.ndim else float(out)


# --- degree quantities ------------------------------------------------------


@dataclass(frozen=True)
class DegreeIndex:
    d: int
    theta: float
    Gamma: int
    gamma: float
    r_floor: int
    delta_frac: float


def _require_tau(dp: DerivedParams) -> None:
    if dp.tau <= 1.0:
        raise TauIsOne("tau == 1 (sigma == 0): degree indices are undefined, use the Poisson curve")


def degree_index(dp: DerivedParams, d: int) -> DegreeIndex:
    _require_tau(dp)
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    theta = (math.log(d) - dp.log_lam) / dp.log_tau
    r_floor = math.floor(theta)
    delta_frac = theta - r_floor
    # half-integer ties round up
    Gamma = r_floor + 1 if delta_frac >= 0.5 else r_floor
    return DegreeIndex(
        d=d,
        theta=theta,
        Gamma=Gamma,
        gamma=abs(theta - Gamma),
        r_floor=r_floor,
        delta_frac=delta_frac,
    )


def _log_binom_pmf(m: int, log_p, log_q, d):
    # ln C(m, d) + d ln p + (m - d) ln(1 - p)
    d = np.asarray(d, dtype=float)
    log_c = gammaln(m + 1.0) - gammaln(d + 1.0) - gammaln(m - d + 1.0)
    return log_c + d * log_p + (m - d) * log_q


def _log1m_exp(log_p):
    # ln(1 - exp(log_p)) for log_p <= 0, accurate for tiny p
    log_p = np.asarray(log_p, dtype=float)
    return np.where(log_p < -0.693, np.log1p(-np.exp(log_p)), np.log(-np.expm1(log_p)))


def slice_degree_probability_exact(dp: DerivedParams, r: int, d, m: int | None = None):
    """Binomial(m, p_r) pmf at ``d``: chance that a slice-r vertex has out-degree d."""
    m = dp.insertions if m is None else m
    log_p = log_slice_out_probability(dp, r)
    d_arr = np.asarray(d)
    if np.any(d_arr < 0) or np.any(d_arr > m):
        raise ValueError("degree must lie in [0, m]")
    out = _exp(_log_binom_pmf(m, log_p, _log1m_exp(log_p), d_arr))
    return out if out.ndim else float(out)


def slice_degree_probability_approx(dp: DerivedParams, r: int, d: int) -> Flagged:
    """Poisson-style approximation lambda^d tau^(rd) exp(-lambda tau^r) / d!.

    Flagged out of regime when p_r > 1/sqrt(m) or d > sqrt(n).
    """
    log_rate = dp.log_lam + r * math.log(dp.tau)
    log_val = d * log_rate - math.exp(log_rate) - math.lgamma(d + 1.0)
    value = float(_exp(log_val))
    out = slice_out_probability(dp, r) > 1.0 / math.sqrt(dp.insertions) or d > math.sqrt(dp.n)
    return Flagged(value, bool(out))


def expected_degree_count_exact(dp: DerivedParams, d, m: int | None = None):
    """Expected number of vertices with out-degree ``d`` in the multigraph.

    Sum over slices of slice size times the exact binomial pmf.
    """
    m = dp.insertions if m is None else m
    rs = slice_indices(dp.levels)
    log_sizes = log_slice_size(dp.levels, rs)
    log_p = log_slice_out_probability(dp, rs)
    log_q = _log1m_exp(log_p)
    d_arr = np.atleast_1d(np.asarray(d, dtype=float))
    terms = log_sizes[:, None] + _log_binom_pmf(m, log_p[:, None], log_q[:, None], d_arr[None, :])
    out = _exp(logsumexp(terms, axis=0))
    return out if np.ndim(d) else float(out[0])


def expected_degree_count_poisson(dp: DerivedParams, d):
    """n * Poisson(lambda) pmf; the sigma == 0 limit where every slice is alike."""
    d_arr = np.asarray(d, dtype=float)
    out = _exp(math.log(dp.n) + d_arr * dp.log_lam - dp.lam - gammaln(d_arr + 1.0))
    return out if out.ndim else float(out)


def degree_regime(dp: DerivedParams) -> tuple[float, float]:
    """Degree window [(e ln 2) levels, sqrt(n)] where the slice formulas are claimed."""
    return math.e * math.log(2.0) * dp.levels, math.sqrt(dp.n)


def _in_regime(dp: DerivedParams, d: int) -> bool:
    lo, hi = degree_regime(dp)
    return lo <= d <= hi


def _log_comb_term(levels: int, r: int) -> float:
    return math.log(math.comb(levels, levels // 2 + r))


def expected_degree_count_lemma(dp: DerivedParams, d: int) -> Flagged:
    """Two-slice estimate of E[X_d] using the slices on either side of theta_d."""
    require_even(dp.levels)
    idx = degree_index(dp, d)
    half = dp.levels // 2
    flag = not _in_regime(dp, d)
    if idx.r_floor >= half:
        return Flagged(0.0, flag)
    l2 = dp.log_tau**2
    pre = -0.5 * math.log(2.0 * math.pi * d)
    total = 0.0
    for r, frac in ((idx.r_floor, idx.delta_frac), (idx.r_floor + 1, 1.0 - idx.delta_frac)):
        if -half <= r <= half:
            total += float(_exp(pre - d * frac * frac * l2 / 2.0 + _log_comb_term(dp.levels, r)))
    return Flagged(total, flag)


def expected_degree_count_theorem(dp: DerivedParams, d: int) -> Flagged:
    """One-term envelope: exp(-d gamma_d^2 ln^2 tau / 2) C(levels, levels/2 + Gamma_d) / sqrt(d)."""
    require_even(dp.levels)
    idx = degree_index(dp, d)
    half = dp.levels // 2
    flag = not _in_regime(dp, d)
    if idx.Gamma >= half or idx.Gamma < -half:
        return Flagged(0.0, flag)
    log_val = -0.5 * math.log(d) - d * idx.gamma**2 * dp.log_tau**2 / 2.0 + _log_comb_term(dp.levels, idx.Gamma)
    return Flagged(float(_exp(log_val)), flag)


# --- isolated vertices and repeat edges -------------------------------------


def _zero_count_classes(levels: int):
    """Offsets r = k - levels/2 for k = 0..levels zero bits, with ln C(levels, k).

    For odd ``levels`` the offsets are half-integers; the isolated-vertex
    sums below are valid for either parity.
    """
    k = np.arange(levels + 1)
    if levels <= EXACT_BINOMIAL_MAX_LEVELS:
        log_sizes = np.array([math.log(math.comb(levels, int(kk))) for kk in k])
    else:
        log_sizes = gammaln(levels + 1.0) - gammaln(k + 1.0) - gammaln(levels - k + 1.0)
    return k - levels / 2.0, log_sizes


def isolated_expectation(dp: DerivedParams, matrix: GeneratorMatrix) -> float:
    """Expected isolated-vertex count, sum_r C(l, l/2+r) exp(-2 lambda tau^r)."""
    _require_symmetric(matrix)
    rs, log_sizes = _zero_count_classes(dp.levels)
    rate = 2.0 * np.exp(dp.log_lam + rs * math.log(dp.tau))
    return float(np.sum(_exp(log_sizes - rate)))


def isolated_expectation_exact(dp: DerivedParams, matrix: GeneratorMatrix, m: int | None = None) -> float:
    """Expected isolated count with the exact (1 - q_r)^m per vertex, q_r = 2 p_r."""
    _require_symmetric(matrix)
    m = dp.insertions if m is None else m
    rs, log_sizes = _zero_count_classes(dp.levels)
    half = dp.levels / 2.0
    log_p = (half + rs) * math.log(0.5 + dp.sigma) + (half - rs) * math.log(0.5 - dp.sigma)
    q = 2.0 * _exp(log_p)
    return float(np.sum(_exp(log_sizes + m * np.log1p(-q))))


def _cell_classes(levels: int):
    """Exponent tuples (a, b, c, d) with a+b+c+d = levels and their log multiplicities."""
    a, b, c = np.meshgrid(*(np.arange(levels + 1),) * 3, indexing="ij")
    keep = a + b + c <= levels
    a, b, c = a[keep], b[keep], c[keep]
    d = levels - a - b - c
    log_mult = gammaln(levels + 1.0) - gammaln(a + 1.0) - gammaln(b + 1.0) - gammaln(c + 1.0) - gammaln(d + 1.0)
    return a, b, c, d, log_mult


def expected_distinct_edges(matrix: GeneratorMatrix, levels: int, m: int) -> float:
    """Expected number of distinct (source, target) pairs after ``m`` insertions.

    Cells of the 2^l x 2^l probability matrix are grouped by how many times
    each quadrant was chosen; each group contributes
    multiplicity * (1 - (1 - P)^m).
    """
    if m == 0:
        return 0.0
    a, b, c, d, log_mult = _cell_classes(levels)
    lt = np.log(np.asarray(matrix.entries))
    log_cell = a * lt[0] + b * lt[1] + c * lt[2] + d * lt[3]
    cell = np.exp(log_cell)
    # 1 - (1 - P)^m without cancellation; P below 1e-300 is treated as m*P
    log_hit = np.where(cell < 1e-300, np.log(m) + log_cell, np.log(-np.expm1(m * np.log1p(-cell))))
    return float(np.sum(_exp(log_mult + log_hit)))


# --- report -----------------------------------------------------------------


@dataclass
class PredictionReport:
    n: int
    insertions: int
    isolated_expectation: float
    isolated_fraction: float
    distinct_edge_expectation: float
    repeat_fraction: float
    nonisolated_avg_degree: float
    degree_curves: dict[str, dict[int, float]] = field(default_factory=dict)


def degree_curve(dp: DerivedParams, degrees, method: str) -> dict[int, Flagged]:
    """Expected out-degree counts for ``method`` in {exact, lemma, theorem, poisson}."""
    degrees = [int(d) for d in degrees]
    if method == "exact":
        vals = np.atleast_1d(expected_degree_count_exact(dp, np.array(degrees)))
        lo, hi = degree_regime(dp)
        return {d: Flagged(float(v), not (lo <= d <= hi)) for d, v in zip(degrees, vals)}
    if method == "poisson":
        vals = np.atleast_1d(expected_degree_count_poisson(dp, np.array(degrees)))
        return {d: Flagged(float(v), False) for d, v in zip(degrees, vals)}
    if method == "lemma":
        return {d: expected_degree_count_lemma(dp, d) for d in degrees}
    if method == "theorem":
        return {d: expected_degree_count_theorem(dp, d) for d in degrees}
    raise ValueError(f"unknown method {method!r}")


def predict(dp: DerivedParams, matrix: GeneratorMatrix, degrees=(), methods=("exact",)) -> PredictionReport:
    isolated = isolated_expectation(dp, matrix)
    distinct = expected_distinct_edges(matrix, dp.levels, dp.insertions)
    report = PredictionReport(
        n=dp.n,
        insertions=dp.insertions,
        isolated_expectation=isolated,
        isolated_fraction=isolated / dp.n,
        distinct_edge_expectation=distinct,
        repeat_fraction=1.0 - distinct / dp.insertions,
        nonisolated_avg_degree=distinct / (dp.n - isolated),
    )
    for method in methods:
        curve = degree_curve(dp, degrees, method)
        report.degree_curves[method] = {d: f.value for d, f in curve.items()}
    return report
