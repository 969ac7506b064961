"""Multi-instance experiments: averaged histograms, isolated counts, cores."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import theory
from .analysis import core_decomposition, degree_histogram, isolated_count, mean_histogram
from .generate import ChunkPlan, deduplicate, generate, symmetrize_upper, undirect
from .params import SkgParams, derive_params


def instances(p: SkgParams, count: int, plan: ChunkPlan | None = None):
    """Yield ``count`` graphs with seeds p.seed, p.seed + 1, ..."""
    for i in range(count):
        yield generate(replace(p, seed=p.seed + i), plan)


def mean_degree_histogram(p: SkgParams, count: int, simple: bool = True, orientation="out", plan=None):
    hists = []
    for g in instances(p, count, plan):
        if simple:
            g = deduplicate(g)
        hists.append(degree_histogram(g, p.n, orientation))
    return mean_histogram(hists)


def mean_isolated_count(p: SkgParams, count: int, plan=None) -> float:
    return float(np.mean([isolated_count(g, p.n) for g in instances(p, count, plan)]))


def max_core(p: SkgParams, symmetrize: str = "remove-direction", plan=None) -> int:
    g = generate(p, plan)
    und = undirect(g) if symmetrize == "remove-direction" else symmetrize_upper(g)
    return core_decomposition(und, p.n, "undirected").max_core


@dataclass
class ComparisonRow:
    d: int
    empirical: float
    predicted: dict[str, float]


@dataclass
class ComparisonSummary:
    method: str
    compared: int
    max_rel_error: float
    mean_rel_error: float


def compare_degree_distribution(
    p: SkgParams,
    count: int = 25,
    methods=("exact", "lemma", "theorem"),
    simple: bool = True,
    dmin: int = 1,
    dmax: int | None = None,
    min_count: float = 100.0,
    plan=None,
):
    """Averaged empirical out-degree counts next to the predicted curves.

    With sigma == 0 the slice formulas degenerate, so lemma and theorem
    columns fall back to the Poisson curve. The summary covers degrees in
    [(e ln 2) levels, sqrt(n)] whose empirical mean is at least ``min_count``.
    """
    dp = derive_params(p)
    hist = mean_degree_histogram(p, count, simple=simple, plan=plan)
    dmax = hist.max_degree if dmax is None else dmax
    degrees = list(range(max(dmin, 1), dmax + 1))
    curves = {}
    for method in methods:
        use = method
        if dp.tau == 1.0 and method in ("lemma", "theorem"):
            use = "poisson"
        curves[method] = {d: f.value for d, f in theory.degree_curve(dp, degrees, use).items()}
    rows = [ComparisonRow(d, hist[d], {mth: curves[mth][d] for mth in methods}) for d in degrees]
    lo, hi = theory.degree_regime(dp)
    window = [r for r in rows if lo <= r.d <= hi and r.empirical >= min_count]
    summary = []
    for method in methods:
        errs = [abs(r.predicted[method] / r.empirical - 1.0) for r in window]
        summary.append(
            ComparisonSummary(
                method,
                len(errs),
                max(errs) if errs else math.nan,
                float(np.mean(errs)) if errs else math.nan,
            )
        )
    return rows, summary
