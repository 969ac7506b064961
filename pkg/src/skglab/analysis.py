"""Empirical measurements on generated edge lists."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import SelfLoopPresent, VertexOutOfRange
from .generate import EdgeList


class Orientation(str, enum.Enum):
    OUT = "out"
    IN = "in"
    UNDIRECTED = "undirected"


class CoreKind(str, enum.Enum):
    UNDIRECTED = "undirected"
    OUT = "out"


def _check_range(edges: EdgeList, n: int) -> None:
    if len(edges) == 0:
        return
    lo = min(edges.src.min(), edges.dst.min())
    hi = max(edges.src.max(), edges.dst.max())
    if lo < 0 or hi >= n:
        raise VertexOutOfRange(f"vertex ids must lie in [0, {n}), found range [{lo}, {hi}]")


@dataclass
class DegreeHistogram:
    """``counts[d]`` is the number of vertices of degree d (d = 0 included).

    Counts are floats so averaged histograms share the type.
    """

    orientation: Orientation
    counts: np.ndarray
    n: int

    def __getitem__(self, d: int) -> float:
        return float(self.counts[d]) if 0 <= d < len(self.counts) else 0.0

    def as_dict(self) -> dict[int, float]:
        nz = np.flatnonzero(self.counts)
        return {int(d): float(self.counts[d]) for d in nz}

    @property
    def max_degree(self) -> int:
        nz = np.flatnonzero(self.counts)
        return int(nz[-1]) if len(nz) else 0

    def endpoint_total(self) -> float:
        return float(np.dot(np.arange(len(self.counts)), self.counts))


def vertex_degrees(edges: EdgeList, n: int, orientation) -> np.ndarray:
    orientation = Orientation(orientation)
    _check_range(edges, n)
    if orientation is Orientation.OUT:
        return np.bincount(edges.src, minlength=n)
    if orientation is Orientation.IN:
        return np.bincount(edges.dst, minlength=n)
    return np.bincount(edges.src, minlength=n) + np.bincount(edges.dst, minlength=n)


def degree_histogram(edges: EdgeList, n: int, orientation="out") -> DegreeHistogram:
    """Number of vertices of each degree.

    Undirected orientation counts both endpoints of every stored edge (a
    self-loop adds 2 to its vertex).
    """
    deg = vertex_degrees(edges, n, orientation)
    return DegreeHistogram(Orientation(orientation), np.bincount(deg).astype(float), n)


def mean_histogram(hists) -> DegreeHistogram:
    hists = list(hists)
    width = max(len(h.counts) for h in hists)
    total = np.zeros(width)
    for h in hists:
        total[: len(h.counts)] += h.counts
    return DegreeHistogram(hists[0].orientation, total / len(hists), hists[0].n)


def isolated_count(edges: EdgeList, n: int) -> int:
    """Vertices in [0, n) with no incident edge in either direction."""
    _check_range(edges, n)
    touched = np.zeros(n, dtype=bool)
    touched[edges.src] = True
    touched[edges.dst] = True
    return int(n - np.count_nonzero(touched))


# --- cores ------------------------------------------------------------------


@dataclass
class CoreProfile:
    kind: CoreKind
    core_number: np.ndarray
    sizes: np.ndarray  # sizes[k] = |{v : core_number[v] >= k}|, k = 0..max_core
    max_core: int

    def size(self, k: int) -> int:
        return int(self.sizes[k]) if 0 <= k < len(self.sizes) else 0


def _csr(keys: np.ndarray, values: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=indptr[1:])
    return indptr, values[order].astype(np.int64)


@numba.njit(cache=True)
def _peel(deg, indptr, nbrs):
    # Batagelj-Zaversnik bucket peeling. Removing v lowers deg[u] for each
    # u listed in nbrs[indptr[v]:indptr[v+1]].
    n = deg.shape[0]
    deg = deg.copy()
    md = 0
    for v in range(n):
        if deg[v] > md:
            md = deg[v]
    bin_start = np.zeros(md + 2, dtype=np.int64)
    for v in range(n):
        bin_start[deg[v] + 1] += 1
    for d in range(1, md + 2):
        bin_start[d] += bin_start[d - 1]
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    fill = bin_start.copy()
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1
    for i in range(n):
        v = vert[i]
        for j in range(indptr[v], indptr[v + 1]):
            u = nbrs[j]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_start[du] += 1
                deg[u] = du - 1
    return deg


def core_decomposition(edges: EdgeList, n: int, kind="undirected") -> CoreProfile:
    """Core number of every vertex by repeatedly removing minimum-degree vertices.

    Undirected: input must be a self-loop-free undirected edge list, each
    edge stored once. Out: peel by current out-degree; removing v deletes
    its in-edges, lowering the out-degree of their sources. Self-loops are
    ignored for out-cores; repeated edges count with multiplicity.
    """
    kind = CoreKind(kind)
    _check_range(edges, n)
    src, dst = edges.src, edges.dst
    if kind is CoreKind.UNDIRECTED:
        if np.any(src == dst):
            raise SelfLoopPresent("undirected core decomposition needs a self-loop-free graph")
        keys = np.concatenate([src, dst])
        vals = np.concatenate([dst, src])
        deg = np.bincount(keys, minlength=n).astype(np.int64)
        indptr, nbrs = _csr(keys, vals, n)
    else:
        keep = src != dst
        src, dst = src[keep], dst[keep]
        deg = np.bincount(src, minlength=n).astype(np.int64)
        indptr, nbrs = _csr(dst, src, n)
    core = _peel(deg, indptr, nbrs) if n else np.zeros(0, dtype=np.int64)
    max_core = int(core.max()) if n else 0
    per_k = np.bincount(core, minlength=max_core + 1)
    sizes = np.cumsum(per_k[::-1])[::-1]
    return CoreProfile(kind, core, sizes, max_core)


# --- oscillation ------------------------------------------------------------


def oscillation_score(hist: DegreeHistogram, levels: int, factor: float = 2.0) -> int:
    """Count deep dips in the histogram over degrees [2*levels, sqrt(n)].

    Only degrees with a positive count are considered, in increasing order;
    a dip is a count at most 1/factor of both its neighbours.
    """
    lo, hi = 2 * levels, math.isqrt(hist.n)
    ds = [d for d in range(lo, min(hi, len(hist.counts) - 1) + 1) if hist.counts[d] > 0]
    c = [hist.counts[d] for d in ds]
    return sum(1 for i in range(1, len(c) - 1) if c[i - 1] >= factor * c[i] and c[i + 1] >= factor * c[i])
