"""Deterministic, chunk-parallel SKG / NSKG edge generation.

Random streams come from numpy's counter-based Philox generator keyed by
``SeedSequence(seed, spawn_key=...)``:

* ``(0, chunk)``: the quadrant variates of one chunk, shape (edges, levels)
* ``(1,)``: the per-level noise values, drawn once per graph
* ``(2, chunk)``: per-edge noise values of one chunk

so every (seed, chunk, edge, level) addresses a fixed variate and output
does not depend on how chunks are scheduled across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numba
import numpy as np

from .noise import draw_noise, perturb
from .params import GeneratorMatrix, NoiseMode, SkgParams

DEFAULT_CHUNK_SIZE = 1 << 16

_EDGE_STREAM = 0
_NOISE_STREAM = 1
_EDGE_NOISE_STREAM = 2


@dataclass(frozen=True)
class ChunkPlan:
    chunk_size: int = DEFAULT_CHUNK_SIZE
    threads: int = 1

    def __post_init__(self):
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")

    def chunk_count(self, insertions: int) -> int:
        return math.ceil(insertions / self.chunk_size)

    def bounds(self, insertions: int, chunk: int) -> tuple[int, int]:
        lo = chunk * self.chunk_size
        return lo, min(lo + self.chunk_size, insertions)


@dataclass
class EdgeList:
    src: np.ndarray
    dst: np.ndarray
    levels: int
    insertions: int
    seed: int = 0
    noise_mode: str = NoiseMode.NONE.value
    noise: float = 0.0
    chunk_size: int = DEFAULT_CHUNK_SIZE
    simple: bool = False
    undirected: bool = False

    @property
    def n(self) -> int:
        return 1 << self.levels

    def __len__(self):
        return len(self.src)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    def with_edges(self, src, dst, **changes) -> "EdgeList":
        return replace(self, src=np.asarray(src, dtype=np.int64), dst=np.asarray(dst, dtype=np.int64), **changes)


def edge_list(pairs, levels: int, **meta) -> EdgeList:
    arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    return EdgeList(src=arr[:, 0].copy(), dst=arr[:, 1].copy(), levels=levels, insertions=len(arr), **meta)


def _stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def level_entries(p: SkgParams) -> np.ndarray:
    """(levels, 4) array of the matrices used at each level.

    Per-level noise is drawn here, once per graph. Without per-level noise
    every row is T; the noise stream is still derived but never mixed into
    the edge streams, so b = 0 reproduces the noiseless graph exactly.
    """
    base = np.tile(np.asarray(p.matrix.entries, dtype=float), (p.levels, 1))
    if p.noise.mode is NoiseMode.PER_LEVEL:
        mu = draw_noise(p.levels, p.noise.amplitude, _stream(p.seed, _NOISE_STREAM))
        return perturb(p.matrix, mu)
    return base


def level_matrices(p: SkgParams) -> list[GeneratorMatrix]:
    return [GeneratorMatrix(*map(float, row)) for row in level_entries(p)]


def _thresholds(entries: np.ndarray) -> np.ndarray:
    # cumulative t1, t1+t2, t1+t2+t3 along the last axis
    return np.cumsum(entries[..., :3], axis=-1)


@numba.njit(cache=True, nogil=True)
def _place_kernel(variates, cut, per_edge):
    k, levels = variates.shape
    src = np.zeros(k, dtype=np.int64)
    dst = np.zeros(k, dtype=np.int64)
    for e in range(k):
        s = 0
        t = 0
        for i in range(levels):
            u = variates[e, i]
            if per_edge:
                c0, c1, c2 = cut[e, i, 0], cut[e, i, 1], cut[e, i, 2]
            else:
                c0, c1, c2 = cut[0, i, 0], cut[0, i, 1], cut[0, i, 2]
            q = (u >= c0) + (u >= c1) + (u >= c2)
            s = (s << 1) | (q >> 1)
            t = (t << 1) | (q & 1)
        src[e] = s
        dst[e] = t
    return src, dst


def place(variates: np.ndarray, entries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Turn uniforms of shape (k, levels) into k (source, target) pairs.

    ``entries`` is (levels, 4), or (k, levels, 4) for per-edge matrices.
    Quadrant q = #{cumulative thresholds <= u} picks source bit q >> 1 and
    target bit q & 1. Bits are assembled most significant first.
    """
    variates = np.ascontiguousarray(variates, dtype=np.float64)
    cut = _thresholds(np.asarray(entries, dtype=np.float64))
    per_edge = cut.ndim == 3
    if not per_edge:
        cut = cut[None, :, :]
    return _place_kernel(variates, np.ascontiguousarray(cut), per_edge)


@numba.njit(cache=True, nogil=True)
def _place_per_edge_noise_kernel(variates, mu, t1, t2, t3, t4):
    # same thresholds as place(variates, perturb(T, mu)) without materialising them
    k, levels = variates.shape
    src = np.zeros(k, dtype=np.int64)
    dst = np.zeros(k, dtype=np.int64)
    diag = t1 + t4
    for e in range(k):
        s = 0
        t = 0
        for i in range(levels):
            m = mu[e, i]
            c0 = t1 - 2.0 * m * t1 / diag
            c1 = c0 + (t2 + m)
            c2 = c1 + (t3 + m)
            u = variates[e, i]
            q = (u >= c0) + (u >= c1) + (u >= c2)
            s = (s << 1) | (q >> 1)
            t = (t << 1) | (q & 1)
        src[e] = s
        dst[e] = t
    return src, dst


def insert_edge(stream, level_mats) -> tuple[int, int]:
    """Insert one edge.

    ``stream`` is a numpy Generator or an explicit sequence of one uniform
    variate per level.
    """
    levels = len(level_mats)
    if isinstance(stream, np.random.Generator):
        u = stream.random(levels)
    else:
        u = np.asarray(stream, dtype=float)
        if u.shape != (levels,):
            raise ValueError(f"need {levels} variates, got shape {u.shape}")
    entries = np.array([m.entries for m in level_mats], dtype=float)
    src, dst = place(u[None, :], entries)
    return int(src[0]), int(dst[0])


def _generate_chunk(p: SkgParams, plan: ChunkPlan, entries: np.ndarray, chunk: int):
    lo, hi = plan.bounds(p.insertions, chunk)
    u = _stream(p.seed, _EDGE_STREAM, chunk).random((hi - lo, p.levels))
    if p.noise.mode is NoiseMode.PER_EDGE:
        b = p.noise.amplitude
        mu = _stream(p.seed, _EDGE_NOISE_STREAM, chunk).uniform(-b, b, size=(hi - lo, p.levels))
        return _place_per_edge_noise_kernel(u, mu, *p.matrix.entries)
    return place(u, entries)


def generate(p: SkgParams, plan: ChunkPlan | None = None) -> EdgeList:
    """Generate the SKG multigraph: exactly ``p.insertions`` edges."""
    plan = plan or ChunkPlan()
    entries = level_entries(p)
    count = plan.chunk_count(p.insertions)

    def work(chunk):
        return _generate_chunk(p, plan, entries, chunk)

    if plan.threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=plan.threads) as pool:
            parts = list(pool.map(work, range(count)))
    else:
        parts = [work(c) for c in range(count)]
    if parts:
        src = np.concatenate([s for s, _ in parts])
        dst = np.concatenate([d for _, d in parts])
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    return EdgeList(
        src=src,
        dst=dst,
        levels=p.levels,
        insertions=p.insertions,
        seed=p.seed,
        noise_mode=p.noise.mode.value,
        noise=p.noise.amplitude,
        chunk_size=plan.chunk_size,
    )


# --- multigraph reductions --------------------------------------------------


def _unique_pairs(src: np.ndarray, dst: np.ndarray, levels: int) -> tuple[np.ndarray, np.ndarray]:
    if len(src) == 0:
        return src.copy(), dst.copy()
    if 2 * levels <= 62:
        key = np.unique((src << levels) | dst)
        return key >> levels, key & ((1 << levels) - 1)
    pairs = np.unique(np.stack([src, dst], axis=1), axis=0)
    return pairs[:, 0].copy(), pairs[:, 1].copy()


def deduplicate(edges: EdgeList) -> EdgeList:
    """Collapse repeated (source, target) pairs; output sorted. Self-loops are kept."""
    src, dst = _unique_pairs(edges.src, edges.dst, edges.levels)
    return edges.with_edges(src, dst, simple=True)


def undirect(edges: EdgeList) -> EdgeList:
    """Forget direction: each pair becomes {min, max} once. Self-loops are dropped."""
    keep = edges.src != edges.dst
    s, d = edges.src[keep], edges.dst[keep]
    src, dst = _unique_pairs(np.minimum(s, d), np.maximum(s, d), edges.levels)
    return edges.with_edges(src, dst, simple=True, undirected=True)


def symmetrize_upper(edges: EdgeList) -> EdgeList:
    """Keep the strict upper triangle (source < target) as an undirected graph.

    Mirroring the upper triangle into the lower half is implicit in the
    undirected representation, which stores each edge once as (u, v), u < v.
    """
    keep = edges.src < edges.dst
    src, dst = _unique_pairs(edges.src[keep], edges.dst[keep], edges.levels)
    return edges.with_edges(src, dst, simple=True, undirected=True)
