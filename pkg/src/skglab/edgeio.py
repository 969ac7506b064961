"""Edge file formats and the sidecar metadata file.

TSV: one edge per line, ``source<TAB>target\\n``, decimal, 0-indexed.
Binary: magic ``SKG1`` followed by little-endian u64 (source, target) pairs.
Sidecar: ``<edge file>.meta``, flat ``key=value`` lines.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from . import __version__
from .errors import MalformedEdgeFile
from .generate import EdgeList

MAGIC = b"SKG1"
_U64 = np.dtype("<u8")


def sidecar_path(path) -> Path:
    return Path(str(path) + ".meta")


def format_tsv(src: np.ndarray, dst: np.ndarray) -> bytes:
    if len(src) == 0:
        return b""
    buf = io.StringIO()
    np.savetxt(buf, np.stack([src, dst], axis=1), fmt="%d", delimiter="\t")
    return buf.getvalue().encode("ascii")


def write_edges(path, edges: EdgeList, fmt: str = "tsv") -> None:
    if fmt == "tsv":
        payload = format_tsv(edges.src, edges.dst)
    elif fmt == "bin":
        pairs = np.empty(2 * len(edges), dtype=_U64)
        pairs[0::2] = edges.src
        pairs[1::2] = edges.dst
        payload = MAGIC + pairs.tobytes()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    Path(path).write_bytes(payload)


def read_edges(path, levels: int | None = None) -> EdgeList:
    """Read a TSV or binary edge file; binary is recognised by its magic."""
    raw = Path(path).read_bytes()
    meta = read_sidecar(path) if sidecar_path(path).exists() else {}
    if raw[:4] == MAGIC:
        body = raw[4:]
        if len(body) % 16:
            raise MalformedEdgeFile(f"{path}: binary payload is not a whole number of u64 pairs")
        arr = np.frombuffer(body, dtype=_U64).astype(np.int64).reshape(-1, 2)
    else:
        arr = _parse_tsv(raw, path)
    if levels is None:
        levels = int(meta["levels"]) if "levels" in meta else _infer_levels(arr)
    return EdgeList(
        src=arr[:, 0].copy(),
        dst=arr[:, 1].copy(),
        levels=levels,
        insertions=int(meta.get("edges", len(arr))),
        seed=int(meta.get("seed", 0)),
        noise_mode=meta.get("noise_mode", "none"),
        noise=float(meta.get("noise", 0.0)),
        simple=meta.get("graph") == "simple",
    )


def _parse_tsv(raw: bytes, path) -> np.ndarray:
    text = raw.decode("ascii", errors="strict") if raw else ""
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows:
        return np.zeros((0, 2), dtype=np.int64)
    try:
        arr = np.loadtxt(rows, dtype=np.int64, delimiter="\t", ndmin=2)
    except ValueError as exc:
        raise MalformedEdgeFile(f"{path}: {exc}") from None
    if arr.shape[1] != 2:
        raise MalformedEdgeFile(f"{path}: expected 2 columns, got {arr.shape[1]}")
    if arr.size and arr.min() < 0:
        raise MalformedEdgeFile(f"{path}: negative vertex id")
    return arr


def _infer_levels(arr: np.ndarray) -> int:
    top = int(arr.max()) if arr.size else 0
    return max(1, top.bit_length())


def write_sidecar(path, meta: dict) -> None:
    lines = [f"{k}={v}" for k, v in meta.items()]
    sidecar_path(path).write_text("\n".join(lines) + "\n")


def read_sidecar(path) -> dict[str, str]:
    p = Path(path)
    if p.suffix != ".meta":
        p = sidecar_path(p)
    meta = {}
    for line in p.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MalformedEdgeFile(f"{p}: bad sidecar line {line!r}")
        k, v = line.split("=", 1)
        meta[k.strip()] = v.strip()
    return meta


def generation_metadata(edges: EdgeList, matrix, fmt: str, preset: str | None = None) -> dict:
    return {
        "tool": "skglab",
        "version": __version__,
        "preset": preset or "",
        "matrix": str(matrix),
        "levels": edges.levels,
        "nodes": edges.n,
        "edges": edges.insertions,
        "seed": edges.seed,
        "noise_mode": edges.noise_mode,
        "noise": repr(float(edges.noise)),
        "chunk_size": edges.chunk_size,
        "graph": "simple" if edges.simple else "multigraph",
        "format": fmt,
        "written_edges": len(edges),
    }
