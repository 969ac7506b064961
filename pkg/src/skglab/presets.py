"""Named parameter sets used throughout the experiments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import InvalidParams
from .params import GeneratorMatrix


@dataclass(frozen=True)
class Preset:
    name: str
    matrix: GeneratorMatrix
    levels: int
    edges: Callable[[int], int]
    suggested_levels: tuple[int, ...] = ()


PRESETS = {
    "graph500": Preset(
        "graph500",
        GeneratorMatrix(0.57, 0.19, 0.19, 0.05),
        26,
        lambda levels: 16 << levels,
        (26, 29, 32, 36, 39, 42),
    ),
    "cahepph": Preset("cahepph", GeneratorMatrix(0.42, 0.19, 0.19, 0.20), 14, lambda levels: 237_010),
    "webnotredame": Preset("webnotredame", GeneratorMatrix(0.48, 0.20, 0.21, 0.11), 18, lambda levels: 1_497_134),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise InvalidParams(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
