from dataclasses import dataclass, field

import numpy as np
import pytest

from skglab.analysis import degree_histogram, isolated_count, mean_histogram
from skglab.generate import deduplicate, generate
from skglab.params import GeneratorMatrix, NoiseSpec, SkgParams

GRAPH500 = GeneratorMatrix(0.57, 0.19, 0.19, 0.05)
ENSEMBLE_LEVELS = 16
ENSEMBLE_SIZE = 25


@pytest.fixture
def graph500():
    return GRAPH500


@dataclass
class Ensemble:
    """Per-instance measurements of 25 Graph500 graphs at 16 levels."""

    params: SkgParams
    multi_hists: list = field(default_factory=list)
    simple_hists: list = field(default_factory=list)
    isolated: list = field(default_factory=list)
    distinct: list = field(default_factory=list)

    @property
    def multi_mean(self):
        return mean_histogram(self.multi_hists)

    @property
    def simple_mean(self):
        return mean_histogram(self.simple_hists)


def _ensemble(noise: NoiseSpec) -> Ensemble:
    levels = ENSEMBLE_LEVELS
    p = SkgParams(GRAPH500, levels, 16 << levels, seed=1000, noise=noise)
    ens = Ensemble(p)
    for i in range(ENSEMBLE_SIZE):
        g = generate(SkgParams(GRAPH500, levels, p.insertions, seed=p.seed + i, noise=noise))
        s = deduplicate(g)
        ens.multi_hists.append(degree_histogram(g, p.n, "out"))
        ens.simple_hists.append(degree_histogram(s, p.n, "out"))
        ens.isolated.append(isolated_count(g, p.n))
        ens.distinct.append(len(s))
    return ens


_CACHE = {}


@pytest.fixture(scope="session")
def ensembles():
    """Lazily built ensembles keyed by 'skg', 'nskg05', 'nskg10', 'per_edge10'."""
    specs = {
        "skg": NoiseSpec(),
        "nskg05": NoiseSpec("per-level", 0.05),
        "nskg10": NoiseSpec("per-level", 0.1),
        "per_edge10": NoiseSpec("per-edge", 0.1),
    }

    def get(name):
        if name not in _CACHE:
            _CACHE[name] = _ensemble(specs[name])
        return _CACHE[name]

    return get


def mean(xs):
    return float(np.mean(xs))


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, echoed at the end of the run."""

    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        print(line)
        _ACCEPTANCE.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
