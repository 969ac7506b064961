"""Model parameters for 2x2 stochastic Kronecker (R-MAT) graphs."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InvalidMatrix, InvalidParams, NoiseTooLarge, OddLevels, SigmaOutOfRange

SUM_TOL = 1e-12
SYMMETRY_TOL = 1e-12
MAX_LEVELS = 62  # vertex ids are stored as int64


@dataclass(frozen=True)
class GeneratorMatrix:
    """Initiator matrix ``[[t1, t2], [t3, t4]]``.

    ``t1`` is the (source 0, target 0) quadrant, ``t2`` is (0, 1),
    ``t3`` is (1, 0) and ``t4`` is (1, 1).
    """

    t1: float
    t2: float
    t3: float
    t4: float

    def __post_init__(self):
        entries = self.entries
        if any(not math.isfinite(t) for t in entries):
            raise InvalidMatrix(f"non-finite entry in {entries}")
        if min(entries) <= 0.0:
            raise InvalidMatrix(f"entries must be strictly positive, got {entries}")
        if abs(math.fsum(entries) - 1.0) > SUM_TOL:
            raise InvalidMatrix(f"entries must sum to 1, got {math.fsum(entries)!r}")

    @classmethod
    def from_sequence(cls, values) -> "GeneratorMatrix":
        values = [float(v) for v in values]
        if len(values) != 4:
            raise InvalidMatrix(f"expected 4 entries, got {len(values)}")
        return cls(*values)

    @property
    def entries(self) -> tuple[float, float, float, float]:
        return (self.t1, self.t2, self.t3, self.t4)

    @property
    def sigma(self) -> float:
        return self.t1 + self.t2 - 0.5

    @property
    def is_symmetric(self) -> bool:
        return abs(self.t2 - self.t3) <= SYMMETRY_TOL

    @property
    def satisfies_theory_conditions(self) -> bool:
        """True when t1 is the largest entry and min(t1+t2, t1+t3) > 1/2."""
        return self.t1 >= max(self.t2, self.t3, self.t4) and min(self.t1 + self.t2, self.t1 + self.t3) > 0.5

    def transpose(self) -> "GeneratorMatrix":
        # in-degree analysis of T is out-degree analysis of T'
        return GeneratorMatrix(self.t1, self.t3, self.t2, self.t4)

    def noise_bound(self) -> float:
        """Exclusive upper bound on the noise amplitude that keeps all noisy entries positive."""
        return min((self.t1 + self.t4) / 2.0, self.t2, self.t3)

    def __str__(self):
        return ",".join(repr(t) for t in self.entries)


class NoiseMode(str, enum.Enum):
    NONE = "none"
    PER_LEVEL = "per-level"
    PER_EDGE = "per-edge"


@dataclass(frozen=True)
class NoiseSpec:
    mode: NoiseMode = NoiseMode.NONE
    amplitude: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", NoiseMode(self.mode))
        if not (self.amplitude >= 0.0 and math.isfinite(self.amplitude)):
            raise InvalidParams(f"noise amplitude must be finite and >= 0, got {self.amplitude}")
        if self.mode is NoiseMode.NONE and self.amplitude != 0.0:
            raise InvalidParams("noise mode 'none' requires amplitude 0")

    def check(self, matrix: GeneratorMatrix) -> None:
        if self.mode is not NoiseMode.NONE:
            check_noise(matrix, self.amplitude)


def check_noise(matrix: GeneratorMatrix, amplitude: float) -> None:
    bound = matrix.noise_bound()
    if amplitude >= bound:
        raise NoiseTooLarge(f"noise amplitude {amplitude} must be < {bound:.6g} for T = [{matrix}]")


@dataclass(frozen=True)
class SkgParams:
    matrix: GeneratorMatrix
    levels: int
    insertions: int
    seed: int = 0
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        if not (1 <= int(self.levels) <= MAX_LEVELS):
            raise InvalidParams(f"levels must be in [1, {MAX_LEVELS}], got {self.levels}")
        if int(self.insertions) < 0:
            raise InvalidParams(f"insertions must be >= 0, got {self.insertions}")
        object.__setattr__(self, "levels", int(self.levels))
        object.__setattr__(self, "insertions", int(self.insertions))
        object.__setattr__(self, "seed", int(self.seed) & 0xFFFF_FFFF_FFFF_FFFF)
        self.noise.check(self.matrix)

    @property
    def n(self) -> int:
        return 1 << self.levels


@dataclass(frozen=True)
class DerivedParams:
    """General quantities derived from (T, levels, m)."""

    n: int
    delta: float
    sigma: float
    tau: float
    lam: float
    levels: int
    insertions: int

    @property
    def log_tau(self) -> float:
        return math.log(self.tau)

    @property
    def log_lam(self) -> float:
        return math.log(self.lam)


def derived_from(matrix: GeneratorMatrix, levels: int, insertions: int) -> DerivedParams:
    """Compute n, average degree, skew, tau and lambda.

    lambda is evaluated as exp((levels/2) ln(1 - 4 sigma^2) + ln delta) so it
    does not underflow for large ``levels``.
    """
    sigma = matrix.sigma
    if not (0.0 <= sigma < 0.5):
        raise SigmaOutOfRange(f"skew sigma = {sigma:.6g} outside [0, 1/2)")
    if insertions <= 0:
        raise InvalidParams("insertions must be positive for derived quantities")
    n = 1 << levels
    delta = insertions / n
    tau = (1.0 + 2.0 * sigma) / (1.0 - 2.0 * sigma)
    lam = math.exp(0.5 * levels * math.log1p(-4.0 * sigma * sigma) + math.log(delta))
    return DerivedParams(n=n, delta=delta, sigma=sigma, tau=tau, lam=lam, levels=levels, insertions=insertions)


def derive_params(p: SkgParams) -> DerivedParams:
    return derived_from(p.matrix, p.levels, p.insertions)


def require_even(levels: int) -> None:
    if levels % 2:
        raise OddLevels(f"slice-based analysis requires an even number of levels, got {levels}")
