"""Approximation ratios, random-sampler baselines and regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .problems import ProblemInstance, batch_cost
from .simulator import SampleSet

SIGMA_BAND = 3.0


def approximation_ratio(samples: SampleSet, instance: ProblemInstance) -> float:
    """Mean sampled cut value over the optimal cut value."""
    if samples.n_qubits != instance.n:
        raise ValueError(f"samples have {samples.n_qubits} qubits, instance has {instance.n} nodes")
    if samples.shots == 0:
        raise ValueError("empty sample set")
    opt = instance.optimal_value
    bits, counts = samples.bit_matrix()
    total = float(np.dot(batch_cost(instance.graph, bits), counts))
    return total / samples.shots / opt


def max_sample_ratio(samples: SampleSet, instance: ProblemInstance) -> float:
    """Best single-sample cut over the optimum."""
    bits, _ = samples.bit_matrix()
    return float(batch_cost(instance.graph, bits).max()) / instance.optimal_value


@dataclass(frozen=True)
class BaselineStats:
    shots_per_subset: int
    n_subsets: int
    mean: float
    sigma: float
    threshold: float
    seed: int

    @property
    def lower(self) -> float:
        return self.mean - SIGMA_BAND * self.sigma

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> BaselineStats:
        return cls(**d)


def subset_ratios(
    instance: ProblemInstance, shots_per_subset: int, n_subsets: int, seed: int
) -> np.ndarray:
    """Approximation ratio of each of ``n_subsets`` uniform-random subsets."""
    opt = instance.optimal_value
    children = np.random.SeedSequence(seed).spawn(n_subsets)
    out = np.empty(n_subsets)
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        bits = rng.integers(0, 2, size=(shots_per_subset, instance.n), dtype=np.uint8)
        out[i] = batch_cost(instance.graph, bits).mean() / opt
    return out


def random_baseline(
    instance: ProblemInstance,
    shots_per_subset: int,
    n_subsets: int = 100,
    seed: int = 0,
) -> BaselineStats:
    """Spread of the approximation ratio under uniform sampling.

    ``sigma`` is the sample standard deviation (``ddof=1``) of the
    per-subset ratios; the pass threshold is ``mean + 3 sigma``.
    """
    if shots_per_subset < 1:
        raise ValueError("shots_per_subset must be >= 1")
    if n_subsets < 2:
        raise ValueError("n_subsets must be >= 2")
    ratios = subset_ratios(instance, shots_per_subset, n_subsets, seed)
    mean = float(ratios.mean())
    sigma = float(ratios.std(ddof=1))
    return BaselineStats(shots_per_subset, n_subsets, mean, sigma, mean + SIGMA_BAND * sigma, seed)


class DegenerateBaseline(ValueError):
    pass


def effective_ratio(r_max: float, baseline: BaselineStats | float) -> float:
    """Gain over the random threshold, rescaled so that 1 means optimal.

    ``baseline`` may be a :class:`BaselineStats` (its threshold is used) or
    a bare ``r_rand`` value.
    """
    r_rand = baseline.threshold if isinstance(baseline, BaselineStats) else float(baseline)
    if not r_rand < 1.0:
        raise DegenerateBaseline(f"random threshold {r_rand} >= 1 leaves no headroom")
    return (r_max - r_rand) / (1.0 - r_rand)


def back_solve_r_rand(r: float, r_eff: float) -> float:
    """Random threshold implied by a published ``(r, r_eff)`` pair."""
    if r_eff >= 1.0:
        raise ValueError("r_eff must be < 1")
    return (r - r_eff) / (1.0 - r_eff)


class RegimeLabel(str, enum.Enum):
    ABOVE = "AboveRandom"
    WITHIN = "WithinRandom"
    BELOW = "BelowRandom"

    @property
    def passed(self) -> bool:
        return self is RegimeLabel.ABOVE


def classify_regime(r: float, baseline: BaselineStats) -> RegimeLabel:
    if r > baseline.threshold:
        return RegimeLabel.ABOVE
    if r < baseline.lower:
        return RegimeLabel.BELOW
    return RegimeLabel.WITHIN


@dataclass(frozen=True)
class CorrelationMatrix:
    n: int
    entries: np.ndarray


def correlation_matrix(samples: SampleSet, spin: bool = False) -> CorrelationMatrix:
    """``|C_ij| = |mean(s_i s_j)|`` over the samples.

    Values are ``s in {0, 1}`` by default; ``spin=True`` uses ``s = 1 - 2x``
    (analysis only).
    """
    if samples.shots < 1:
        raise ValueError("need at least one sample")
    bits, counts = samples.bit_matrix()
    s = bits.astype(np.float64)
    if spin:
        s = 1.0 - 2.0 * s
    weighted = s * (counts / samples.shots)[:, None]
    c = np.abs(s.T @ weighted)
    c = 0.5 * (c + c.T)
    return CorrelationMatrix(samples.n_qubits, c)


def sigma_scaling(sigma_small: float, sigma_large: float) -> float:
    """Observed ratio of baseline spreads (ideally ``sqrt(shots_large/shots_small)``)."""
    if sigma_large <= 0 or math.isnan(sigma_large):
        raise ValueError("sigma_large must be positive")
    return sigma_small / sigma_large
