from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from lrqbench.problems import DEFAULT_WEIGHTS, Topology, cost, generate_instance
from lrqbench.simulator import SampleSet
from lrqbench.stats import (
    BaselineStats,
    DegenerateBaseline,
    RegimeLabel,
    approximation_ratio,
    back_solve_r_rand,
    classify_regime,
    correlation_matrix,
    effective_ratio,
    random_baseline,
)


def chain(n=12, seed=0):
    return generate_instance(Topology.chain(), n, DEFAULT_WEIGHTS, seed).with_optimum()


def uniform_samples(n, shots, seed):
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(shots, n))
    return SampleSet.from_strings(n, ("".join(map(str, row)) for row in bits))


def baseline(mean=0.5, sigma=0.01):
    return BaselineStats(100, 100, mean, sigma, mean + 3 * sigma, 0)


def test_ratio_of_optimal_samples():
    inst = chain()
    assert approximation_ratio(SampleSet(inst.n, {inst.optimum[0]: 17}), inst) == 1.0


def test_ratio_of_uniform_samples():
    inst = chain(20, seed=4)
    assert approximation_ratio(uniform_samples(20, 10**5, 1), inst) == pytest.approx(0.5, abs=0.01)


def test_ratio_needs_optimum_and_width():
    inst = generate_instance(Topology.chain(), 4, DEFAULT_WEIGHTS, 0)
    with pytest.raises(ValueError, match="optimum"):
        approximation_ratio(SampleSet(4, {"0101": 1}), inst)
    with pytest.raises(ValueError, match="qubits"):
        approximation_ratio(SampleSet(3, {"010": 1}), inst.with_optimum())


def test_published_pairs_back_solve():
    # derived thresholds, not ground truth
    r50 = back_solve_r_rand(0.849, 0.170)
    r56 = back_solve_r_rand(0.872, 0.079)
    assert r50 == pytest.approx(0.81807, abs=5e-6)
    assert r56 == pytest.approx(0.86102, abs=5e-6)
    assert effective_ratio(0.849, r50) == pytest.approx(0.170, abs=1e-12)
    assert effective_ratio(0.872, r56) == pytest.approx(0.079, abs=1e-12)
    assert effective_ratio(0.849, 0.818) == pytest.approx(0.170, abs=5e-4)


def test_effective_ratio_endpoints():
    b = baseline()
    assert effective_ratio(b.threshold, b) == 0.0
    assert effective_ratio(1.0, b) == 1.0
    assert effective_ratio(0.4, b) < 0
    with pytest.raises(DegenerateBaseline):
        effective_ratio(0.9, BaselineStats(1, 2, 0.7, 0.2, 1.3, 0))


@pytest.mark.parametrize(
    "offset, label",
    [(0.0, RegimeLabel.WITHIN), (4.0, RegimeLabel.ABOVE), (-4.0, RegimeLabel.BELOW), (3.0, RegimeLabel.WITHIN)],
)
def test_classify(offset, label):
    b = baseline()
    assert classify_regime(b.mean + offset * b.sigma, b) is label
    assert label.passed == (label is RegimeLabel.ABOVE)


def test_baseline_chain_mean():
    b = random_baseline(chain(30, 2), 1000, 100, seed=5)
    assert b.mean == pytest.approx(0.5, abs=0.01)
    assert b.threshold == b.mean + 3 * b.sigma
    assert b.n_subsets == 100 and b.shots_per_subset == 1000


def test_baseline_single_edge_bernoulli():
    inst = generate_instance(Topology.chain(), 2, (1.0,), 0).with_optimum()
    b = random_baseline(inst, 1, 400, seed=1)
    assert b.mean == pytest.approx(0.5, abs=0.08)
    assert b.sigma == pytest.approx(0.5, abs=0.02)


def test_baseline_is_seeded():
    inst = chain()
    assert random_baseline(inst, 50, 20, seed=3) == random_baseline(inst, 50, 20, seed=3)
    assert random_baseline(inst, 50, 20, seed=3) != random_baseline(inst, 50, 20, seed=4)


def test_baseline_preconditions():
    with pytest.raises(ValueError):
        random_baseline(chain(), 0)
    with pytest.raises(ValueError):
        random_baseline(chain(), 10, n_subsets=1)


def fc56_with_reference_cut():
    """56-node FC instance; a local-search cut stands in for the optimum
    (the spread ratio does not depend on the normalisation)."""
    inst = generate_instance(Topology.fully_connected(), 56, DEFAULT_WEIGHTS, 56)
    bits = [i % 2 for i in range(56)]
    improved = True
    while improved:
        improved = False
        for i in range(56):
            flipped = bits.copy()
            flipped[i] ^= 1
            if cost(inst, flipped) > cost(inst, bits):
                bits, improved = flipped, True
    key = "".join(map(str, bits))
    return replace(inst, optimum=(key, cost(inst, key)))


def test_sigma_ratio_7_vs_100_shots():
    inst = fc56_with_reference_cut()
    s7 = random_baseline(inst, 7, 100, seed=1).sigma
    s100 = random_baseline(inst, 100, 100, seed=2).sigma
    assert s7 / s100 == pytest.approx(math.sqrt(100 / 7), rel=0.25)


def test_sigma_scales_over_a_decade():
    inst = chain(16, 1)
    s10 = random_baseline(inst, 10, 200, seed=0).sigma
    s100 = random_baseline(inst, 100, 200, seed=1).sigma
    assert s10 / s100 == pytest.approx(math.sqrt(10), rel=0.25)


def test_correlation_examples():
    ones = correlation_matrix(SampleSet(4, {"1111": 5})).entries
    zeros = correlation_matrix(SampleSet(4, {"0000": 5})).entries
    assert np.all(ones == 1.0) and np.all(zeros == 0.0)
    c = correlation_matrix(uniform_samples(6, 40000, 3)).entries
    off = c[~np.eye(6, dtype=bool)]
    assert np.allclose(np.diag(c), 0.5, atol=0.01)
    assert np.allclose(off, 0.25, atol=0.01)


def test_spin_correlation_variant():
    c = correlation_matrix(uniform_samples(5, 40000, 4), spin=True).entries
    assert np.allclose(np.diag(c), 1.0)
    assert np.all(c[~np.eye(5, dtype=bool)] < 0.03)


# --- properties --------------------------------------------------------------

unit = st.floats(0.0, 1.0, exclude_max=True)


@given(st.integers(2, 10), st.integers(0, 1000), st.dictionaries(st.integers(0, 1023), st.integers(1, 50), min_size=1))
def test_ratio_in_unit_interval(n, seed, raw):
    inst = chain(n, seed)
    counts = {}
    for k, c in raw.items():
        key = format(k % (1 << n), f"0{n}b")
        counts[key] = counts.get(key, 0) + c
    r = approximation_ratio(SampleSet(n, counts), inst)
    assert 0.0 <= r <= 1.0 + 1e-12


@given(unit, unit, unit)
def test_effective_ratio_monotone(r1, r2, r_rand):
    assume(r2 - r1 > 1e-9)  # below float resolution the images may coincide
    assert effective_ratio(r1, r_rand) < effective_ratio(r2, r_rand)


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.98), st.floats(0.001, 0.01))
def test_effective_ratio_decreasing_in_threshold(r, t, dt):
    assume(r < 1)
    assert effective_ratio(r, t + dt) < effective_ratio(r, t)


@given(st.floats(-1, 2, allow_nan=False), st.floats(0, 1), st.floats(0, 0.3))
def test_classification_exhaustive(r, mean, sigma):
    b = BaselineStats(10, 10, mean, sigma, mean + 3 * sigma, 0)
    label = classify_regime(r, b)
    conditions = [r > b.threshold, r < b.lower, b.lower <= r <= b.threshold]
    assert sum(conditions) == 1
    assert conditions[[RegimeLabel.ABOVE, RegimeLabel.BELOW, RegimeLabel.WITHIN].index(label)]


@given(st.integers(1, 6), st.dictionaries(st.integers(0, 63), st.integers(1, 20), min_size=1), st.booleans())
def test_correlation_properties(n, raw, spin):
    counts = {}
    for k, c in raw.items():
        key = format(k % (1 << n), f"0{n}b")
        counts[key] = counts.get(key, 0) + c
    c = correlation_matrix(SampleSet(n, counts), spin=spin).entries
    assert np.array_equal(c, c.T)
    assert np.all(c >= 0) and np.all(c <= 1 + 1e-12)
