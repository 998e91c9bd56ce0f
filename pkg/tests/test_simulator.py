from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lrqbench.circuit import MEASURE_ALL, Circuit, Gate, build_lr_qaoa, decompose_to_basis, transpile_swap_network
from lrqbench.problems import DEFAULT_WEIGHTS, ProblemInstance, Topology, WeightedGraph, cost, generate_instance
from lrqbench.schedule import build_schedule
from lrqbench.simulator import (
    NoiseModel,
    SampleSet,
    SimulationTooLarge,
    StateVector,
    draw_errors,
    dumps_samples,
    expected_cost,
    loads_samples,
    noisy_expected_cost,
    sample,
    simulate,
)
from lrqbench.stats import approximation_ratio

from .oracles import dense_state, max_phase_deviation, permute_to_logical


def chain(n, seed=0, weights=DEFAULT_WEIGHTS):
    return generate_instance(Topology.chain(), n, weights, seed).with_optimum()


def hadamards(n):
    return Circuit(n, tuple(Gate("h", (q,)) for q in range(n)) + (MEASURE_ALL,))


def test_single_hadamard():
    sv = simulate(hadamards(1))
    assert np.allclose(sv.amplitudes, [1 / math.sqrt(2)] * 2)


def test_chain2_cut_symmetry():
    inst = chain(2, weights=(1.0,))
    probs = simulate(build_lr_qaoa(inst, build_schedule(1))).probabilities()
    assert probs[1] == pytest.approx(probs[2], abs=1e-14)  # "10" and "01"


@pytest.mark.parametrize(
    "gates",
    [
        [("h", (0,)), ("cx", (0, 2)), ("rz", (2,), 0.3), ("swap", (1, 2)), ("cz", (0, 1))],
        [("h", (2,)), ("h", (0,)), ("rzz", (2, 0), 1.1), ("rx", (1,), -0.4), ("cx", (2, 1))],
        [("rx", (0,), 0.9), ("rx", (3,), 0.2), ("swap", (3, 0)), ("rzz", (1, 3), 0.5), ("cx", (3, 1))],
    ],
)
def test_gates_match_dense_oracle(gates):
    c = Circuit(4, tuple(Gate(*g) for g in gates))
    assert np.max(np.abs(simulate(c).amplitudes - dense_state(c))) < 1e-12


@given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 10**6), st.sampled_from(["abstract", "cx", "cz", "fractional"]))
def test_lr_qaoa_matches_dense_oracle(n, p, seed, basis):
    inst = generate_instance(Topology.fully_connected(), n, DEFAULT_WEIGHTS, seed)
    c = build_lr_qaoa(inst, build_schedule(p, 0.63))
    c = c if basis == "abstract" else decompose_to_basis(c, basis)
    assert max_phase_deviation(simulate(c).amplitudes, dense_state(c)) < 1e-10


def test_decomposed_matches_abstract_fc5():
    inst = generate_instance(Topology.fully_connected(), 5, DEFAULT_WEIGHTS, 17)
    sched = build_schedule(3, 0.5)
    ref = simulate(build_lr_qaoa(inst, sched)).amplitudes
    for basis in ("cx", "cz"):
        routed = transpile_swap_network(inst, sched, basis=basis)
        got = simulate(routed).permuted(routed.layout).amplitudes
        assert max_phase_deviation(got, ref) < 1e-9


def test_permuted_matches_oracle():
    inst = generate_instance(Topology.fully_connected(), 4, DEFAULT_WEIGHTS, 2)
    c = transpile_swap_network(inst, build_schedule(1))
    psi = simulate(c).amplitudes
    expected = permute_to_logical(psi, c.layout)
    assert np.allclose(StateVector(4, psi).permuted(c.layout).amplitudes, expected)


def test_cap(monkeypatch):
    monkeypatch.setenv("LRQ_SIM_CAP", "3")
    with pytest.raises(SimulationTooLarge, match="cap of 3"):
        simulate(hadamards(4))
    with pytest.raises(SimulationTooLarge):
        sample(hadamards(4), 10)
    monkeypatch.delenv("LRQ_SIM_CAP")
    with pytest.raises(SimulationTooLarge, match="cap of 24"):
        simulate(hadamards(25))


def test_uniform_sampling_within_5_sigma():
    s = sample(hadamards(3), 8192, seed=4)
    assert s.shots == 8192 and len(s.counts) == 8
    sigma = math.sqrt(8192 * (1 / 8) * (7 / 8))
    for count in s.counts.values():
        assert abs(count - 1024) < 5 * sigma


def test_born_rule_chi_square():
    inst = chain(4, seed=3)
    c = build_lr_qaoa(inst, build_schedule(2))
    probs = simulate(c).probabilities()
    shots = 20000
    s = sample(c, shots, seed=9)
    chi2 = 0.0
    for k, prob in enumerate(probs):
        key = "".join(str((k >> i) & 1) for i in range(4))
        if prob * shots > 5:
            chi2 += (s.counts.get(key, 0) - prob * shots) ** 2 / (prob * shots)
    assert chi2 < 37.7  # 0.1% critical value, 15 degrees of freedom


def test_sampling_is_deterministic():
    c = build_lr_qaoa(chain(6), build_schedule(4))
    noise = NoiseModel(0.05, rng_seed=3)
    assert sample(c, 300, noise, seed=1) == sample(c, 300, noise, seed=1)
    assert sample(c, 300, noise, seed=1) != sample(c, 300, noise, seed=2)
    assert sample(c, 300, seed=5) == sample(c, 300, seed=5)


def test_trajectory_mode_splits_shots():
    c = build_lr_qaoa(chain(5), build_schedule(3))
    s = sample(c, 1001, NoiseModel(0.02, 1), seed=0, trajectories=10)
    assert s.shots == 1001


def test_routed_samples_are_in_logical_order():
    inst = generate_instance(Topology.fully_connected(), 5, DEFAULT_WEIGHTS, 8).with_optimum()
    sched = build_schedule(1, 0.63)
    direct = sample(build_lr_qaoa(inst, sched), 20000, seed=1)
    routed = sample(transpile_swap_network(inst, sched, basis="cx"), 20000, seed=1)
    assert approximation_ratio(direct, inst) == pytest.approx(approximation_ratio(routed, inst), abs=0.01)


def test_noiseless_chain10_p50():
    inst = chain(10, seed=1)
    c = build_lr_qaoa(inst, build_schedule(50))
    exact = expected_cost(simulate(c), inst) / inst.optimal_value
    r = approximation_ratio(sample(c, 4000, seed=0), inst)
    assert exact > 0.95
    assert r == pytest.approx(exact, abs=0.01)


def test_heavy_noise_is_random_like():
    inst = chain(10, seed=1)
    c = build_lr_qaoa(inst, build_schedule(50))
    r = approximation_ratio(sample(c, 2000, NoiseModel(0.1, 0), seed=0, trajectories=200), inst)
    assert abs(r - 0.5) < 0.03


def test_expected_cost_examples():
    inst = chain(2, weights=(1.0,))
    assert expected_cost(simulate(hadamards(2)), inst) == pytest.approx(0.5)
    basis = np.zeros(4, dtype=complex)
    basis[0b01] = 1  # node 0 set
    assert expected_cost(StateVector(2, basis), inst) == cost(inst, "10") == 1.0
    with pytest.raises(ValueError):
        expected_cost(simulate(hadamards(3)), inst)


def test_expected_cost_matches_sampling_triangle():
    graph = WeightedGraph.from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])
    tri = ProblemInstance(graph, Topology.fully_connected(), 0, (1.0,)).with_optimum()
    c = build_lr_qaoa(tri, build_schedule(3, 0.63))
    exact = expected_cost(simulate(c), tri)
    s = sample(c, 10**6, seed=2)
    bits, counts = s.bit_matrix()
    values = np.array([cost(tri, b) for b in bits])
    mean = float(values @ counts) / s.shots
    var = float(((values - mean) ** 2) @ counts) / (s.shots - 1)
    assert abs(mean - exact) < 3 * math.sqrt(var / s.shots)


def test_noise_model_bounds():
    with pytest.raises(ValueError):
        NoiseModel(1.5)
    with pytest.raises(ValueError):
        NoiseModel(-0.1)


def test_error_draws_use_all_fifteen_paulis():
    rng = np.random.default_rng(0)
    errors = draw_errors(20000, 0.5, rng)
    assert set(errors.values()) == set(range(1, 16))
    assert abs(len(errors) / 20000 - 0.5) < 0.02


def test_noisy_expectation_decreases_with_eps():
    inst = chain(6, seed=2)
    c = build_lr_qaoa(inst, build_schedule(10))
    values = [noisy_expected_cost(c, inst, NoiseModel(eps, 1), 150)[0] for eps in (0.0, 0.02, 0.1)]
    assert values[0] > values[1] > values[2]


def test_norm_preserved():
    c = build_lr_qaoa(generate_instance(Topology.fully_connected(), 8, DEFAULT_WEIGHTS, 1), build_schedule(20))
    assert abs(simulate(c).norm() - 1.0) < 1e-10


# --- sample files ---------------------------------------------------------


def test_sample_file_round_trip():
    s = SampleSet(3, {"010": 4, "111": 1})
    text = dumps_samples(s)
    assert text.splitlines()[0] == "lrq-samples v1 nq=3 shots=5"
    assert loads_samples(text) == s


@pytest.mark.parametrize(
    "text, match",
    [
        ("", "no samples"),
        ("0102 1\n", "line 1: non-binary"),
        ("010 1\n01 1\n", "line 2: bitstring width"),
        ("010 x\n", "line 1: count"),
        ("010 99999999999999999999\n", "overflow"),
        ("lrq-samples v1 nq=3 shots=4\n010 3\n", "shots=4"),
    ],
)
def test_sample_file_errors(text, match):
    with pytest.raises(ValueError, match=match):
        loads_samples(text)


def test_sample_file_merges_duplicates_and_defaults_count():
    s = loads_samples("# comment\n0101\n0101 2\n1111\n")
    assert s.counts == {"0101": 3, "1111": 1} and s.shots == 4


@given(st.dictionaries(st.text("01", min_size=5, max_size=5), st.integers(1, 10**6), min_size=1))
def test_sample_file_property(counts):
    s = SampleSet(5, counts)
    assert loads_samples(dumps_samples(s)) == s
    assert s.shots == sum(counts.values())
