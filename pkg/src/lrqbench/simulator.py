"""Statevector simulation with stochastic two-qubit depolarizing noise.

Amplitude index ``k`` has qubit ``q`` in bit ``q`` (little-endian).  Gates
act in place on strided views of the amplitude array.  Noise is unravelled
into Pauli trajectories: after each two-qubit gate, with probability
``eps_2q`` one of the 15 non-identity two-qubit Paulis is applied, chosen
uniformly.  Single-qubit gates and readout are noiseless.
"""

from __future__ import annotations

import logging
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .circuit import Circuit
from .circuit.core import TWO_QUBIT
from .problems import ProblemInstance, WeightedGraph, as_bits, cut_table

log = logging.getLogger(__name__)

DEFAULT_SIM_CAP = 24
NORM_TOL = 1e-10
RENORM_TOL = 1e-8
SAMPLES_HEADER = "lrq-samples v1"


class SimulationTooLarge(RuntimeError):
    pass


def sim_cap() -> int:
    return int(os.environ.get("LRQ_SIM_CAP", DEFAULT_SIM_CAP))


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def permuted(self, layout: tuple[int, ...]) -> StateVector:
        """Relabel so that logical qubit ``l`` (held on ``layout[l]``) becomes qubit ``l``."""
        n = self.n_qubits
        psi = self.amplitudes.reshape((2,) * n)
        axes = [n - 1 - layout[n - 1 - i] for i in range(n)]
        return StateVector(n, np.ascontiguousarray(psi.transpose(axes)).reshape(-1))


@dataclass(frozen=True)
class NoiseModel:
    eps_2q: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.eps_2q <= 1.0:
            raise ValueError(f"eps_2q must lie in [0, 1], got {self.eps_2q}")


@dataclass
class SampleSet:
    """Measured bitstrings (character ``i`` = qubit/node ``i``) with multiplicities."""

    n_qubits: int
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for s, c in self.counts.items():
            if len(s) != self.n_qubits:
                raise ValueError(f"bitstring {s!r} has length {len(s)}, expected {self.n_qubits}")
            if c < 0:
                raise ValueError(f"negative count for {s!r}")

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_strings(cls, n_qubits: int, strings: Iterable[str]) -> SampleSet:
        return cls(n_qubits, dict(Counter(strings)))

    def bit_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct outcomes as a ``(k, n)`` uint8 array plus their counts."""
        keys = sorted(self.counts)
        if not keys:
            return np.zeros((0, self.n_qubits), dtype=np.uint8), np.zeros(0, dtype=np.int64)
        bits = np.stack([as_bits(s) for s in keys])
        return bits, np.array([self.counts[s] for s in keys], dtype=np.int64)

    def merged(self, other: SampleSet) -> SampleSet:
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot merge sample sets of different widths")
        c = Counter(self.counts)
        c.update(other.counts)
        return SampleSet(self.n_qubits, dict(c))


def dumps_samples(samples: SampleSet) -> str:
    lines = [f"{SAMPLES_HEADER} nq={samples.n_qubits} shots={samples.shots}"]
    lines += [f"{s} {samples.counts[s]}" for s in sorted(samples.counts)]
    return "\n".join(lines) + "\n"


MAX_COUNT = 2**63 - 1


def loads_samples(text: str, n_qubits: int | None = None) -> SampleSet:
    """Parse a sample file.

    The ``lrq-samples`` header is optional; each other line is a bitstring
    optionally followed by a count (default 1).  Repeated bitstrings are
    merged.  Blank lines and ``#`` comments are skipped.
    """
    counts: Counter = Counter()
    declared_shots = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith(SAMPLES_HEADER):
            fields = dict(tok.partition("=")[::2] for tok in line[len(SAMPLES_HEADER):].split())
            try:
                nq = int(fields["nq"])
                declared_shots = int(fields["shots"]) if "shots" in fields else None
            except (KeyError, ValueError):
                raise ValueError(f"line {lineno}: malformed header {line!r}") from None
            if n_qubits is not None and nq != n_qubits:
                raise ValueError(f"line {lineno}: header declares nq={nq}, expected {n_qubits}")
            n_qubits = nq
            continue
        parts = line.split()
        if len(parts) > 2:
            raise ValueError(f"line {lineno}: expected '<bitstring> [count]', got {line!r}")
        bits = parts[0]
        if bits.strip("01"):
            raise ValueError(f"line {lineno}: non-binary character in {bits!r}")
        if n_qubits is None:
            n_qubits = len(bits)
        if len(bits) != n_qubits:
            raise ValueError(f"line {lineno}: bitstring width {len(bits)} does not match {n_qubits} qubits")
        if len(parts) == 2:
            if not parts[1].isdigit():
                raise ValueError(f"line {lineno}: count {parts[1]!r} is not a non-negative integer")
            count = int(parts[1])
        else:
            count = 1
        counts[bits] += count
        if counts[bits] > MAX_COUNT:
            raise ValueError(f"line {lineno}: count overflow for {bits!r}")
    if not counts or n_qubits is None:
        raise ValueError("sample file contains no samples")
    samples = SampleSet(n_qubits, dict(sorted(counts.items())))
    if declared_shots is not None and declared_shots != samples.shots:
        raise ValueError(f"header declares shots={declared_shots} but lines sum to {samples.shots}")
    return samples


# --- gate kernels ----------------------------------------------------------

_SQ2 = 1.0 / math.sqrt(2.0)


def _apply_1q(state: np.ndarray, q: int, m00, m01, m10, m11) -> None:
    v = state.reshape(-1, 2, 1 << q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    t1 = m10 * a0 + m11 * a1
    v[:, 0, :] = m00 * a0 + m01 * a1
    v[:, 1, :] = t1


def _diag_1q(state: np.ndarray, q: int, d0, d1) -> None:
    v = state.reshape(-1, 2, 1 << q)
    v[:, 0, :] *= d0
    v[:, 1, :] *= d1


def _view2(state: np.ndarray, a: int, b: int) -> tuple[np.ndarray, bool]:
    hi, lo = (a, b) if a > b else (b, a)
    v = state.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    return v, a > b


def _sl(v: np.ndarray, first_is_hi: bool, ba: int, bb: int) -> np.ndarray:
    # slice of v with qubit a in state ba and qubit b in state bb
    if first_is_hi:
        return v[:, ba, :, bb, :]
    return v[:, bb, :, ba, :]


def _rzz(state: np.ndarray, a: int, b: int, theta: float) -> None:
    v, ahi = _view2(state, a, b)
    even = complex(math.cos(theta / 2), -math.sin(theta / 2))
    odd = even.conjugate()
    v[:, 0, :, 0, :] *= even
    v[:, 1, :, 1, :] *= even
    v[:, 0, :, 1, :] *= odd
    v[:, 1, :, 0, :] *= odd


def _cz(state: np.ndarray, a: int, b: int) -> None:
    v, _ = _view2(state, a, b)
    v[:, 1, :, 1, :] *= -1


def _swap_slices(x: np.ndarray, y: np.ndarray) -> None:
    tmp = x.copy()
    x[...] = y
    y[...] = tmp


def _cx(state: np.ndarray, c: int, t: int) -> None:
    v, chi = _view2(state, c, t)
    _swap_slices(_sl(v, chi, 1, 0), _sl(v, chi, 1, 1))


def _swap(state: np.ndarray, a: int, b: int) -> None:
    v, ahi = _view2(state, a, b)
    _swap_slices(_sl(v, ahi, 0, 1), _sl(v, ahi, 1, 0))


def _pauli(state: np.ndarray, q: int, which: int) -> None:
    """Apply I, X, Y or Z (``which`` = 0..3) to qubit ``q``."""
    if which == 0:
        return
    v = state.reshape(-1, 2, 1 << q)
    if which == 3:
        v[:, 1, :] *= -1
        return
    a0 = v[:, 0, :].copy()
    if which == 1:
        v[:, 0, :] = v[:, 1, :]
        v[:, 1, :] = a0
    else:
        v[:, 0, :] = -1j * v[:, 1, :]
        v[:, 1, :] = 1j * a0


def _apply(state: np.ndarray, g) -> None:
    name, qs, theta = g
    if name == "rzz":
        _rzz(state, qs[0], qs[1], theta)
    elif name == "rx":
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        _apply_1q(state, qs[0], c, -1j * s, -1j * s, c)
    elif name == "h":
        _apply_1q(state, qs[0], _SQ2, _SQ2, _SQ2, -_SQ2)
    elif name == "rz":
        d = complex(math.cos(theta / 2), -math.sin(theta / 2))
        _diag_1q(state, qs[0], d, d.conjugate())
    elif name == "cx":
        _cx(state, qs[0], qs[1])
    elif name == "cz":
        _cz(state, qs[0], qs[1])
    elif name == "swap":
        _swap(state, qs[0], qs[1])
    elif name != "measure":
        raise ValueError(f"cannot simulate gate {name!r}")


def _check_size(c: Circuit) -> None:
    cap = sim_cap()
    if c.n_qubits > cap:
        raise SimulationTooLarge(
            f"{c.n_qubits} qubits exceeds the statevector cap of {cap} (set LRQ_SIM_CAP to raise it)"
        )


def _check_norm(state: np.ndarray, where: int) -> None:
    norm = float(np.vdot(state, state).real)
    drift = abs(norm - 1.0)
    if drift > RENORM_TOL:
        log.warning("norm drift %.3g before gate %d; renormalising", drift, where)
        state /= math.sqrt(norm)


def _run(c: Circuit, errors: dict[int, int] | None = None) -> np.ndarray:
    """Evolve |0...0>; ``errors`` maps two-qubit gate ordinal -> Pauli pair code 1..15."""
    n = c.n_qubits
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    gates = c.gates
    k2 = 0
    prev = None
    for i, g in enumerate(gates):
        name = g[0]
        if name == "rx" and prev != "rx":
            _check_norm(state, i)
        _apply(state, g)
        if name in TWO_QUBIT:
            if errors:
                code = errors.get(k2)
                if code:
                    _pauli(state, g[1][0], code >> 2)
                    _pauli(state, g[1][1], code & 3)
            k2 += 1
        prev = name
    _check_norm(state, len(gates))
    return state


def simulate(c: Circuit) -> StateVector:
    """Noiseless final state (physical qubit order; measurement ignored)."""
    _check_size(c)
    return StateVector(c.n_qubits, _run(c))


def _n_two_qubit(c: Circuit) -> int:
    return sum(1 for g in c.gates if g[0] in TWO_QUBIT)


def draw_errors(n_two_qubit: int, eps: float, rng: np.random.Generator) -> dict[int, int]:
    """Error locations and Pauli codes for one trajectory."""
    hit = np.flatnonzero(rng.random(n_two_qubit) < eps)
    codes = rng.integers(1, 16, size=hit.size)
    return dict(zip(hit.tolist(), codes.tolist()))


def _index_strings(idx: np.ndarray, n: int) -> list[str]:
    bits = ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8) + ord("0")
    return [row.tobytes().decode() for row in bits]


def _draw(probs: np.ndarray, shots: int, rng: np.random.Generator) -> Counter:
    probs = probs / probs.sum()
    counts = rng.multinomial(shots, probs)
    nz = np.flatnonzero(counts)
    return nz, counts[nz]


def _split(shots: int, parts: int) -> list[int]:
    base, extra = divmod(shots, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def trajectory_states(
    c: Circuit, noise: NoiseModel, trajectories: int, seed: int = 0
) -> Iterable[tuple[np.ndarray, np.random.Generator]]:
    """Yield ``(final state, rng)`` per trajectory, each with its own derived seed."""
    _check_size(c)
    n2 = _n_two_qubit(c)
    children = np.random.SeedSequence([noise.rng_seed, seed]).spawn(trajectories)
    ideal = None
    for child in children:
        rng = np.random.default_rng(child)
        errors = draw_errors(n2, noise.eps_2q, rng)
        if not errors:
            if ideal is None:
                ideal = _run(c)
            yield ideal, rng
        else:
            yield _run(c, errors), rng


def sample(
    c: Circuit,
    shots: int,
    noise: NoiseModel | None = None,
    seed: int = 0,
    trajectories: int | None = None,
    logical: bool = True,
) -> SampleSet:
    """Measure ``shots`` bitstrings.

    Without noise the ideal state is sampled directly.  With noise each shot
    gets its own trajectory unless ``trajectories`` is given, in which case
    the shots are split evenly over that many trajectories.  With
    ``logical`` (default) strings are reordered through ``c.layout`` so that
    character ``i`` is logical qubit ``i``.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    _check_size(c)
    n = c.n_qubits
    totals: Counter = Counter()
    if noise is None or noise.eps_2q == 0.0:
        rng = np.random.default_rng(np.random.SeedSequence([0 if noise is None else noise.rng_seed, seed]))
        idx, cnt = _draw(np.abs(_run(c)) ** 2, shots, rng)
        totals.update(dict(zip(idx.tolist(), cnt.tolist())))
    else:
        k = shots if trajectories is None else min(trajectories, shots)
        per = _split(shots, k)
        for (state, rng), m in zip(trajectory_states(c, noise, k, seed), per):
            idx, cnt = _draw(np.abs(state) ** 2, m, rng)
            for i, m_i in zip(idx.tolist(), cnt.tolist()):
                totals[i] += m_i
    keys = sorted(totals)
    strings = _index_strings(np.array(keys, dtype=np.int64), n)
    if logical and not c.is_identity_layout:
        strings = [c.logical_bits(s) for s in strings]
    counts: Counter = Counter()
    for s, k in zip(strings, keys):
        counts[s] += totals[k]
    return SampleSet(n, dict(sorted(counts.items())))


@lru_cache(maxsize=16)
def _cut_table(graph: WeightedGraph) -> np.ndarray:
    return cut_table(graph)


def expected_cost(sv: StateVector | np.ndarray, instance: ProblemInstance) -> float:
    """Mean cut value under the Born distribution of ``sv`` (logical qubit order)."""
    amps = sv.amplitudes if isinstance(sv, StateVector) else np.asarray(sv)
    if amps.size != 1 << instance.n:
        raise ValueError(f"state has {amps.size} amplitudes, instance needs 2^{instance.n}")
    return float(np.dot(np.abs(amps) ** 2, _cut_table(instance.graph)))


def noisy_expected_cost(
    c: Circuit,
    instance: ProblemInstance,
    noise: NoiseModel,
    trajectories: int,
    seed: int = 0,
) -> tuple[float, float]:
    """Trajectory mean of the expected cut value and its standard error."""
    values = []
    for state, _ in trajectory_states(c, noise, trajectories, seed):
        sv = StateVector(c.n_qubits, state)
        if not c.is_identity_layout:
            sv = sv.permuted(c.layout)
        values.append(expected_cost(sv, instance))
    arr = np.array(values)
    sem = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(arr.mean()), sem
