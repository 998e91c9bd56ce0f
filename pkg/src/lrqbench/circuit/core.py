from __future__ import annotations

import gc
import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, NamedTuple

# abstract:   H, RX, RZZ and a final measurement (direct LR-QAOA build)
# routed:     abstract plus SWAP (line-routed, not yet decomposed)
# fractional: native RZZ/RX with CZ for anything that has to be decomposed
# cz, cx:     CZ- or CNOT-based hardware bases
BASIS_GATES: dict[str, frozenset[str]] = {
    "abstract": frozenset({"h", "rx", "rzz", "measure"}),
    "routed": frozenset({"h", "rx", "rzz", "swap", "measure"}),
    "fractional": frozenset({"h", "rx", "rz", "rzz", "cz", "measure"}),
    "cz": frozenset({"h", "rx", "rz", "cz", "measure"}),
    "cx": frozenset({"h", "rx", "rz", "cx", "measure"}),
}
BASES = tuple(BASIS_GATES)

ONE_QUBIT = frozenset({"h", "rx", "rz"})
TWO_QUBIT = frozenset({"rzz", "cz", "cx", "swap"})
PARAMETRIC = frozenset({"rx", "rz", "rzz"})


@contextmanager
def gc_paused() -> Iterator[None]:
    """Suspend cyclic GC while building large gate lists.

    Gates are tuples of atoms and cannot form cycles, so the collector only
    rescans them; with 10^5-10^6 gates that costs a third of the build.
    """
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]
    theta: float | None = None

    @property
    def is_two_qubit(self) -> bool:
        return self.name in TWO_QUBIT


MEASURE_ALL = Gate("measure", ())


def check_basis(basis: str) -> str:
    if basis not in BASIS_GATES:
        raise ValueError(f"unknown basis {basis!r}; expected one of {BASES}")
    return basis


@dataclass(frozen=True)
class Circuit:
    """Gate list over ``n_qubits`` physical qubits.

    ``layout[l]`` is the physical qubit that holds logical qubit ``l`` at the
    end of the circuit.  ``n_zz`` is the number of logical ZZ interactions
    the circuit implements; it survives decomposition, where RZZ gates are no
    longer visible.
    """

    n_qubits: int
    gates: tuple[Gate, ...]
    basis: str = "abstract"
    layout: tuple[int, ...] | None = None
    n_zz: int | None = None

    def __post_init__(self) -> None:
        check_basis(self.basis)
        if self.layout is None:
            object.__setattr__(self, "layout", tuple(range(self.n_qubits)))
        elif sorted(self.layout) != list(range(self.n_qubits)):
            raise ValueError("layout must be a permutation of the qubits")
        if self.n_zz is None:
            object.__setattr__(self, "n_zz", sum(1 for g in self.gates if g.name == "rzz"))

    def validate(self) -> Circuit:
        allowed = BASIS_GATES[self.basis]
        for i, g in enumerate(self.gates):
            if g.name not in allowed:
                raise ValueError(f"gate {i} ({g.name}) not allowed in basis {self.basis}")
            arity = 0 if g.name == "measure" else 2 if g.name in TWO_QUBIT else 1
            if len(g.qubits) != arity:
                raise ValueError(f"gate {i} ({g.name}) expects {arity} operands, got {g.qubits}")
            if any(not 0 <= q < self.n_qubits for q in g.qubits):
                raise ValueError(f"gate {i} ({g.name}) operand out of range: {g.qubits}")
            if arity == 2 and g.qubits[0] == g.qubits[1]:
                raise ValueError(f"gate {i} ({g.name}) has repeated operand {g.qubits[0]}")
            if (g.name in PARAMETRIC) != (g.theta is not None):
                raise ValueError(f"gate {i} ({g.name}) has wrong parameter {g.theta!r}")
            if g.theta is not None and not math.isfinite(g.theta):
                raise ValueError(f"gate {i} ({g.name}) has non-finite angle")
        return self

    @property
    def is_identity_layout(self) -> bool:
        return self.layout == tuple(range(self.n_qubits))

    def logical_bits(self, physical: str) -> str:
        """Reorder a measured string from physical to logical qubit order."""
        return "".join(physical[q] for q in self.layout)


@dataclass(frozen=True)
class CountReport:
    n_two_qubit: int
    n_zz_logical: int
    two_qubit_depth: int
    n_single_qubit: int | None = None

    def to_dict(self) -> dict:
        return {
            "n_two_qubit": self.n_two_qubit,
            "n_zz_logical": self.n_zz_logical,
            "two_qubit_depth": self.two_qubit_depth,
            "n_single_qubit": self.n_single_qubit,
        }


def _tally(c: Circuit) -> tuple[int, int, int]:
    """Two-qubit count, one-qubit count and two-qubit depth in one pass."""
    level = [0] * c.n_qubits
    depth = n2 = n1 = 0
    two, one = TWO_QUBIT, ONE_QUBIT
    for name, qs, _ in c.gates:
        if name in two:
            a, b = qs
            la, lb = level[a], level[b]
            d = (la if la > lb else lb) + 1
            level[a] = level[b] = d
            if d > depth:
                depth = d
            n2 += 1
        elif name in one:
            n1 += 1
    return n2, n1, depth


def two_qubit_depth(c: Circuit) -> int:
    """Number of layers of two-qubit gates with disjoint operands (ASAP layering)."""
    return _tally(c)[2]


def count_gates(c: Circuit) -> CountReport:
    n2, n1, depth = _tally(c)
    return CountReport(
        n_two_qubit=n2,
        n_zz_logical=c.n_zz,
        two_qubit_depth=depth,
        n_single_qubit=n1,
    )
