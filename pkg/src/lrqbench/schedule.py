"""Linear-ramp QAOA schedules and the default ramp scales."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .problems import Topology

# Ramp scales used for fully connected problems above 15 qubits, keyed by
# backend class and problem size.  ``None`` as size means "any n > 15".
DELTA_TABLE: dict[str, dict[int | None, float]] = {
    "ibm_fez": {None: 0.63},
    "ibm_marrakesh": {None: 0.63},
    "ibm_torino": {17: 0.4, 20: 0.3},
    "ibm_brisbane": {16: 0.5, 17: 0.4, 20: 0.3},
    "h1-1e": {20: 0.3},
    "h2-1e": {25: 0.5, 30: 0.4},
    "h2-1": {40: 0.2, 50: 0.2, 56: 0.2},
    "ionq_aria_2": {17: 0.63, 20: 0.3},
    "qasm_simulator": {20: 0.3, 25: 0.4},
}

LAYOUT_DELTA = 1.0
SMALL_FC_DELTA = 0.63
SMALL_FC_MAX_N = 15


@dataclass(frozen=True)
class RampSchedule:
    p: int
    delta_beta: float
    delta_gamma: float
    betas: tuple[float, ...]
    gammas: tuple[float, ...]

    def table(self) -> str:
        lines = [f"{'k':>4}  {'beta':>20}  {'gamma':>20}"]
        for k, (b, g) in enumerate(zip(self.betas, self.gammas)):
            lines.append(f"{k:>4}  {b:>20.17g}  {g:>20.17g}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"p": self.p, "delta_beta": self.delta_beta, "delta_gamma": self.delta_gamma}


def build_schedule(p: int, delta_beta: float = 1.0, delta_gamma: float | None = None) -> RampSchedule:
    """Linear ramp: ``beta_k = (1 - k/p) * delta_beta``, ``gamma_k = (k+1)/p * delta_gamma``.

    ``delta_gamma`` defaults to ``delta_beta``.
    """
    if delta_gamma is None:
        delta_gamma = delta_beta
    if int(p) != p or p < 1:
        raise ValueError(f"p must be a positive integer, got {p}")
    if not (delta_beta > 0 and delta_gamma > 0):
        raise ValueError("ramp scales must be positive")
    p = int(p)
    betas = tuple((p - k) / p * delta_beta for k in range(p))
    gammas = tuple((k + 1) / p * delta_gamma for k in range(p))
    return RampSchedule(p, float(delta_beta), float(delta_gamma), betas, gammas)


def _backend_key(name: str | None) -> str | None:
    if name is None:
        return None
    key = name.strip().lower()
    if key.startswith("quantinuum_"):
        key = key[len("quantinuum_"):]
    return key


def default_delta(topology: Topology, n: int, backend_class: str | None = None) -> float:
    """Ramp scale for a topology, size and backend class."""
    if topology.kind != "fully_connected":
        return LAYOUT_DELTA
    if n <= SMALL_FC_MAX_N:
        return SMALL_FC_DELTA
    row = DELTA_TABLE.get(_backend_key(backend_class), {})
    if n in row:
        return row[n]
    if None in row:
        return row[None]
    warnings.warn(
        f"no tabulated ramp scale for backend {backend_class!r} at n={n}; "
        f"falling back to {SMALL_FC_DELTA}",
        stacklevel=2,
    )
    return SMALL_FC_DELTA
