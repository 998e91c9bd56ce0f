"""Closed-form cost and runtime estimators."""

from __future__ import annotations

from dataclasses import asdict, dataclass

DEVICE_CLASSES = ("parallel", "sequential")
_DEVICE_ALIASES = {
    "fixed-layout": "parallel",
    "fixed_layout": "parallel",
    "superconducting": "parallel",
    "ion-trap": "sequential",
    "ion_trap": "sequential",
    "trapped-ion": "sequential",
}


def _positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")


def hqc_estimate(n: int, p: int, shots: int) -> float:
    """Hardware quantum cost of one fully connected LR-QAOA job.

    ``HQC = 5 + (N_1q + 10 N_2q + 5 n) * shots / 5000`` with
    ``N_2q = p n (n-1) / 2`` logical ZZ gates and ``N_1q = p n + n``
    (one RX per qubit per layer plus the initial Hadamards).

    The formula is implemented as written: ``hqc_estimate(50, 3, 50)`` is
    377, although a figure of 472 circulates for that job.
    """
    _positive(n=n, p=p, shots=shots)
    n_2q = p * n * (n - 1) / 2
    n_1q = p * n + n
    return 5.0 + (n_1q + 10.0 * n_2q + 5.0 * n) * shots / 5000.0


@dataclass(frozen=True)
class CostEstimate:
    hqc: float
    runtime_parallel: float
    runtime_sequential: float
    device_class: str = "parallel"

    @property
    def runtime(self) -> float:
        if self.device_class == "sequential":
            return self.runtime_sequential
        return self.runtime_parallel

    def to_dict(self) -> dict:
        return asdict(self)


def device_class(tag: str) -> str:
    key = tag.strip().lower()
    key = _DEVICE_ALIASES.get(key, key)
    if key not in DEVICE_CLASSES:
        raise ValueError(f"unknown device class {tag!r}; expected one of {DEVICE_CLASSES}")
    return key


def runtime_projection(
    n: int, p: int, shots: int, t_2q: float, device_class_tag: str = "parallel"
) -> CostEstimate:
    """Cumulative two-qubit gate time for a fully connected problem.

    The parallel model charges the routed depth ``3 p n`` per shot; the
    sequential model charges every logical ZZ gate ``p n (n-1) / 2``.
    """
    _positive(n=n, p=p, shots=shots, t_2q=t_2q)
    cls = device_class(device_class_tag)
    parallel = 3 * p * n * t_2q * shots
    sequential = p * n * (n - 1) / 2 * t_2q * shots
    return CostEstimate(hqc_estimate(n, p, shots), parallel, sequential, cls)
