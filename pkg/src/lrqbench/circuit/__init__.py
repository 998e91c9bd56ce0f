from .build import build_lr_qaoa, edge_layers, network_pairs, transpile_swap_network
from .core import BASES, MEASURE_ALL, Circuit, CountReport, Gate, count_gates, two_qubit_depth
from .counts import predicted_counts
from .decompose import cancel_inverse_pairs, decompose_to_basis
from .io import dumps_circuit, dumps_qasm, export_circuit, loads_circuit, loads_qasm, read_circuit

__all__ = [
    "BASES",
    "MEASURE_ALL",
    "Circuit",
    "CountReport",
    "Gate",
    "build_lr_qaoa",
    "cancel_inverse_pairs",
    "count_gates",
    "decompose_to_basis",
    "dumps_circuit",
    "dumps_qasm",
    "edge_layers",
    "export_circuit",
    "loads_circuit",
    "loads_qasm",
    "network_pairs",
    "predicted_counts",
    "read_circuit",
    "transpile_swap_network",
    "two_qubit_depth",
]
