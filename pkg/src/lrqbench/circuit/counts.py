"""Closed-form gate counts and two-qubit depths for LR-QAOA circuits."""

from __future__ import annotations

import math

import networkx as nx

from ..problems import Topology
from .core import CountReport

# two-qubit gates per logical ZZ, relative to one native ZZ gate
_FACTOR = {"abstract": 1, "fractional": 1, "cz": 2, "cx": 2, "iswap": 4}


def _max_degree(topology: Topology, n: int) -> int:
    if topology.kind == "heavy_hex":
        return 3
    if topology.kind == "square_grid":
        g = nx.grid_2d_graph(topology.rows, topology.cols)
    else:
        g = nx.Graph(topology.edges(n))
    return max(d for _, d in g.degree())


def predicted_counts(
    topology: Topology,
    basis: str,
    p: int,
    n: int,
    n_edges: int | None = None,
    routed: bool | None = None,
) -> CountReport:
    """Expected two-qubit gate count and depth for ``p`` layers.

    ``basis`` is one of ``abstract``, ``fractional``, ``cz``, ``cx`` or
    ``iswap`` (count-only).  For fully connected problems ``routed`` selects
    the line SWAP network (default for ``cz``/``cx``/``iswap``) or native
    all-to-all connectivity.

    Native-layout depth is ``factor * p * max_degree``: ``6p`` on heavy-hex
    and ``8p`` on square lattices with interior qubits.  The all-to-all depth
    ``p n (n-1) / 8`` is quoted as published (rounded up), not derived from a
    schedule.
    """
    if basis not in _FACTOR and basis != "routed":
        raise ValueError(f"unknown basis {basis!r}")
    if n_edges is None:
        n_edges = len(topology.edges(n))
    n_1q = n + p * n if basis in ("abstract", "fractional") else None

    if topology.kind == "fully_connected":
        n_zz = p * n * (n - 1) // 2
        if routed is None:
            routed = basis not in ("abstract", "fractional")
        if routed:
            if basis == "routed":
                # RZZ and SWAP kept as separate gates
                return CountReport(2 * n_zz, n_zz, 2 * p * n, n + p * n)
            # RZZ-SWAP blocks cost three CNOT-equivalents in every gate-based
            # basis; native RZZ does not help because SWAP still needs three
            factor = 2 if basis == "iswap" else 1
            return CountReport(3 * n_zz * factor, n_zz, 3 * p * n * factor, None)
        if basis == "routed":
            raise ValueError("routed basis needs routed=True")
        f = _FACTOR[basis]
        return CountReport(f * n_zz, n_zz, f * math.ceil(p * n * (n - 1) / 8), n_1q)

    if basis == "routed":
        raise ValueError("routed basis applies to fully connected problems only")
    f = _FACTOR[basis]
    n_zz = p * n_edges
    if topology.kind == "chain":
        colors = 2 if n > 2 else 1
    else:
        colors = _max_degree(topology, n)
    return CountReport(f * n_zz, n_zz, f * p * colors, n_1q)
