"""LR-QAOA circuit construction.

Angle convention: the cost layer ``exp(-i gamma H_C)`` with
``H_C = sum w_ij Z_i Z_j`` becomes ``RZZ(2 gamma w_ij)`` per edge, where
``RZZ(t) = exp(-i t/2 Z Z)``.  The mixer is ``exp(+i beta sum X_i)``, i.e.
``RX(-2 beta)`` per qubit with ``RX(t) = exp(-i t/2 X)``, so that the
initial ``|+...+>`` is the ground state of the driver ``-sum X_i`` and the
ramp anneals towards the minimum of ``H_C``, which is the maximum cut.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import networkx as nx

from ..problems import ProblemInstance, WeightedGraph
from ..schedule import RampSchedule
from .core import MEASURE_ALL, Circuit, Gate, check_basis, gc_paused
from .decompose import finish_lowering

Edge = tuple[int, int]


def _round_robin(n: int) -> list[list[Edge]]:
    # circle method; a phantom node pads odd n
    m = n + (n % 2)
    others = list(range(1, m))
    rounds = []
    for _ in range(m - 1):
        ring = [0] + others
        pairs = [(ring[i], ring[m - 1 - i]) for i in range(m // 2)]
        rounds.append(sorted((min(a, b), max(a, b)) for a, b in pairs if max(a, b) < n))
        others = others[-1:] + others[:-1]
    return rounds


def _bipartite_coloring(n: int, edges: Sequence[Edge]) -> dict[Edge, int]:
    """Proper edge colouring with max-degree colours (alternating-path method)."""
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    ncol = max(degree)
    at: list[dict[int, int]] = [{} for _ in range(n)]
    color: dict[Edge, int] = {}
    for u, v in edges:
        a = next(c for c in range(ncol) if c not in at[u])
        if a in at[v]:
            b = next(c for c in range(ncol) if c not in at[v])
            path = []
            x, cur = v, a
            while cur in at[x]:
                y = at[x][cur]
                path.append((x, y, cur))
                x, cur = y, (b if cur == a else a)
            for x, y, c in path:
                del at[x][c], at[y][c]
            for x, y, c in path:
                c = b if c == a else a
                at[x][c], at[y][c] = y, x
                color[(min(x, y), max(x, y))] = c
        at[u][a], at[v][a] = v, u
        color[(u, v)] = a
    return color


def _greedy_coloring(edges: Sequence[Edge]) -> dict[Edge, int]:
    used: dict[int, set[int]] = {}
    color = {}
    for u, v in edges:
        taken = used.setdefault(u, set()) | used.setdefault(v, set())
        c = next(c for c in range(len(edges) + 1) if c not in taken)
        color[(u, v)] = c
        used[u].add(c)
        used[v].add(c)
    return color


def edge_layers(n: int, edges: Sequence[Edge]) -> list[list[Edge]]:
    """Split edges into groups of pairwise disjoint edges.

    Bipartite graphs get exactly max-degree groups, complete graphs the
    round-robin schedule, anything else a greedy colouring.  Each group is
    in canonical order.
    """
    edges = sorted(edges)
    if not edges:
        return []
    if len(edges) == n * (n - 1) // 2:
        return _round_robin(n)
    g = nx.Graph(edges)
    color = _bipartite_coloring(n, edges) if nx.is_bipartite(g) else _greedy_coloring(edges)
    groups: dict[int, list[Edge]] = {}
    for e in edges:
        groups.setdefault(color[e], []).append(e)
    return [groups[c] for c in sorted(groups)]


@lru_cache(maxsize=64)
def zz_order(graph: WeightedGraph) -> tuple[tuple[int, int, float], ...]:
    """Edges of one cost layer, ordered group by group."""
    weights = {(u, v): w for u, v, w in graph.edges}
    layers = edge_layers(graph.n_nodes, list(weights))
    return tuple((u, v, weights[(u, v)]) for layer in layers for u, v in layer)


def build_lr_qaoa(instance: ProblemInstance, schedule: RampSchedule) -> Circuit:
    """Direct LR-QAOA circuit in the abstract ZZ basis."""
    n = instance.n
    order = zz_order(instance.graph)
    gates = [Gate("h", (q,)) for q in range(n)]
    for beta, gamma in zip(schedule.betas, schedule.gammas):
        gates.extend(Gate("rzz", (u, v), 2.0 * gamma * w) for u, v, w in order)
        theta = -2.0 * beta
        gates.extend(Gate("rx", (q,), theta) for q in range(n))
    gates.append(MEASURE_ALL)
    return Circuit(n, tuple(gates), "abstract")


def network_pairs(n: int) -> list[list[int]]:
    """Line positions ``i`` whose pair ``(i, i+1)`` acts in each odd-even round."""
    return [list(range(r % 2, n - 1, 2)) for r in range(n)]


def transpile_swap_network(
    instance: ProblemInstance,
    schedule: RampSchedule,
    chain_order: Sequence[int] | None = None,
    basis: str = "routed",
) -> Circuit:
    """Route a fully connected LR-QAOA circuit onto a line of qubits.

    ``chain_order[i]`` is the physical qubit at line position ``i``; logical
    qubit ``q`` starts on physical qubit ``q``.  Every cost layer is one pass
    of the odd-even transposition network (``n`` rounds), which reverses the
    line order; the next layer continues from the reversed placement.
    """
    if instance.topology.kind != "fully_connected":
        raise ValueError(
            f"swap-network routing is for fully connected instances; "
            f"use build_lr_qaoa for {instance.topology.kind} topologies"
        )
    n = instance.n
    chain = list(range(n)) if chain_order is None else [int(q) for q in chain_order]
    if sorted(chain) != list(range(n)):
        raise ValueError("chain_order must be a permutation of the qubits")
    weight = {}
    for u, v, w in instance.graph.edges:
        weight[(u, v)] = weight[(v, u)] = w

    check_basis(basis)
    if basis == "abstract":
        raise ValueError("routed circuits contain SWAP gates; use basis 'routed' or a hardware basis")
    fused = basis != "routed"
    with gc_paused():
        gates, layout = _route(n, chain, weight, schedule, fused)
        n_zz = len(schedule.betas) * n * (n - 1) // 2
        if fused:
            return finish_lowering(gates, n, basis, layout, n_zz)
        return Circuit(n, tuple(gates), "routed", layout, n_zz)


def _route(
    n: int, chain: list[int], weight: dict, schedule: RampSchedule, fused: bool
) -> tuple[list[Gate], tuple[int, ...]]:
    """Gate list and final layout of the network.

    With ``fused`` each RZZ-then-SWAP block is emitted already lowered to
    ``CX(a,b) RZ(b) CX(b,a) CX(a,b)``, exactly what
    :func:`decompose_to_basis` produces from the unfused form.
    """
    resident = list(chain)
    rounds = network_pairs(n)
    pairs = [(chain[i], chain[i + 1]) for i in range(n - 1)]
    swaps = [Gate("swap", pair) for pair in pairs]
    fwd = [Gate("cx", pair) for pair in pairs]
    rev = [Gate("cx", (pair[1], pair[0])) for pair in pairs]
    gates = [Gate("h", (q,)) for q in range(n)]
    append = gates.append
    for beta, gamma in zip(schedule.betas, schedule.gammas):
        scale = 2.0 * gamma
        for positions in rounds:
            for i in positions:
                a, b = resident[i], resident[i + 1]
                theta = scale * weight[(a, b)]
                if fused:
                    append(fwd[i])
                    append(Gate("rz", (pairs[i][1],), theta))
                    append(rev[i])
                    append(fwd[i])
                else:
                    append(Gate("rzz", pairs[i], theta))
                    append(swaps[i])
                resident[i], resident[i + 1] = b, a
        theta = -2.0 * beta
        gates.extend(Gate("rx", (q,), theta) for q in range(n))
    gates.append(MEASURE_ALL)

    layout = [0] * n
    for i, logical in enumerate(resident):
        layout[logical] = chain[i]
    return gates, tuple(layout)
