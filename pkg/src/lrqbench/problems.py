"""Weighted MaxCut instances on benchmark topologies.

Bit convention used throughout the package: bit ``i`` of a bitstring is the
partition label of node ``i``.  As text, character ``i`` of the string is
node ``i`` (node 0 first, highest node last).  As an integer basis index,
bit ``i`` (``(k >> i) & 1``) is node ``i``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Sequence

import networkx as nx
import numpy as np

from .layouts import (
    GARNET_COUPLINGS,
    HEAVY_HEX_TEMPLATES,
    heavy_hex_for_size,
    heavy_hex_template,
    square_grid,
)

DEFAULT_WEIGHTS: tuple[float, ...] = (0.1, 0.2, 0.3, 0.5, 1.0)
BRUTE_FORCE_CAP = 26
INSTANCE_FORMAT_VERSION = 1
BIT_ORDER = "char i = node i (node 0 first)"

Edge = tuple[int, int]
WeightedEdge = tuple[int, int, float]


class OptimumUnavailable(ValueError):
    """Raised when no exact optimum can be computed for an instance."""


@dataclass(frozen=True)
class Topology:
    """Graph family an instance is drawn from.

    ``kind`` is one of ``chain``, ``heavy_hex``, ``square_grid``,
    ``fully_connected`` or ``custom``.
    """

    kind: str
    template: str | None = None
    rows: int | None = None
    cols: int | None = None
    couplings: tuple[Edge, ...] | None = None

    KINDS = ("chain", "heavy_hex", "square_grid", "fully_connected", "custom")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown topology kind {self.kind!r}; expected one of {self.KINDS}")
        if self.kind == "square_grid" and (not self.rows or not self.cols):
            raise ValueError("square_grid topology needs rows and cols")
        if self.kind == "custom":
            if not self.couplings:
                raise ValueError("custom topology needs a non-empty coupling list")
            object.__setattr__(
                self, "couplings", tuple(sorted({_ordered(u, v) for u, v in self.couplings}))
            )

    @classmethod
    def chain(cls) -> Topology:
        return cls("chain")

    @classmethod
    def fully_connected(cls) -> Topology:
        return cls("fully_connected")

    @classmethod
    def heavy_hex(cls, template: str | None = None) -> Topology:
        if template is not None:
            template = heavy_hex_template(template).name
        return cls("heavy_hex", template=template)

    @classmethod
    def square_grid(cls, rows: int, cols: int) -> Topology:
        return cls("square_grid", rows=rows, cols=cols)

    @classmethod
    def custom(cls, couplings: Iterable[Sequence[int]]) -> Topology:
        return cls("custom", couplings=tuple((int(u), int(v)) for u, v in couplings))

    @classmethod
    def parse(cls, text: str) -> Topology:
        """Parse CLI spellings: ``chain``, ``fc``, ``heavy_hex[:eagle]``, ``grid:4x5``, ``garnet``."""
        name, _, arg = text.partition(":")
        name = name.lower().replace("-", "_")
        if name in ("chain", "1d", "line"):
            return cls.chain()
        if name in ("fc", "fully_connected", "full"):
            return cls.fully_connected()
        if name in ("heavy_hex", "hh", "nl"):
            return cls.heavy_hex(arg or None)
        if name in ("grid", "square", "square_grid"):
            rows, _, cols = arg.lower().partition("x")
            return cls.square_grid(int(rows), int(cols))
        if name in ("garnet", "iqm_garnet"):
            return cls.custom(GARNET_COUPLINGS)
        raise ValueError(f"cannot parse topology {text!r}")

    @property
    def is_native_layout(self) -> bool:
        return self.kind in ("heavy_hex", "square_grid", "custom")

    def valid_sizes(self) -> list[int] | None:
        if self.kind == "heavy_hex":
            if self.template is not None:
                return [heavy_hex_template(self.template).n_qubits]
            return sorted(t.n_qubits for t in HEAVY_HEX_TEMPLATES.values())
        if self.kind == "square_grid":
            return [self.rows * self.cols]
        if self.kind == "custom":
            return [max(max(e) for e in self.couplings) + 1]
        return None

    def edges(self, n: int) -> list[Edge]:
        """Canonical (sorted) coupling list for ``n`` nodes."""
        if n < 2:
            raise ValueError(f"need at least 2 nodes, got {n}")
        sizes = self.valid_sizes()
        if sizes is not None and n not in sizes:
            raise ValueError(
                f"size mismatch: {self.kind} topology admits n in {sizes}, got {n}"
            )
        if self.kind == "chain":
            return [(i, i + 1) for i in range(n - 1)]
        if self.kind == "fully_connected":
            return [(i, j) for i in range(n) for j in range(i + 1, n)]
        if self.kind == "heavy_hex":
            t = heavy_hex_template(self.template) if self.template else heavy_hex_for_size(n)
            return t.couplings()
        if self.kind == "square_grid":
            return square_grid(self.rows, self.cols)
        return list(self.couplings)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind}
        if self.template is not None:
            d["template"] = self.template
        if self.kind == "square_grid":
            d["rows"], d["cols"] = self.rows, self.cols
        if self.kind == "custom":
            d["couplings"] = [list(e) for e in self.couplings]
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Topology:
        kind = d["kind"]
        if kind == "custom":
            return cls.custom(d["couplings"])
        if kind == "heavy_hex":
            return cls.heavy_hex(d.get("template"))
        return cls(kind, rows=d.get("rows"), cols=d.get("cols"))


def _ordered(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop on node {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    n_nodes: int
    edges: tuple[WeightedEdge, ...]

    def __post_init__(self) -> None:
        seen = set()
        prev = None
        for u, v, w in self.edges:
            if not 0 <= u < v < self.n_nodes:
                raise ValueError(f"edge ({u}, {v}) violates 0 <= u < v < {self.n_nodes}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            if not w > 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            if prev is not None and (u, v) < prev:
                raise ValueError("edges must be in canonical (sorted) order")
            seen.add((u, v))
            prev = (u, v)

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable[Sequence[float]]) -> WeightedGraph:
        """Build from edges in any order/orientation."""
        canon = sorted((*_ordered(int(u), int(v)), float(w)) for u, v, w in edges)
        return cls(n_nodes, tuple(canon))

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0)
        u, v, w = zip(*self.edges)
        return np.array(u, dtype=np.int64), np.array(v, dtype=np.int64), np.array(w, dtype=float)

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_nodes))
        g.add_weighted_edges_from(self.edges)
        return g

    def is_bipartite(self) -> bool:
        return nx.is_bipartite(self.to_networkx())


@dataclass(frozen=True)
class ProblemInstance:
    graph: WeightedGraph
    topology: Topology
    seed: int
    weight_set: tuple[float, ...] = DEFAULT_WEIGHTS
    optimum: tuple[str, float] | None = field(default=None, compare=True)

    def __post_init__(self) -> None:
        allowed = set(self.weight_set)
        for u, v, w in self.graph.edges:
            if w not in allowed:
                raise ValueError(f"edge ({u}, {v}) weight {w} not in weight set {self.weight_set}")
        if self.optimum is not None and len(self.optimum[0]) != self.n:
            raise ValueError("optimum bitstring length does not match n")

    @property
    def n(self) -> int:
        return self.graph.n_nodes

    @property
    def n_edges(self) -> int:
        return len(self.graph.edges)

    def with_optimum(self, **kwargs) -> ProblemInstance:
        """Copy with ``optimum`` filled in by :func:`exact_optimum` (no-op if present)."""
        if self.optimum is not None:
            return self
        return replace(self, optimum=exact_optimum(self, **kwargs))

    @property
    def optimal_value(self) -> float:
        if self.optimum is None:
            raise OptimumUnavailable(
                "instance has no optimum; call with_optimum() or supply a known optimum"
            )
        return self.optimum[1]


def generate_instance(
    topology: Topology,
    n: int,
    weight_set: Sequence[float] = DEFAULT_WEIGHTS,
    seed: int = 0,
) -> ProblemInstance:
    """Draw a Weighted MaxCut instance with weights uniform over ``weight_set``.

    Weights are assigned in canonical edge order from a PCG64 stream seeded
    with ``seed``, one integer draw per edge.
    """
    weight_set = tuple(float(w) for w in weight_set)
    if not weight_set or any(w <= 0 for w in weight_set):
        raise ValueError("weight_set must be non-empty and strictly positive")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    edges = topology.edges(n)
    rng = np.random.Generator(np.random.PCG64(seed))
    picks = rng.integers(0, len(weight_set), size=len(edges))
    graph = WeightedGraph(n, tuple((u, v, weight_set[i]) for (u, v), i in zip(edges, picks)))
    return ProblemInstance(graph, topology, seed, weight_set)


# --- cost evaluation -------------------------------------------------------


def as_bits(x: str | Sequence[int] | np.ndarray, n: int | None = None) -> np.ndarray:
    if isinstance(x, str):
        if set(x) - {"0", "1"}:
            raise ValueError(f"bitstring {x!r} has non-binary characters")
        bits = np.frombuffer(x.encode(), dtype=np.uint8) - ord("0")
    else:
        bits = np.asarray(x, dtype=np.uint8)
    if n is not None and bits.shape[-1] != n:
        raise ValueError(f"bitstring length {bits.shape[-1]} does not match {n} nodes")
    return bits


def bits_to_str(bits: Sequence[int] | np.ndarray) -> str:
    return "".join("1" if b else "0" for b in bits)


def index_to_str(k: int, n: int) -> str:
    return np.binary_repr(int(k), width=n)[::-1]


def cost(instance: ProblemInstance | WeightedGraph, x) -> float:
    """Weighted cut value of partition ``x``."""
    graph = instance.graph if isinstance(instance, ProblemInstance) else instance
    bits = as_bits(x, graph.n_nodes)
    total = 0.0
    for u, v, w in graph.edges:
        total += w * (int(bits[u]) + int(bits[v]) - 2 * int(bits[u]) * int(bits[v]))
    return total


def batch_cost(graph: WeightedGraph, bits: np.ndarray) -> np.ndarray:
    """Cut values for a ``(..., n)`` array of 0/1 rows."""
    u, v, w = graph.arrays
    cut = np.bitwise_xor(bits[..., u], bits[..., v])
    return cut @ w


def cut_table(graph: WeightedGraph, fix_last: bool = False) -> np.ndarray:
    """Cut value of every basis index, bit ``i`` of the index being node ``i``.

    Built one node at a time: appending node ``j`` adds
    ``sum_{i<j} w_ij * (x_i xor x_j)``, so the whole table costs
    ``O(n 2^n)``.  With ``fix_last`` the last node is pinned to 0 and only
    ``2^(n-1)`` entries are returned (complement symmetry).
    """
    n = graph.n_nodes
    back: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for u, v, w in graph.edges:
        back[v].append((u, w))
    table = np.zeros(1)
    for j in range(n):
        size = table.size
        # s[k] = sum of w_ij * x_i over earlier neighbours i of j
        s = np.zeros(size)
        if back[j]:
            idx = np.arange(size, dtype=np.int64)
            for i, w in back[j]:
                s += w * ((idx >> i) & 1)
        if fix_last and j == n - 1:
            return table + s
        total = sum(w for _, w in back[j])
        table = np.concatenate([table + s, table + (total - s)])
    return table


def is_bipartite(instance: ProblemInstance) -> bool:
    return instance.graph.is_bipartite()


def _two_coloring(graph: WeightedGraph) -> str:
    colors = nx.bipartite.color(graph.to_networkx())
    bits = [colors[i] for i in range(graph.n_nodes)]
    if bits and bits[0] == 1:
        bits = [1 - b for b in bits]
    return bits_to_str(bits)


def exact_optimum(
    instance: ProblemInstance,
    cap: int = BRUTE_FORCE_CAP,
    method: str = "auto",
) -> tuple[str, float]:
    """Maximum weighted cut as ``(bitstring, value)``.

    ``method`` is ``auto`` (bipartite fast path, else brute force),
    ``bipartite`` or ``brute``.
    """
    if method not in ("auto", "bipartite", "brute"):
        raise ValueError(f"unknown method {method!r}")
    graph = instance.graph
    bipartite = method != "brute" and graph.is_bipartite()
    if method == "bipartite" and not bipartite:
        raise OptimumUnavailable("graph is not bipartite")
    if bipartite:
        bits = _two_coloring(graph)
        return bits, cost(graph, bits)
    if graph.n_nodes > cap:
        raise OptimumUnavailable(
            f"optimum unavailable; supply known optimum (non-bipartite graph with "
            f"n={graph.n_nodes} exceeds brute-force cap {cap})"
        )
    table = cut_table(graph, fix_last=True)
    best = index_to_str(int(np.argmax(table)), graph.n_nodes)
    return best, cost(graph, best)


# --- instance files --------------------------------------------------------


def instance_to_dict(instance: ProblemInstance) -> dict[str, Any]:
    opt = None
    if instance.optimum is not None:
        opt = {"bits": instance.optimum[0], "value": instance.optimum[1]}
    return {
        "version": INSTANCE_FORMAT_VERSION,
        "bit_order": BIT_ORDER,
        "topology": instance.topology.to_dict(),
        "n": instance.n,
        "seed": instance.seed,
        "weight_set": list(instance.weight_set),
        "edges": [[u, v, w] for u, v, w in instance.graph.edges],
        "optimum": opt,
    }


def instance_from_dict(d: dict[str, Any]) -> ProblemInstance:
    if d.get("version") != INSTANCE_FORMAT_VERSION:
        raise ValueError(f"unsupported instance version {d.get('version')!r}")
    graph = WeightedGraph.from_edges(int(d["n"]), d["edges"])
    opt = d.get("optimum")
    optimum = None if opt is None else (str(opt["bits"]), float(opt["value"]))
    return ProblemInstance(
        graph=graph,
        topology=Topology.from_dict(d["topology"]),
        seed=int(d["seed"]),
        weight_set=tuple(float(w) for w in d["weight_set"]),
        optimum=optimum,
    )


def dumps_instance(instance: ProblemInstance) -> str:
    return json.dumps(instance_to_dict(instance), indent=1) + "\n"


def loads_instance(text: str) -> ProblemInstance:
    return instance_from_dict(json.loads(text))


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def save_instance(instance: ProblemInstance, path: str | os.PathLike) -> None:
    atomic_write(path, dumps_instance(instance))


def load_instance(path: str | os.PathLike) -> ProblemInstance:
    return loads_instance(Path(path).read_text(encoding="utf-8"))
