"""Built-in device coupling maps.

Heavy-hex layouts are rows of linearly coupled qubits joined by bridge
qubits every four columns, with bridge columns alternating between rows.
Qubits are numbered row by row, each row followed by the bridge qubits
below it, which reproduces the standard IBM numbering.
"""

from __future__ import annotations

from dataclasses import dataclass

Edge = tuple[int, int]


@dataclass(frozen=True)
class HeavyHexTemplate:
    name: str
    row_lengths: tuple[int, ...]
    row_offsets: tuple[int, ...]
    bridge_columns: tuple[tuple[int, ...], ...]
    # a trailing group of bridge qubits hanging off the last row
    trailing_bridges: tuple[int, ...] = ()

    def couplings(self) -> list[Edge]:
        return _heavy_hex(self)

    @property
    def n_qubits(self) -> int:
        return (
            sum(self.row_lengths)
            + sum(len(b) for b in self.bridge_columns)
            + len(self.trailing_bridges)
        )


def _heavy_hex(t: HeavyHexTemplate) -> list[Edge]:
    edges: list[Edge] = []
    index = 0
    # column -> qubit index, per row
    rows: list[dict[int, int]] = []
    bridges: list[list[tuple[int, int]]] = []
    for r, (length, offset) in enumerate(zip(t.row_lengths, t.row_offsets)):
        row = {}
        for c in range(offset, offset + length):
            row[c] = index
            index += 1
        rows.append(row)
        cols = t.bridge_columns[r] if r < len(t.bridge_columns) else t.trailing_bridges
        group = []
        for c in cols:
            group.append((c, index))
            index += 1
        bridges.append(group)

    for row in rows:
        cols = sorted(row)
        edges.extend((row[a], row[b]) for a, b in zip(cols, cols[1:]))
    for r, group in enumerate(bridges):
        for c, q in group:
            edges.append((rows[r][c], q))
            if r + 1 < len(rows):
                edges.append((q, rows[r + 1][c]))
    return sorted((min(u, v), max(u, v)) for u, v in edges)


_EVEN = (0, 4, 8, 12)
_ODD = (2, 6, 10, 14)

HEAVY_HEX_TEMPLATES: dict[str, HeavyHexTemplate] = {
    # Eagle r3, 127 qubits / 144 couplers
    "eagle": HeavyHexTemplate(
        name="eagle",
        row_lengths=(14, 15, 15, 15, 15, 15, 14),
        row_offsets=(0, 0, 0, 0, 0, 0, 1),
        bridge_columns=(_EVEN, _ODD, _EVEN, _ODD, _EVEN, _ODD),
    ),
    # Heron r1, 133 qubits / 150 couplers
    "heron_r1": HeavyHexTemplate(
        name="heron_r1",
        row_lengths=(15,) * 7,
        row_offsets=(0,) * 7,
        bridge_columns=(_ODD, _EVEN, _ODD, _EVEN, _ODD, _EVEN),
        trailing_bridges=_ODD,
    ),
    # Heron r2, 156 qubits / 176 couplers
    "heron_r2": HeavyHexTemplate(
        name="heron_r2",
        row_lengths=(16,) * 8,
        row_offsets=(0,) * 8,
        bridge_columns=((3, 7, 11, 15), (1, 5, 9, 13)) * 3 + ((3, 7, 11, 15),),
    ),
}

_ALIASES = {
    "eagle-127": "eagle",
    "127": "eagle",
    "heron-r1": "heron_r1",
    "heron-133": "heron_r1",
    "133": "heron_r1",
    "heron-r2": "heron_r2",
    "heron-156": "heron_r2",
    "156": "heron_r2",
}


def heavy_hex_template(name: str) -> HeavyHexTemplate:
    key = name.lower().replace(" ", "")
    key = _ALIASES.get(key, key)
    try:
        return HEAVY_HEX_TEMPLATES[key]
    except KeyError:
        raise ValueError(
            f"unknown heavy-hex template {name!r}; "
            f"available: {sorted(HEAVY_HEX_TEMPLATES)}"
        ) from None


def heavy_hex_for_size(n: int) -> HeavyHexTemplate:
    for t in HEAVY_HEX_TEMPLATES.values():
        if t.n_qubits == n:
            return t
    sizes = sorted(t.n_qubits for t in HEAVY_HEX_TEMPLATES.values())
    raise ValueError(f"size mismatch: heavy-hex templates exist for n in {sizes}, got {n}")


def square_grid(rows: int, cols: int) -> list[Edge]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return sorted(edges)


# IQM Garnet: 20 qubits on a patch of the square lattice, 30 couplers
# (QB1..QB20 renumbered from zero)
GARNET_COUPLINGS: tuple[Edge, ...] = tuple(
    (u - 1, v - 1)
    for u, v in (
        (1, 2), (1, 4), (2, 5), (3, 4), (3, 8), (4, 5), (4, 9), (5, 6), (5, 10), (6, 7),
        (6, 11), (7, 12), (8, 9), (8, 13), (9, 10), (9, 14), (10, 11), (10, 15), (11, 12),
        (11, 16), (12, 17), (13, 14), (14, 15), (14, 18), (15, 16), (15, 19), (16, 17),
        (16, 20), (18, 19), (19, 20),
    )
)
