"""Lowering to hardware bases with peephole cancellation of inverse pairs."""

from __future__ import annotations

from typing import Iterable

from .core import Circuit, Gate, check_basis, gc_paused

SELF_INVERSE = frozenset({"h", "cx", "cz", "swap"})
SYMMETRIC = frozenset({"cz", "swap"})


def cancel_inverse_pairs(gates: Iterable[Gate], n_qubits: int) -> list[Gate]:
    """Drop adjacent pairs of identical self-inverse gates.

    Two gates are adjacent when nothing else touches their qubits in
    between.  Removing a pair re-exposes the gates before it, so cascades
    such as ``H CX CX H`` collapse completely.
    """
    out: list[Gate | None] = []
    # predecessor of each kept gate on its first and second qubit
    prev_a: list[int] = []
    prev_b: list[int] = []
    last = [-1] * n_qubits
    append, push_a, push_b = out.append, prev_a.append, prev_b.append
    self_inverse, symmetric = SELF_INVERSE, SYMMETRIC
    k = 0  # len(out)
    for g in gates:
        qs = g[1]
        if len(qs) == 2:
            a, b = qs
            j = last[a]
            jb = last[b]
            if j == jb and j >= 0 and g[0] in self_inverse:
                h = out[j]
                hq = h[1]
                if h[0] == g[0] and (hq == qs or (g[0] in symmetric and hq == (b, a))):
                    out[j] = None
                    last[hq[0]] = prev_a[j]
                    last[hq[1]] = prev_b[j]
                    continue
            last[a] = last[b] = k
            push_b(jb)
        elif qs:
            q = qs[0]
            j = last[q]
            if j >= 0 and g[0] in self_inverse and out[j] == g:
                out[j] = None
                last[q] = prev_a[j]
                continue
            last[q] = k
            push_b(-1)
        else:
            # measurement is a barrier on every qubit
            last = [k] * n_qubits
            j = -1
            push_b(-1)
        append(g)
        push_a(j)
        k += 1
    return [g for g in out if g is not None]


class _GateCache:
    """Shared instances of unparameterised gates (gates are immutable)."""

    def __init__(self) -> None:
        self._gates: dict[tuple[str, tuple[int, ...]], Gate] = {}

    def __call__(self, name: str, qubits: tuple[int, ...]) -> Gate:
        key = (name, qubits)
        g = self._gates.get(key)
        if g is None:
            g = self._gates[key] = Gate(name, qubits)
        return g


def _lower(gates: tuple[Gate, ...], blocks: set[int], keep_rzz: bool) -> list[Gate]:
    cx_cache: dict[tuple[int, ...], Gate] = {}
    out: list[Gate] = []
    append = out.append
    skip = -1
    last = len(gates) - 1
    for i, g in enumerate(gates):
        if i == skip:
            continue
        name = g[0]
        if name == "rzz" and (not keep_rzz or i in blocks):
            pair = g[1]
            c = cx_cache.get(pair)
            if c is None:
                c = cx_cache[pair] = Gate("cx", pair)
            append(c)
            append(Gate("rz", (pair[1],), g[2]))
            nxt = gates[i + 1] if i < last else None
            rev = (pair[1], pair[0])
            if nxt is not None and nxt[0] == "swap" and (nxt[1] == pair or nxt[1] == rev):
                # RZZ then SWAP: the CX closing the RZZ cancels the CX opening the SWAP
                r = cx_cache.get(rev)
                if r is None:
                    r = cx_cache[rev] = Gate("cx", rev)
                append(r)
                skip = i + 1
            append(c)
        elif name == "swap":
            pair = g[1]
            rev = (pair[1], pair[0])
            c = cx_cache.get(pair)
            if c is None:
                c = cx_cache[pair] = Gate("cx", pair)
            r = cx_cache.get(rev)
            if r is None:
                r = cx_cache[rev] = Gate("cx", rev)
            append(c)
            append(r)
            append(c)
        else:
            append(g)
    return out


def _cx_as_cz(gates: Iterable[Gate]) -> list[Gate]:
    make = _GateCache()
    out: list[Gate] = []
    append = out.append
    for g in gates:
        if g[0] == "cx":
            h = make("h", (g[1][1],))
            append(h)
            append(make("cz", g[1]))
            append(h)
        else:
            append(g)
    return out


def _feeds_swap(gates: tuple[Gate, ...], n_qubits: int) -> set[int]:
    """Indices of RZZ gates whose next gate on both qubits is a SWAP on the same pair."""
    nxt = [-1] * n_qubits
    hits = set()
    for i in range(len(gates) - 1, -1, -1):
        g = gates[i]
        if g.name == "measure":
            nxt = [i] * n_qubits
            continue
        if g.name == "rzz":
            a, b = g.qubits
            j = nxt[a]
            if j >= 0 and j == nxt[b] and gates[j].name == "swap":
                hits.add(i)
        for q in g.qubits:
            nxt[q] = i
    return hits


def decompose_to_basis(c: Circuit, basis: str) -> Circuit:
    """Rewrite an abstract or routed circuit into ``basis``.

    RZZ becomes ``CX RZ CX`` and SWAP three CX; in an RZZ-then-SWAP block
    the two middle CX cancel, leaving three two-qubit gates per block.  The
    CZ form conjugates each CX target with H.  The fractional basis keeps
    standalone RZZ native and lowers RZZ-SWAP blocks like the CZ basis.
    """
    check_basis(basis)
    if basis == c.basis:
        return c
    if basis in ("abstract", "routed"):
        if c.basis == "abstract" and basis == "routed":
            return Circuit(c.n_qubits, c.gates, "routed", c.layout, c.n_zz)
        raise ValueError(f"cannot rewrite a {c.basis} circuit into {basis}")
    if c.basis not in ("abstract", "routed", "cx"):
        raise ValueError(f"cannot rewrite a {c.basis} circuit into {basis}")

    keep_rzz = basis == "fractional"
    with gc_paused():
        blocks = _feeds_swap(c.gates, c.n_qubits) if keep_rzz else set()
        return finish_lowering(_lower(c.gates, blocks, keep_rzz), c.n_qubits, basis, c.layout, c.n_zz)


def finish_lowering(
    gates: list[Gate], n_qubits: int, basis: str, layout: tuple[int, ...] | None, n_zz: int | None
) -> Circuit:
    """Cancel inverse pairs in a CX-lowered gate list and convert to ``basis``."""
    gates = cancel_inverse_pairs(gates, n_qubits)
    if basis in ("cz", "fractional"):
        gates = cancel_inverse_pairs(_cx_as_cz(gates), n_qubits)
    return Circuit(n_qubits, tuple(gates), basis, layout, n_zz)
