"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def rx(theta):
    return math.cos(theta / 2) * I2 - 1j * math.sin(theta / 2) * X


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def embed(op, q, n):
    """Full matrix of a one-qubit ``op`` on qubit ``q`` (qubit 0 = least significant)."""
    mats = [op if k == q else I2 for k in reversed(range(n))]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def bit(k, q):
    return (k >> q) & 1


def two_qubit_matrix(name, a, b, n, theta=None):
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        ba, bb = bit(k, a), bit(k, b)
        if name == "rzz":
            m[k, k] = np.exp(-0.5j * theta * (1 if ba == bb else -1))
        elif name == "cz":
            m[k, k] = -1 if ba and bb else 1
        elif name == "cx":
            m[k ^ (ba << b), k] = 1
        elif name == "swap":
            j = k & ~((1 << a) | (1 << b)) | (bb << a) | (ba << b)
            m[j, k] = 1
        else:
            raise ValueError(name)
    return m


def dense_state(circuit):
    n = circuit.n_qubits
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    for name, qs, theta in circuit.gates:
        if name == "measure":
            continue
        if name == "h":
            psi = embed(H, qs[0], n) @ psi
        elif name == "rx":
            psi = embed(rx(theta), qs[0], n) @ psi
        elif name == "rz":
            psi = embed(rz(theta), qs[0], n) @ psi
        else:
            psi = two_qubit_matrix(name, qs[0], qs[1], n, theta) @ psi
    return psi


def permute_to_logical(psi, layout):
    """Amplitudes indexed by logical bits, logical ``l`` read from physical ``layout[l]``."""
    n = len(layout)
    out = np.zeros_like(psi)
    for k in range(1 << n):
        logical = sum(bit(k, layout[l]) << l for l in range(n))
        out[logical] = psi[k]
    return out


def max_phase_deviation(a, b):
    phase = np.vdot(a, b)
    phase = phase / abs(phase)
    return float(np.max(np.abs(a * phase - b)))


def cut_value(edges, bits):
    return sum(w for u, v, w in edges if bits[u] != bits[v])


def enumerate_maxcut(n, edges):
    best = -1.0
    for bits in itertools.product((0, 1), repeat=n):
        best = max(best, cut_value(edges, bits))
    return best


def trace_pairs(c, n):
    """Follow SWAPs and collect the logical pair and angle of every RZZ, per layer."""
    where = list(range(n))  # physical -> logical
    layers, current = [], []
    for g in c.gates:
        if g.name == "rzz":
            a, b = g.qubits
            current.append((frozenset((where[a], where[b])), g.theta))
        elif g.name == "swap":
            a, b = g.qubits
            where[a], where[b] = where[b], where[a]
        elif g.name == "rx" and current:
            layers.append(current)
            current = []
    return layers, where
