"""Circuit text formats: the neutral ``lrq-circuit`` format and OpenQASM 2.

Neutral format::

    lrq-circuit v1 nq=<n> basis=<tag> [nzz=<count>] [layout=<l0,l1,...>]
    h <q>
    rx <theta> <q>
    rzz <theta> <q1> <q2>
    ...
    measure all

Angles are written with 17 significant digits, so reading back gives the
identical doubles.  ``layout`` lists the final physical qubit of each
logical qubit and is omitted when it is the identity.  Measured strings
use character ``i`` for qubit ``i``.
"""

from __future__ import annotations

import re

from .core import BASES, ONE_QUBIT, PARAMETRIC, TWO_QUBIT, Circuit, Gate

HEADER = "lrq-circuit v1"
QASM_GATES = frozenset({"h", "rx", "rz", "cx", "cz", "measure"})


def _angle(theta: float) -> str:
    return format(theta, ".17g")


def _header_fields(c: Circuit) -> str:
    fields = [f"nq={c.n_qubits}", f"basis={c.basis}", f"nzz={c.n_zz}"]
    if not c.is_identity_layout:
        fields.append("layout=" + ",".join(map(str, c.layout)))
    return " ".join(fields)


def dumps_circuit(c: Circuit) -> str:
    lines = [f"{HEADER} {_header_fields(c)}"]
    for g in c.gates:
        if g.name == "measure":
            lines.append("measure all")
        elif g.theta is not None:
            lines.append(f"{g.name} {_angle(g.theta)} {' '.join(map(str, g.qubits))}")
        else:
            lines.append(f"{g.name} {' '.join(map(str, g.qubits))}")
    return "\n".join(lines) + "\n"


def _parse_fields(text: str) -> dict[str, str]:
    out = {}
    for tok in text.split():
        key, sep, value = tok.partition("=")
        if not sep:
            raise ValueError(f"bad header field {tok!r}")
        out[key] = value
    return out


def _make_circuit(n: int, gates: list[Gate], fields: dict[str, str]) -> Circuit:
    basis = fields.get("basis", "abstract")
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}")
    layout = None
    if "layout" in fields:
        layout = tuple(int(x) for x in fields["layout"].split(","))
    n_zz = int(fields["nzz"]) if "nzz" in fields else None
    return Circuit(n, tuple(gates), basis, layout, n_zz).validate()


def loads_circuit(text: str) -> Circuit:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(HEADER):
        raise ValueError(f"missing '{HEADER}' header")
    fields = _parse_fields(lines[0][len(HEADER):])
    if "nq" not in fields:
        raise ValueError("header lacks nq=")
    n = int(fields["nq"])
    gates = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        name = parts[0]
        try:
            if name == "measure":
                if parts[1:] != ["all"]:
                    raise ValueError("expected 'measure all'")
                gates.append(Gate("measure", ()))
            elif name in PARAMETRIC:
                theta = float(parts[1])
                gates.append(Gate(name, tuple(int(q) for q in parts[2:]), theta))
            elif name in ONE_QUBIT or name in TWO_QUBIT:
                gates.append(Gate(name, tuple(int(q) for q in parts[1:])))
            else:
                raise ValueError(f"unknown gate {name!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return _make_circuit(n, gates, fields)


def dumps_qasm(c: Circuit) -> str:
    """OpenQASM 2.0 text; only H, RX, RZ, CX, CZ and measurement are expressible."""
    for i, g in enumerate(c.gates):
        if g.name not in QASM_GATES:
            raise ValueError(
                f"gate {i} ({g.name} on {g.qubits}) is not expressible in OpenQASM 2 export; "
                f"decompose to the cx or cz basis first"
            )
    n = c.n_qubits
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"// lrq {_header_fields(c)}",
        "// classical bit c[i] is qubit i",
        f"qreg q[{n}];",
        f"creg c[{n}];",
    ]
    for g in c.gates:
        if g.name == "measure":
            lines.append("measure q -> c;")
        elif g.theta is not None:
            lines.append(f"{g.name}({_angle(g.theta)}) q[{g.qubits[0]}];")
        else:
            lines.append(f"{g.name} " + ",".join(f"q[{q}]" for q in g.qubits) + ";")
    return "\n".join(lines) + "\n"


_QASM_GATE = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(.+);$")
_QREF = re.compile(r"q\[(\d+)\]")


def loads_qasm(text: str) -> Circuit:
    """Read the OpenQASM 2 subset written by :func:`dumps_qasm`."""
    n = None
    fields: dict[str, str] = {}
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("// lrq "):
            fields = _parse_fields(line[len("// lrq "):])
            continue
        if not line or line.startswith("//") or line.startswith(("OPENQASM", "include", "creg")):
            continue
        if line.startswith("qreg"):
            n = int(re.search(r"\[(\d+)\]", line).group(1))
            continue
        if line.startswith("measure"):
            gates.append(Gate("measure", ()))
            continue
        m = _QASM_GATE.match(line)
        if m is None or m.group(1) not in QASM_GATES:
            raise ValueError(f"line {lineno}: unsupported statement {line!r}")
        name, arg, operands = m.groups()
        qubits = tuple(int(q) for q in _QREF.findall(operands))
        gates.append(Gate(name, qubits, float(arg) if arg is not None else None))
    if n is None:
        raise ValueError("no qreg declaration")
    if "basis" not in fields:
        names = {g.name for g in gates}
        fields["basis"] = "cz" if "cz" in names else "cx"
    return _make_circuit(n, gates, fields)


def export_circuit(c: Circuit, fmt: str = "lrq") -> str:
    if fmt in ("lrq", "neutral", "text"):
        return dumps_circuit(c)
    if fmt in ("qasm", "qasm2", "openqasm"):
        return dumps_qasm(c)
    raise ValueError(f"unknown circuit format {fmt!r}")


def read_circuit(text: str) -> Circuit:
    """Read either format, detected from the first line."""
    if text.lstrip().startswith("OPENQASM"):
        return loads_qasm(text)
    return loads_circuit(text)
