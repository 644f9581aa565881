"""OpenQASM 2.0 export of basic-gate circuits, and re-import of that output."""

from __future__ import annotations

import re

import numpy as np

from .circuit import Circuit, CircuitError, Gate, cnot
from .matlin import zyz_angles
from .synthesis import to_basic_gates

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]]
    )


def u3_params(m: np.ndarray) -> tuple[float, float, float, float]:
    """``(theta, phi, lam, alpha)`` with ``m = e^{i alpha} u3(theta, phi, lam)``."""
    delta, gamma, theta, lam = zyz_angles(m)
    return theta, gamma, lam, delta - (gamma + lam) / 2


def export_qasm(c: Circuit) -> str:
    if any(g.num_controls > 1 for g in c.gates):
        raise CircuitError("circuit has multi-controlled gates; decompose with stage=basic first")
    basic = to_basic_gates(c)
    lines = [HEADER.rstrip("\n"), f"qreg q[{c.n_qubits}];"]
    for g in basic.gates:
        if g.controls:
            lines.append(f"cx q[{g.controls[0]}],q[{g.target}];")
        else:
            theta, phi, lam, alpha = u3_params(g.payload)
            lines.append(f"u3({theta!r},{phi!r},{lam!r}) q[{g.target}]; // phase {alpha!r}")
    return "\n".join(lines) + "\n"


_QREG = re.compile(r"qreg\s+q\[(\d+)\];")
_U3 = re.compile(
    r"u3\(([^,]+),([^,]+),([^)]+)\)\s+q\[(\d+)\];(?:\s*//\s*phase\s+(\S+))?"
)
_CX = re.compile(r"cx\s+q\[(\d+)\],\s*q\[(\d+)\];")


def import_qasm(text: str) -> Circuit:
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if m := _QREG.fullmatch(line):
            n = int(m.group(1))
        elif m := _U3.fullmatch(line):
            theta, phi, lam = (float(m.group(k)) for k in (1, 2, 3))
            alpha = float(m.group(5)) if m.group(5) else 0.0
            gates.append(Gate(int(m.group(4)), (), np.exp(1j * alpha) * u3(theta, phi, lam)))
        elif m := _CX.fullmatch(line):
            gates.append(cnot(int(m.group(1)), int(m.group(2))))
        elif line.startswith("//"):
            continue
        else:
            raise ValueError(f"line {lineno}: unsupported statement {line!r}")
    if n is None:
        raise ValueError("missing qreg declaration")
    return Circuit(n, tuple(gates))
