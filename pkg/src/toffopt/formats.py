"""Text formats for circuits (``.qc``) and unitaries (``.mat``).

Circuit file::

    qubits 3
    # comment
    gate 2 [0,1] 0 0 1 0 1 0 0 0
    x 1
    cnot 0 2

``gate <target> [<ctrl>,...] <a00re> <a00im> <a01re> <a01im> <a10re> <a10im> <a11re> <a11im>``
uses ``[]`` for no controls.

Unitary file: ``n <qubits>`` then ``2**n`` rows of ``2**n`` entries such as ``0.5-0.25j``.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .circuit import Circuit, CircuitError, Gate
from .matlin import NotUnitaryError, X


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_complex(z: complex) -> str:
    im = _fmt(z.imag)
    if not im.startswith("-"):
        im = "+" + im
    return f"{_fmt(z.real)}{im}j"


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"]
    for g in c.gates:
        ctrls = ",".join(str(q) for q in g.controls)
        p = g.payload
        nums = " ".join(
            f"{_fmt(z.real)} {_fmt(z.imag)}" for z in (p[0, 0], p[0, 1], p[1, 0], p[1, 1])
        )
        lines.append(f"gate {g.target} [{ctrls}] {nums}")
    return "\n".join(lines) + "\n"


def _parse_controls(tok: str) -> tuple[int, ...]:
    if not (tok.startswith("[") and tok.endswith("]")):
        raise ValueError(f"expected a bracketed control list, got {tok!r}")
    body = tok[1:-1].strip()
    if not body:
        return ()
    return tuple(int(x) for x in body.split(","))


def parse_circuit(text: str, source: str | None = None) -> Circuit:
    n_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0].lower()
        try:
            if head == "qubits":
                if n_qubits is not None:
                    raise ValueError("duplicate 'qubits' header")
                if len(toks) != 2:
                    raise ValueError("expected 'qubits <n>'")
                n_qubits = int(toks[1])
                if n_qubits < 1:
                    raise ValueError("qubit count must be positive")
                continue
            if n_qubits is None:
                raise ValueError("missing 'qubits <n>' header before the first gate")
            if head == "gate":
                if len(toks) != 11:
                    raise ValueError("expected 'gate <target> [ctrls] <8 reals>'")
                vals = [float(x) for x in toks[3:]]
                payload = np.array(
                    [[complex(vals[0], vals[1]), complex(vals[2], vals[3])],
                     [complex(vals[4], vals[5]), complex(vals[6], vals[7])]]
                )
                g = Gate(int(toks[1]), _parse_controls(toks[2]), payload)
            elif head == "x":
                if len(toks) != 2:
                    raise ValueError("expected 'x <target>'")
                g = Gate(int(toks[1]), (), X)
            elif head == "cnot":
                if len(toks) != 3:
                    raise ValueError("expected 'cnot <ctrl> <target>'")
                g = Gate(int(toks[2]), (int(toks[1]),), X)
            else:
                raise ValueError(f"unknown statement {toks[0]!r}")
            if max(g.qubits) >= n_qubits:
                raise ValueError(f"qubit index out of range for {n_qubits} qubits")
        except (ValueError, CircuitError, NotUnitaryError) as exc:
            raise ParseError(str(exc), lineno, source) from None
        gates.append(g)
    if n_qubits is None:
        raise ParseError("missing 'qubits <n>' header", None, source)
    return Circuit(n_qubits, tuple(gates))


def format_unitary(u: np.ndarray) -> str:
    dim = u.shape[0]
    n = dim.bit_length() - 1
    lines = [f"n {n}"]
    for row in u:
        lines.append(" ".join(_fmt_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def parse_unitary(text: str, source: str | None = None) -> np.ndarray:
    rows: list[list[complex]] = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if n is None:
                if toks[0] != "n" or len(toks) != 2:
                    raise ValueError("expected header 'n <qubits>'")
                n = int(toks[1])
                if n < 1:
                    raise ValueError("qubit count must be positive")
                continue
            if len(toks) != 1 << n:
                raise ValueError(f"expected {1 << n} entries, got {len(toks)}")
            if len(rows) == 1 << n:
                raise ValueError("too many rows")
            rows.append([complex(t) for t in toks])
        except ValueError as exc:
            raise ParseError(str(exc), lineno, source) from None
    if n is None:
        raise ParseError("empty unitary file", None, source)
    if len(rows) != 1 << n:
        raise ParseError(f"expected {1 << n} rows, got {len(rows)}", None, source)
    m = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ParseError("non-finite entry", None, source)
    return m


def read_circuit(path: str | Path) -> Circuit:
    path = Path(path)
    return parse_circuit(path.read_text(), str(path))


def write_circuit(c: Circuit, path: str | Path) -> None:
    Path(path).write_text(format_circuit(c))


def read_unitary(path: str | Path) -> np.ndarray:
    path = Path(path)
    return parse_unitary(path.read_text(), str(path))


def write_unitary(u: np.ndarray, path: str | Path) -> None:
    Path(path).write_text(format_unitary(u))
