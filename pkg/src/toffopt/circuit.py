"""Generalized Toffoli gates, circuits, the brute-force simulator and pair roles.

Conventions
-----------
* ``Gate(target, controls, payload)`` applies the 2x2 ``payload`` to ``target``
  when every control qubit is 1. A NOT gate is ``Gate(t, (), X)``.
* Qubit 0 is the most significant bit of a basis index, so ``|x_0 x_1 ... x_{n-1}>``
  has index ``sum x_k 2^(n-1-k)``.
* ``Circuit.gates[0]`` acts first; the operator is ``G_k ... G_1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .matlin import I2, UNITARY_TOL, X, check_unitary, close, is_identity

MAX_ORACLE_QUBITS = 12


class CircuitError(ValueError):
    pass


class OracleWidthError(CircuitError):
    pass


@dataclass(frozen=True, eq=False)
class Gate:
    target: int
    controls: tuple[int, ...] = ()
    payload: np.ndarray = field(default_factory=lambda: X.copy())

    def __post_init__(self):
        ctrls = tuple(sorted(set(int(c) for c in self.controls)))
        if len(ctrls) != len(self.controls):
            raise CircuitError(f"duplicate control qubits in {self.controls}")
        if self.target in ctrls:
            raise CircuitError(f"target {self.target} is also a control")
        if self.target < 0 or (ctrls and ctrls[0] < 0):
            raise CircuitError("qubit indices must be non-negative")
        payload = np.asarray(self.payload, dtype=complex)
        if payload.shape != (2, 2):
            raise CircuitError(f"payload must be 2x2, got {payload.shape}")
        check_unitary(payload, UNITARY_TOL)
        object.__setattr__(self, "target", int(self.target))
        object.__setattr__(self, "controls", ctrls)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "qubits", frozenset(ctrls) | {self.target})

    @classmethod
    def trusted(cls, target: int, controls: Iterable[int], payload: np.ndarray) -> "Gate":
        """Build without validation; ``controls`` must already be valid."""
        g = object.__new__(cls)
        ctrls = tuple(sorted(controls))
        object.__setattr__(g, "target", target)
        object.__setattr__(g, "controls", ctrls)
        object.__setattr__(g, "payload", payload)
        object.__setattr__(g, "qubits", frozenset(ctrls) | {target})
        return g

    @property
    def num_controls(self) -> int:
        return len(self.controls)

    def with_payload(self, payload: np.ndarray) -> "Gate":
        return Gate.trusted(self.target, self.controls, payload)

    def dagger(self) -> "Gate":
        return self.with_payload(self.payload.conj().T)

    def is_cnot(self, tol: float = UNITARY_TOL) -> bool:
        return len(self.controls) == 1 and close(self.payload, X, tol)

    def is_not(self, tol: float = UNITARY_TOL) -> bool:
        return not self.controls and close(self.payload, X, tol)

    def same_as(self, other: "Gate", tol: float = UNITARY_TOL) -> bool:
        return (
            self.target == other.target
            and self.controls == other.controls
            and close(self.payload, other.payload, tol)
        )

    def __repr__(self) -> str:
        p = np.array2string(self.payload, precision=3, suppress_small=True).replace("\n", "")
        return f"Gate(t={self.target}, c={list(self.controls)}, {p})"


def not_gate(target: int) -> Gate:
    return Gate.trusted(target, (), X)


def cnot(control: int, target: int) -> Gate:
    return Gate.trusted(target, (control,), X)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise CircuitError("circuit needs at least one qubit")
        gates = tuple(self.gates)
        for g in gates:
            if max(g.qubits) >= self.n_qubits:
                raise CircuitError(f"{g!r} exceeds circuit width {self.n_qubits}")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise CircuitError("cannot concatenate circuits of different width")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, tuple(g.dagger() for g in reversed(self.gates)))


# -- simulation ---------------------------------------------------------------


def _apply_inplace(tensor: np.ndarray, g: Gate) -> None:
    """``tensor`` has shape ``(2,)*n + (k,)``; qubit q is axis q."""
    idx: list = [slice(None)] * tensor.ndim
    for c in g.controls:
        idx[c] = 1
    i0 = list(idx)
    i1 = list(idx)
    i0[g.target] = 0
    i1[g.target] = 1
    i0t, i1t = tuple(i0), tuple(i1)
    a0 = tensor[i0t].copy()
    a1 = tensor[i1t]
    m = g.payload
    tensor[i0t] = m[0, 0] * a0 + m[0, 1] * a1
    tensor[i1t] = m[1, 0] * a0 + m[1, 1] * a1


def apply_gate(state: np.ndarray, g: Gate, n_qubits: int | None = None) -> np.ndarray:
    """Apply ``g`` to a length-``2**n`` state vector and return the new vector."""
    state = np.asarray(state, dtype=complex)
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if state.ndim != 1 or 1 << n != dim or (n_qubits is not None and n != n_qubits):
        raise CircuitError(f"state of length {dim} does not match the circuit width")
    if max(g.qubits) >= n:
        raise CircuitError(f"{g!r} does not fit a {n}-qubit state")
    t = state.reshape((2,) * n + (1,)).copy()
    _apply_inplace(t, g)
    return t.reshape(dim)


def gates_to_unitary(gates: Sequence[Gate], n_qubits: int) -> np.ndarray:
    if n_qubits > MAX_ORACLE_QUBITS:
        raise OracleWidthError(
            f"refusing to build a {n_qubits}-qubit unitary (limit {MAX_ORACLE_QUBITS})"
        )
    dim = 1 << n_qubits
    t = np.eye(dim, dtype=complex).reshape((2,) * n_qubits + (dim,))
    for g in gates:
        _apply_inplace(t, g)
    return t.reshape(dim, dim)


def circuit_to_unitary(c: Circuit) -> np.ndarray:
    return gates_to_unitary(c.gates, c.n_qubits)


def local_unitary(gates: Sequence[Gate], qubits: Sequence[int] | None = None) -> np.ndarray:
    """Operator of ``gates`` restricted to the qubits they touch (in sorted order)."""
    if qubits is None:
        qubits = sorted(set().union(*(g.qubits for g in gates))) if gates else [0]
    pos = {q: i for i, q in enumerate(qubits)}
    relabeled = [
        Gate.trusted(pos[g.target], (pos[c] for c in g.controls), g.payload) for g in gates
    ]
    return gates_to_unitary(relabeled, len(qubits))


# -- pair roles -----------------------------------------------------------------

ROLES = ("t0", "t1", "t2", "t3", "t4", "t5")


@dataclass(frozen=True)
class PairContext:
    """Roles of every qubit relative to an ordered gate pair, and the case label.

    t1/t2 are the targets, t3 the shared controls, t4 the controls only b1 has,
    t5 the controls only b2 has, t0 everything untouched. A control of one gate
    that is the other gate's target keeps its target role.
    """

    case_label: str
    roles: dict[int, str]
    t3: frozenset[int]
    t4: frozenset[int]
    t5: frozenset[int]

    def qubits_with(self, role: str) -> list[int]:
        return sorted(q for q, r in self.roles.items() if r == role)


def pair_case(b1: Gate, b2: Gate) -> str:
    if b1.target == b2.target:
        return "M1"
    in2 = b1.target in b2.controls
    in1 = b2.target in b1.controls
    if in1 and in2:
        return "M5"
    if in1:
        return "M3"
    if in2:
        return "M4"
    return "M2"


def exclusive_controls(b1: Gate, b2: Gate) -> tuple[frozenset[int], frozenset[int]]:
    """Return (t4, t5) for the ordered pair."""
    c1 = frozenset(b1.controls)
    c2 = frozenset(b2.controls)
    return c1 - c2 - {b2.target}, c2 - c1 - {b1.target}


def classify_pair(b1: Gate, b2: Gate, n_qubits: int | None = None) -> PairContext:
    c1 = frozenset(b1.controls)
    c2 = frozenset(b2.controls)
    t3 = c1 & c2
    t4, t5 = exclusive_controls(b1, b2)
    width = n_qubits if n_qubits is not None else max(b1.qubits | b2.qubits) + 1
    roles = {q: "t0" for q in range(width)}
    for q in t3:
        roles[q] = "t3"
    for q in t4:
        roles[q] = "t4"
    for q in t5:
        roles[q] = "t5"
    roles[b2.target] = "t2"
    roles[b1.target] = "t1"
    return PairContext(pair_case(b1, b2), roles, t3, t4, t5)


# -- counting -------------------------------------------------------------------


@dataclass(frozen=True)
class GateCounts:
    cnot_count: int
    one_qubit_count: int
    total: int
    histogram: dict[int, int]


def count_gates(c: Circuit | Iterable[Gate]) -> GateCounts:
    gates = c.gates if isinstance(c, Circuit) else tuple(c)
    hist = Counter(g.num_controls for g in gates)
    cnots = sum(1 for g in gates if g.is_cnot())
    return GateCounts(
        cnot_count=cnots,
        one_qubit_count=hist.get(0, 0),
        total=len(gates),
        histogram=dict(sorted(hist.items())),
    )


def is_basic(c: Circuit) -> bool:
    return all(g.num_controls == 0 or g.is_cnot() for g in c.gates)


def drop_identities(gates: Iterable[Gate], tol: float = UNITARY_TOL) -> list[Gate]:
    return [g for g in gates if not is_identity(g.payload, tol)]


__all__ = [
    "Circuit",
    "CircuitError",
    "Gate",
    "GateCounts",
    "I2",
    "MAX_ORACLE_QUBITS",
    "OracleWidthError",
    "PairContext",
    "apply_gate",
    "circuit_to_unitary",
    "classify_pair",
    "cnot",
    "count_gates",
    "drop_identities",
    "exclusive_controls",
    "gates_to_unitary",
    "is_basic",
    "local_unitary",
    "not_gate",
    "pair_case",
]
