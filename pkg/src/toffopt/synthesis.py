"""Unitary -> generalized Toffoli circuit -> basic gates.

Stages
------
``two_level``
    Givens-style elimination ``U = F_1 F_2 ... F_K D``. Each ``F`` acts on a pair
    of basis states; ``D`` is diagonal and acts first in circuit order.
``toffoli``
    Every factor becomes ``Lambda_{n-1}`` gates: a Gray-code permutation of
    ``Lambda_{n-1}(X)`` gates, the central ``Lambda_{n-1}(block)`` and the
    inverse permutation. Zero-valued controls are handled with NOT pairs.
``controlled``
    ``Lambda_m(U)`` with ``m >= 2`` is expanded with the Gray-code network of
    ``2^m - 1`` controlled ``U^(+-1/2^(m-1))`` gates and ``2^m - 2`` CNOTs.
``basic``
    Each controlled gate becomes at most 4 one-qubit gates and 2 CNOTs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, CircuitError, Gate, cnot, not_gate
from .matlin import (
    EQUIV_TOL,
    UNITARY_TOL,
    X,
    check_unitary,
    close,
    is_identity,
    matrix_power2,
    num_qubits,
    phase,
    ry,
    rz,
    zyz_angles,
)

STAGES = ("two_level", "toffoli", "controlled", "basic")


@dataclass(frozen=True, eq=False)
class TwoLevelFactor:
    """Unitary acting as ``block`` on ``span{|q>, |p>}`` (basis order q, p)."""

    p: int
    q: int
    block: np.ndarray

    def __post_init__(self):
        if not 0 <= self.q < self.p:
            raise ValueError(f"need 0 <= q < p, got p={self.p}, q={self.q}")

    def embed(self, dim: int) -> np.ndarray:
        m = np.eye(dim, dtype=complex)
        idx = np.ix_([self.q, self.p], [self.q, self.p])
        m[idx] = self.block
        return m


@dataclass(frozen=True, eq=False)
class DiagonalFactor:
    phases: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.diag(self.phases)


@dataclass(frozen=True, eq=False)
class TwoLevelDecomposition:
    n_qubits: int
    factors: tuple[TwoLevelFactor, ...]
    diagonal: DiagonalFactor

    def to_unitary(self) -> np.ndarray:
        return reconstruct(self.factors, self.diagonal)


def reconstruct(factors: Sequence[TwoLevelFactor], d: DiagonalFactor) -> np.ndarray:
    """``F_1 F_2 ... F_K D``."""
    dim = len(d.phases)
    m = np.eye(dim, dtype=complex)
    for f in factors:
        m = m @ f.embed(dim)
    return m * d.phases[np.newaxis, :]


def _givens(a: complex, b: complex) -> np.ndarray:
    """SU(2) matrix G with ``G @ [a, b] = [e^{i arg a} r, 0]``; G -> I as b -> 0."""
    r = np.hypot(abs(a), abs(b))
    ph = a / abs(a) if abs(a) > 0 else 1.0
    return np.array(
        [[ph * np.conj(a) / r, ph * np.conj(b) / r],
         [-b * np.conj(ph) / r, a * np.conj(ph) / r]]
    )


def qr_two_level(u: np.ndarray, tol: float = EQUIV_TOL) -> tuple[list[TwoLevelFactor], DiagonalFactor]:
    """Factor a unitary into two-level matrices and a diagonal phase matrix.

    Column by column, entry ``(p, q)`` below the diagonal is zeroed by a
    rotation on rows ``q`` and ``p``. With ``G_K ... G_1 U = D`` the returned
    factors are ``F_i = G_i^dag`` in elimination order, so ``U = F_1 ... F_K D``.
    Rotations within ``UNITARY_TOL`` of the identity are skipped.
    """
    w = check_unitary(u, tol).copy()
    dim = w.shape[0]
    num_qubits(w)
    factors = []
    for q in range(dim - 1):
        for p in range(q + 1, dim):
            b = w[p, q]
            if b == 0:
                continue
            g = _givens(w[q, q], b)
            if is_identity(g, UNITARY_TOL):
                continue
            rows = w[[q, p], :]
            w[[q, p], :] = g @ rows
            w[p, q] = 0.0
            factors.append(TwoLevelFactor(p, q, g.conj().T))
    d = np.diag(w).copy()
    d = d / np.abs(d)
    return factors, DiagonalFactor(d)


# -- step 2 -----------------------------------------------------------------------


def _bit(index: int, qubit: int, n: int) -> int:
    return (index >> (n - 1 - qubit)) & 1


def _addressed(target: int, state: int, n: int, payload: np.ndarray) -> list[Gate]:
    """``Lambda_{n-1}(payload)`` on ``target`` firing when the other bits equal ``state``'s."""
    others = [k for k in range(n) if k != target]
    zeros = [not_gate(k) for k in others if _bit(state, k, n) == 0]
    return zeros + [Gate.trusted(target, others, payload)] + zeros


def gray_path(q: int, p: int, n: int) -> list[int]:
    """Basis states from ``q`` to a neighbour of ``p``, flipping high bits first."""
    diff = [k for k in range(n) if _bit(q, k, n) != _bit(p, k, n)]
    path = [q]
    s = q
    for k in diff[:-1]:
        s ^= 1 << (n - 1 - k)
        path.append(s)
    return path


def two_level_to_toffoli(f: TwoLevelFactor, n: int) -> Circuit:
    path = gray_path(f.q, f.p, n)
    perm: list[Gate] = []
    for s, s_next in zip(path, path[1:]):
        flipped = n - (s ^ s_next).bit_length()
        perm += _addressed(flipped, s, n, X)
    last = path[-1]
    target = n - 1 - ((last ^ f.p).bit_length() - 1)
    block = f.block if _bit(last, target, n) == 0 else X @ f.block @ X
    central = _addressed(target, last, n, block)
    return Circuit(n, tuple(perm + central + perm[::-1]))


def diagonal_to_toffoli(d: DiagonalFactor, n: int) -> Circuit:
    """One ``Lambda_{n-1}(diag(d_2k, d_2k+1))`` on the last qubit per basis pair."""
    gates: list[Gate] = []
    ph = d.phases
    if len(ph) != 1 << n:
        raise ValueError(f"expected {1 << n} phases, got {len(ph)}")
    for k in range(1 << (n - 1)):
        payload = np.diag([ph[2 * k], ph[2 * k + 1]]).astype(complex)
        if is_identity(payload, UNITARY_TOL):
            continue
        gates += _addressed(n - 1, 2 * k, n, payload)
    return Circuit(n, tuple(gates))


def two_level_circuit(dec: TwoLevelDecomposition) -> Circuit:
    n = dec.n_qubits
    out = diagonal_to_toffoli(dec.diagonal, n)
    for f in reversed(dec.factors):
        out = out + two_level_to_toffoli(f, n)
    return out


# -- step 3 -----------------------------------------------------------------------


def gray_multicontrol(g: Gate) -> list[Gate]:
    """Expand ``Lambda_m(U)`` into controlled ``V^{+-1}`` gates and CNOTs, ``V = U^(1/2^(m-1))``.

    Pattern ``x`` in the reflected Gray code applies ``V`` (odd weight) or ``V^dag``
    (even weight) controlled by the parity of the controls in ``x``; that parity is
    kept on the highest control of ``x`` by one CNOT per step.
    """
    ctrls = g.controls
    m = len(ctrls)
    if m < 2:
        return [g]
    v = matrix_power2(g.payload, 1.0 / (1 << (m - 1)))
    vd = v.conj().T
    out: list[Gate] = []
    prev = 0
    for i in range(1, 1 << m):
        code = i ^ (i >> 1)
        lead = code.bit_length() - 1
        if prev:
            changed = (code ^ prev).bit_length() - 1
            src = changed if changed != lead else lead - 1
            out.append(cnot(ctrls[src], ctrls[lead]))
        payload = v if bin(code).count("1") % 2 else vd
        out.append(Gate.trusted(g.target, (ctrls[lead],), payload))
        prev = code
    return out


def reduce_multicontrol(c: Circuit) -> Circuit:
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(gray_multicontrol(g))
    return Circuit(c.n_qubits, tuple(gates))


# -- step 4 -----------------------------------------------------------------------


def abc_decompose(g: Gate) -> list[Gate]:
    """``Lambda_1(V)`` as ``C, CNOT, B, CNOT, A`` on the target plus a phase on the control."""
    (ctrl,) = g.controls
    t = g.target
    delta, gamma, theta, lam = zyz_angles(g.payload)
    a = rz(gamma) @ ry(theta / 2)
    b = ry(-theta / 2) @ rz(-(gamma + lam) / 2)
    c = rz((lam - gamma) / 2)
    seq = [
        Gate.trusted(t, (), c),
        cnot(ctrl, t),
        Gate.trusted(t, (), b),
        cnot(ctrl, t),
        Gate.trusted(t, (), a),
        Gate.trusted(ctrl, (), phase(delta)),
    ]
    return [x for x in seq if x.controls or not is_identity(x.payload, UNITARY_TOL)]


def to_basic_gates(c: Circuit) -> Circuit:
    gates: list[Gate] = []
    for g in c.gates:
        if g.num_controls > 1:
            raise CircuitError(
                f"{g!r} has {g.num_controls} controls; reduce multi-controlled gates first"
            )
        if is_identity(g.payload, UNITARY_TOL):
            continue
        if g.num_controls == 0 or close(g.payload, X, UNITARY_TOL):
            gates.append(g)
        else:
            gates.extend(abc_decompose(g))
    return Circuit(c.n_qubits, tuple(gates))


# -- pipeline -----------------------------------------------------------------------


def _drop_identity_gates(c: Circuit) -> Circuit:
    return Circuit(c.n_qubits, tuple(g for g in c.gates if not is_identity(g.payload, UNITARY_TOL)))


def barenco_decompose(u: np.ndarray, stop_at: str = "basic", optimizer=None):
    """Run the decomposition up to ``stop_at``.

    Returns a :class:`TwoLevelDecomposition` for ``stop_at="two_level"`` and a
    :class:`Circuit` otherwise. ``optimizer`` is an optional callable
    ``(circuit, stage) -> circuit`` run after each circuit stage.
    """
    if stop_at not in STAGES:
        raise ValueError(f"unknown stage {stop_at!r}; expected one of {STAGES}")
    u = check_unitary(u, EQUIV_TOL)
    n = num_qubits(u)
    factors, d = qr_two_level(u)
    dec = TwoLevelDecomposition(n, tuple(factors), d)
    if stop_at == "two_level":
        return dec
    hook = optimizer or (lambda circ, stage: circ)
    if n == 1:
        # a single one-qubit gate is already basic
        circ = _drop_identity_gates(Circuit(1, (Gate(0, (), u),)))
        return hook(circ, "basic") if stop_at == "basic" else circ
    circ = hook(two_level_circuit(dec), "toffoli")
    if stop_at == "toffoli":
        return circ
    circ = hook(reduce_multicontrol(circ), "controlled")
    if stop_at == "controlled":
        return circ
    return hook(to_basic_gates(circ), "basic")


def stage_unitary(result) -> np.ndarray:
    from .circuit import circuit_to_unitary

    if isinstance(result, TwoLevelDecomposition):
        return result.to_unitary()
    return circuit_to_unitary(result)


__all__ = [
    "STAGES",
    "DiagonalFactor",
    "TwoLevelDecomposition",
    "TwoLevelFactor",
    "abc_decompose",
    "barenco_decompose",
    "diagonal_to_toffoli",
    "gray_multicontrol",
    "gray_path",
    "qr_two_level",
    "reconstruct",
    "reduce_multicontrol",
    "stage_unitary",
    "to_basic_gates",
    "two_level_circuit",
    "two_level_to_toffoli",
]

