"""Rewrite rules for adjacent pairs of generalized Toffoli gates.

A pair is always ordered ``[b1, b2]`` in circuit order (b1 acts first), so its
operator is ``G2 @ G1``. Payloads are ``A`` (b1) and ``B`` (b2). Cases follow
:func:`toffopt.circuit.pair_case`:

M1  same target
M2  distinct targets, neither target controls the other gate
M3  b2's target is a control of b1
M4  b1's target is a control of b2
M5  both

Rules are keyed on these structural cases plus payload shape. Every rule that
builds new gates (merge, helper exchange, solved exchanges) is checked against
the brute-force operator of the touched qubits before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .circuit import Gate, exclusive_controls, local_unitary, pair_case
from .matlin import (
    close,
    equal_up_to_global_phase,
    is_antidiagonal,
    is_diagonal,
    is_hermitian,
    is_identity,
    is_scalar,
    is_unitary,
)

RULE_TOL = 1e-9

Direction = Literal["left", "right"]


class RewriteVerificationError(AssertionError):
    pass


@dataclass(frozen=True)
class RewriteOutcome:
    kind: str
    replacement: tuple[Gate, ...]
    cost_delta: int


# -- payload shapes ---------------------------------------------------------------


def _scalar(a: np.ndarray) -> Optional[complex]:
    """``c`` if ``a == c I``."""
    return complex(a[0, 0]) if is_scalar(a, RULE_TOL) else None


def _unit_phase(a: np.ndarray) -> Optional[complex]:
    """``e^{i phi}`` if ``a == diag(1, e^{i phi})``."""
    if is_diagonal(a, RULE_TOL) and abs(a[0, 0] - 1) <= RULE_TOL:
        return complex(a[1, 1])
    return None


def _upper_phase(a: np.ndarray) -> Optional[complex]:
    """``e^{i alpha}`` if ``a == diag(e^{i alpha}, 1)``."""
    if is_diagonal(a, RULE_TOL) and abs(a[1, 1] - 1) <= RULE_TOL:
        return complex(a[0, 0])
    return None


def _rephase(m: np.ndarray, z: complex) -> np.ndarray:
    """``diag(1, z)^dag @ m @ diag(1, z)``: off-diagonals pick up ``z`` and ``z*``."""
    out = m.copy()
    out[0, 1] = m[0, 1] * z
    out[1, 0] = m[1, 0] * np.conj(z)
    return out


def _phase_of(z: complex) -> complex:
    return z / abs(z)


# -- verification -------------------------------------------------------------------


def verify_replacement(
    original: list[Gate] | tuple[Gate, ...],
    replacement: list[Gate] | tuple[Gate, ...],
    tol: float = RULE_TOL,
    up_to_phase: bool = False,
) -> bool:
    qubits = sorted(set().union(*(g.qubits for g in list(original) + list(replacement))))
    u = local_unitary(list(original), qubits)
    v = local_unitary(list(replacement), qubits)
    if up_to_phase:
        return equal_up_to_global_phase(u, v, tol)
    return close(u, v, tol)


def _checked(original, replacement, up_to_phase=False):
    if not verify_replacement(original, replacement, up_to_phase=up_to_phase):
        raise RewriteVerificationError(f"rewrite {original} -> {replacement} is not sound")
    return replacement


# -- commutation ----------------------------------------------------------------------


def commutes(b1: Gate, b2: Gate) -> bool:
    if b1.qubits.isdisjoint(b2.qubits):
        return True
    case = pair_case(b1, b2)
    a, b = b1.payload, b2.payload
    if case == "M2":
        return True
    if case == "M1":
        return close(a @ b, b @ a, RULE_TOL)
    if case == "M3":
        return is_diagonal(b, RULE_TOL)
    if case == "M4":
        return is_diagonal(a, RULE_TOL)
    # M5
    if is_diagonal(a, RULE_TOL) and is_diagonal(b, RULE_TOL):
        return True
    return _upper_phase(a) is not None or _upper_phase(b) is not None


# -- exchange with modification -----------------------------------------------------------


def _solve_payload(m: np.ndarray, qubits: list[int], like: Gate) -> Optional[np.ndarray]:
    """Least-squares fit of ``m`` by ``Lambda(C)`` on ``like``'s target/controls.

    The four unknowns each appear once per control-on block, so the fit is the
    block average; it is accepted only if the residual and unitarity hold.
    """
    k = len(qubits)
    dim = 1 << k
    pos = {q: i for i, q in enumerate(qubits)}
    tbit = 1 << (k - 1 - pos[like.target])
    cmask = sum(1 << (k - 1 - pos[c]) for c in like.controls)
    r0 = np.array([r for r in range(dim) if r & cmask == cmask and not r & tbit])
    r1 = r0 | tbit
    c = np.array(
        [[m[r0, r0].mean(), m[r0, r1].mean()], [m[r1, r0].mean(), m[r1, r1].mean()]]
    )
    fit = np.eye(dim, dtype=complex)
    fit[r0, r0] = c[0, 0]
    fit[r0, r1] = c[0, 1]
    fit[r1, r0] = c[1, 0]
    fit[r1, r1] = c[1, 1]
    if np.max(np.abs(fit - m)) >= RULE_TOL or not is_unitary(c, RULE_TOL):
        return None
    return c


def solve_exchange(b1: Gate, b2: Gate, direction: Direction) -> Optional[np.ndarray]:
    """Payload that lets the pair swap order with one gate modified.

    ``left``:  ``[b1, b2] == [Lambda(C) on b2's wires, b1]``.
    ``right``: ``[b1, b2] == [b2, Lambda(D) on b1's wires]``.
    """
    t4, t5 = exclusive_controls(b1, b2)
    if (direction == "left" and t4) or (direction == "right" and t5):
        return None
    qubits = sorted(b1.qubits | b2.qubits)
    g1 = local_unitary([b1], qubits)
    g2 = local_unitary([b2], qubits)
    if direction == "left":
        return _solve_payload(g1.conj().T @ g2 @ g1, qubits, b2)
    return _solve_payload(g2 @ g1 @ g2.conj().T, qubits, b1)


def exchange_left_payload(b1: Gate, b2: Gate) -> Optional[np.ndarray]:
    """``C`` with ``[b1, b2] == [Lambda(C), b1]`` (b2 moves left), or ``None``."""
    t4, _ = exclusive_controls(b1, b2)
    if t4:
        return None
    a, b = b1.payload, b2.payload
    case = pair_case(b1, b2) if not b1.qubits.isdisjoint(b2.qubits) else "M2"
    if case == "M2":
        return b
    if case == "M1":
        return a.conj().T @ b @ a
    if case == "M3":
        s = _scalar(a)
        if s is not None:
            return _rephase(b, _phase_of(s))
        if is_diagonal(b, RULE_TOL):
            return b
    if case == "M4" and is_diagonal(a, RULE_TOL):
        return b
    if case == "M5" and is_diagonal(a, RULE_TOL):
        return _rephase(b, _phase_of(a[1, 1]))
    return solve_exchange(b1, b2, "left")


def exchange_right_payload(b1: Gate, b2: Gate) -> Optional[np.ndarray]:
    """``D`` with ``[b1, b2] == [b2, Lambda(D)]`` (b1 moves right), or ``None``."""
    _, t5 = exclusive_controls(b1, b2)
    if t5:
        return None
    a, b = b1.payload, b2.payload
    case = pair_case(b1, b2) if not b1.qubits.isdisjoint(b2.qubits) else "M2"
    if case == "M2":
        return a
    if case == "M1":
        return b @ a @ b.conj().T
    if case == "M4":
        s = _scalar(b)
        if s is not None:
            return _rephase(a, np.conj(_phase_of(s)))
        if is_diagonal(a, RULE_TOL):
            return a
    if case == "M3" and is_diagonal(b, RULE_TOL):
        return a
    if case == "M5" and is_diagonal(b, RULE_TOL):
        return _rephase(a, np.conj(_phase_of(b[1, 1])))
    return solve_exchange(b1, b2, "right")


def exchange_left(b1: Gate, b2: Gate) -> Optional[tuple[Gate, Gate]]:
    c = exchange_left_payload(b1, b2)
    if c is None:
        return None
    return b2.with_payload(c), b1


def exchange_right(b1: Gate, b2: Gate) -> Optional[tuple[Gate, Gate]]:
    d = exchange_right_payload(b1, b2)
    if d is None:
        return None
    return b2, b1.with_payload(d)


# -- identities and merges ---------------------------------------------------------------


def identity_pair(b1: Gate, b2: Gate) -> bool:
    """True if the pair multiplies to the identity (no t4/t5 qubits allowed)."""
    t4, t5 = exclusive_controls(b1, b2)
    if t4 or t5:
        return False
    a, b = b1.payload, b2.payload
    case = pair_case(b1, b2)
    if case == "M1":
        return is_identity(b @ a, RULE_TOL)
    if case == "M2":
        sa, sb = _scalar(a), _scalar(b)
        return sa is not None and sb is not None and abs(sa * sb - 1) <= RULE_TOL
    if case == "M3":
        sa, pb = _scalar(a), _unit_phase(b)
        return sa is not None and pb is not None and abs(sa * pb - 1) <= RULE_TOL
    if case == "M4":
        pa, sb = _unit_phase(a), _scalar(b)
        return pa is not None and sb is not None and abs(pa * sb - 1) <= RULE_TOL
    pa, pb = _unit_phase(a), _unit_phase(b)
    return pa is not None and pb is not None and abs(pa * pb - 1) <= RULE_TOL


def _diag1(z: complex) -> np.ndarray:
    return np.array([[1, 0], [0, z]], dtype=complex)


def _merge_candidate(b1: Gate, b2: Gate) -> Optional[Gate]:
    a, b = b1.payload, b2.payload
    case = pair_case(b1, b2)
    if case == "M1":
        return b2.with_payload(b @ a)
    if case == "M2":
        # same controls S: a scalar payload is a phase on S and can ride along
        sa = _scalar(a)
        if sa is not None:
            return b2.with_payload(sa * b)
        sb = _scalar(b)
        if sb is not None:
            return b1.with_payload(sb * a)
        return None
    if case == "M3":
        # b1 = Lambda_{S+t2}(A) on t1, b2 = Lambda_S(B) on t2
        sa = _scalar(a)
        if sa is not None:
            return b2.with_payload(b @ _diag1(sa))
        pb = _unit_phase(b)
        if pb is not None:
            return b1.with_payload(pb * a)
        return None
    if case == "M4":
        # b1 = Lambda_S(A) on t1, b2 = Lambda_{S+t1}(B) on t2
        sb = _scalar(b)
        if sb is not None:
            return b1.with_payload(_diag1(sb) @ a)
        pa = _unit_phase(a)
        if pa is not None:
            return b2.with_payload(pa * b)
        return None
    # M5: b1 on t1 controlled by S+t2, b2 on t2 controlled by S+t1
    pa = _unit_phase(a)
    if pa is not None:
        return b2.with_payload(b @ _diag1(pa))
    pb = _unit_phase(b)
    if pb is not None:
        return b1.with_payload(_diag1(pb) @ a)
    return None


def merge_pair(b1: Gate, b2: Gate) -> Optional[list[Gate]]:
    """Replace the pair by ``[]`` or a single gate, or return ``None``."""
    t4, t5 = exclusive_controls(b1, b2)
    if t4 or t5:
        return None
    if identity_pair(b1, b2):
        return _checked([b1, b2], [])
    g = _merge_candidate(b1, b2)
    if g is None:
        return None
    if is_identity(g.payload, RULE_TOL):
        return _checked([b1, b2], [])
    return _checked([b1, b2], [g])


# -- exchange with one extra gate ----------------------------------------------------------


def helper_exchange(b1: Gate, b2: Gate) -> Optional[tuple[Gate, Gate, Gate]]:
    """``[b1, b2] == [g_extra, g_mid, b1]`` for antidiagonal b1 on a control of b2.

    ``g_mid`` is b2 with ``B^dag``; ``g_extra`` applies ``B`` on b2's target with
    b2's other controls plus b1's controls. Without t4 qubits it has one control
    fewer than b2; with t4 qubits ``B`` must be Hermitian.
    """
    c = b1.target
    if c not in b2.controls or b2.target in b1.controls:
        return None
    if not is_antidiagonal(b1.payload, RULE_TOL):
        return None
    t4, _ = exclusive_controls(b1, b2)
    if t4 and not is_hermitian(b2.payload, RULE_TOL):
        return None
    extra_ctrls = (set(b2.controls) - {c}) | set(b1.controls)
    if b2.target in extra_ctrls:
        return None
    g_extra = Gate.trusted(b2.target, extra_ctrls, b2.payload)
    g_mid = b2.dagger()
    if not verify_replacement([b1, b2], [g_extra, g_mid, b1]):
        return None
    return g_extra, g_mid, b1


def helper_exchange_mirror(b1: Gate, b2: Gate) -> Optional[tuple[Gate, Gate, Gate]]:
    """Mirror image: ``[b1, b2] == [b2, g_mid, g_extra]`` for antidiagonal b2 on a control of b1.

    Used when b2 is dragged to the left; t5 plays the part t4 plays above.
    """
    c = b2.target
    if c not in b1.controls or b1.target in b2.controls:
        return None
    if not is_antidiagonal(b2.payload, RULE_TOL):
        return None
    _, t5 = exclusive_controls(b1, b2)
    if t5 and not is_hermitian(b1.payload, RULE_TOL):
        return None
    extra_ctrls = (set(b1.controls) - {c}) | set(b2.controls)
    if b1.target in extra_ctrls:
        return None
    g_extra = Gate.trusted(b1.target, extra_ctrls, b1.payload)
    g_mid = b1.dagger()
    if not verify_replacement([b1, b2], [b2, g_mid, g_extra]):
        return None
    return b2, g_mid, g_extra


# -- dispatcher -------------------------------------------------------------------------------


def rewrite_pair(b1: Gate, b2: Gate, direction: Direction = "left", allow_helper: bool = True) -> RewriteOutcome:
    """First applicable rule, in the order merge, commute, exchange, helper."""
    merged = merge_pair(b1, b2)
    if merged is not None:
        kind = "removed_pair" if not merged else "merged"
        return RewriteOutcome(kind, tuple(merged), len(merged) - 2)
    if commutes(b1, b2):
        return RewriteOutcome("commuted", (b2, b1), 0)
    ex = exchange_left(b1, b2) if direction == "left" else exchange_right(b1, b2)
    if ex is not None:
        return RewriteOutcome("exchanged_modified", ex, 0)
    if allow_helper:
        h = helper_exchange_mirror(b1, b2) if direction == "left" else helper_exchange(b1, b2)
        if h is not None:
            return RewriteOutcome("helper_exchanged", h, 1)
    return RewriteOutcome("blocked", (b1, b2), 0)
