"""Seeded random unitaries and circuits used by the CLI, the benchmark and tests."""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate, circuit_to_unitary, cnot
from .matlin import X, random_unitary


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng([seed & (2**64 - 1), *stream])


def haar_unitary(n_qubits: int, seed: int) -> np.ndarray:
    return random_unitary(1 << n_qubits, rng_for(seed))


def budget_circuit(n_qubits: int, cnot_budget: int, rng: np.random.Generator) -> Circuit:
    """Random one-qubit layers on every wire with ``cnot_budget`` CNOTs in between."""
    if cnot_budget and n_qubits < 2:
        raise ValueError("CNOTs need at least two qubits")

    def layer():
        return [Gate(q, (), random_unitary(2, rng)) for q in range(n_qubits)]

    gates = layer()
    for _ in range(cnot_budget):
        ctrl, tgt = rng.choice(n_qubits, size=2, replace=False)
        gates.append(cnot(int(ctrl), int(tgt)))
        gates += layer()
    return Circuit(n_qubits, tuple(gates))


def budget_unitary(n_qubits: int, cnot_budget: int, seed: int) -> np.ndarray:
    return circuit_to_unitary(budget_circuit(n_qubits, cnot_budget, rng_for(seed)))


def random_toffoli_circuit(
    n_qubits: int,
    length: int,
    rng: np.random.Generator,
    max_controls: int = 2,
) -> Circuit:
    """Mix of NOTs, diagonal, antidiagonal and generic payloads with 0..max_controls controls.

    Special payload shapes are drawn often so that the rewrite rules actually fire.
    """
    gates = []
    for _ in range(length):
        m = int(rng.integers(0, min(max_controls, n_qubits - 1) + 1))
        qs = rng.choice(n_qubits, size=m + 1, replace=False)
        kind = rng.integers(0, 5)
        if kind == 0:
            payload = X
        elif kind == 1:
            payload = np.diag(np.exp(1j * rng.uniform(-np.pi, np.pi, 2)))
        elif kind == 2:
            payload = np.diag([1.0, np.exp(1j * rng.uniform(-np.pi, np.pi))])
        else:
            payload = random_unitary(2, rng)
        gates.append(Gate(int(qs[0]), tuple(int(q) for q in qs[1:]), payload))
    return Circuit(n_qubits, tuple(gates))
