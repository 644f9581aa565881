import numpy as np
import pytest

from conftest import haar
from toffopt.circuit import Circuit, CircuitError, Gate, circuit_to_unitary, cnot, count_gates
from toffopt.matlin import NotUnitaryError, X, equal_up_to_global_phase, phase
from toffopt.synthesis import (
    STAGES,
    DiagonalFactor,
    TwoLevelFactor,
    abc_decompose,
    barenco_decompose,
    diagonal_to_toffoli,
    gray_multicontrol,
    qr_two_level,
    reconstruct,
    reduce_multicontrol,
    stage_unitary,
    to_basic_gates,
    two_level_to_toffoli,
)


def test_qr_identity():
    factors, d = qr_two_level(np.eye(8))
    assert factors == []
    assert np.allclose(d.phases, 1)


def test_qr_single_two_level(rng):
    blk = haar(2, rng)
    t = TwoLevelFactor(2, 1, blk).embed(4)
    factors, d = qr_two_level(t)
    assert len(factors) == 1 and (factors[0].p, factors[0].q) == (2, 1)
    assert np.allclose(reconstruct(factors, d), t, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_qr_reconstruction_and_count(n, rng):
    dim = 1 << n
    for _ in range(10):
        u = haar(dim, rng)
        factors, d = qr_two_level(u)
        assert len(factors) <= dim * (dim - 1) // 2
        assert np.max(np.abs(reconstruct(factors, d) - u)) <= 1e-9
        assert all(f.p > f.q for f in factors)


def test_qr_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        qr_two_level(np.ones((4, 4)))


def test_two_level_adjacent_is_single_gate(rng):
    blk = haar(2, rng)
    # 110 and 111 differ only in the last bit, other bits are 1
    f = TwoLevelFactor(7, 6, blk)
    c = two_level_to_toffoli(f, 3)
    assert len(c.gates) == 1 and c.gates[0].controls == (0, 1)
    assert np.allclose(circuit_to_unitary(c), f.embed(8), atol=1e-12)


def test_two_level_far_pair_structure(rng):
    f = TwoLevelFactor(7, 0, haar(2, rng))
    c = two_level_to_toffoli(f, 3)
    assert np.allclose(circuit_to_unitary(c), f.embed(8), atol=1e-12)
    central = [g for g in c.gates if not np.allclose(g.payload, X)]
    assert len(central) == 1 and central[0].num_controls == 2
    k = c.gates.index(central[0])
    # permutation, central gate, inverse permutation
    assert [g.controls for g in c.gates[:k]] == [g.controls for g in reversed(c.gates[k + 1:])]
    gates = list(c.gates)
    assert [g.target for g in gates] == [g.target for g in reversed(gates)]


def test_two_level_random_exact(rng):
    for _ in range(30):
        p, q = sorted(rng.choice(8, 2, replace=False))[::-1]
        f = TwoLevelFactor(int(p), int(q), haar(2, rng))
        assert np.max(np.abs(circuit_to_unitary(two_level_to_toffoli(f, 3)) - f.embed(8))) <= 1e-9


def test_diagonal_examples(rng):
    assert diagonal_to_toffoli(DiagonalFactor(np.ones(4)), 2).gates == ()
    th = 0.9
    c = diagonal_to_toffoli(DiagonalFactor(np.array([1, 1, 1, np.exp(1j * th)])), 2)
    assert len(c.gates) == 1 and c.gates[0].controls == (0,)
    assert np.allclose(c.gates[0].payload, phase(th))
    ph = np.exp(1j * rng.uniform(-np.pi, np.pi, 8))
    assert np.allclose(circuit_to_unitary(diagonal_to_toffoli(DiagonalFactor(ph), 3)), np.diag(ph), atol=1e-9)


def test_reduce_multicontrol_examples(rng):
    g1 = Gate(1, (0,), haar(2, rng))
    assert reduce_multicontrol(Circuit(2, (g1,))).gates[0] is g1
    u = haar(2, rng)
    g2 = Gate(2, (0, 1), u)
    out = gray_multicontrol(g2)
    assert len(out) == 5 and sum(g.is_cnot() for g in out) == 2
    assert np.allclose(circuit_to_unitary(Circuit(3, tuple(out))), circuit_to_unitary(Circuit(3, (g2,))), atol=1e-9)
    for m in (3, 4):
        g = Gate(m, tuple(range(m)), haar(2, rng))
        c = reduce_multicontrol(Circuit(m + 1, (g,)))
        assert max(x.num_controls for x in c.gates) == 1
        assert sum(x.is_cnot() for x in c.gates) == (1 << m) - 2
        assert np.max(np.abs(circuit_to_unitary(c) - circuit_to_unitary(Circuit(m + 1, (g,))))) <= 1e-8


def test_abc_examples(rng):
    assert len(to_basic_gates(Circuit(2, (cnot(0, 1),))).gates) == 1
    g = Gate(1, (0,), haar(2, rng))
    out = abc_decompose(g)
    assert sum(x.is_cnot() for x in out) == 2 and len(out) <= 6
    assert np.allclose(circuit_to_unitary(Circuit(2, tuple(out))), circuit_to_unitary(Circuit(2, (g,))), atol=1e-10)
    cp = Gate(1, (0,), phase(0.4))
    out = abc_decompose(cp)
    assert sum(x.is_cnot() for x in out) == 2
    assert np.allclose(circuit_to_unitary(Circuit(2, tuple(out))), circuit_to_unitary(Circuit(2, (cp,))), atol=1e-10)


def test_to_basic_rejects_multicontrol():
    with pytest.raises(CircuitError):
        to_basic_gates(Circuit(3, (Gate(2, (0, 1), X),)))


def test_identity_gives_empty_circuits():
    for stage in STAGES[1:]:
        assert barenco_decompose(np.eye(8), stage).gates == ()


@pytest.mark.parametrize("n,expected", [(2, 20), (3, 576)])
def test_plain_cnot_counts(n, expected, rng):
    for _ in range(3):
        c = barenco_decompose(haar(1 << n, rng), "basic")
        assert count_gates(c).cnot_count == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stage_equivalence(n, rng):
    u = haar(1 << n, rng)
    for stage in STAGES:
        r = barenco_decompose(u, stage)
        assert equal_up_to_global_phase(stage_unitary(r), u, 1e-8)
    assert max(g.num_controls for g in barenco_decompose(u, "controlled").gates) <= 1


def test_non_unitary_input():
    with pytest.raises(NotUnitaryError):
        barenco_decompose(np.eye(4) * 1.01)
    with pytest.raises(ValueError):
        barenco_decompose(np.eye(4), "bogus")
