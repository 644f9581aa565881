import numpy as np
import pytest

from toffopt.bench import BenchRow, format_table, lower_bound, run_bench
from toffopt.circuit import Circuit, Gate, circuit_to_unitary, cnot
from toffopt.cli import main
from toffopt.formats import format_circuit, read_circuit, read_unitary, write_unitary, write_circuit
from toffopt.matlin import H, X, equal_up_to_global_phase, is_unitary
from toffopt.qasm import export_qasm, import_qasm
from toffopt.synthesis import barenco_decompose, to_basic_gates
from toffopt.workloads import budget_circuit, haar_unitary, rng_for


@pytest.fixture
def u2(tmp_path):
    p = tmp_path / "u.mat"
    assert main(["random-unitary", "--n", "2", "--seed", "42", "--out", str(p)]) == 0
    return p


def test_decompose_reports_counts(tmp_path, u2, capsys):
    out = tmp_path / "c.qc"
    assert main(["decompose", "--in", str(u2), "--stage", "basic", "--out", str(out)]) == 0
    assert "cnot=20" in capsys.readouterr().out
    assert main(["decompose", "--in", str(u2), "--stage", "basic", "--optimize", "--out", str(out)]) == 0
    assert "cnot=10" in capsys.readouterr().out
    assert main(["verify", "--circuit", str(out), "--unitary", str(u2)]) == 0


def test_decompose_identity(tmp_path):
    u = tmp_path / "i.mat"
    write_unitary(np.eye(8), u)
    out = tmp_path / "c.qc"
    assert main(["decompose", "--in", str(u), "--stage", "toffoli", "--out", str(out)]) == 0
    assert read_circuit(out).gates == ()


def test_decompose_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.mat"
    bad.write_text("n 1\n1+0j 0+0j\nnope 1\n")
    assert main(["decompose", "--in", str(bad), "--stage", "basic", "--out", str(tmp_path / "o")]) == 2
    assert ":3:" in capsys.readouterr().err
    nonu = tmp_path / "nonu.mat"
    write_unitary(np.array([[1, 0], [0, 1.001]]), nonu)
    assert main(["decompose", "--in", str(nonu), "--stage", "basic", "--out", str(tmp_path / "o")]) == 2
    assert main(["decompose", "--in", str(tmp_path / "missing"), "--out", str(tmp_path / "o")]) == 2


def test_verify_outcomes(tmp_path, u2, capsys):
    c = tmp_path / "c.qc"
    main(["decompose", "--in", str(u2), "--stage", "controlled", "--out", str(c)])
    other = tmp_path / "v.mat"
    main(["random-unitary", "--n", "2", "--seed", "43", "--out", str(other)])
    assert main(["verify", "--circuit", str(c), "--unitary", str(other)]) == 1
    shifted = tmp_path / "s.mat"
    write_unitary(np.exp(0.9j) * read_unitary(u2), shifted)
    capsys.readouterr()
    assert main(["verify", "--circuit", str(c), "--unitary", str(shifted)]) == 0
    assert "max_deviation=" in capsys.readouterr().out


def test_verify_refuses_wide_circuits(tmp_path, capsys):
    c = tmp_path / "wide.qc"
    write_circuit(Circuit(13, (cnot(0, 12),)), c)
    u = tmp_path / "u.mat"
    write_unitary(np.eye(2), u)
    assert main(["verify", "--circuit", str(c), "--unitary", str(u)]) == 2
    assert "refusing" in capsys.readouterr().err


def test_random_unitary_is_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["random-unitary", "--n", "2", "--seed", "7", "--out", str(a)])
    main(["random-unitary", "--n", "2", "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert is_unitary(read_unitary(a), 1e-12)


def test_cnot_budget_zero_is_a_product(tmp_path):
    p = tmp_path / "p"
    main(["random-unitary", "--n", "3", "--seed", "1", "--cnot-budget", "0", "--out", str(p)])
    u = read_unitary(p).reshape(2, 4, 2, 4)
    # rank-one across the first-qubit split, i.e. a tensor product
    s = np.linalg.svd(u.transpose(0, 2, 1, 3).reshape(4, 16), compute_uv=False)
    assert s[1] < 1e-10


def test_cnot_budget_circuit():
    c = budget_circuit(2, 3, rng_for(5))
    assert sum(g.is_cnot() for g in c.gates) == 3
    assert sum(g.num_controls == 0 for g in c.gates) == 2 * 4


def test_random_unitary_errors(tmp_path):
    assert main(["random-unitary", "--n", "0", "--seed", "1", "--out", str(tmp_path / "x")]) == 2
    assert main(["random-unitary", "--n", "1", "--seed", "1", "--cnot-budget", "2", "--out", str(tmp_path / "x")]) == 2


def test_optimize_command(tmp_path, capsys):
    src = tmp_path / "c.qc"
    src.write_text("qubits 3\ncnot 0 1\ngate 2 [] 0.7071067811865476 0 0.7071067811865476 0 0.7071067811865476 0 -0.7071067811865476 0\ncnot 0 1\n")
    out = tmp_path / "o.qc"
    assert main(["optimize", "--in", str(src), "--out", str(out), "--checked"]) == 0
    assert len(read_circuit(out).gates) == 1
    assert "sweeps=" in capsys.readouterr().out


def test_export_qasm(tmp_path, u2):
    c = tmp_path / "c.qc"
    main(["decompose", "--in", str(u2), "--stage", "basic", "--out", str(c)])
    q = tmp_path / "c.qasm"
    assert main(["export-qasm", "--in", str(c), "--out", str(q)]) == 0
    text = q.read_text()
    assert text.count("cx ") == 20
    back = import_qasm(text)
    assert equal_up_to_global_phase(circuit_to_unitary(back), read_unitary(u2), 1e-8)


def test_export_refuses_multicontrol(tmp_path, capsys):
    c = tmp_path / "t.qc"
    write_circuit(Circuit(3, (Gate(2, (0, 1), X),)), c)
    assert main(["export-qasm", "--in", str(c), "--out", str(tmp_path / "t.qasm")]) == 2
    assert "stage basic" in capsys.readouterr().err


def test_qasm_small_programs():
    text = export_qasm(Circuit(2, (cnot(0, 1),)))
    body = [ln for ln in text.splitlines() if not ln.startswith(("OPENQASM", "include"))]
    assert body == ["qreg q[2];", "cx q[0],q[1];"]
    empty = export_qasm(Circuit(1))
    assert [ln for ln in empty.splitlines() if ln.startswith(("u3", "cx"))] == []


def test_qasm_payload_round_trip():
    u = haar_unitary(3, 11)
    c = to_basic_gates(barenco_decompose(u, "controlled"))
    back = import_qasm(export_qasm(c))
    assert len(back.gates) == len(c.gates)
    for g, h in zip(c.gates, back.gates):
        assert g.target == h.target and g.controls == h.controls
        assert np.max(np.abs(g.payload - h.payload)) <= 1e-12


def test_qasm_lowers_controlled_gates():
    c = Circuit(2, (Gate(1, (0,), H),))
    back = import_qasm(export_qasm(c))
    assert equal_up_to_global_phase(circuit_to_unitary(back), circuit_to_unitary(c), 1e-10)


def test_bench_row_and_table(capsys):
    (row,) = run_bench(max_n=2, trials=5, seed=3)
    assert (row.n_qubits, row.cnot_plain, row.cnot_optimized, row.trials, row.all_trials_equal) == (2, 20, 10, 5, True)
    line = format_table([row]).splitlines()[-1]
    assert line.split()[-3:] == ["3", "4", "3"]  # NQ, CS, lower bound
    assert main(["bench", "--max-n", "2", "--trials", "2", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "NQ" in out and "CS" in out


def test_bench_guards():
    with pytest.raises(ValueError):
        run_bench(max_n=5)
    with pytest.raises(ValueError):
        run_bench(max_n=6, include_5q=True)
    assert main(["bench", "--max-n", "5"]) == 2
    assert main(["bench", "--max-n", "6", "--include-5q"]) == 2


def test_lower_bound_values():
    assert [lower_bound(n) for n in (2, 3, 4, 5)] == [3, 14, 61, 252]
