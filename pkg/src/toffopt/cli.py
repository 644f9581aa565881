"""Command-line entry point: ``toffopt <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import format_table, run_bench
from .circuit import MAX_ORACLE_QUBITS, CircuitError, circuit_to_unitary, count_gates
from .formats import ParseError, read_circuit, read_unitary, write_circuit, write_unitary
from .matlin import EQUIV_TOL, NotUnitaryError, global_phase_alignment
from .optimizer import OptimizerConfig, optimize, stage_hook
from .qasm import export_qasm
from .rewrite import RewriteVerificationError
from .synthesis import barenco_decompose
from .workloads import budget_unitary, haar_unitary

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _report(label: str, c) -> str:
    k = count_gates(c)
    return f"{label}: qubits={c.n_qubits} gates={k.total} cnot={k.cnot_count} one_qubit={k.one_qubit_count}"


def _cmd_decompose(a) -> int:
    u = read_unitary(a.inp)
    hook = stage_hook(OptimizerConfig(checked_mode=a.checked)) if a.optimize else None
    c = barenco_decompose(u, a.stage, optimizer=hook)
    write_circuit(c, a.out)
    print(_report(f"stage={a.stage}{' optimized' if a.optimize else ''}", c))
    return EXIT_OK


def _cmd_optimize(a) -> int:
    c = read_circuit(a.inp)
    out, rep = optimize(c, OptimizerConfig(checked_mode=a.checked, max_sweeps=a.max_sweeps))
    write_circuit(out, a.out)
    print(_report("before", c))
    print(_report("after", out))
    print(f"sweeps={rep.sweeps} merges={rep.merges} removals={rep.removals} helper_uses={rep.helper_uses}")
    return EXIT_OK


def _cmd_verify(a) -> int:
    c = read_circuit(a.circuit)
    u = read_unitary(a.unitary)
    if c.n_qubits > MAX_ORACLE_QUBITS:
        raise InputError(f"refusing to verify {c.n_qubits} qubits (limit {MAX_ORACLE_QUBITS})")
    if u.shape[0] != 1 << c.n_qubits:
        raise InputError(f"width mismatch: circuit has {c.n_qubits} qubits, unitary is {u.shape[0]}x{u.shape[0]}")
    dev, ph = global_phase_alignment(u, circuit_to_unitary(c))
    ok = dev <= a.tol
    print(f"max_deviation={dev:.3e} phase={ph.real:+.12f}{ph.imag:+.12f}j tol={a.tol:g} {'equal' if ok else 'NOT equal'}")
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_random_unitary(a) -> int:
    if a.n < 1:
        raise InputError("--n must be at least 1")
    if a.cnot_budget is None:
        u = haar_unitary(a.n, a.seed)
    else:
        if a.cnot_budget < 0:
            raise InputError("--cnot-budget must be non-negative")
        if a.cnot_budget and a.n < 2:
            raise InputError("--cnot-budget needs --n >= 2")
        u = budget_unitary(a.n, a.cnot_budget, a.seed)
    write_unitary(u, a.out)
    return EXIT_OK


def _cmd_bench(a) -> int:
    if a.max_n > 5 or a.max_n < 2:
        raise InputError("--max-n must be between 2 and 5")
    if a.max_n == 5 and not a.include_5q:
        raise InputError("the 5-qubit row is opt-in; pass --include-5q")
    if a.trials < 1:
        raise InputError("--trials must be positive")
    rows = run_bench(a.max_n, a.trials, a.seed, a.include_5q)
    print(format_table(rows))
    return EXIT_OK


def _cmd_export_qasm(a) -> int:
    c = read_circuit(a.inp)
    try:
        text = export_qasm(c)
    except CircuitError as exc:
        raise InputError(f"{exc} (use 'decompose --stage basic')") from None
    Path(a.out).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toffopt", description="Decompose and optimize quantum circuits.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="unitary file -> circuit file")
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--stage", choices=("toffoli", "controlled", "basic"), default="basic")
    d.add_argument("--optimize", action="store_true")
    d.add_argument("--checked", action="store_true", help="verify every rewrite")
    d.add_argument("--out", required=True)
    d.set_defaults(func=_cmd_decompose)

    o = sub.add_parser("optimize", help="circuit file -> smaller circuit file")
    o.add_argument("--in", dest="inp", required=True)
    o.add_argument("--out", required=True)
    o.add_argument("--checked", action="store_true")
    o.add_argument("--max-sweeps", type=int, default=None)
    o.set_defaults(func=_cmd_optimize)

    v = sub.add_parser("verify", help="compare a circuit with a unitary up to global phase")
    v.add_argument("--circuit", required=True)
    v.add_argument("--unitary", required=True)
    v.add_argument("--tol", type=float, default=EQUIV_TOL)
    v.set_defaults(func=_cmd_verify)

    r = sub.add_parser("random-unitary", help="write a seeded random unitary")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--cnot-budget", type=int, default=None)
    r.add_argument("--out", required=True)
    r.set_defaults(func=_cmd_random_unitary)

    b = sub.add_parser("bench", help="CNOT counts of plain and optimized decompositions")
    b.add_argument("--max-n", type=int, default=4)
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seed", type=int, default=7)
    b.add_argument("--include-5q", action="store_true")
    b.set_defaults(func=_cmd_bench)

    q = sub.add_parser("export-qasm", help="basic-gate circuit -> OpenQASM 2.0")
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=_cmd_export_qasm)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (InputError, ParseError, NotUnitaryError, CircuitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RewriteVerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
