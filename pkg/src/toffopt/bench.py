"""CNOT-count benchmark over seeded Haar-random unitaries."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .circuit import count_gates
from .optimizer import OptimizerConfig, stage_hook
from .synthesis import barenco_decompose
from .workloads import haar_unitary

# Reference CNOT counts for generic unitaries, n = 2..5.
REFERENCE = {
    "barenco": {2: 20, 3: 576, 4: 8000, 5: 91520},
    "barenco_optimized": {2: 10, 3: 379, 4: 6278, 5: 76208},
    "nq": {2: 3, 3: 21, 4: 105, 5: 465},
    "cs": {2: 4, 3: 26, 4: 118, 5: 494},
}


def lower_bound(n: int) -> int:
    """Dimension-counting lower bound on CNOTs for a generic n-qubit unitary."""
    return -(-(4**n - 3 * n - 1) // 4)


@dataclass(frozen=True)
class BenchRow:
    n_qubits: int
    cnot_plain: int
    cnot_optimized: int
    trials: int
    all_trials_equal: bool
    wall_time_s: float


def bench_row(n: int, trials: int, seed: int, cfg: OptimizerConfig | None = None) -> BenchRow:
    cfg = cfg or OptimizerConfig()
    plain, opt = [], []
    t0 = time.perf_counter()
    for trial in range(trials):
        u = haar_unitary(n, seed * 1_000_003 + 97 * n + trial)
        plain.append(count_gates(barenco_decompose(u, "basic")).cnot_count)
        opt.append(count_gates(barenco_decompose(u, "basic", optimizer=stage_hook(cfg))).cnot_count)
    wall = time.perf_counter() - t0
    return BenchRow(
        n_qubits=n,
        cnot_plain=max(plain),
        cnot_optimized=max(opt),
        trials=trials,
        all_trials_equal=len(set(plain)) == 1 and len(set(opt)) == 1,
        wall_time_s=wall,
    )


def run_bench(
    max_n: int = 4,
    trials: int = 10,
    seed: int = 7,
    include_5q: bool = False,
    cfg: OptimizerConfig | None = None,
) -> list[BenchRow]:
    if not 2 <= max_n <= 5:
        raise ValueError("max_n must be between 2 and 5")
    if max_n == 5 and not include_5q:
        raise ValueError("the 5-qubit row needs include_5q=True")
    return [bench_row(n, trials, seed, cfg) for n in range(2, max_n + 1)]


def format_table(rows: list[BenchRow]) -> str:
    head = (
        f"{'n':>2} {'barenco':>8} {'optimized':>9} {'trials':>6} {'equal':>5} "
        f"{'time_s':>8} | {'ref':>6} {'ref_opt':>7} {'NQ':>4} {'CS':>4} {'bound':>5}"
    )
    out = [head, "-" * len(head)]
    for r in rows:
        n = r.n_qubits
        out.append(
            f"{n:>2} {r.cnot_plain:>8} {r.cnot_optimized:>9} {r.trials:>6} "
            f"{str(r.all_trials_equal).lower():>5} {r.wall_time_s:>8.2f} | "
            f"{REFERENCE['barenco'][n]:>6} {REFERENCE['barenco_optimized'][n]:>7} "
            f"{REFERENCE['nq'][n]:>4} {REFERENCE['cs'][n]:>4} {lower_bound(n):>5}"
        )
    return "\n".join(out)
