"""Drag-and-merge optimization of generalized Toffoli circuits.

Each gate is dragged left through its neighbours (commuting, or exchanging
with a modified payload, or once per drag by the helper exchange) until it
merges with a neighbour or gets stuck; then the same to the right. A drag is a
transaction: it is kept only if it ended in a merge and the circuit got
strictly smaller under ``(gate count, CNOT cost, control count)``, otherwise
every step of it is undone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from .circuit import Circuit, Gate, circuit_to_unitary, count_gates, MAX_ORACLE_QUBITS
from .matlin import UNITARY_TOL, X, close, equal_up_to_global_phase, is_identity, is_scalar
from .rewrite import (
    RewriteVerificationError,
    commutes,
    exchange_left,
    exchange_right,
    helper_exchange,
    helper_exchange_mirror,
    merge_pair,
    verify_replacement,
)

log = logging.getLogger(__name__)

SAMPLE_EVERY = 64


def cnot_cost(g: Gate) -> int:
    """CNOTs this gate costs after the Gray-code and ABC lowering passes."""
    m = len(g.controls)
    if m == 0 or is_identity(g.payload, UNITARY_TOL):
        return 0
    if m == 1:
        return 1 if close(g.payload, X, UNITARY_TOL) else 2
    return 3 * (1 << m) - 4


@dataclass
class OptimizerConfig:
    max_sweeps: Optional[int] = None
    helper_budget_per_drag: int = 1
    checked_mode: bool = False
    stage_hooks: frozenset[str] = frozenset({"toffoli", "basic"})
    cost_guard: bool = False
    use_helper_with_t4: bool = False

    def __post_init__(self):
        if self.helper_budget_per_drag < 0:
            raise ValueError("helper_budget_per_drag must be >= 0")
        if self.max_sweeps is not None and self.max_sweeps < 1:
            raise ValueError("max_sweeps must be positive")
        self.stage_hooks = frozenset(self.stage_hooks)


@dataclass
class OptimizerReport:
    sweeps: int = 0
    merges: int = 0
    removals: int = 0
    helper_uses: int = 0
    gate_count_before: int = 0
    gate_count_after: int = 0
    cnot_count_before: int = 0
    cnot_count_after: int = 0
    checks: int = field(default=0, repr=False)


class _Dragger:
    def __init__(self, gates: list[Gate], cfg: OptimizerConfig, report: OptimizerReport, keep_basic: bool):
        self.gates = gates
        self.cfg = cfg
        self.report = report
        self.keep_basic = keep_basic
        self._applications = 0

    def _check(self, old, new):
        self._applications += 1
        if self.cfg.checked_mode or self._applications % SAMPLE_EVERY == 0:
            self.report.checks += 1
            if not verify_replacement(list(old), list(new)):
                raise RewriteVerificationError(f"unsound rewrite {old} -> {new}")

    def drag(self, index: int, direction: str) -> tuple[int, bool]:
        gates = self.gates
        undo: list[tuple[int, list[Gate], int]] = []
        d_count = d_cost = d_ctrl = 0
        lo_seen = hi_seen = index
        budget = self.cfg.helper_budget_per_drag
        helpers = 0
        merged = False
        removed = False
        pos = index

        def replace(lo: int, new: list[Gate]):
            nonlocal d_count, d_cost, d_ctrl, lo_seen, hi_seen
            old = gates[lo:lo + 2]
            gates[lo:lo + 2] = new
            undo.append((lo, old, len(new)))
            d_count += len(new) - 2
            d_cost += sum(cnot_cost(g) for g in new) - sum(cnot_cost(g) for g in old)
            d_ctrl += sum(g.num_controls for g in new) - sum(g.num_controls for g in old)
            lo_seen = min(lo_seen, lo)
            hi_seen = max(hi_seen, lo + len(new))

        while True:
            if direction == "left":
                j = pos - 1
                if j < 0:
                    break
                lo = j
            else:
                j = pos + 1
                if j >= len(gates):
                    break
                lo = pos
            b1, b2 = gates[lo], gates[lo + 1]
            m = merge_pair(b1, b2)
            if m is not None:
                replace(lo, m)
                merged, removed, pos = True, not m, lo
                break
            if commutes(b1, b2):
                gates[lo], gates[lo + 1] = b2, b1
                undo.append((lo, [b1, b2], 2))
                self._check([b1, b2], [b2, b1])
                pos = j
                continue
            ex = exchange_left(b1, b2) if direction == "left" else exchange_right(b1, b2)
            if ex is not None:
                replace(lo, list(ex))
                self._check([b1, b2], ex)
                pos = j
                continue
            if budget > 0:
                if direction == "left":
                    h = helper_exchange_mirror(b1, b2)
                    ok = h is not None and (self.cfg.use_helper_with_t4 or not _t5(b1, b2))
                else:
                    h = helper_exchange(b1, b2)
                    ok = h is not None and (self.cfg.use_helper_with_t4 or not _t4(b1, b2))
                if ok:
                    replace(lo, list(h))
                    budget -= 1
                    helpers += 1
                    pos = lo if direction == "left" else lo + 2
                    continue
            break

        if merged and self._accept(d_count, d_cost, d_ctrl, lo_seen, hi_seen):
            if removed:
                self.report.removals += 1
            else:
                self.report.merges += 1
            self.report.helper_uses += helpers
            return pos, True
        for lo, old, n_new in reversed(undo):
            gates[lo:lo + n_new] = old
        return index, False

    def _accept(self, d_count, d_cost, d_ctrl, lo, hi) -> bool:
        if self.cfg.cost_guard and d_cost > 0:
            return False
        if d_count > 0:
            return False
        if d_count == 0:
            key = (d_cost, d_ctrl) if self.cfg.cost_guard else (d_ctrl,)
            if key >= (0,) * len(key):
                return False
        if self.keep_basic:
            for g in self.gates[max(lo - 2, 0):hi + 2]:
                if g.num_controls > 1 or (g.num_controls == 1 and not g.is_cnot()):
                    return False
        return True


def _t4(b1: Gate, b2: Gate) -> bool:
    return bool(set(b1.controls) - set(b2.controls) - {b2.target})


def _t5(b1: Gate, b2: Gate) -> bool:
    return bool(set(b2.controls) - set(b1.controls) - {b1.target})


def _is_basic(gates: list[Gate]) -> bool:
    return all(g.num_controls == 0 or (g.num_controls == 1 and g.is_cnot()) for g in gates)


def drag(c: Circuit, index: int, direction: str, cfg: OptimizerConfig | None = None) -> tuple[Circuit, int, bool]:
    """Drag one gate; returns ``(circuit, position, merged)``."""
    if not 0 <= index < len(c.gates):
        raise IndexError(f"gate index {index} out of range")
    if direction not in ("left", "right"):
        raise ValueError("direction must be 'left' or 'right'")
    cfg = cfg or OptimizerConfig()
    gates = list(c.gates)
    d = _Dragger(gates, cfg, OptimizerReport(), _is_basic(gates))
    pos, merged = d.drag(index, direction)
    return Circuit(c.n_qubits, tuple(gates)), pos, merged


def optimize(c: Circuit, cfg: OptimizerConfig | None = None) -> tuple[Circuit, OptimizerReport]:
    cfg = cfg or OptimizerConfig()
    gates = list(c.gates)
    before = count_gates(c)
    report = OptimizerReport(
        gate_count_before=before.total, cnot_count_before=before.cnot_count
    )
    dragger = _Dragger(gates, cfg, report, _is_basic(gates))
    while True:
        report.sweeps += 1
        start = len(gates)
        # uncontrolled scalar gates are a global phase
        kept = [g for g in gates if g.controls or not is_scalar(g.payload, UNITARY_TOL)]
        report.removals += len(gates) - len(kept)
        gates[:] = kept
        i = 0
        while i < len(gates):
            pos, merged = dragger.drag(i, "left")
            if merged:
                i = pos
                continue
            pos, merged = dragger.drag(i, "right")
            if merged:
                continue
            i += 1
        log.debug("sweep %d: %d -> %d gates", report.sweeps, start, len(gates))
        if len(gates) >= start:
            break
        if cfg.max_sweeps is not None and report.sweeps >= cfg.max_sweeps:
            break
    out = Circuit(c.n_qubits, tuple(gates))
    after = count_gates(out)
    report.gate_count_after = after.total
    report.cnot_count_after = after.cnot_count
    if cfg.checked_mode and c.n_qubits <= MAX_ORACLE_QUBITS:
        if not equal_up_to_global_phase(circuit_to_unitary(c), circuit_to_unitary(out), 1e-8):
            raise RewriteVerificationError("optimized circuit is not equivalent to its input")
    return out, report


def stage_hook(cfg: OptimizerConfig | None = None, reports: dict | None = None):
    """Adapter for ``barenco_decompose(optimizer=...)``."""
    cfg = cfg or OptimizerConfig()

    def run(circ: Circuit, stage: str) -> Circuit:
        if stage not in cfg.stage_hooks:
            return circ
        out, rep = optimize(circ, cfg)
        if reports is not None:
            reports[stage] = rep
        return out

    return run
