"""Synthesis of n-qubit unitaries into generalized Toffoli gates, and a
drag-and-merge optimizer that shrinks the resulting circuits."""

from .circuit import (
    Circuit,
    CircuitError,
    Gate,
    GateCounts,
    OracleWidthError,
    PairContext,
    circuit_to_unitary,
    classify_pair,
    cnot,
    count_gates,
    not_gate,
)
from .formats import ParseError, parse_circuit, parse_unitary, format_circuit, format_unitary
from .matlin import NotUnitaryError, equal_up_to_global_phase, global_phase_alignment, random_unitary
from .optimizer import OptimizerConfig, OptimizerReport, drag, optimize, stage_hook
from .rewrite import (
    commutes,
    exchange_left,
    exchange_right,
    helper_exchange,
    merge_pair,
    rewrite_pair,
    solve_exchange,
)
from .synthesis import STAGES, barenco_decompose, qr_two_level

__version__ = "0.1.0"
