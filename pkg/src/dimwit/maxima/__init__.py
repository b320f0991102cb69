"""Extremal witness values: classical tables, closed forms and annealing search."""
from .anneal import QUANTUM_MAXIMA, AnnealConfig, AnnealResult, anneal_quantum_max, with_overrides
from .classical import (
    CLASSICAL_MAXIMA,
    MAXIMAL_MATRICES,
    OutOfExhaustiveRange,
    classical_max_det,
    table_matrix,
    verify_table_matrix,
)
from .closed_form import CASES, Case, case_report, closed_form_config, verify_n5d4_probability_pattern
from .config import QuantumConfig, evaluate_config, signed_witness

__all__ = [
    "QUANTUM_MAXIMA", "AnnealConfig", "AnnealResult", "anneal_quantum_max", "with_overrides",
    "CLASSICAL_MAXIMA", "MAXIMAL_MATRICES", "OutOfExhaustiveRange", "classical_max_det", "table_matrix",
    "verify_table_matrix", "CASES", "Case", "case_report", "closed_form_config",
    "verify_n5d4_probability_pattern", "QuantumConfig", "evaluate_config", "signed_witness",
]
