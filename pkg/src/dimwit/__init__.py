"""Determinant dimension witness for the prepare-and-prepare scenario."""
from .linalg import DimensionError, adjugate, determinant, kron
from .states import Effect, QuantumState, ValidationError
from .witness import (
    Model,
    UnreliableErrorEstimate,
    Verdict,
    WitnessResult,
    analyze,
    dimension_verdict,
    probability_matrix,
    rank_threshold,
    witness,
    witness_sensitivity,
    witness_stderr,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionError", "adjugate", "determinant", "kron",
    "Effect", "QuantumState", "ValidationError",
    "Model", "UnreliableErrorEstimate", "Verdict", "WitnessResult", "analyze",
    "dimension_verdict", "probability_matrix", "rank_threshold", "witness",
    "witness_sensitivity", "witness_stderr",
]
