"""Determinant null witness, its statistical error and the dimension verdict.

For preparations ``A_i`` and ``B_j`` measured jointly with an effect ``M``,
``p_ij = Tr M (A_i (x) B_j)``. The witness is ``W = det p``. It vanishes
whenever ``n`` exceeds the dimension of the real linear span available to
the preparations: ``d`` classically, ``d(d+1)/2`` for real quantum states and
``d**2`` for complex ones.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .linalg import adjugate, determinant
from .states import Effect, QuantumState, ValidationError

PROB_TOL = 1e-12
DEFAULT_SIGMA = 6.0


class UnreliableErrorEstimate(ArithmeticError):
    """The adjugate vanishes, so first-order error propagation says nothing."""


class Model(str, enum.Enum):
    CLASSICAL = "classical"
    QUANTUM_REAL = "quantum-real"
    QUANTUM_COMPLEX = "quantum-complex"


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent-with-null"
    VIOLATED = "violated"


@dataclass(frozen=True)
class WitnessResult:
    W: float
    stderr: float
    n: int
    N_per_cell: float
    reliable: bool = True

    @property
    def zscore(self) -> float:
        if self.stderr > 0:
            return abs(self.W) / self.stderr
        return 0.0 if self.W == 0 else math.inf

    def to_dict(self, sigma_threshold: float = DEFAULT_SIGMA) -> dict:
        out = asdict(self)
        out["N"] = out.pop("N_per_cell")
        out["zscore"] = self.zscore
        try:
            out["verdict"] = dimension_verdict(self, sigma_threshold).value
        except UnreliableErrorEstimate:
            out["verdict"] = "unreliable"
        return out


def check_probabilities(p, tol: float = PROB_TOL) -> np.ndarray:
    """Validate a probability matrix and clamp round-off into ``[0, 1]``."""
    p = np.asarray(p)
    if np.iscomplexobj(p):
        if np.abs(p.imag).max(initial=0) > tol:
            raise ValidationError("probabilities have an imaginary part")
        p = p.real
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValidationError(f"probability matrix must be square, got {p.shape}")
    if p.min(initial=0) < -tol or p.max(initial=0) > 1 + tol:
        raise ValidationError(
            f"probabilities outside [0, 1]: range [{p.min():.3g}, {p.max():.3g}]"
        )
    return np.clip(p, 0.0, 1.0)


def probability_matrix(
    M: Effect, A: Sequence[QuantumState], B: Sequence[QuantumState]
) -> np.ndarray:
    """``p[i, j] = Tr(M (A_i (x) B_j))`` as a real array in ``[0, 1]``."""
    if not isinstance(M, Effect):
        M = Effect(M)
    A = [a if isinstance(a, QuantumState) else QuantumState(a) for a in A]
    B = [b if isinstance(b, QuantumState) else QuantumState(b) for b in B]
    if len(A) != len(B):
        raise ValidationError(f"need as many A as B preparations ({len(A)} != {len(B)})")
    dims_a = {a.dim for a in A}
    dims_b = {b.dim for b in B}
    if len(dims_a) != 1 or len(dims_b) != 1:
        raise ValidationError("preparations of one party must share a dimension")
    da, db = dims_a.pop(), dims_b.pop()
    if M.dim != da * db:
        raise ValidationError(f"effect dimension {M.dim} != {da} x {db}")
    # Tr M (A (x) B) = sum M[(a b),(a' b')] A[a', a] B[b', b]
    m4 = M.matrix.reshape(da, db, da, db)
    As = np.stack([a.matrix for a in A])
    Bs = np.stack([b.matrix for b in B])
    p = np.einsum("xyuv,iux,jvy->ij", m4, As, Bs)
    return check_probabilities(p)


def witness(p) -> float:
    """Signed ``det p``."""
    return float(np.real(determinant(np.asarray(p, dtype=float))))


def witness_variance_terms(p) -> np.ndarray:
    """Per-cell contributions ``A_jk^2 p_kj (1 - p_kj)`` (for one shot per cell)."""
    p = np.asarray(p, dtype=float)
    adj = adjugate(p)
    return adj.T ** 2 * p * (1 - p)


def witness_stderr(p, N: float) -> float:
    """First-order standard error of ``det p`` estimated from ``N`` shots per cell.

    Raises ``UnreliableErrorEstimate`` when the adjugate vanishes (rank
    deficit of two or more); the first-order formula is then meaningless.
    """
    if N < 1:
        raise ValueError(f"shot count must be >= 1, got {N}")
    p = np.asarray(p, dtype=float)
    adj = adjugate(p)
    if np.all(np.abs(adj) <= 1e-15):
        raise UnreliableErrorEstimate(
            "adjugate vanishes: rank deficit >= 2, second-order minors would be needed"
        )
    var = float(np.sum(adj.T ** 2 * p * (1 - p)))
    return math.sqrt(var / N)


def witness_sensitivity(p, dp) -> float:
    """First-order witness shift ``sum_kj A_jk dp_kj = Tr(adj(p) dp)``."""
    p = np.asarray(p, dtype=float)
    dp = np.asarray(dp, dtype=float)
    if dp.shape != p.shape:
        raise ValidationError(f"dp shape {dp.shape} != p shape {p.shape}")
    return float(np.sum(adjugate(p).T * dp))


def analyze(p, N: float) -> WitnessResult:
    """Witness plus analytic error for a frequency matrix with ``N`` shots per cell."""
    p = np.asarray(p, dtype=float)
    W = witness(p)
    try:
        err = witness_stderr(p, N)
        reliable = True
    except UnreliableErrorEstimate:
        err, reliable = math.nan, False
    return WitnessResult(W=W, stderr=err, n=p.shape[0], N_per_cell=N, reliable=reliable)


def rank_threshold(d: int, model: Model | str) -> int:
    """Smallest ``n`` at which the witness is forced to zero in dimension ``d``."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    model = Model(model)
    span = {
        Model.CLASSICAL: d,
        Model.QUANTUM_REAL: d * (d + 1) // 2,
        Model.QUANTUM_COMPLEX: d * d,
    }[model]
    return span + 1


def dimension_verdict(result: WitnessResult, sigma_threshold: float = DEFAULT_SIGMA) -> Verdict:
    """Violated iff ``|W| / stderr`` exceeds ``sigma_threshold``."""
    if not result.reliable or math.isnan(result.stderr):
        raise UnreliableErrorEstimate("no usable error estimate for this witness")
    if result.stderr == 0:
        if result.W != 0:
            raise UnreliableErrorEstimate("nonzero witness with zero error estimate")
        return Verdict.CONSISTENT
    return Verdict.VIOLATED if result.zscore > sigma_threshold else Verdict.CONSISTENT
