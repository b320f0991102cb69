from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..states import Effect, QuantumState, ValidationError
from ..witness import probability_matrix, witness

Field = Literal["real", "complex"]


@dataclass(frozen=True)
class QuantumConfig:
    """n preparations per party in dimension d, plus the joint effect."""

    n: int
    d: int
    field: Field
    A: tuple[QuantumState, ...]
    B: tuple[QuantumState, ...]
    M: Effect

    def __post_init__(self):
        A = tuple(a if isinstance(a, QuantumState) else QuantumState(a) for a in self.A)
        B = tuple(b if isinstance(b, QuantumState) else QuantumState(b) for b in self.B)
        M = self.M if isinstance(self.M, Effect) else Effect(self.M)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "M", M)
        if self.field not in ("real", "complex"):
            raise ValidationError(f"field must be 'real' or 'complex', got {self.field!r}")
        if len(A) != self.n or len(B) != self.n:
            raise ValidationError(f"expected {self.n} preparations per party")
        if any(s.dim != self.d for s in A + B):
            raise ValidationError(f"all preparations must have dimension {self.d}")
        if M.dim != self.d ** 2:
            raise ValidationError(f"effect must act on dimension {self.d ** 2}")
        if self.field == "real":
            mats = [s.matrix for s in A + B] + [M.matrix]
            if any(np.abs(m.imag).max() > 1e-10 for m in mats):
                raise ValidationError("real configuration has complex entries")

    def probabilities(self) -> np.ndarray:
        return probability_matrix(self.M, self.A, self.B)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "field": self.field,
            "A": [s.to_json() for s in self.A],
            "B": [s.to_json() for s in self.B],
            "M": self.M.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QuantumConfig":
        return cls(
            n=int(obj["n"]),
            d=int(obj["d"]),
            field=obj["field"],
            A=tuple(QuantumState.from_json(s) for s in obj["A"]),
            B=tuple(QuantumState.from_json(s) for s in obj["B"]),
            M=Effect.from_json(obj["M"]),
        )


def signed_witness(c: QuantumConfig) -> float:
    return witness(c.probabilities())


def evaluate_config(c: QuantumConfig) -> float:
    """|W| of the configuration."""
    return abs(signed_witness(c))
