"""Preparations (density matrices) and measurement effects."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates
from .linalg import hermitian_eigvals, is_hermitian

PAULIS = (gates.X, gates.Y, gates.Z)

#: Preparation angles on the Viviani curve, in the order used by the test.
VIVIANI_ANGLES = (np.pi / 4, -np.pi / 4, 3 * np.pi / 4, -3 * np.pi / 4, 0.0)


class ValidationError(ValueError):
    pass


class InvalidBlochVector(ValidationError):
    pass


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Density matrix: Hermitian, positive semidefinite, unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"state must be a square matrix, got shape {m.shape}")
        if not is_hermitian(m):
            raise ValidationError("state is not Hermitian")
        if abs(np.trace(m) - 1) > 1e-10:
            raise ValidationError(f"state trace is {np.trace(m).real:.3g}, expected 1")
        if hermitian_eigvals(m).min() < -1e-10:
            raise ValidationError("state is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, psi) -> "QuantumState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def bloch(self) -> np.ndarray:
        if self.dim != 2:
            raise ValidationError("Bloch vectors are defined for qubits only")
        return np.array([np.trace(self.matrix @ s).real for s in PAULIS])

    def __eq__(self, other):
        if not isinstance(other, QuantumState):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and np.allclose(
            self.matrix, other.matrix, rtol=0, atol=1e-12
        )

    def to_json(self) -> dict:
        return matrix_to_json(self.matrix)

    @classmethod
    def from_json(cls, obj: dict) -> "QuantumState":
        return cls(matrix_from_json(obj))


@dataclass(frozen=True, eq=False)
class Effect:
    """Measurement operator with ``0 <= M <= 1``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"effect must be a square matrix, got shape {m.shape}")
        if not is_hermitian(m):
            raise ValidationError("effect is not Hermitian")
        ev = hermitian_eigvals(m)
        if ev.min() < -1e-10 or ev.max() > 1 + 1e-10:
            raise ValidationError(
                f"effect spectrum [{ev.min():.3g}, {ev.max():.3g}] leaves [0, 1]"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_json(self) -> dict:
        return matrix_to_json(self.matrix)

    @classmethod
    def from_json(cls, obj: dict) -> "Effect":
        return cls(matrix_from_json(obj))


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        m = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
        dim = int(obj["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix object: {exc}") from exc
    if m.shape != (dim, dim):
        raise ValidationError(f"matrix shape {m.shape} does not match dim {dim}")
    return m


def bloch_to_density(a) -> QuantumState:
    """``(1 + a . sigma) / 2`` for a Bloch vector with ``|a| <= 1``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (3,):
        raise InvalidBlochVector(f"Bloch vector must have 3 components, got {a.shape}")
    if np.linalg.norm(a) > 1 + 1e-12:
        raise InvalidBlochVector(f"|a| = {np.linalg.norm(a):.6g} exceeds 1")
    rho = (np.eye(2) + sum(c * s for c, s in zip(a, PAULIS))) / 2
    return QuantumState(rho)


def viviani_point(alpha: float) -> np.ndarray:
    return -np.array(
        [np.sin(alpha) * np.cos(alpha), np.sin(alpha) ** 2, np.cos(alpha)]
    )


def viviani_state(alpha: float) -> QuantumState:
    return bloch_to_density(viviani_point(alpha))


def viviani_set() -> list[QuantumState]:
    return [viviani_state(a) for a in VIVIANI_ANGLES]


def state_from_gates(alpha: float) -> QuantumState:
    """Density matrix of ``S_alpha S |0>``, the pulse sequence used on hardware."""
    psi = gates.s_theta(alpha) @ gates.S @ np.array([1, 0], dtype=complex)
    return QuantumState.pure(psi)


def depolarize(state: QuantumState, eps: float) -> QuantumState:
    """``(1 - eps) rho + eps I / d``."""
    d = state.dim
    return QuantumState((1 - eps) * state.matrix + eps * np.eye(d) / d)


def projector(*vecs) -> np.ndarray:
    """Sum of ``|v><v|`` over the given (unnormalized) vectors."""
    out = 0
    for v in vecs:
        v = np.asarray(v, dtype=complex)
        out = out + np.outer(v, v.conj())
    return out


def basis_ket(d: int, *digits: int) -> np.ndarray:
    """Computational basis vector ``|digits>`` of ``len(digits)`` qudits of dimension d."""
    k = 0
    for x in digits:
        k = k * d + x
    v = np.zeros(d ** len(digits), dtype=complex)
    v[k] = 1
    return v
