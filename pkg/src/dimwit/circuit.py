"""Statevector simulation of the three-qubit prepare-and-prepare test.

Register layout is ``(A, M, B) = (q0, q1, q2)`` with basis ``|q0 q1 q2>``.
Party A prepares on q0, party B on q2; the outcome is read from q1 only.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gates
from .gates import Gate
from .linalg import is_unitary
from .states import VIVIANI_ANGLES, Effect, basis_ket, projector

A_QUBIT, M_QUBIT, B_QUBIT = 0, 1, 2

#: CNOT wiring as (control, target). ``"diagram"`` reads each two-qubit box of
#: the circuit figure as ``target | control``; ``"swapped"`` exchanges roles.
CNOT_READINGS = {
    "diagram": [(A_QUBIT, M_QUBIT), (M_QUBIT, B_QUBIT), (M_QUBIT, A_QUBIT), (B_QUBIT, M_QUBIT)],
    "swapped": [(M_QUBIT, A_QUBIT), (B_QUBIT, M_QUBIT), (A_QUBIT, M_QUBIT), (M_QUBIT, B_QUBIT)],
}


@dataclass
class Circuit:
    num_qubits: int
    ops: list[tuple[Gate, tuple[int, ...]]] = field(default_factory=list)

    def add(self, gate: Gate | np.ndarray, *qubits: int, label: str | None = None) -> "Circuit":
        if not isinstance(gate, Gate):
            gate = Gate(label or "U", gate)
        if len(qubits) != gate.num_qubits:
            raise ValueError(f"{gate.label} acts on {gate.num_qubits} qubit(s), got {qubits}")
        if any(not 0 <= q < self.num_qubits for q in qubits):
            raise ValueError(f"qubit index out of range in {qubits}")
        if len(qubits) == 2 and abs(qubits[0] - qubits[1]) != 1:
            raise ValueError(f"two-qubit gates must act on neighbouring qubits, got {qubits}")
        self.ops.append((gate, tuple(qubits)))
        return self

    def labels(self) -> list[str]:
        return [f"{g.label}@{','.join(map(str, q))}" for g, q in self.ops]

    def depth(self) -> int:
        level = [0] * self.num_qubits
        for _, qs in self.ops:
            t = max(level[q] for q in qs) + 1
            for q in qs:
                level[q] = t
        return max(level, default=0)

    def unitary(self) -> np.ndarray:
        dim = 2 ** self.num_qubits
        u = np.eye(dim, dtype=complex)
        for g, qs in self.ops:
            u = _embed(g.matrix, qs, self.num_qubits) @ u
        return u

    def statevector(self) -> np.ndarray:
        psi = np.zeros(2 ** self.num_qubits, dtype=complex)
        psi[0] = 1
        for g, qs in self.ops:
            psi = _apply(psi, g.matrix, qs, self.num_qubits)
        return psi


def _embed(u: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    psi_basis = np.eye(2 ** n, dtype=complex)
    return np.stack([_apply(col, u, qubits, n) for col in psi_basis.T], axis=1)


def _apply(psi: np.ndarray, u: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    k = len(qubits)
    t = psi.reshape([2] * n)
    t = np.moveaxis(t, qubits, range(k))
    t = (u @ t.reshape(2 ** k, -1)).reshape([2] * n)
    return np.moveaxis(t, range(k), qubits).reshape(-1)


def _cnot_ops(control: int, target: int, decompose_ecr: bool) -> list[tuple[Gate, tuple[int, ...]]]:
    upper, lower = min(control, target), max(control, target)
    down = control < target
    if not decompose_ecr:
        g = Gate("CNOT_down", gates.CNOT_DOWN) if down else Gate("CNOT_up", gates.CNOT_UP)
        return [(g, (upper, lower))]
    ecr = Gate("ECR_down", gates.ECR_DOWN)
    if down:
        # (Z+ I) ECR_down (X X+)
        return [
            (Gate("X", gates.X), (upper,)),
            (Gate("X+", gates.X_PLUS), (lower,)),
            (ecr, (upper, lower)),
            (Gate("Z+", gates.Z_PLUS), (upper,)),
        ]
    # (HH) ECR_down (X+ X+) (Z- H)
    return [
        (Gate("Z-", gates.Z_MINUS), (upper,)),
        (Gate("H", gates.H), (lower,)),
        (Gate("X+", gates.X_PLUS), (upper,)),
        (Gate("X+", gates.X_PLUS), (lower,)),
        (ecr, (upper, lower)),
        (Gate("H", gates.H), (upper,)),
        (Gate("H", gates.H), (lower,)),
    ]


def build_test_circuit(
    i: int, j: int, *, decompose_ecr: bool = False, reading: str = "diagram"
) -> Circuit:
    """Circuit for preparation pair ``(i, j)``, indices 1..5."""
    if not (1 <= i <= 5 and 1 <= j <= 5):
        raise ValueError(f"preparation indices must be in 1..5, got ({i}, {j})")
    cnots = CNOT_READINGS[reading]
    s = Gate("S", gates.S)
    c = Circuit(3)
    c.ops += [
        (s, (A_QUBIT,)),
        (s, (B_QUBIT,)),
        (Gate(f"S_a{i}", gates.s_theta(VIVIANI_ANGLES[i - 1])), (A_QUBIT,)),
        (Gate(f"S_a{j}", gates.s_theta(VIVIANI_ANGLES[j - 1])), (B_QUBIT,)),
    ]
    for ctrl, tgt in cnots[:3]:
        c.ops += _cnot_ops(ctrl, tgt, decompose_ecr)
    c.ops += [
        (s, (M_QUBIT,)),
        (Gate("Z_pi/4", gates.z_theta(np.pi / 4)), (M_QUBIT,)),
        (s, (M_QUBIT,)),
    ]
    c.ops += _cnot_ops(*cnots[3], decompose_ecr)
    c.ops += [
        (Gate("Z", gates.Z_PI), (M_QUBIT,)),
        (s, (M_QUBIT,)),
        (Gate("Z_-pi/4", gates.z_theta(-np.pi / 4)), (M_QUBIT,)),
        (s, (M_QUBIT,)),
    ]
    return c


def simulate_outcome0(c: Circuit, qubit: int = M_QUBIT) -> float:
    """Probability of reading 0 on ``qubit``, other qubits traced out."""
    amps = c.statevector().reshape([2] * c.num_qubits)
    zero = np.take(amps, 0, axis=qubit)
    return float(np.sum(np.abs(zero) ** 2))


def ideal_probability_matrix(*, decompose_ecr: bool = False, reading: str = "diagram") -> np.ndarray:
    """The 5x5 matrix of outcome-0 probabilities for every preparation pair."""
    return np.array(
        [
            [simulate_outcome0(build_test_circuit(i, j, decompose_ecr=decompose_ecr, reading=reading))
             for j in range(1, 6)]
            for i in range(1, 6)
        ]
    )


def effective_measurement() -> Effect:
    """``|00><00| + (|01> + |10>)(<01| + <10|)/2`` on the A (x) B space."""
    k = lambda *d: basis_ket(2, *d)  # noqa: E731
    return Effect(projector(k(0, 0)) + projector(k(0, 1) + k(1, 0)) / 2)


def is_circuit_unitary(c: Circuit, tol: float = 1e-12) -> bool:
    return is_unitary(c.unitary(), tol)

