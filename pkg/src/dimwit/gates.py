"""Gate matrices and the ECR/CNOT transpilation identities.

Conventions: basis ``|0>, |1>``; two-qubit matrices act on ``|ab>`` with
``a`` the first (upper) qubit. ``V_theta = exp(-i theta V / 2)`` and
``V_pm = V_{pm pi/2}``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import dagger, is_unitary, kron

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    label: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"gate {self.label!r} must be 2x2 or 4x4, got {m.shape}")
        if not is_unitary(m, 1e-12):
            raise ValueError(f"gate {self.label!r} is not unitary")
        object.__setattr__(self, "matrix", m)

    @property
    def num_qubits(self) -> int:
        return 1 if self.matrix.shape[0] == 2 else 2


I = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
II = np.eye(4, dtype=complex)


def rotation(pauli: np.ndarray, theta: float) -> np.ndarray:
    """``exp(-i theta V / 2)`` for an involutory ``V``."""
    return np.cos(theta / 2) * np.eye(pauli.shape[0]) - 1j * np.sin(theta / 2) * pauli


def z_theta(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


# Native pi/2 pulse, S = sqrt(X) = X_+.
S = rotation(X, np.pi / 2)
H = (X + Z) / SQRT2

X_PLUS = rotation(X, np.pi / 2)
X_MINUS = rotation(X, -np.pi / 2)
Y_PLUS = rotation(Y, np.pi / 2)
Y_MINUS = rotation(Y, -np.pi / 2)
Z_PLUS = z_theta(np.pi / 2)
Z_MINUS = z_theta(-np.pi / 2)
Z_PI = z_theta(np.pi)


def s_theta(theta: float) -> np.ndarray:
    """Phase-shifted pi/2 pulse ``Z_theta S Z_theta^dag``.

    With this orientation ``s_theta(alpha) @ S |0>`` lands on the Viviani
    point ``-(sin a cos a, sin^2 a, cos a)``.
    """
    zt = z_theta(theta)
    return zt @ S @ dagger(zt)


# |ab>, a = control, b = target
CNOT_DOWN = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
# b = control, a = target
CNOT_UP = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)

ECR_DOWN = (kron(X, I) - kron(Y, X)) / SQRT2
ECR_UP = (kron(I, X) - kron(X, Y)) / SQRT2

CR_PLUS = rotation(kron(Z, X), np.pi / 4)
CR_MINUS = rotation(kron(Z, X), -np.pi / 4)


def named_gates() -> dict[str, Gate]:
    """Every fixed gate of the toolkit, keyed by label."""
    table = {
        "I": I, "X": X, "Y": Y, "Z": Z, "S": S, "H": H,
        "X+": X_PLUS, "X-": X_MINUS, "Y+": Y_PLUS, "Y-": Y_MINUS,
        "Z+": Z_PLUS, "Z-": Z_MINUS, "Zpi": Z_PI,
        "CNOT_down": CNOT_DOWN, "CNOT_up": CNOT_UP,
        "ECR_down": ECR_DOWN, "ECR_up": ECR_UP,
        "CR+": CR_PLUS, "CR-": CR_MINUS,
    }
    return {k: Gate(k, v) for k, v in table.items()}


def equal_up_to_phase(a, b, tol: float = 1e-12) -> bool:
    """True iff ``a == exp(i phi) b`` for some real phi, elementwise within ``tol``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) <= tol:
        return bool(np.all(np.abs(a) <= tol))
    ratio = a[k] / b[k]
    if abs(abs(ratio) - 1) > tol / abs(b[k]) + tol:
        return False
    phase = ratio / abs(ratio)
    return bool(np.all(np.abs(a - phase * b) <= tol))


def _identities() -> list[tuple[str, np.ndarray, np.ndarray]]:
    # Products are written in operator order: the rightmost factor acts first.
    return [
        ("ECR_down = ((XI)-(YX))/sqrt2 = CR- (XI) CR+",
         ECR_DOWN, CR_MINUS @ kron(X, I) @ CR_PLUS),
        ("ECR_down = [[0, X-], [X+, 0]]",
         ECR_DOWN, np.block([[np.zeros((2, 2)), X_MINUS], [X_PLUS, np.zeros((2, 2))]])),
        ("ECR_down = explicit 4x4 matrix",
         ECR_DOWN, np.array([[0, 0, 1, 1j], [0, 0, 1j, 1], [1, -1j, 0, 0], [-1j, 1, 0, 0]]) / SQRT2),
        ("ECR_down ECR_down = II", ECR_DOWN @ ECR_DOWN, II),
        ("ECR_up = (HH) ECR_down (Y+ Y-)",
         ECR_UP, kron(H, H) @ ECR_DOWN @ kron(Y_PLUS, Y_MINUS)),
        ("H = Z+ X+ Z+", H, Z_PLUS @ X_PLUS @ Z_PLUS),
        ("Z+ X+ Z- = Y+", Z_PLUS @ X_PLUS @ Z_MINUS, Y_PLUS),
        ("Z- X+ Z+ = Y-", Z_MINUS @ X_PLUS @ Z_PLUS, Y_MINUS),
        ("Y+ = HZ", Y_PLUS, H @ Z),
        ("Y- = ZH", Y_MINUS, Z @ H),
        ("CNOT_down = ((II)+(ZI)+(IX)-(ZX))/2",
         CNOT_DOWN, (II + kron(Z, I) + kron(I, X) - kron(Z, X)) / 2),
        ("CNOT_down = (Z+ I) ECR_down (X X+)",
         CNOT_DOWN, kron(Z_PLUS, I) @ ECR_DOWN @ kron(X, X_PLUS)),
        ("CNOT_up = ((II)+(IZ)+(XI)-(XZ))/2",
         CNOT_UP, (II + kron(I, Z) + kron(X, I) - kron(X, Z)) / 2),
        ("CNOT_up = (HH) CNOT_down (HH)",
         CNOT_UP, kron(H, H) @ CNOT_DOWN @ kron(H, H)),
        ("CNOT_up = (HH) ECR_down (X+ X+) (Z- H)",
         CNOT_UP, kron(H, H) @ ECR_DOWN @ kron(X_PLUS, X_PLUS) @ kron(Z_MINUS, H)),
        ("S = sqrt(X): S S = -iX", S @ S, -1j * X),
        ("SZ = ZS^dag", S @ Z, Z @ dagger(S)),
    ]


def verify_gate_identities(tol: float = 1e-12, corrupt: str | None = None) -> list[tuple[str, bool]]:
    """Check every transpilation identity up to a global phase.

    ``corrupt`` names an identity whose right-hand side gets a sign flip on
    one entry; it exists so callers can confirm a failure is reported.
    """
    report = []
    for name, lhs, rhs in _identities():
        if corrupt is not None and corrupt in name:
            rhs = rhs.copy()
            k = np.unravel_index(np.argmax(np.abs(rhs)), rhs.shape)
            rhs[k] = -rhs[k]
        report.append((name, equal_up_to_phase(lhs, rhs, tol)))
    return report
