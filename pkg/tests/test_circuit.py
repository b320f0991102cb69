import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimwit import gates
from dimwit.circuit import (
    CNOT_READINGS,
    Circuit,
    build_test_circuit,
    effective_measurement,
    ideal_probability_matrix,
    is_circuit_unitary,
    simulate_outcome0,
)
from dimwit.gates import Gate, equal_up_to_phase, verify_gate_identities
from dimwit.linalg import adjugate, determinant, is_unitary
from dimwit.states import viviani_set
from dimwit.witness import probability_matrix

REFERENCE_ADJ = np.array([
    [-1, 1, -1, 1, 0],
    [1, -1, 1, -1, 0],
    [-1, 1, -1, 1, 0],
    [1, -1, 1, -1, 0],
    [0, 0, 0, 0, 0],
]) / 2**9


def test_named_gates_are_unitary():
    for name, g in gates.named_gates().items():
        assert is_unitary(g.matrix, 1e-12), name


def test_gate_examples():
    assert np.allclose(gates.S @ gates.S, -1j * gates.X)
    assert np.allclose(gates.ECR_DOWN @ gates.ECR_DOWN, np.eye(4))
    assert equal_up_to_phase(gates.H, gates.Z_PLUS @ gates.X_PLUS @ gates.Z_PLUS)
    assert np.allclose(gates.z_theta(0.4), np.diag([np.exp(-0.2j), np.exp(0.2j)]))
    ecr = np.array([[0, 0, 1, 1j], [0, 0, 1j, 1], [1, -1j, 0, 0], [-1j, 1, 0, 0]]) / math.sqrt(2)
    assert np.allclose(gates.ECR_DOWN, ecr)


def test_gate_rejects_bad_matrices():
    with pytest.raises(ValueError):
        Gate("bad", np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        Gate("bad", np.eye(3))


def test_equal_up_to_phase():
    assert equal_up_to_phase(gates.X, -1j * gates.X)
    assert not equal_up_to_phase(gates.X, gates.Z)
    assert equal_up_to_phase(gates.S @ gates.Z, gates.Z @ gates.S.conj().T)
    assert not equal_up_to_phase(gates.X, 2 * gates.X)
    assert not equal_up_to_phase(np.eye(2), np.eye(4))


@given(st.floats(0, 2 * math.pi))
def test_phase_invariance(phi):
    u = gates.CNOT_UP
    assert equal_up_to_phase(np.exp(1j * phi) * u, u)


def test_gate_identities_all_pass():
    report = verify_gate_identities()
    assert len(report) >= 15
    failing = [name for name, ok in report if not ok]
    assert failing == []
    names = " ".join(n for n, _ in report)
    for needle in ("Z+ X+ Z- = Y+", "Z- X+ Z+ = Y-", "Y+ = HZ", "Y- = ZH", "CNOT_down = (Z+ I)", "ECR_up"):
        assert needle in names


def test_gate_identities_negative_control():
    report = dict(verify_gate_identities(corrupt="CNOT_down = (Z+ I)"))
    assert not report["CNOT_down = (Z+ I) ECR_down (X X+)"]
    assert sum(not ok for ok in report.values()) == 1


def test_s_theta_conjugation():
    th = 0.37
    z = gates.z_theta(th)
    assert np.allclose(gates.s_theta(th), z @ gates.S @ z.conj().T)


def test_circuit_structure():
    c = build_test_circuit(1, 1)
    assert c.num_qubits == 3
    assert c.labels() == [
        "S@0", "S@2", "S_a1@0", "S_a1@2",
        "CNOT_down@0,1", "CNOT_down@1,2", "CNOT_up@0,1",
        "S@1", "Z_pi/4@1", "S@1", "CNOT_up@1,2",
        "Z@1", "S@1", "Z_-pi/4@1", "S@1",
    ]
    assert c.depth() == 13
    assert is_circuit_unitary(c)
    assert c.unitary().shape == (8, 8)


def test_circuit_rejects_bad_ops():
    c = Circuit(3)
    with pytest.raises(ValueError):
        c.add(gates.CNOT_DOWN, 0, 2)
    with pytest.raises(ValueError):
        c.add(gates.X, 3)
    with pytest.raises(ValueError):
        c.add(gates.X, 0, 1)
    with pytest.raises(ValueError):
        build_test_circuit(0, 1)


def test_statevector_matches_unitary(rng):
    c = build_test_circuit(2, 4)
    psi = c.unitary()[:, 0]
    assert np.allclose(c.statevector(), psi)


def test_outcome_examples():
    assert simulate_outcome0(build_test_circuit(5, 5)) == pytest.approx(0.0, abs=1e-15)
    assert simulate_outcome0(build_test_circuit(1, 1)) == pytest.approx((5 - math.sqrt(8)) / 8)
    assert simulate_outcome0(build_test_circuit(5, 1)) == pytest.approx((2 - math.sqrt(2)) / 8)


def test_ideal_matrix_properties(ideal_p):
    assert abs(determinant(ideal_p)) < 1e-12
    assert np.allclose(adjugate(ideal_p), REFERENCE_ADJ, atol=1e-10)
    vs = viviani_set()
    assert np.allclose(probability_matrix(effective_measurement(), vs, vs), ideal_p, atol=1e-10)


def test_ecr_decomposition_preserves_probabilities(ideal_p):
    assert np.allclose(ideal_probability_matrix(decompose_ecr=True), ideal_p, atol=1e-10)
    assert build_test_circuit(1, 2, decompose_ecr=True).depth() > build_test_circuit(1, 2).depth()


def test_swapped_reading_does_not_reproduce(ideal_p):
    assert set(CNOT_READINGS) == {"diagram", "swapped"}
    other = ideal_probability_matrix(reading="swapped")
    assert np.abs(other - ideal_p).max() > 0.1


def test_effective_measurement():
    m = effective_measurement().matrix
    assert np.allclose(np.linalg.eigvalsh(m), [0, 0, 1, 1])
    assert m[0, 0] == pytest.approx(1.0)
    assert m[1, 2] == pytest.approx(0.5)
