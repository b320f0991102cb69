import math

import numpy as np
import pytest

from dimwit.linalg import hermitian_eigvals, is_effect, integer_determinant
from dimwit.maxima import (
    CASES,
    CLASSICAL_MAXIMA,
    QUANTUM_MAXIMA,
    AnnealConfig,
    Case,
    OutOfExhaustiveRange,
    QuantumConfig,
    anneal_quantum_max,
    case_report,
    classical_max_det,
    closed_form_config,
    evaluate_config,
    signed_witness,
    table_matrix,
    verify_n5d4_probability_pattern,
    verify_table_matrix,
    with_overrides,
)
from dimwit.maxima import closed_form
from dimwit.states import QuantumState, ValidationError


def brute_force_max_det(n):
    # Independent oracle over all 2^(n*n) matrices.
    best = 0
    for bits in range(2 ** (n * n)):
        rows = [[(bits >> (i * n + j)) & 1 for j in range(n)] for i in range(n)]
        best = max(best, abs(integer_determinant(rows)))
    return best


@pytest.mark.parametrize("n", [1, 2, 3])
def test_classical_matches_brute_force(n):
    value, mat = classical_max_det(n)
    assert value == brute_force_max_det(n) == CLASSICAL_MAXIMA[n]
    assert set(np.unique(mat)) <= {0, 1}
    assert abs(integer_determinant(mat.tolist())) == value


@pytest.mark.parametrize("n", [4, 5])
def test_classical_known_maxima(n):
    value, mat = classical_max_det(n)
    assert value == CLASSICAL_MAXIMA[n] == verify_table_matrix(n)
    assert abs(integer_determinant(mat.tolist())) == value


def test_classical_range():
    with pytest.raises(OutOfExhaustiveRange):
        classical_max_det(6)
    with pytest.raises(ValueError):
        classical_max_det(0)


def test_maximal_matrices():
    assert [verify_table_matrix(n) for n in range(1, 10)] == [1, 1, 2, 3, 5, 9, 32, 56, 144]
    for n in range(1, 10):
        m = table_matrix(n)
        assert m.shape == (n, n)
        assert set(np.unique(m)) <= {0, 1}


@pytest.mark.parametrize("case", list(Case))
def test_closed_form_values(case):
    rep = case_report(case)
    assert rep["abs_error"] <= CASES[case].tol
    assert rep["case"] == case.value


@pytest.mark.parametrize("case", list(Case))
def test_closed_form_effects_are_projections(case):
    c = closed_form_config(case)
    assert is_effect(c.M.matrix, 1e-10)
    ev = hermitian_eigvals(c.M.matrix)
    assert np.allclose(ev, np.round(ev), atol=1e-8)
    assert int(round(ev.sum())) == CASES[case].projection_rank


def test_closed_form_examples():
    assert evaluate_config(closed_form_config("n3d2_rank3")) == pytest.approx(0.31640625, abs=1e-12)
    assert evaluate_config(closed_form_config("n3d2_rank2_complex")) == pytest.approx(0.23328, abs=1e-12)
    assert evaluate_config(closed_form_config("n3d2_rank1")) == pytest.approx(0.10546875, abs=1e-12)
    assert evaluate_config(closed_form_config("n5d4")) == pytest.approx(1.8748803995549678, abs=1e-12)
    assert signed_witness(closed_form_config("n4d3")) < 0
    with pytest.raises(ValueError):
        closed_form_config("n9d9")


def test_n5d4_pattern():
    assert verify_n5d4_probability_pattern()
    p = closed_form_config("n5d4").probabilities()
    assert p[0, 1] == pytest.approx(55 / 64)
    assert p[2, 2] == pytest.approx(0.0, abs=1e-12)


def test_n5d3_real_parameters_and_formula():
    p, q, x, y = closed_form.n5d3_real_params()
    assert x * x == pytest.approx(0.28105400986117085)
    assert p * p == pytest.approx(0.8688370017274547)
    assert 2 * x * x + y * y == pytest.approx(1.0)
    value = evaluate_config(closed_form.n5d3_real_config())
    assert closed_form.n5d3_real_formula(p, q, x, y) == pytest.approx(value, abs=1e-9)


def test_n5d3_real_formula_away_from_optimum():
    for x2, p2 in ((0.2, 0.8), (0.3, 0.5), (0.1, 0.95)):
        p, q, x, y = closed_form.n5d3_real_params(x2, p2)
        value = evaluate_config(closed_form.n5d3_real_config(x2, p2))
        assert closed_form.n5d3_real_formula(p, q, x, y) == pytest.approx(value, abs=1e-12)


def test_n5d3_complex_formulas():
    params = closed_form.N5D3_COMPLEX_PARAMS
    value = evaluate_config(closed_form.n5d3_complex_config())
    assert closed_form.n5d3_complex_formula(params) == pytest.approx(value, abs=1e-12)
    assert closed_form.n5d3_complex_formula_max_st(params) == pytest.approx(value, abs=1e-9)
    assert abs(value - 0.33262772907714405) < 1e-6


def test_duplicate_preparation_gives_zero():
    c = closed_form_config("n4d3")
    A = (c.A[0], c.A[0]) + c.A[2:]
    dup = QuantumConfig(c.n, c.d, c.field, A, c.B, c.M)
    assert evaluate_config(dup) == pytest.approx(0.0, abs=1e-14)


def test_config_validation_and_json():
    c = closed_form_config("n3d2_rank2_complex")
    back = QuantumConfig.from_json(c.to_json())
    assert evaluate_config(back) == pytest.approx(evaluate_config(c), abs=1e-14)
    with pytest.raises(ValidationError):
        QuantumConfig(3, 2, "real", c.A, c.B, c.M)
    with pytest.raises(ValidationError):
        QuantumConfig(2, 2, "complex", c.A, c.B, c.M)
    with pytest.raises(ValidationError):
        QuantumConfig(3, 2, "quaternion", c.A, c.B, c.M)
    with pytest.raises(ValidationError):
        QuantumConfig(3, 3, "complex", c.A, c.B, c.M)


# -- annealer ------------------------------------------------------------------


FAST = AnnealConfig(restarts=4, hops=10, polish_sweeps=100)


def test_anneal_config_validation():
    for bad in (dict(cooling_rate=1.0), dict(cooling_rate=0.0), dict(restarts=0),
                dict(step_scale=0.0), dict(initial_temperature=-1.0),
                dict(min_temperature=2.0), dict(hops=-1)):
        with pytest.raises(ValueError):
            AnnealConfig(**bad)
    cfg = AnnealConfig(initial_temperature=1.0, cooling_rate=0.5, min_temperature=0.1)
    assert cfg.levels() == 4
    assert len(AnnealConfig(hops=7).hop_temperatures()) == 7
    assert with_overrides(cfg, restarts=3, seed=None).restarts == 3


def test_anneal_rejects_bad_dims():
    with pytest.raises(ValueError):
        anneal_quantum_max(6, 2, "real", FAST)
    with pytest.raises(ValueError):
        anneal_quantum_max(3, 5, "real", FAST)
    with pytest.raises(ValueError):
        anneal_quantum_max(3, 2, "octonion", FAST)


@pytest.mark.parametrize("cell", [(3, 2, "real"), (4, 2, "complex"), (4, 3, "real")])
def test_anneal_small_cells(cell):
    res = anneal_quantum_max(*cell, FAST)
    assert res.value == pytest.approx(QUANTUM_MAXIMA[cell], abs=1e-3)
    assert res.value <= QUANTUM_MAXIMA[cell] + 1e-6
    assert evaluate_config(res.config) == pytest.approx(res.value, abs=1e-12)


@pytest.mark.parametrize("cell", [(4, 2, "real"), (5, 2, "complex")])
def test_anneal_forced_zero(cell):
    assert anneal_quantum_max(*cell, FAST).value <= 1e-6


def test_anneal_real_field_config_is_real():
    res = anneal_quantum_max(3, 2, "real", FAST)
    assert res.config.field == "real"
    assert np.abs(res.config.M.matrix.imag).max() == 0


def test_anneal_deterministic():
    a = anneal_quantum_max(3, 2, "complex", FAST)
    b = anneal_quantum_max(3, 2, "complex", FAST)
    assert a.restart_values == b.restart_values


def test_anneal_restarts_independent():
    few = anneal_quantum_max(4, 2, "complex", with_overrides(FAST, restarts=2))
    many = anneal_quantum_max(4, 2, "complex", with_overrides(FAST, restarts=4))
    assert few.annealed_values == many.annealed_values[:2]
    assert np.allclose(few.restart_values, many.restart_values[:2], rtol=0, atol=1e-12)


def test_anneal_mixed_states_flag():
    res = anneal_quantum_max(3, 2, "complex", with_overrides(FAST, mixed=True, hops=0))
    assert 0 <= res.value <= 0.31640625 + 1e-6
    assert all(isinstance(s, QuantumState) for s in res.config.A)


def test_anneal_without_polish_stays_below_bound():
    res = anneal_quantum_max(3, 2, "real", with_overrides(FAST, polish=False))
    assert 0 < res.value <= 0.31640625 + 1e-9
    assert res.value == pytest.approx(max(res.annealed_values), rel=1e-9)


def test_quantum_reference_values():
    assert QUANTUM_MAXIMA[(4, 3, "real")] == pytest.approx(0.903, abs=5e-4)
    assert QUANTUM_MAXIMA[(5, 4, "real")] == pytest.approx(1.874, abs=1e-3)
    assert QUANTUM_MAXIMA[(5, 3, "complex")] == pytest.approx(0.333, abs=5e-4)
    assert QUANTUM_MAXIMA[(5, 3, "real")] == pytest.approx(0.297, abs=5e-4)
    assert QUANTUM_MAXIMA[(3, 2, "real")] == pytest.approx(0.316, abs=5e-4)
    assert math.isclose(QUANTUM_MAXIMA[(4, 2, "complex")], 1 / 9)
