"""Known extremal configurations of the witness and their closed-form values."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..states import Effect, QuantumState, basis_ket, projector
from .config import QuantumConfig, evaluate_config

OMEGA = np.exp(2j * np.pi / 3)


class Case(str, enum.Enum):
    N3D2_RANK3 = "n3d2_rank3"
    N3D2_RANK2_REAL = "n3d2_rank2_real"
    N3D2_RANK2_COMPLEX = "n3d2_rank2_complex"
    N3D2_RANK1 = "n3d2_rank1"
    N4D2_COMPLEX = "n4d2_complex"
    N4D3 = "n4d3"
    N5D3_REAL = "n5d3_real"
    N5D3_COMPLEX = "n5d3_complex"
    N5D4 = "n5d4"


@dataclass(frozen=True)
class CaseInfo:
    value: float
    tol: float
    projection_rank: int | None
    # Numerically stated optima carry the looser tolerance.
    numeric: bool = False


CASES: dict[Case, CaseInfo] = {
    Case.N3D2_RANK3: CaseInfo((3 / 4) ** 4, 1e-9, 3),
    Case.N3D2_RANK2_REAL: CaseInfo(1 / 8, 1e-9, 2),
    Case.N3D2_RANK2_COMPLEX: CaseInfo(3 ** 6 / 5 ** 5, 1e-9, 2),
    Case.N3D2_RANK1: CaseInfo(3 ** 3 / 2 ** 8, 1e-9, 1),
    Case.N4D2_COMPLEX: CaseInfo(1 / 9, 1e-9, 3),
    Case.N4D3: CaseInfo(2 ** 8 * 5 ** 4 / 3 ** 11, 1e-9, 5),
    Case.N5D3_REAL: CaseInfo(0.2974087137533708, 1e-6, 5, numeric=True),
    Case.N5D3_COMPLEX: CaseInfo(0.33262772907714405, 1e-6, 5, numeric=True),
    Case.N5D4: CaseInfo(4 * (55 / 64) ** 5, 1e-9, 11),
}

#: Optimal parameters of the real n=5, d=3 family (squares of the amplitudes).
N5D3_REAL_X2 = 0.28105400986117085
N5D3_REAL_P2 = 0.8688370017274547

#: Optimum of the complex n=5, d=3 family, located by multistart local search.
N5D3_COMPLEX_PARAMS = {
    "x": -0.3783413831032114, "y": -0.5469080437896557, "z": 0.7468262110221636,
    "s": -0.4353169129323999, "t": 0.9002772824608013,
    "p": 0.4203368496154817, "q": -0.4335653746320909, "r": 0.7970809236052929,
    "c": 0.5783444746448709, "d": 0.5913421359486907, "e": 0.5619894544378824,
    "f": 0.9371229028606862, "g": 0.2469462617199311, "h": 0.24661348048416204,
    "u": 0.23694885696364323, "v": 0.6993635508260441, "w": 0.6743484729422988,
}

# Each group is a unit vector.
_COMPLEX_GROUPS = ("xyz", "st", "pqr", "cde", "fgh", "uvw")


def _k2(*digits):
    return basis_ket(2, *digits)


def _k3(*digits):
    return basis_ket(3, *digits)


def _pure(*amps) -> QuantumState:
    return QuantumState.pure(np.array(amps, dtype=complex))


def _trine() -> list[QuantumState]:
    return [_pure(math.cos(2 * math.pi * j / 3), math.sin(2 * math.pi * j / 3)) for j in (1, 2, 3)]


def _singlet_projector() -> np.ndarray:
    return projector(_k2(0, 1) - _k2(1, 0)) / 2


def _m2() -> np.ndarray:
    """Rank-3 projection orthogonal to the singlet."""
    return projector(_k2(0, 0)) + projector(_k2(1, 1)) + _singlet_projector()


def _config(n, d, field, A, B, M) -> QuantumConfig:
    return QuantumConfig(n=n, d=d, field=field, A=tuple(A), B=tuple(B), M=Effect(M))


def _n3d2_rank3():
    s = _trine()
    return _config(3, 2, "real", s, s, _m2())


def _n3d2_rank2_real():
    s = _trine()
    k = _k2
    M = (3 * projector(k(0, 0), k(0, 1), k(1, 0)) - projector(k(0, 0) + k(0, 1) + k(1, 0))) / 3
    return _config(3, 2, "real", s, s, M)


def _n3d2_rank2_complex():
    s = [_pure(math.sqrt(3 / 5), math.sqrt(2 / 5) * OMEGA ** j) for j in (1, 2, 3)]
    M = projector(_k2(0, 0)) + _singlet_projector()
    return _config(3, 2, "complex", s, s, M)


def _n3d2_rank1():
    s = _trine()
    return _config(3, 2, "real", s, s, _singlet_projector())


def _n4d2_complex():
    s = [_pure(1, OMEGA ** j * math.sqrt(2)) for j in (1, 2, 3)] + [_pure(1, 0)]
    return _config(4, 2, "complex", s, s, _m2())


def _n4d3():
    s = [_pure(1, a, b) for a, b in ((1, 1), (1, -1), (-1, 1), (-1, -1))]
    k = _k3
    M = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        M += 2 * projector(k(i, i)) / 3
        for j in range(3):
            if i != j:
                # antisymmetric part; together with the diagonal block this is
                # the projection orthogonal to every |psi_k psi_k>
                M += np.outer(k(i, j) - k(j, i), k(i, j)) / 2
                M -= np.outer(k(i, i), k(j, j)) / 3
    return _config(4, 3, "real", s, s, M)


def _n5d3_real_effect(p, q, x, y) -> np.ndarray:
    k = _k3
    phis = [
        k(2, 2),
        p * k(1, 0) - q * k(0, 2),
        p * k(0, 1) - q * k(2, 0),
        x * (k(1, 2) + k(2, 1)) - y * k(0, 0),
    ]
    return np.eye(9) - projector(*phis)


def n5d3_real_params(x2: float = N5D3_REAL_X2, p2: float = N5D3_REAL_P2) -> tuple[float, float, float, float]:
    """(p, q, x, y) with p^2 + q^2 = 1 and 2x^2 + y^2 = 1."""
    p, x = math.sqrt(p2), math.sqrt(x2)
    return p, math.sqrt(1 - p2), x, math.sqrt(1 - 2 * x2)


def n5d3_real_states() -> list[QuantumState]:
    r3 = math.sqrt(3)
    return [_pure(-1, r3, 0), _pure(-1, -r3, 0), _pure(1, 0, 0), _pure(-1, 0, r3), _pure(-1, 0, -r3)]


def n5d3_real_config(x2: float = N5D3_REAL_X2, p2: float = N5D3_REAL_P2) -> QuantumConfig:
    s = n5d3_real_states()
    return _config(5, 3, "real", s, s, _n5d3_real_effect(*n5d3_real_params(x2, p2)))


def n5d3_real_formula(p: float, q: float, x: float, y: float) -> float:
    """Closed-form witness of the real n=5, d=3 family."""
    s = x * x + y * y
    return (3 ** 6 / 2 ** 10) * (p * q + x * y) ** 2 * (
        2 * x * x * s ** 2 - 2 * p * p * q * q * s + p ** 4
    )


def _normalized_complex_params(params: dict) -> dict:
    out = dict(params)
    for group in _COMPLEX_GROUPS:
        norm = math.sqrt(sum(out[g] ** 2 for g in group))
        for g in group:
            out[g] /= norm
    return out


def n5d3_complex_config(params: dict | None = None) -> QuantumConfig:
    P = _normalized_complex_params(params or N5D3_COMPLEX_PARAMS)
    x, y, z, s, t = P["x"], P["y"], P["z"], P["s"], P["t"]
    p, q, r = P["p"], P["q"], P["r"]
    w = OMEGA
    A = [_pure(x, y, z * w ** j) for j in (1, 2, 3)] + [_pure(s, t, 0), _pure(1, 0, 0)]
    B = [_pure(p, q * w ** j, r * w ** (2 * j)) for j in (1, 2, 3)] + [_pure(1, 0, 0), _pure(0, 1, 0)]
    k = _k3
    M = projector(k(0, 1), k(0, 2), k(1, 1), k(1, 2), k(2, 0), k(2, 1))
    M = M + projector(P["c"] * k(0, 0) + P["d"] * k(1, 0) + P["e"] * k(2, 2))
    M = M - projector(P["f"] * k(0, 1) + P["g"] * k(1, 1) + P["h"] * k(2, 0))
    M = M - projector(P["u"] * k(0, 2) + P["v"] * k(1, 2) + P["w"] * k(2, 1))
    return _config(5, 3, "complex", A, B, M)


def n5d3_complex_alpha_beta(params: dict) -> tuple[float, float]:
    P = _normalized_complex_params(params)
    x, y, z = P["x"], P["y"], P["z"]
    c, d, e, f, g, h = P["c"], P["d"], P["e"], P["f"], P["g"], P["h"]
    u, v, w = P["u"], P["v"], P["w"]
    alpha = (
        2 * x * y * u * v * (c ** 2 * (1 - g ** 2) - d ** 2 * (1 - f ** 2))
        + (2 * x * y * c * d + z ** 2 * (1 - h ** 2))
        * ((1 - u ** 2) * (1 - g ** 2) - (1 - v ** 2) * (1 - f ** 2))
        + (2 * x * y * f * g + w ** 2 * z ** 2) * (d ** 2 * (1 - u ** 2) - c ** 2 * (1 - v ** 2))
        + z ** 2 * (
            (c ** 2 - d ** 2) * (1 - e ** 2)
            + (g ** 2 * c ** 2 - d ** 2 * f ** 2) * e ** 2
            + d ** 2 * u ** 2 - c ** 2 * v ** 2
        )
    )
    beta = (
        y ** 2 * (
            c * d * (g ** 2 - f ** 2 + u ** 2 * (1 - g ** 2) - v ** 2 * (1 - f ** 2))
            + f * g * (c ** 2 * (1 - v ** 2) - d ** 2 * (1 - u ** 2))
            + (d ** 2 * (1 - f ** 2) - c ** 2 * (1 - g ** 2)) * u * v
        )
        + z ** 2 * (
            u * v * ((1 - f ** 2) * (1 - h ** 2) - c ** 2 * (1 - w ** 2))
            - c * d * ((1 - u ** 2) * (1 - w ** 2) - e ** 2 * (1 - f ** 2))
            - f * g * ((1 - u ** 2) * (1 - h ** 2) - c ** 2 * e ** 2)
        )
    )
    return alpha, beta


def _n5d3_complex_common(P: dict) -> float:
    p, q, r, z = P["p"], P["q"], P["r"], P["z"]
    x, y = P["x"], P["y"]
    c, d, e, f, g, h = P["c"], P["d"], P["e"], P["f"], P["g"], P["h"]
    u, v, w = P["u"], P["v"], P["w"]
    k = p * r * e * (c * x + d * y) - p * q * h * (f * x + g * y) - q * r * w * (u * x + v * y)
    return 27 * r ** 2 * z ** 2 * k ** 2


def n5d3_complex_formula(params: dict) -> float:
    """Closed-form witness of the complex n=5, d=3 family at given (s, t)."""
    P = _normalized_complex_params(params)
    alpha, beta = n5d3_complex_alpha_beta(P)
    s, t = P["s"], P["t"]
    return t * (t * alpha + 2 * s * beta) * _n5d3_complex_common(P)


def n5d3_complex_formula_max_st(params: dict) -> float:
    """The same witness maximized over the (s, t) circle: one factor alpha/2 + sqrt(alpha^2/4 + beta^2)."""
    P = _normalized_complex_params(params)
    alpha, beta = n5d3_complex_alpha_beta(P)
    return (alpha / 2 + math.sqrt(alpha ** 2 / 4 + beta ** 2)) * _n5d3_complex_common(P)


def simplex_vectors() -> list[np.ndarray]:
    """Five unit vectors in C^4 with pairwise overlap |<a|b>|^2 = 1/16 (a regular 5-cell)."""
    r5 = math.sqrt(5)
    raw = [(-1, r5, r5, r5), (-1, r5, -r5, -r5), (-1, -r5, r5, -r5), (-1, -r5, -r5, r5)]
    return [np.array(v, dtype=complex) / 4 for v in raw] + [np.array([1, 0, 0, 0], dtype=complex)]


def _n5d4():
    vecs = simplex_vectors()
    s = [QuantumState.pure(v) for v in vecs]
    tilde = [np.kron(v, v) for v in vecs]
    e = sum(tilde)
    M = np.eye(16) - 16 * projector(*tilde) / 15 + 4 * projector(e) / 75
    return _config(5, 4, "real", s, s, M)


_BUILDERS = {
    Case.N3D2_RANK3: _n3d2_rank3,
    Case.N3D2_RANK2_REAL: _n3d2_rank2_real,
    Case.N3D2_RANK2_COMPLEX: _n3d2_rank2_complex,
    Case.N3D2_RANK1: _n3d2_rank1,
    Case.N4D2_COMPLEX: _n4d2_complex,
    Case.N4D3: _n4d3,
    Case.N5D3_REAL: n5d3_real_config,
    Case.N5D3_COMPLEX: n5d3_complex_config,
    Case.N5D4: _n5d4,
}


def closed_form_config(case: Case | str) -> QuantumConfig:
    try:
        case = Case(case)
    except ValueError:
        raise ValueError(f"unknown case {case!r}; choose from {[c.value for c in Case]}") from None
    return _BUILDERS[case]()


def verify_n5d4_probability_pattern(tol: float = 1e-10) -> bool:
    """Off-diagonal probabilities 55/64 and zero diagonal for the five-cell configuration."""
    p = closed_form_config(Case.N5D4).probabilities()
    target = np.full((5, 5), 55 / 64)
    np.fill_diagonal(target, 0.0)
    return bool(np.allclose(p, target, rtol=0, atol=tol))


def case_report(case: Case | str) -> dict:
    case = Case(case)
    c = closed_form_config(case)
    value = evaluate_config(c)
    ref = CASES[case].value
    return {
        "case": case.value,
        "n": c.n,
        "d": c.d,
        "field": c.field,
        "value": value,
        "reference": ref,
        "abs_error": abs(value - ref),
        "tolerance": CASES[case].tol,
    }
