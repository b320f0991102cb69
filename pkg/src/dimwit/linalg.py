"""Small dense complex linear algebra.

Everything here works on numpy arrays and is written for matrices of
dimension at most ~32. ``determinant`` and ``adjugate`` accept stacks of
matrices (shape ``(..., n, n)``) so the optimizers can evaluate many
candidates at once.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

#: Absolute tolerance used by every check that does not receive one explicitly.
ATOL = 1e-10

MAX_DIM = 32


class DimensionError(ValueError):
    """Raised for non-square input or mismatched operand dimensions."""


def _tol(tol: float | None) -> float:
    return ATOL if tol is None else tol


def _square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionError(f"expected square matrix, got shape {m.shape}")
    if m.shape[-1] > MAX_DIM:
        raise DimensionError(f"dimension {m.shape[-1]} exceeds {MAX_DIM}")
    return m


def kron(a, b, *more) -> np.ndarray:
    """Kronecker product; entry ``(i*rb + k, j*cb + l)`` equals ``a[i, j] * b[k, l]``."""
    a = np.asarray(a)
    out = a
    for nxt in (b, *more):
        nxt = np.asarray(nxt)
        ra, ca = out.shape
        rb, cb = nxt.shape
        out = (out[:, None, :, None] * nxt[None, :, None, :]).reshape(ra * rb, ca * cb)
    return out


@lru_cache(maxsize=None)
def _drop_column(n: int) -> tuple[np.ndarray, ...]:
    cols = np.arange(n)
    return tuple(np.delete(cols, j) for j in range(n))


def _det_cofactor(m: np.ndarray) -> np.ndarray:
    n = m.shape[-1]
    if n == 1:
        return m[..., 0, 0]
    if n == 2:
        return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    rest = m[..., 1:, :]
    total = 0
    for j, keep in enumerate(_drop_column(n)):
        term = m[..., 0, j] * _det_cofactor(rest[..., keep])
        total = total + term if j % 2 == 0 else total - term
    return total


def _det_lu(m: np.ndarray) -> np.ndarray:
    # Gaussian elimination with partial pivoting, vectorized over leading axes.
    n = m.shape[-1]
    batch = m.shape[:-2]
    a = m.reshape((-1, n, n)).astype(np.result_type(m.dtype, np.float64), copy=True)
    rows = np.arange(a.shape[0])
    det = np.ones(a.shape[0], dtype=a.dtype)
    for k in range(n):
        piv = k + np.argmax(np.abs(a[:, k:, k]), axis=1)
        swap = piv != k
        if np.any(swap):
            tmp = a[rows[swap], k, :].copy()
            a[rows[swap], k, :] = a[rows[swap], piv[swap], :]
            a[rows[swap], piv[swap], :] = tmp
            det[swap] = -det[swap]
        pivot = a[:, k, k]
        det = det * pivot
        nz = pivot != 0
        if k + 1 < n and np.any(nz):
            factors = np.zeros((a.shape[0], n - k - 1), dtype=a.dtype)
            factors[nz] = a[nz, k + 1:, k] / pivot[nz, None]
            a[:, k + 1:, k:] -= factors[:, :, None] * a[:, k, None, k:]
    return det.reshape(batch)


def determinant(m) -> complex | float | np.ndarray:
    """Determinant of a square matrix or of a stack of them.

    Direct cofactor expansion for n <= 4, LU with partial pivoting above.
    Returns a scalar for a single matrix and an array for a stack.
    """
    m = _square(m)
    n = m.shape[-1]
    if n == 0:
        out = np.ones(m.shape[:-2], dtype=m.dtype)
    elif n <= 4:
        out = np.asarray(_det_cofactor(m))
    else:
        out = _det_lu(m)
    return out[()] if out.ndim == 0 else out


def minors(m) -> np.ndarray:
    """Stack of all (n-1)x(n-1) minors: ``out[..., i, j]`` deletes row i and column j."""
    m = _square(m)
    n = m.shape[-1]
    idx = np.arange(n)
    keep = np.array([np.delete(idx, i) for i in range(n)])  # (n, n-1)
    sub = m[..., keep[:, None, :, None], keep[None, :, None, :]]
    return sub


def cofactors(m) -> np.ndarray:
    m = _square(m)
    n = m.shape[-1]
    if n == 1:
        return np.ones_like(m)
    signs = (-1.0) ** np.add.outer(np.arange(n), np.arange(n))
    return signs * determinant(minors(m))


def adjugate(m) -> np.ndarray:
    """Transposed cofactor matrix, built from minors (never from an inverse).

    Well defined for singular input, which is the case the witness lives on.
    """
    return np.swapaxes(cofactors(m), -1, -2)


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Gaussian elimination)."""
    a = [[Fraction(int(x)) for x in row] for row in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("integer_determinant needs a square matrix")
    sign = 1
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        det *= a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    out = sign * det
    assert out.denominator == 1
    return int(out)


def dagger(m) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(m), -1, -2))


def is_hermitian(m, tol: float | None = None) -> bool:
    m = _square(m)
    return bool(np.allclose(m, dagger(m), rtol=0.0, atol=_tol(tol)))


def hermitian_eigvals(m) -> np.ndarray:
    m = _square(m)
    return np.linalg.eigvalsh((m + dagger(m)) / 2)


def is_psd(m, tol: float | None = None) -> bool:
    tol = _tol(tol)
    if not is_hermitian(m, tol):
        return False
    return bool(hermitian_eigvals(m).min() >= -tol)


def is_effect(m, tol: float | None = None) -> bool:
    """True for Hermitian ``m`` with spectrum inside ``[-tol, 1 + tol]``."""
    tol = _tol(tol)
    if not is_hermitian(m, tol):
        return False
    ev = hermitian_eigvals(m)
    return bool(ev.min() >= -tol and ev.max() <= 1 + tol)


def is_unitary(m, tol: float | None = None) -> bool:
    m = _square(m)
    return bool(np.allclose(dagger(m) @ m, np.eye(m.shape[-1]), rtol=0.0, atol=_tol(tol)))
