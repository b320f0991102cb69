"""Classical maxima: largest |det| of an n x n matrix with 0/1 entries."""
from __future__ import annotations

import itertools

import numpy as np

from ..linalg import determinant, integer_determinant

MAX_EXHAUSTIVE_N = 5

#: Largest |det| over {0,1} n x n matrices, n = 1..9.
CLASSICAL_MAXIMA = {1: 1, 2: 1, 3: 2, 4: 3, 5: 5, 6: 9, 7: 32, 8: 56, 9: 144}

MAXIMAL_MATRICES = {
    1: [[1]],
    2: [[1, 0],
        [0, 1]],
    3: [[1, 0, 1],
        [1, 1, 0],
        [0, 1, 1]],
    4: [[0, 1, 1, 1],
        [1, 1, 0, 1],
        [1, 0, 1, 1],
        [1, 1, 1, 0]],
    5: [[1, 0, 0, 1, 1],
        [0, 1, 0, 1, 1],
        [0, 0, 1, 1, 1],
        [1, 1, 1, 0, 1],
        [1, 1, 1, 1, 0]],
    6: [[1, 0, 0, 1, 1, 0],
        [0, 1, 0, 0, 1, 1],
        [1, 0, 1, 0, 0, 1],
        [1, 1, 0, 1, 0, 0],
        [0, 1, 1, 0, 1, 0],
        [0, 0, 1, 1, 0, 1]],
    7: [[1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [1, 1, 0, 0, 1, 1, 0],
        [0, 0, 0, 1, 1, 1, 1],
        [1, 0, 1, 1, 0, 1, 0],
        [1, 1, 0, 1, 0, 0, 1],
        [0, 1, 1, 1, 1, 0, 0]],
    8: [[1, 0, 1, 0, 0, 1, 1, 0],
        [1, 1, 0, 1, 0, 0, 1, 1],
        [1, 1, 1, 0, 1, 0, 0, 1],
        [0, 1, 1, 1, 0, 1, 0, 0],
        [0, 0, 1, 1, 1, 0, 1, 0],
        [1, 0, 0, 1, 1, 1, 0, 1],
        [0, 1, 0, 0, 1, 1, 1, 0],
        [0, 0, 1, 0, 0, 1, 1, 1]],
    9: [[0, 1, 1, 1, 1, 1, 1, 0, 0],
        [1, 0, 1, 1, 1, 1, 0, 1, 0],
        [1, 1, 0, 1, 1, 0, 1, 1, 0],
        [1, 1, 1, 0, 0, 1, 1, 1, 0],
        [1, 1, 1, 0, 1, 0, 0, 0, 1],
        [1, 1, 0, 1, 0, 1, 0, 0, 1],
        [1, 0, 1, 1, 0, 0, 1, 0, 1],
        [0, 1, 1, 1, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1, 1, 1, 1, 1]],
}


class OutOfExhaustiveRange(ValueError):
    pass


def table_matrix(n: int) -> np.ndarray:
    if n not in MAXIMAL_MATRICES:
        raise ValueError(f"no tabulated maximal matrix for n={n}")
    return np.array(MAXIMAL_MATRICES[n], dtype=np.int64)


def verify_table_matrix(n: int) -> int:
    """Exact |det| of the tabulated maximal 0/1 matrix of size n."""
    return abs(integer_determinant(MAXIMAL_MATRICES[n]))


def _rows(n: int) -> np.ndarray:
    codes = np.arange(1, 2 ** n)
    return ((codes[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(float)


def classical_max_det(n: int) -> tuple[int, np.ndarray]:
    """Exhaustive maximum of |det| over {0,1} n x n matrices.

    A nonzero determinant needs n distinct nonzero rows, and reordering rows
    only flips the sign, so it suffices to scan n-subsets of the 2**n - 1
    nonzero rows.
    """
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise OutOfExhaustiveRange(
            f"exhaustive search supports 1 <= n <= {MAX_EXHAUSTIVE_N}; "
            "use verify_table_matrix for larger n"
        )
    rows = _rows(n)
    best_val, best = 0, None
    combos = itertools.combinations(range(len(rows)), n)
    while True:
        chunk = np.array(list(itertools.islice(combos, 50_000)), dtype=np.int64)
        if chunk.size == 0:
            break
        dets = np.abs(np.asarray(determinant(rows[chunk])))
        k = int(np.argmax(dets))
        if dets[k] > best_val + 0.5:
            best_val, best = dets[k], rows[chunk[k]].astype(np.int64)
    value = abs(integer_determinant(best.tolist()))
    return value, best
