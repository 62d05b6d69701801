"""Dense linear algebra over F_p on int64 numpy arrays.

``row_echelon`` is the reference elimination: pivots are chosen column by
column, taking the first remaining row with a nonzero entry. ``rank`` uses
FLINT's ``nmod_mat`` for large matrices when python-flint is importable and
falls back to ``row_echelon`` otherwise; the two agree exactly (tested).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, ZeroInverse

try:  # pragma: no cover - exercised implicitly
    import flint as _flint
except ImportError:  # pragma: no cover
    _flint = None

# below this many entries the numpy path is as fast as converting to FLINT
_FLINT_MIN_ENTRIES = 4096


def as_matrix(M, p: int) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    if A.ndim != 2:
        A = A.reshape(len(M), -1) if A.size else np.zeros((len(M), 0), dtype=np.int64)
    return A % p


def row_echelon(M, p: int, reduced: bool = False) -> tuple[np.ndarray, list[int]]:
    """Row echelon form of ``M`` over F_p.

    Returns ``(R, pivots)`` where ``R`` has its first ``len(pivots)`` rows in
    echelon form with unit pivots (fully reduced above the pivots when
    ``reduced``) and the remaining rows zero.
    """
    A = as_matrix(M, p).copy()
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r, c:] = A[r, c:] * inv % p
        if reduced:
            targets = np.flatnonzero(A[:, c])
            targets = targets[targets != r]
        else:
            targets = r + 1 + np.flatnonzero(A[r + 1:, c])
        if targets.size:
            f = A[targets, c][:, None]
            A[targets, c:] = (A[targets, c:] - f * A[r, c:]) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_reference(M, p: int) -> int:
    A = as_matrix(M, p)
    if A.size == 0:
        return 0
    return len(row_echelon(A, p)[1])


def rank(M, p: int) -> int:
    A = as_matrix(M, p)
    if A.size == 0:
        return 0
    if _flint is not None and A.size >= _FLINT_MIN_ENTRIES:
        return int(_flint.nmod_mat(A.tolist(), p).rank())
    return len(row_echelon(A, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis of the right kernel ``{v : M v = 0}`` as rows of the result."""
    A = as_matrix(M, p)
    ncols = A.shape[1]
    R, pivots = row_echelon(A, p, reduced=True)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = -R[row, fc] % p
    return basis


def left_nullspace(M, p: int) -> np.ndarray:
    return nullspace(as_matrix(M, p).T, p)


def solve(A, b, p: int) -> np.ndarray | None:
    """One solution of ``A x = b`` over F_p, or None when inconsistent."""
    A = as_matrix(A, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    if A.shape[0] != b.shape[0]:
        raise DimensionMismatch("right-hand side length does not match rows")
    ncols = A.shape[1]
    R, pivots = row_echelon(np.hstack([A, b]), p, reduced=True)
    if pivots and pivots[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, ncols]
    return x


def inverse(A, p: int) -> np.ndarray:
    A = as_matrix(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch("inverse of a non-square matrix")
    R, pivots = row_echelon(np.hstack([A, np.eye(n, dtype=np.int64)]), p, reduced=True)
    if pivots[:n] != list(range(n)):
        raise ZeroInverse("matrix is singular")
    return R[:n, n:].copy()


def matmul(A, B, p: int) -> np.ndarray:
    """Product mod p without int64 overflow (entries are reduced per term block)."""
    A = as_matrix(A, p)
    B = as_matrix(B, p)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    # each partial sum of 2 products stays below 2^63 for p < 2^31
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = (out + np.outer(A[:, k], B[k, :]) % p) % p
    return out
