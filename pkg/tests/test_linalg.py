import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from ffdeg import linalg
from ffdeg.errors import ZeroInverse


def sympy_rank(M, p):
    K = GF(p)
    rows = [[K(int(x)) for x in row] for row in M]
    return DomainMatrix(rows, M.shape, K).rank() if M.size else 0


def matrices(p, max_dim=7):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c).map(
                lambda xs: np.array(xs, dtype=np.int64).reshape(r, c)
            )
        )
    )


@given(matrices(7))
def test_rank_matches_sympy_small_field(M):
    assert linalg.rank_reference(M, 7) == sympy_rank(M, 7)


@given(matrices(65521, 5))
def test_rank_matches_sympy_default_field(M):
    assert linalg.rank(M, 65521) == sympy_rank(M, 65521)


def test_flint_and_reference_agree_on_large_matrix():
    rng = np.random.default_rng(3)
    A = rng.integers(0, 101, size=(80, 40))
    B = rng.integers(0, 101, size=(40, 90))
    M = linalg.matmul(A, B, 101)  # rank <= 40
    assert M.size >= 4096
    assert linalg.rank(M, 101) == linalg.rank_reference(M, 101) == 40


@given(matrices(11))
def test_nullspace_is_kernel_of_right_size(M):
    K = linalg.nullspace(M, 11)
    r = linalg.rank_reference(M, 11)
    assert K.shape[0] == M.shape[1] - r
    if K.size:
        assert not (M @ K.T % 11).any()


@given(matrices(11))
def test_left_nullspace(M):
    K = linalg.left_nullspace(M, 11)
    assert K.shape[0] == M.shape[0] - linalg.rank_reference(M, 11)
    if K.size:
        assert not (K @ M % 11).any()


def test_reduced_echelon_shape():
    M = np.array([[0, 2, 4], [1, 1, 1], [1, 3, 5]])
    R, piv = linalg.row_echelon(M, 7, reduced=True)
    assert piv == [0, 1]
    assert R[0].tolist() == [1, 0, 6] and R[1].tolist() == [0, 1, 2]
    assert not R[2].any()


def test_solve_and_inverse():
    A = np.array([[2, 1], [1, 3]])
    x = linalg.solve(A, np.array([1, 2]), 7)
    assert (A @ x % 7).tolist() == [1, 2]
    Ainv = linalg.inverse(A, 7)
    assert (A @ Ainv % 7).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(ZeroInverse):
        linalg.inverse(np.array([[1, 2], [2, 4]]), 7)
    assert linalg.solve(np.array([[1, 2], [2, 4]]), np.array([1, 0]), 7) is None
