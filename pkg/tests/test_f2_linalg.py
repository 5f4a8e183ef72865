import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conic_codes.f2_linalg import BitMatrix, PFMatrix, popcount


@st.composite
def bit_matrices(draw, max_dim=24):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = [draw(st.integers(0, (1 << n) - 1)) for _ in range(m)]
    return BitMatrix(m, n, rows)


def _brute_rank(M: BitMatrix) -> int:
    a = M.to_dense().astype(np.uint8) % 2
    r = 0
    for c in range(a.shape[1]):
        piv = [i for i in range(r, a.shape[0]) if a[i, c]]
        if not piv:
            continue
        a[[r, piv[0]]] = a[[piv[0], r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def test_small_examples():
    assert BitMatrix.identity(10).rank() == 10
    assert BitMatrix.ones(8, 8).rank() == 1
    J5, J4 = BitMatrix.ones(5, 5), BitMatrix.ones(4, 4)
    assert J5 @ J5 == J5
    assert (J4 @ J4).is_zero()
    assert popcount(0b101101) == 4


@settings(max_examples=200, deadline=None)
@given(bit_matrices())
def test_rank_matches_dense_elimination(M):
    assert M.rank() == _brute_rank(M)
    assert M.rank() + M.nullity() == M.ncols


@settings(max_examples=200, deadline=None)
@given(bit_matrices())
def test_nullspace_is_annihilated(M):
    N = M.nullspace()
    assert N.nrows == M.nullity()
    assert N.rank() == N.nrows
    dense = M.to_dense().astype(np.int64)
    for v in N.to_dense().astype(np.int64):
        assert not (dense @ v % 2).any()


@settings(max_examples=150, deadline=None)
@given(bit_matrices(16), st.data())
def test_product_matches_numpy(A, data):
    k = data.draw(st.integers(1, 16))
    B = BitMatrix(A.ncols, k, [data.draw(st.integers(0, (1 << k) - 1)) for _ in range(A.ncols)])
    want = (A.to_dense().astype(np.int64) @ B.to_dense().astype(np.int64)) % 2
    assert ((A @ B).to_dense() == want).all()
    assert ((A + A).is_zero())
    assert A.transpose().transpose() == A


@settings(max_examples=100, deadline=None)
@given(bit_matrices(12))
def test_row_space_membership(M):
    R = M.row_space()
    assert R.rank() == M.rank()
    for r in M.rows:
        assert R.contains_row(r)
    assert R.span_equal(M)


def test_from_dense_roundtrip():
    rng = np.random.default_rng(7)
    arr = rng.integers(0, 2, size=(37, 71))
    M = BitMatrix.from_dense(arr)
    assert (M.to_dense() == arr).all()
    assert M.get(3, 5) == arr[3, 5]


def test_power_and_submatrix():
    rng = np.random.default_rng(1)
    arr = rng.integers(0, 2, size=(9, 9))
    M = BitMatrix.from_dense(arr)
    want = np.linalg.matrix_power(arr.astype(np.int64), 5) % 2
    assert (M.power(5).to_dense() == want).all()
    S = M.submatrix([1, 4], [0, 2, 8])
    assert (S.to_dense() == arr[np.ix_([1, 4], [0, 2, 8])]).all()


def test_pf_rank():
    assert PFMatrix(5, np.eye(4, dtype=np.int64)).rank() == 4
    assert PFMatrix(3, [[1, 2], [2, 1]]).rank() == 1
    assert PFMatrix(5, [[1, 2], [2, 1]]).rank() == 2
