import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conic_codes import make_plane
from conic_codes.brauer import GF2k
from conic_codes.f2_linalg import BitMatrix
from conic_codes.incidence_codes import (
    build_partition,
    code_dims,
    direct_sum_checks,
    expected_dim_L,
    export_alist,
    matrix_B,
    matrix_C,
    matrix_D,
    neighbor_sets,
    parity_checks,
    power_identities,
    rank_p,
    read_alist,
    submatrix,
    write_alist,
)


def test_partition_shapes_q5():
    part = build_partition(make_plane(5))
    assert (part.blocks["A33"].nrows, part.blocks["A33"].ncols) == (15, 15)
    assert (part.blocks["A22"].nrows, part.blocks["A22"].ncols) == (10, 10)
    assert (part.blocks["A23"].nrows, part.blocks["A23"].ncols) == (10, 15)
    assert set(part.A.row_weights()) == {6}
    assert part.reassemble() == part.A


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_B_basic_shape(q):
    plane = make_plane(q)
    B = matrix_B(plane)
    assert B.is_symmetric()
    assert set(B.row_weights()) == {(q - 1) // 2}
    assert all(not B.get(i, i) for i in range(B.nrows))


@pytest.mark.parametrize("q", [5, 7, 9, 11])
def test_B_is_row_permutation_of_A33(q):
    plane = make_plane(q)
    B, A33 = matrix_B(plane), submatrix(plane, "A33")
    assert sorted(B.rows) == sorted(A33.rows)


@pytest.mark.parametrize("q,b3", [(5, True), (7, False), (9, False), (11, True)])
def test_power_identity_examples(q, b3):
    ids = power_identities(make_plane(q))
    assert ids["B5_eq_B"] is True
    assert ids["B3_eq_B"] is b3
    assert all(v for k, v in ids.items() if k != "B3_eq_B")


def test_neighbor_set_sizes():
    assert len(neighbor_sets(make_plane(13), make_plane(13).E[0]).N) == 30
    assert len(neighbor_sets(make_plane(7), make_plane(7).E[0]).N) == 7
    plane = make_plane(5)
    p = plane.E[0]
    ns = neighbor_sets(plane, p)
    assert ns.Na == ns.N | {p} and len(ns.Na) == 3
    with pytest.raises(ValueError):
        neighbor_sets(plane, plane.I[0])


@pytest.mark.parametrize("q", [5, 9, 13])
def test_C_D_relations(q):
    plane = make_plane(q)
    C, D = matrix_C(plane), matrix_D(plane)
    assert C + D == BitMatrix.ones(C.nrows, C.ncols)
    B4 = matrix_B(plane).power(4)
    assert all(w % 2 == 0 for w in B4.row_weights())


def test_q5_ranks():
    plane = make_plane(5)
    assert matrix_C(plane).rank() == 5
    assert matrix_C(plane).nullity() == 10
    assert matrix_B(plane).nullity() == 5
    assert matrix_B(plane).rank() == 10


def test_q9_null_splits_off_J():
    plane = make_plane(9)
    assert matrix_B(plane).nullity() == 17
    assert matrix_D(plane).rank() == 16
    assert all(direct_sum_checks(plane).values())


def test_q7_direct_sum():
    assert direct_sum_checks(make_plane(7)) == {"rank_plus_nullity": True, "row_null_trivial": True}


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13, 17, 19])
def test_code_dims_A33(q):
    rep = code_dims(make_plane(q))["A33"]
    assert rep.k == expected_dim_L(q)
    assert rep.n == q * (q + 1) // 2
    assert 0 <= rep.k <= rep.n


def test_code_dims_reports_all_blocks():
    reps = code_dims(make_plane(5))
    assert set(reps) == {"A22", "A23", "A32", "A33"}
    assert reps["A22"].n == 10
    assert all(0 <= r.k <= r.n for r in reps.values())


@pytest.mark.parametrize("q", [5, 9])
def test_pf_rank_examples(q):
    want = {5: 15, 9: 36}[q]
    assert rank_p(make_plane(q), "A33") == want


@pytest.mark.parametrize("q", [5, 7, 9])
def test_nullity_unchanged_over_extension_field(q):
    A33 = submatrix(make_plane(q), "A33")
    dense = A33.to_dense().astype(int).tolist()
    assert GF2k(0b10011).rank(dense) == A33.rank()


@pytest.mark.parametrize("q", [5, 7, 11, 13])
def test_parity_checks_hold(q):
    assert all(parity_checks(make_plane(q)).values())


def test_alist_header_and_degrees(tmp_path):
    plane = make_plane(5)
    A33 = submatrix(plane, "A33")
    path = tmp_path / "a33.alist"
    export_alist(A33, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "15 15"
    assert set(lines[2].split()) == {"2"}
    with open(path) as fh:
        assert read_alist(fh) == A33


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 20), st.integers(1, 20), st.data())
def test_alist_roundtrip(m, n, data):
    H = BitMatrix(m, n, [data.draw(st.integers(0, (1 << n) - 1)) for _ in range(m)])
    buf = io.StringIO()
    write_alist(H, buf)
    buf.seek(0)
    assert read_alist(buf) == H
