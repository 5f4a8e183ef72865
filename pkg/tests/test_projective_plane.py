import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conic_codes import make_field, make_plane
from conic_codes.projective_plane import (
    LineClass,
    PlaneCtx,
    PlaneError,
    PointClass,
    mat3_det,
    mat3_inv,
    mat3_mul,
)


@pytest.mark.parametrize("q,counts", [
    (5, {"n": 31, "O": 6, "E": 15, "I": 10}),
    (7, {"Se": 28, "Pa": 21, "T": 8}),
    (9, {"E": 45}),
])
def test_census_examples(q, counts):
    plane = make_plane(q)
    for key, want in counts.items():
        assert (plane.n if key == "n" else len(getattr(plane, key))) == want


def test_incidence_examples():
    plane = make_plane(5)
    assert not plane.incident((0, 1, 0), (0, 1, 0))
    assert plane.incident((0, 1, 0), (1, 0, 0))
    assert (plane.incidence.sum(axis=1) == 6).all()
    assert (plane.incidence.sum(axis=0) == 6).all()


def test_polarity_closed_form():
    plane = make_plane(7)
    line = plane.lines[plane.polarity_point((1, 2, 3))]
    assert line == plane.normalize((3, 3, 1))
    rng = np.random.default_rng(3)
    F = plane.field
    for _ in range(50):
        x, y, z = (int(v) for v in rng.integers(0, 7, 3))
        if (x, y, z) == (0, 0, 0):
            continue
        want = plane.normalize((z, F.mul(F.from_int(-2), y), x))
        assert plane.lines[plane.polarity_point((x, y, z))] == want


@pytest.mark.parametrize("q", [5, 7, 9, 11, 25])
def test_polarity_bijections(q):
    plane = make_plane(q)
    assert sorted(int(plane.perp[p]) for p in plane.E) == plane.Se
    assert sorted(int(plane.perp[p]) for p in plane.I) == plane.Pa
    assert sorted(int(plane.perp[p]) for p in plane.O) == plane.T


def test_classification_examples():
    plane = make_plane(7)
    assert plane.classify_point((0, 1, 0)) is PointClass.EXTERNAL
    assert plane.classify_point((0, 0, 1)) is PointClass.ABSOLUTE
    assert plane.classify_line((0, 1, 0)) is LineClass.SECANT


@pytest.mark.parametrize("q", [5, 7, 9])
def test_incidence_table_examples(q):
    tables = make_plane(q).verify_incidence_tables()
    assert tables == PlaneCtx.expected_incidence_tables(q)


def test_incidence_profile_rows():
    assert make_plane(5).verify_incidence_tables()["per_line"]["Se"] == {(2, 2, 2)}
    assert make_plane(7).verify_incidence_tables()["per_line"]["Pa"] == {(0, 4, 4)}
    assert make_plane(9).verify_incidence_tables()["per_point"]["E"] == {(2, 4, 4)}


@pytest.mark.parametrize("q,pc,lc,want", [
    (5, PointClass.INTERNAL, LineClass.PASSANT, PointClass.EXTERNAL),
    (7, PointClass.EXTERNAL, LineClass.SECANT, PointClass.INTERNAL),
    (13, PointClass.EXTERNAL, LineClass.SECANT, PointClass.EXTERNAL),
])
def test_perp_meet_examples(q, pc, lc, want):
    plane = make_plane(q)
    pts = plane.E if pc is PointClass.EXTERNAL else plane.I
    seen = set()
    for p in pts:
        for l in plane.lines_through[p]:
            if plane.line_class[l] is lc:
                seen.add(plane.perp_meet_class(p, l))
    assert seen == {want}


def test_join_and_meet():
    plane = make_plane(9)
    p, r = plane.E[0], plane.E[5]
    l = plane.join(p, r)
    assert plane.incidence[l, p] and plane.incidence[l, r]
    m = plane.lines_through[p][1]
    if m != l:
        assert plane.meet(l, m) == p


def test_matrix_helpers():
    F = make_field(11)
    A = ((1, 2, 3), (0, 1, 4), (5, 6, 0))
    Ai = mat3_inv(F, A)
    assert mat3_mul(F, A, Ai) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert mat3_det(F, A) != 0
    with pytest.raises(PlaneError):
        mat3_inv(F, ((1, 2, 3), (2, 4, 6), (0, 0, 1)))


def test_plane_size_guard():
    with pytest.raises(PlaneError):
        PlaneCtx(make_field(103))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([5, 7, 9, 25]), st.data())
def test_invertible_matrices_preserve_incidence(q, data):
    plane = make_plane(q)
    F = plane.field
    M = tuple(tuple(data.draw(st.integers(0, q - 1)) for _ in range(3)) for _ in range(3))
    if mat3_det(F, M) == 0:
        return
    pts, lns = plane.act_points(M), plane.act_lines(M)
    p = data.draw(st.integers(0, plane.n - 1))
    l = data.draw(st.integers(0, plane.n - 1))
    assert plane.incidence[lns[l], pts[p]] == plane.incidence[l, p]
    assert sorted(pts.tolist()) == list(range(plane.n))
