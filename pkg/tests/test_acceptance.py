"""Acceptance criteria; ``conftest.py`` prints one PASS/FAIL line for each."""

import io
import random

import numpy as np
import pytest

from conic_codes import make_plane
from conic_codes.character_blocks import (
    block_sanity,
    block_shape,
    expected_block_shape,
    expression_checks,
    induced_expectations,
    kernel_decomposition_checks,
    make_block_data,
    stab_induced_decomposition,
)
from conic_codes.characters import build_char_table
from conic_codes.f2_linalg import BitMatrix
from conic_codes.group_action import make_group
from conic_codes.incidence_codes import (
    direct_sum_checks,
    incidence_matrix,
    ldpc_dims,
    matrix_B,
    matrix_C,
    matrix_D,
    parity_checks,
    power_identities,
    rank_2,
    rank_p,
    read_alist,
    submatrix,
    write_alist,
)
from conic_codes.parity_sweeps import parity_class_checks
from conic_codes.projective_plane import PlaneCtx

Q1 = (5, 7, 9, 11, 13)
Q2 = Q1 + (17, 19, 23, 25, 27)


def _failures(results: dict) -> list:
    return sorted(k for k, v in results.items() if not v)


@pytest.mark.criterion(1, "nullity of A33 matches the closed form")
def test_dimension_formula(stopwatch):
    want = {5: 5, 7: 8, 9: 17, 11: 24, 13: 37, 17: 65, 19: 80, 23: 120, 25: 145, 27: 168}
    got = {q: ldpc_dims(make_plane(q), "A33")["k"] for q in Q2}
    assert got == want
    assert stopwatch() < 5


@pytest.mark.criterion(2, "B^5 = B everywhere; B^3 = B exactly when q = 3, 5 mod 8")
def test_power_identity(stopwatch):
    b5, b3 = {}, {}
    for q in Q2:
        B = matrix_B(make_plane(q))
        B2 = B @ B
        B3 = B2 @ B
        b5[q] = B3 @ B2 == B
        b3[q] = B3 == B
    assert all(b5.values())
    assert {q for q, v in b3.items() if v} == {5, 11, 13, 19, 27}
    assert {q for q, v in b3.items() if not v} == {7, 9, 17, 23, 25}
    assert stopwatch() < 10


@pytest.mark.criterion(3, "2-rank and p-rank of A and A33")
def test_rank_facts(stopwatch):
    for q in Q2:
        assert rank_2(make_plane(q)) == q * q + q, q
    expected = {5: 16, 7: 29, 9: 37, 25: 226, 27: 217}
    for q, full in expected.items():
        plane = make_plane(q)
        assert rank_p(plane) == full, q
        assert rank_p(plane, "A33") == full - 1, q
    assert stopwatch() < 10


@pytest.mark.criterion(4, "point/line census and incidence profiles")
def test_census_and_tables(stopwatch):
    for q in Q2:
        plane = make_plane(q)
        assert plane.verify_incidence_tables() == PlaneCtx.expected_incidence_tables(q), q
    assert stopwatch() < 5


@pytest.mark.criterion(5, "group order, classes, stabilisers and orbits")
def test_group_structure(stopwatch):
    for q in Q1:
        plane = make_plane(q)
        G = make_group(plane)
        assert G.order == q * (q * q - 1) // 2
        assert G.class_sizes() == G.expected_class_sizes()
        assert sum(G.class_sizes().values()) == G.order
        assert G.class_conjugation_check()
        want = G.expected_stabilizer_profile()
        for p in plane.E:
            stab_h, stab_g, profile = G.stabilizers(p)
            assert len(stab_h) == q - 1
            assert len(stab_g) == 2 * (q - 1)
            assert profile == want, (q, p)
        assert _failures(G.orbit_checks()) == []
    assert stopwatch() < 30


@pytest.mark.criterion(6, "class parity statements over all point pairs")
def test_class_parity_sweeps(stopwatch):
    for q in Q1:
        plane = make_plane(q)
        assert _failures(parity_checks(plane)) == [], q
        report = parity_class_checks(make_group(plane))
        assert _failures(report["checks"]) == [], q
    assert stopwatch() < 300


@pytest.mark.criterion(7, "Im + Ker splitting and the all-ones summand")
def test_direct_sums(stopwatch):
    for q in Q2:
        res = direct_sum_checks(make_plane(q))
        assert res["rank_plus_nullity"] and res["row_null_trivial"], q
        if q in (5, 9, 13):
            assert res["J_direct_rowspace_D"] and res["null_B_eq_J_plus_rowspace_D"], q
    assert stopwatch() < 5


@pytest.mark.criterion(8, "character table orthogonality and degree sum")
def test_character_table(stopwatch):
    for q in Q1:
        t = build_char_table(q)
        assert t.first_orthogonality(), q
        assert t.second_orthogonality(), q
        assert t.degree_square_sum() == t.order
    assert stopwatch() < 30


@pytest.mark.criterion(9, "permutation character on external points")
def test_induced_character(stopwatch):
    for q in Q1 + (17,):
        t = build_char_table(q)
        mult = stab_induced_decomposition(t, make_group(make_plane(q)))
        assert _failures(induced_expectations(t, mult)) == [], q
        assert sum(mult[n] * t.degree(i) for i, n in enumerate(t.names)) == q * (q + 1) // 2
    t13 = build_char_table(13)
    m13 = stab_induced_decomposition(t13, make_group(make_plane(13)))
    assert m13["gamma"] == 2 and m13["beta1"] == m13["beta2"] == 0
    assert all(m13[f"chi_{s}"] == 1 for s in (1, 2, 3))
    m17 = stab_induced_decomposition(build_char_table(17), make_group(make_plane(17)))
    assert m17["beta1"] == m17["beta2"] == 1
    assert stopwatch() < 30


@pytest.mark.criterion(10, "2-block partition, idempotent entries, WBO and p2 sums")
def test_blocks(stopwatch):
    shapes = {}
    for q in Q1 + (17,):
        data = make_block_data(q)
        shapes[q] = block_shape(data.blocks)
        assert shapes[q] == expected_block_shape(q), q
        assert _failures(expression_checks(data)) == [], q
        assert _failures(block_sanity(data, make_group(make_plane(q)))) == [], q
    assert shapes[13] == {"principal": 4, "defect0": 3, "other": [2], "other_defects": [1]}
    assert shapes[11] == {"principal": 4, "defect0": 2, "other": [2], "other_defects": [1]}
    assert shapes[9] == {"principal": 5, "defect0": 2, "other": [], "other_defects": []}
    assert stopwatch() < 60


@pytest.mark.criterion(11, "block decomposition of Ker(B)")
def test_main_theorem(stopwatch):
    for q in Q1:
        data = make_block_data(q)
        res = kernel_decomposition_checks(data, make_group(make_plane(q)))
        assert _failures(res) == [], q
    assert stopwatch() < 120


def _alist_roundtrip(H: BitMatrix) -> bool:
    buf = io.StringIO()
    write_alist(H, buf)
    buf.seek(0)
    return read_alist(buf) == H


@pytest.mark.criterion(12, "polarity, group equivariance and alist properties")
def test_property_suite(stopwatch):
    rng = random.Random(20240611)
    for q in Q1:
        plane = make_plane(q)
        G = make_group(plane)
        inc = plane.incidence
        perp, pole = plane.perp, plane.pole
        gp, gl = G.g_point_perm, G.g_line_perm
        if q <= 9:
            assert (pole[perp] == np.arange(plane.n)).all()
            assert (perp[pole] == np.arange(plane.n)).all()
            for g in range(len(gp)):
                assert (inc[np.ix_(gl[g], gp[g])] == inc).all()
            assert (gl[:, perp] == perp[gp]).all()
            mats = [incidence_matrix(plane), matrix_B(plane), matrix_C(plane), matrix_D(plane)]
            mats += [submatrix(plane, f"A{i}{j}") for i in "123" for j in "123"]
            assert all(_alist_roundtrip(H) for H in mats)
        else:
            for _ in range(1000):
                x = rng.randrange(plane.n)
                assert pole[perp[x]] == x and perp[pole[x]] == x
            for _ in range(1000):
                g, p, l = rng.randrange(len(gp)), rng.randrange(plane.n), rng.randrange(plane.n)
                assert inc[gl[g, l], gp[g, p]] == inc[l, p]
                assert gl[g, perp[p]] == perp[gp[g, p]]
            for _ in range(1000):
                m, n = rng.randrange(1, 30), rng.randrange(1, 30)
                H = BitMatrix(m, n, [rng.getrandbits(n) for _ in range(m)])
                assert _alist_roundtrip(H)
    assert stopwatch() < 60
