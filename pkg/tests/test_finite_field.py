import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conic_codes.finite_field import (
    FieldError,
    Residue,
    factor_prime_power,
    is_square,
    make_field,
    prime_factors,
    residue_shift_counts,
)

ODD_Q = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 49, 81, 121, 125]


def test_gf5_primitive_element_is_two():
    F = make_field(5)
    assert F.xi == 2


def test_gf9_with_given_modulus_has_x_primitive():
    F = make_field(3, 2, [2, 1, 1])
    x = F.from_coeffs([0, 1])
    powers = [F.pow(x, k) for k in range(1, 9)]
    assert powers[-1] == 1 and 1 not in powers[:-1]


@pytest.mark.parametrize("args", [(2, 1), (4, 1), (6, 1), (3, 2, [2, 0, 1]), (5, 2, [1, 1])])
def test_rejected_fields(args):
    with pytest.raises(FieldError):
        make_field(*args)


def test_factor_prime_power():
    assert factor_prime_power(125) == (5, 3)
    assert factor_prime_power(13) == (13, 1)
    with pytest.raises(FieldError):
        factor_prime_power(12)
    assert prime_factors(360) == [2, 3, 5]


@pytest.mark.parametrize("q", ODD_Q)
def test_primitive_element_order(q):
    F = make_field(*factor_prime_power(q))
    assert F.pow(F.xi, q - 1) == 1
    for r in prime_factors(q - 1):
        assert F.pow(F.xi, (q - 1) // r) != 1
    assert all(F.exp(F.log(a)) == a for a in range(1, q))


@pytest.mark.parametrize("q", ODD_Q)
def test_square_classes_by_enumeration(q):
    F = make_field(*factor_prime_power(q))
    squares = {F.mul(y, y) for y in range(1, q)}
    assert len(squares) == (q - 1) // 2
    assert set(F.squares()) == squares
    assert len(F.nonsquares()) == (q - 1) // 2
    for a in range(q):
        want = Residue.ZERO if a == 0 else (Residue.SQUARE if a in squares else Residue.NONSQUARE)
        assert is_square(F, a) is want


def test_square_examples_gf7():
    F = make_field(7)
    assert is_square(F, 2) is Residue.SQUARE
    assert is_square(F, 3) is Residue.NONSQUARE
    assert is_square(F, 0) is Residue.ZERO


@pytest.mark.parametrize("q,want", [(13, (2, 3, 3, 3)), (7, (1, 1, 2, 1)), (5, (0, 1, 1, 1))])
def test_residue_shift_examples(q, want):
    assert residue_shift_counts(make_field(*factor_prime_power(q))) == want


@pytest.mark.parametrize("q", [q for q in ODD_Q if q >= 5])
def test_residue_shift_formula(q):
    F = make_field(*factor_prime_power(q))
    if q % 4 == 1:
        want = ((q - 5) // 4, (q - 1) // 4, (q - 1) // 4, (q - 1) // 4)
    else:
        want = ((q - 3) // 4, (q - 3) // 4, (q + 1) // 4, (q - 3) // 4)
    assert residue_shift_counts(F) == want


@pytest.mark.parametrize("q", [3, 9, 25, 27])
def test_sqrt_roundtrip(q):
    F = make_field(*factor_prime_power(q))
    for a in F.squares():
        r = F.sqrt(a)
        assert F.mul(r, r) == a


fields = st.sampled_from([make_field(*factor_prime_power(q)) for q in (7, 9, 25, 27, 49, 125)])


@st.composite
def field_and_elems(draw, n=3):
    F = draw(fields)
    return F, [draw(st.integers(0, F.q - 1)) for _ in range(n)]


@settings(max_examples=300, deadline=None)
@given(field_and_elems())
def test_field_axioms(fe):
    F, (a, b, c) = fe
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b


@settings(max_examples=200, deadline=None)
@given(field_and_elems(1), st.integers(0, 300))
def test_pow_matches_repeated_product(fe, n):
    F, (a,) = fe
    r = 1
    for _ in range(n):
        r = F.mul(r, a)
    assert F.pow(a, n) == r


def test_element_wrapper_operators():
    F = make_field(3, 2)
    a, b = F.elem(4), F.elem(7)
    assert int(a + b) == F.add(4, 7)
    assert int(a * b) == F.mul(4, 7)
    assert int(a - b) == F.sub(4, 7)
    assert int(a / b) == F.div(4, 7)
    assert int(a ** 5) == F.pow(4, 5)
    assert int(-a) == F.neg(4)
    assert F.coeffs(F.from_coeffs([2, 1])) == (2, 1)
