import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conic_codes.brauer import GF2k, clmul, is_irreducible_gf2, make_reduction, phi_factors_gf2
from conic_codes.cyclotomic import CycInt


def test_irreducibility():
    assert is_irreducible_gf2(0b111)
    assert is_irreducible_gf2(0b1011)
    assert not is_irreducible_gf2(0b101)
    assert not is_irreducible_gf2(0b1111)


@pytest.mark.parametrize("M", [3, 5, 7, 9, 15, 21, 35])
def test_phi_factorisation(M):
    factors = phi_factors_gf2(M)
    assert all(is_irreducible_gf2(f) for f in factors)
    prod = 1
    for f in factors:
        prod = clmul(prod, f)
    assert prod.bit_length() - 1 == sum(f.bit_length() - 1 for f in factors)


@pytest.mark.parametrize("N", [24, 60, 168, 84])
def test_reduction_is_multiplicative(N):
    red = make_reduction(N)
    F = red.field
    rng = random.Random(N)
    for _ in range(200):
        i, j = rng.randrange(N), rng.randrange(N)
        zi, zj = CycInt.zeta(N, i), CycInt.zeta(N, j)
        assert red.reduce(zi * zj) == F.mul(red.reduce(zi), red.reduce(zj))


@pytest.mark.parametrize("N", [24, 60, 168])
def test_reduction_kernel_is_two_primary(N):
    red = make_reduction(N)
    for j in range(N):
        assert (red.reduce(CycInt.zeta(N, j)) == 1) == (j % red.M == 0)


def test_two_adic_quotient():
    red = make_reduction(60)
    x = CycInt(60, {0: 8, 4: 24})
    assert red.two_adic_quotient(x, 3) == red.reduce(CycInt(60, {0: 1, 4: 3}))
    with pytest.raises(ArithmeticError):
        red.two_adic_quotient(CycInt(60, {0: 2}), 3)


def test_two_adic_quotient_on_sum_of_roots():
    red = make_reduction(12)
    # 1 + zeta_4 + zeta_4^2 + zeta_4^3 = 0, divisible by anything
    x = CycInt(12, {0: 1, 3: 1, 6: 1, 9: 1})
    assert red.two_adic_quotient(x, 4) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 255), st.integers(1, 255), st.integers(1, 255))
def test_gf256_field_laws(a, b, c):
    F = GF2k(0b100011011)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)
    assert F.mul(a, F.inv(a)) == 1


def test_rank_over_extension():
    F = GF2k(0b10011)
    assert F.rank([[1, 2], [2, F.mul(2, 2)]]) == 1
    assert F.rank([[1, 2], [3, 4]]) == 2
