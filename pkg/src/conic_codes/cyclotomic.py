"""Exact arithmetic in the cyclotomic ring Z[zeta_N].

Elements are kept as sparse dictionaries ``{exponent mod N: coefficient}``
in the (redundant) spanning set of all powers of ``zeta_N``.  Equality
and exact division go through the unique representation in the power
basis ``1, zeta, ..., zeta^(phi(N)-1)``, obtained by reducing modulo the
cyclotomic polynomial.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np

__all__ = ["CycInt", "cyclotomic_poly", "euler_phi"]


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        out[i - dn] = c
        for j, dj in enumerate(den):
            num[i - dn + j] -= c * dj
    if any(num[:dn]):
        raise ArithmeticError("nonzero remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> np.ndarray:
    """Row ``j - phi(n)`` holds ``x^j mod Phi_n`` for ``phi(n) <= j < n``."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = np.array([-c for c in phi[:-1]], dtype=np.int64)  # x^deg
    for _ in range(deg, n):
        rows.append(cur.copy())
        top = cur[-1]
        cur = np.concatenate(([0], cur[:-1]))
        if top:
            cur -= top * np.array(phi[:-1], dtype=np.int64)
    if rows and np.abs(np.array(rows)).max() > (1 << 40):
        raise OverflowError("reduction table entries too large")
    return np.array(rows, dtype=np.int64).reshape(n - deg, deg)


class CycInt:
    """An element of Z[zeta_N]."""

    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms: dict[int, int] | None = None):
        self.N = N
        clean: dict[int, int] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    k = e % N
                    v = clean.get(k, 0) + c
                    if v:
                        clean[k] = v
                    else:
                        clean.pop(k, None)
        self.terms = clean

    @classmethod
    def integer(cls, N: int, n: int) -> "CycInt":
        return cls(N, {0: n})

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycInt":
        return cls(N, {k: 1})

    def _lift(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.N != self.N:
                raise ValueError("mismatched cyclotomic orders")
            return other
        return CycInt(self.N, {0: int(other)})

    def __add__(self, other) -> "CycInt":
        o = self._lift(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return CycInt(self.N, t)

    __radd__ = __add__

    def __neg__(self) -> "CycInt":
        return CycInt(self.N, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "CycInt":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "CycInt":
        return self._lift(other) - self

    def __mul__(self, other) -> "CycInt":
        if not isinstance(other, CycInt):
            n = int(other)
            return CycInt(self.N, {e: c * n for e, c in self.terms.items()})
        o = self._lift(other)
        N = self.N
        t: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                k = (e1 + e2) % N
                t[k] = t.get(k, 0) + c1 * c2
        return CycInt(N, t)

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        """Complex conjugation, ``zeta -> zeta^-1``."""
        return CycInt(self.N, {-e: c for e, c in self.terms.items()})

    def power_basis(self) -> tuple[int, ...]:
        """Coordinates in the basis ``zeta^0 .. zeta^(phi(N)-1)``."""
        N = self.N
        table = _reduction_table(N)
        deg = N - table.shape[0]
        low = np.zeros(deg, dtype=np.int64)
        high = np.zeros(N - deg, dtype=np.int64)
        for e, c in self.terms.items():
            if e < deg:
                low[e] += c
            else:
                high[e - deg] += c
        if high.any():
            low = low + high @ table
        return tuple(int(x) for x in low)

    @classmethod
    def from_power_basis(cls, N: int, coords) -> "CycInt":
        return cls(N, {i: int(c) for i, c in enumerate(coords) if c})

    def is_zero(self) -> bool:
        return not self.terms or not any(self.power_basis())

    def __eq__(self, other) -> bool:
        if not isinstance(other, (CycInt, int)):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.N, self.power_basis()))

    def rational(self) -> int | None:
        """The integer value, or None when the element is not rational."""
        pb = self.power_basis()
        if any(pb[1:]):
            return None
        return pb[0] if pb else 0

    def exact_div(self, d: int) -> "CycInt":
        """Divide by a rational integer; raises if the quotient is not integral."""
        if all(c % d == 0 for c in self.terms.values()):
            return CycInt(self.N, {e: c // d for e, c in self.terms.items()})
        pb = self.power_basis()
        if any(c % d for c in pb):
            raise ArithmeticError(f"element not divisible by {d}")
        return CycInt.from_power_basis(self.N, [c // d for c in pb])

    def to_complex(self) -> complex:
        w = np.exp(2j * np.pi / self.N)
        return complex(sum(c * w ** e for e, c in self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{c}*z{self.N}^{e}" if e else str(c) for e, c in sorted(self.terms.items())]
        return " + ".join(parts)
