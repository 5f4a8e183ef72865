"""Arithmetic in GF(p^e) for odd primes p.

Elements are stored as integer codes: the polynomial-basis coefficient
tuple ``(c_0, ..., c_{e-1})`` of an element is encoded as
``sum(c_i * p**i)``.  That integer is also the canonical total order on
field elements used everywhere else in the package.

Multiplication goes through discrete log / exponent tables built from a
primitive element ``xi``.  For small fields full addition and
multiplication tables are kept as numpy arrays so that geometry code can
vectorise over many points at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_MODULI",
    "FieldCtx",
    "FieldElem",
    "FieldError",
    "Residue",
    "factor_prime_power",
    "is_prime",
    "is_square",
    "make_field",
    "prime_factors",
    "residue_shift_counts",
]

# Conway polynomials, ascending coefficients, monic.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}

MAX_ORDER = 1 << 20
TABLE_LIMIT = 1024


class FieldError(ValueError):
    """Invalid field parameters."""


class Residue(enum.Enum):
    ZERO = 0
    SQUARE = 1
    NONSQUARE = 2


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise FieldError otherwise."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    ps = prime_factors(q)
    if len(ps) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = ps[0]
    e = 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# --- polynomials over GF(p), ascending coefficient lists -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _monic_polys(degree: int, p: int) -> Iterable[list[int]]:
    for code in range(p ** degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(d, p):
            if not _poly_mod(m, f, p):
                return False
    return True


class FieldCtx:
    """The finite field GF(p^e) with a fixed irreducible modulus.

    Parameters
    ----------
    p, e:
        Odd prime and extension degree.
    modulus:
        Ascending monic coefficients of an irreducible polynomial of degree
        ``e``.  Defaults to the Conway polynomial where one is tabulated and
        to the first irreducible polynomial in code order otherwise.
    """

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if e < 1:
            raise FieldError(f"extension degree must be positive, got {e}")
        q = p ** e
        if q > MAX_ORDER:
            raise FieldError(f"q={q} exceeds the supported bound {MAX_ORDER}")
        self.p = p
        self.e = e
        self.q = q
        if modulus is None:
            modulus = DEFAULT_MODULI.get((p, e))
            if modulus is None:
                modulus = self._first_irreducible()
        m = [int(c) % p for c in modulus]
        if len(m) != e + 1 or m[-1] == 0:
            raise FieldError(f"modulus must have degree {e}")
        inv = pow(m[-1], p - 2, p)
        m = [c * inv % p for c in m]
        if not _is_irreducible(m, p):
            raise FieldError(f"modulus {m} is reducible over GF({p})")
        self.modulus = tuple(m)
        self._build_tables()

    def _first_irreducible(self) -> list[int]:
        if self.e == 1:
            return [0, 1]
        for f in _monic_polys(self.e, self.p):
            if _is_irreducible(f, self.p):
                return f
        raise AssertionError("no irreducible polynomial found")

    # -- construction ------------------------------------------------------

    def _poly_mulmod(self, a: int, b: int) -> int:
        pa, pb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(pa):
            if x:
                for j, y in enumerate(pb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    def _poly_pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._poly_mulmod(r, a)
            a = self._poly_mulmod(a, a)
            n >>= 1
        return r

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        order = q - 1
        divisors = [order // r for r in prime_factors(order)] if order > 1 else []
        xi = None
        for cand in range(1, q):
            if all(self._poly_pow(cand, d) != 1 for d in divisors):
                xi = cand
                break
        assert xi is not None
        self.xi = xi
        exp = [0] * order
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._poly_mulmod(x, xi)
        assert x == 1
        self._exp = exp
        self._log = log
        if self.e == 1:
            self._neg = [(-a) % p for a in range(q)]
        else:
            self._neg = [self.from_coeffs([(-c) % p for c in self.coeffs(a)]) for a in range(q)]
        self.add_table: np.ndarray | None = None
        self.mul_table: np.ndarray | None = None
        if q <= TABLE_LIMIT:
            codes = np.arange(q)
            if self.e == 1:
                add = (codes[:, None] + codes[None, :]) % p
            else:
                add = np.zeros((q, q), dtype=np.int64)
                place = 1
                for _ in range(self.e):
                    da = (codes // place) % p
                    add += ((da[:, None] + da[None, :]) % p) * place
                    place *= p
            logs = np.array(log)
            expa = np.array(exp)
            mul = expa[(logs[:, None] + logs[None, :]) % order]
            mul[0, :] = 0
            mul[:, 0] = 0
            self.add_table = add.astype(np.int32)
            self.mul_table = mul.astype(np.int32)
            self.neg_array = np.array(self._neg, dtype=np.int32)
            self.inv_array = np.array([0] + [self.inv(a) for a in range(1, q)], dtype=np.int32)

    # -- codes -------------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, cs: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(cs)[: self.e]):
            code = code * self.p + (c % self.p)
        return code

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> GF(p)."""
        return n % self.p

    def elem(self, a: int) -> "FieldElem":
        return FieldElem(self, a)

    def elements(self) -> range:
        return range(self.q)

    # -- arithmetic on codes -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return int(self.add_table[a, b])
        if self.e == 1:
            return (a + b) % self.p
        return self.from_coeffs([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete logarithm to base ``xi``."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, n: int) -> int:
        return self._exp[n % (self.q - 1)]

    def residue(self, a: int) -> Residue:
        if a == 0:
            return Residue.ZERO
        return Residue.SQUARE if self._log[a] % 2 == 0 else Residue.NONSQUARE

    def sqrt(self, a: int) -> int:
        """A square root of ``a``; raises ValueError for nonsquares."""
        if a == 0:
            return 0
        la = self._log[a]
        if la % 2:
            raise ValueError("not a square")
        return self._exp[la // 2]

    def squares(self) -> list[int]:
        """Nonzero squares, in code order."""
        return [a for a in range(1, self.q) if self._log[a] % 2 == 0]

    def nonsquares(self) -> list[int]:
        return [a for a in range(1, self.q) if self._log[a] % 2 == 1]

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, e={self.e}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldCtx)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))


@dataclass(frozen=True)
class FieldElem:
    """A field element bound to its context; convenience wrapper over codes."""

    ctx: FieldCtx
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.coeffs(self.value)

    def _coerce(self, other: "FieldElem | int") -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ValueError("elements of different fields")
            return other.value
        return self.ctx.from_int(other)

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.value, self._coerce(other)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, n: int):
        return FieldElem(self.ctx, self.ctx.pow(self.value, n))

    def inv(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF({self.ctx.q})[{self.value}]"


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: tuple[int, ...] | None) -> FieldCtx:
    return FieldCtx(p, e, modulus)


def make_field(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FieldCtx:
    """Build (or fetch a cached) GF(p^e)."""
    return _cached_field(p, e, tuple(modulus) if modulus is not None else None)


def is_square(ctx: FieldCtx, a: int | FieldElem) -> Residue:
    return ctx.residue(int(a))


def residue_shift_counts(ctx: FieldCtx) -> tuple[int, int, int, int]:
    """Counts ``|(S - 1) & S|, |(S - 1) & N|, |(N - 1) & S|, |(N - 1) & N|``.

    ``S`` and ``N`` are the nonzero squares and the nonsquares; ``X - 1`` is
    the set ``{x - 1 : x in X}``.
    """
    one = 1
    counts = {(a, b): 0 for a in (Residue.SQUARE, Residue.NONSQUARE)
              for b in (Residue.SQUARE, Residue.NONSQUARE)}
    for x in range(1, ctx.q):
        y = ctx.sub(x, one)
        if y == 0:
            continue
        counts[(ctx.residue(x), ctx.residue(y))] += 1
    S, N = Residue.SQUARE, Residue.NONSQUARE
    return counts[(S, S)], counts[(S, N)], counts[(N, S)], counts[(N, N)]
