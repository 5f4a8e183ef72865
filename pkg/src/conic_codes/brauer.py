"""Reduction of cyclotomic integers to characteristic 2.

For ``N = 2^a * M`` with ``M`` odd, reduction modulo a prime above 2
sends ``zeta_N`` into the residue field ``GF(2^k)``, ``k = ord_M(2)``:
the 2-power part of ``zeta_N`` goes to 1 and the odd part goes to a root
``g`` of an irreducible factor ``f`` of ``Phi_M`` over GF(2).  By default
``f`` is the least such factor, compared as a bitmask.

Quotients by powers of 2 (needed for block idempotents, whose ordinary
coefficients have 2-power denominators) are handled in
``(Z/2^(v+1))[x]/(f)``, a truncation of the unramified 2-adic ring, using
the Teichmuller lift of ``g``.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .cyclotomic import CycInt, cyclotomic_poly
from .finite_field import prime_factors

__all__ = [
    "BrauerReduction",
    "GF2k",
    "clmul",
    "is_irreducible_gf2",
    "make_reduction",
    "phi_factors_gf2",
]

LOG_TABLE_LIMIT = 20


# --- GF(2)[x] as Python ints -------------------------------------------------

def clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def pmod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, pmod(a, b)
    return a


def _mulmod(a: int, b: int, m: int) -> int:
    return pmod(clmul(a, b), m)


def is_irreducible_gf2(f: int) -> bool:
    """Rabin's test."""
    k = f.bit_length() - 1
    if k < 1:
        return False
    x = 2

    def frob(n: int) -> int:
        y = x
        for _ in range(n):
            y = _mulmod(y, y, f)
        return y

    if frob(k) != pmod(x, f):
        return False
    for r in prime_factors(k):
        if pgcd(f, frob(k // r) ^ x) != 1:
            return False
    return True


def multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


class GF2k:
    """GF(2^k) = GF(2)[x]/(f); elements are bitmask ints."""

    def __init__(self, modulus: int):
        if not is_irreducible_gf2(modulus):
            raise ValueError("modulus is reducible over GF(2)")
        self.modulus = modulus
        self.k = modulus.bit_length() - 1
        self.size = 1 << self.k
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._tables_tried = False

    def _tables(self) -> bool:
        if not self._tables_tried:
            self._tables_tried = True
            if self.k <= LOG_TABLE_LIMIT:
                self._build_tables()
        return self._exp is not None

    def _build_tables(self) -> None:
        order = self.size - 1
        cofactors = [order // r for r in prime_factors(order)] if order > 1 else []
        gen = next(c for c in range(2, self.size + 1)
                   if all(self.pow(c, d) != 1 for d in cofactors)) if order > 1 else 1
        exp = np.zeros(2 * order + 1, dtype=np.int64)
        log = np.zeros(self.size, dtype=np.int64)
        x = 1
        m, dm = self.modulus, self.k
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = clmul(x, gen)
            while x.bit_length() > dm:
                x ^= m << (x.bit_length() - dm - 1)
        exp[order:2 * order] = exp[:order]
        self._exp, self._log = exp, log

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._tables():
            return int(self._exp[self._log[a] + self._log[b]])
        return _mulmod(a, b, self.modulus)

    def pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = _mulmod(r, a, self.modulus)
            a = _mulmod(a, a, self.modulus)
            n >>= 1
        return r

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero in GF(2^k)")
        return self.pow(a, self.size - 2)

    def element_order(self, a: int) -> int:
        order = self.size - 1
        n = order
        for r in prime_factors(order):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    # -- dense linear algebra ------------------------------------------------------

    def _vec_scale(self, c: int, v: np.ndarray) -> np.ndarray:
        if c == 0:
            return np.zeros_like(v)
        if self._tables():
            out = self._exp[self._log[v] + self._log[c]]
            return np.where(v == 0, 0, out)
        return np.array([self.mul(c, int(x)) for x in v], dtype=np.int64)

    def rank(self, rows: Sequence[Sequence[int]] | np.ndarray) -> int:
        a = np.array(rows, dtype=np.int64)
        if a.size == 0:
            return 0
        nrows, ncols = a.shape
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            a[r] = self._vec_scale(self.inv(int(a[r, c])), a[r])
            idx = np.flatnonzero(a[:, c])
            idx = idx[idx != r]
            if idx.size:
                if self._tables():
                    f = a[idx, c]
                    lf = self._log[f][:, None]
                    prow = a[r][None, :]
                    prod = self._exp[lf + self._log[prow]]
                    prod = np.where(prow == 0, 0, prod)
                    a[idx] ^= prod
                else:
                    for i in idx:
                        a[i] ^= self._vec_scale(int(a[i, c]), a[r])
            r += 1
        return r


def phi_factors_gf2(M: int) -> list[int]:
    """Irreducible factors of ``Phi_M`` over GF(2), as sorted bitmasks."""
    if M == 1:
        return [0b11]
    k = multiplicative_order(2, M)
    f1 = next(f for f in range((1 << k) + 1, 1 << (k + 1), 2) if is_irreducible_gf2(f))
    F = GF2k(f1)
    cof = (F.size - 1) // M
    beta = None
    for y in range(2, F.size):
        z = F.pow(y, cof)
        if z != 1 and F.element_order(z) == M:
            beta = z
            break
    assert beta is not None
    seen: set[int] = set()
    factors = []
    for j in range(1, M):
        if j in seen or np.gcd(j, M) != 1:
            continue
        coset = []
        x = j
        while x not in coset:
            coset.append(x)
            x = 2 * x % M
        seen.update(coset)
        # prod (X - beta^c) over the coset, coefficients in GF(2^k)
        poly = [1]
        for cexp in coset:
            root = F.pow(beta, cexp)
            new = [0] * (len(poly) + 1)
            for i, a in enumerate(poly):
                new[i + 1] ^= a
                new[i] ^= _mulmod(a, root, f1)
            poly = new
        if any(a not in (0, 1) for a in poly):
            raise AssertionError("minimal polynomial not over GF(2)")
        factors.append(sum(a << i for i, a in enumerate(poly)))
    prod = 1
    for f in factors:
        prod = clmul(prod, f)
    want = sum((c & 1) << i for i, c in enumerate(cyclotomic_poly(M)))
    if prod != want:
        raise AssertionError("factorisation of the cyclotomic polynomial failed")
    return sorted(factors)


class BrauerReduction:
    """Ring map from Z[zeta_N] onto a subfield of GF(2^k).

    Parameters
    ----------
    N:
        Cyclotomic order of the source ring.
    choice:
        Which irreducible factor of ``Phi_M`` mod 2 to use: ``"least"``
        (default) or ``"greatest"``.
    """

    def __init__(self, N: int, choice: str = "least"):
        a = 0
        M = N
        while M % 2 == 0:
            M //= 2
            a += 1
        self.N, self.a, self.M = N, a, M
        factors = phi_factors_gf2(M)
        if choice == "least":
            f = factors[0]
        elif choice == "greatest":
            f = factors[-1]
        else:
            raise ValueError(f"unknown factor choice {choice!r}")
        self.factor = f
        self.field = GF2k(f)
        self.k = self.field.k
        # zeta_N^j = zeta_{2^a}^(j*alpha) * zeta_M^(j*beta)
        self.alpha = pow(M, -1, 2 ** a) if a else 0
        self.beta = pow(2 ** a, -1, M) if M > 1 else 0
        g = 2 if self.k >= 1 and f != 0b11 else 1
        self.g = g
        self._gpow = [self.field.pow(g, j) for j in range(M)]

    def reduce(self, x: CycInt) -> int:
        if x.N != self.N:
            raise ValueError("cyclotomic order mismatch")
        out = 0
        for e, c in x.terms.items():
            if c & 1:
                out ^= self._gpow[(e * self.beta) % self.M]
        return out

    def reduce_int(self, n: int) -> int:
        return n & 1

    # -- 2-adic quotients ------------------------------------------------------------

    def _ring_mul(self, u: np.ndarray, w: np.ndarray, mod: int) -> np.ndarray:
        k = self.k
        prod = np.convolve(u, w) % mod
        fco = np.array([(self.factor >> i) & 1 for i in range(k)], dtype=np.int64)
        for d in range(len(prod) - 1, k - 1, -1):
            c = prod[d]
            if c:
                prod[d - k:d] = (prod[d - k:d] - c * fco) % mod
                prod[d] = 0
        return prod[:k] % mod

    @lru_cache(maxsize=None)
    def _teich_powers(self, precision: int) -> np.ndarray:
        """Powers ``omega^j`` (j < M) of the Teichmuller lift of g mod ``2^precision``."""
        k, mod = self.k, 1 << precision
        one = np.zeros(k, dtype=np.int64)
        one[0] = 1
        x = np.zeros(k, dtype=np.int64)
        if k > 1:
            x[1] = 1
        else:
            x[0] = self.g
        w = x
        for _ in range(k * (precision + 1)):
            w = self._ring_mul(w, w, mod)
        pows = [one]
        for _ in range(1, self.M):
            pows.append(self._ring_mul(pows[-1], w, mod))
        if not np.array_equal(self._ring_mul(pows[-1], w, mod), one):
            raise AssertionError("Teichmuller lift is not an M-th root of unity")
        return np.array(pows)

    def two_adic_quotient(self, x: CycInt, v: int) -> int:
        """Reduction of ``x / 2^v``; raises if ``x`` is not divisible by ``2^v``."""
        half = 1 << (self.a - 1) if self.a else 1
        parts: dict[int, dict[int, int]] = {}
        for e, c in x.terms.items():
            i = (e * self.alpha) % (1 << self.a) if self.a else 0
            j = (e * self.beta) % self.M
            sign = 1
            if self.a and i >= half:
                i -= half
                sign = -1
            d = parts.setdefault(i, {})
            d[j] = d.get(j, 0) + sign * c
        pows = self._teich_powers(v + 1)
        mod = 1 << (v + 1)
        out = 0
        for d in parts.values():
            acc = np.zeros(self.k, dtype=np.int64)
            for j, c in d.items():
                if c % mod:
                    acc = (acc + (c % mod) * pows[j]) % mod
            if np.any(acc % (1 << v)):
                raise ArithmeticError(f"value not divisible by 2^{v} at the chosen prime")
            bits = (acc >> v) & 1
            out ^= int(sum(int(b) << i for i, b in enumerate(bits)))
        return out

    @cached_property
    def description(self) -> dict[str, int]:
        return {"N": self.N, "M": self.M, "k": self.k, "factor": self.factor}


@lru_cache(maxsize=None)
def make_reduction(N: int, choice: str = "least") -> BrauerReduction:
    return BrauerReduction(N, choice)
