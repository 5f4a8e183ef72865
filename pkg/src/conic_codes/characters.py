"""Ordinary character table of PSL(2, q), q odd, with exact values.

Values live in Z[zeta_N] with ``N = lcm(q-1, q+1)``, times ``p`` when the
extension degree is odd so that the Gauss sum for ``sqrt(+-q)`` is
available.  Classes use the labels of :mod:`conic_codes.group_action`.

The half-characters of degree ``(q+-1)/2`` carry a sign on the split
(resp. nonsplit) torus that the general shape of the table leaves open.
The build uses the parity sign ``(-1)^i``; the finished table must
satisfy both orthogonality relations, otherwise construction fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .cyclotomic import CycInt
from .finite_field import factor_prime_power, is_prime
from .group_action import ClassLabel, _label

__all__ = [
    "CharTable",
    "CharTableError",
    "build_char_table",
    "class_labels",
]


class CharTableError(RuntimeError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def class_labels(q: int) -> list[ClassLabel]:
    """Canonical class order: D, F+, F-, theta_i, [0], pi_k."""
    n_theta = (q - 5) // 4 if q % 4 == 1 else (q - 3) // 4
    n_pi = (q - 1) // 4 if q % 4 == 1 else (q - 3) // 4
    out = [_label("D"), _label("F+"), _label("F-")]
    out += [_label("theta", i) for i in range(1, n_theta + 1)]
    out.append(_label("[0]"))
    out += [_label("pi", k) for k in range(1, n_pi + 1)]
    return out


def class_sizes(q: int) -> dict[ClassLabel, int]:
    out = {}
    for c in class_labels(q):
        if c.kind == "D":
            out[c] = 1
        elif c.kind in ("F+", "F-"):
            out[c] = (q * q - 1) // 2
        elif c.kind == "theta":
            out[c] = q * (q + 1)
        elif c.kind == "[0]":
            out[c] = q * (q + 1) // 2 if q % 4 == 1 else q * (q - 1) // 2
        else:
            out[c] = q * (q - 1)
    return out


@dataclass
class CharTable:
    q: int
    N: int
    classes: list[ClassLabel]
    sizes: dict[ClassLabel, int]
    names: list[str]
    values: list[list[CycInt]]
    half_signs: tuple[int, ...] = field(default=())

    @property
    def order(self) -> int:
        return self.q * (self.q * self.q - 1) // 2

    def degree(self, i: int) -> int:
        v = self.values[i][0].rational()
        assert v is not None
        return v

    def index(self, name: str) -> int:
        return self.names.index(name)

    def value(self, name: str, cls: ClassLabel | str) -> CycInt:
        j = self.classes.index(cls) if isinstance(cls, ClassLabel) else [str(c) for c in self.classes].index(cls)
        return self.values[self.index(name)][j]

    def first_orthogonality(self) -> bool:
        n = len(self.names)
        order = self.order
        for a in range(n):
            for b in range(a, n):
                s = CycInt(self.N)
                for j, c in enumerate(self.classes):
                    s = s + self.values[a][j] * self.values[b][j].conj() * self.sizes[c]
                if s != (order if a == b else 0):
                    return False
        return True

    def second_orthogonality(self) -> bool:
        m = len(self.classes)
        order = self.order
        for j in range(m):
            for k in range(j, m):
                s = CycInt(self.N)
                for row in self.values:
                    s = s + row[j] * row[k].conj()
                want = order // self.sizes[self.classes[j]] if j == k else 0
                if s != want:
                    return False
        return True

    def degree_square_sum(self) -> int:
        return sum(self.degree(i) ** 2 for i in range(len(self.names)))

    def omega(self, i: int, j: int) -> CycInt:
        """Central character value ``|C| chi(x_C) / chi(1)``; exact or raises."""
        return (self.values[i][j] * self.sizes[self.classes[j]]).exact_div(self.degree(i))

    def is_square(self) -> bool:
        return len(self.names) == len(self.classes)


def _gauss_parts(p: int, N: int) -> tuple[CycInt, CycInt]:
    """Sums of zeta_p^t over quadratic residues and over nonresidues mod p."""
    step = N // p
    res = {t * t % p for t in range(1, p)}
    r = CycInt(N, {t * step: 1 for t in res})
    nr = CycInt(N, {t * step: 1 for t in range(1, p) if t not in res})
    return r, nr


def _half_values(q: int, p: int, e: int, N: int, s: int) -> tuple[CycInt, CycInt]:
    """``(s + r)/2`` and ``(s - r)/2`` where ``r^2 = q`` (q=1 mod 4) or ``-q``."""
    if e % 2 == 0:
        r = p ** (e // 2)
        return CycInt.integer(N, (s + r) // 2), CycInt.integer(N, (s - r) // 2)
    c = p ** ((e - 1) // 2)
    res, nres = _gauss_parts(p, N)
    # g = res - nres, -1 = res + nres, so (s + c*g)/2 = a*res + b*nres
    plus = res * ((c - s) // 2) + nres * ((-c - s) // 2)
    minus = res * ((-c - s) // 2) + nres * ((c - s) // 2)
    g = (res - nres) * c
    if plus * 2 != g + s or minus * 2 != s - g:
        raise CharTableError("half Gauss sum construction failed")
    return plus, minus


def _assemble(q: int, p: int, e: int, signs: tuple[int, ...]) -> CharTable:
    N = _lcm(q - 1, q + 1) * (p if e % 2 else 1)
    classes = class_labels(q)
    sizes = class_sizes(q)
    eps = N // (q - 1)
    dlt = N // (q + 1)
    I = lambda n: CycInt.integer(N, n)  # noqa: E731
    one_mod4 = q % 4 == 1
    n_theta = sum(1 for c in classes if c.kind == "theta")
    n_pi = sum(1 for c in classes if c.kind == "pi")
    names: list[str] = []
    rows: list[list[CycInt]] = []

    def add(name: str, fn) -> None:
        names.append(name)
        rows.append([fn(c) for c in classes])

    add("1", lambda c: I(1))

    def gamma(c: ClassLabel) -> CycInt:
        return I({"D": q, "F+": 0, "F-": 0, "theta": 1, "pi": -1,
                  "[0]": 1 if one_mod4 else -1}[c.kind])

    add("gamma", gamma)

    if one_mod4:
        plus, minus = _half_values(q, p, e, N, 1)
        for which, (fp, fm) in (("beta1", (plus, minus)), ("beta2", (minus, plus))):
            def beta(c: ClassLabel, fp=fp, fm=fm) -> CycInt:
                k = c.kind
                if k == "D":
                    return I((q + 1) // 2)
                if k == "F+":
                    return fp
                if k == "F-":
                    return fm
                if k == "theta":
                    return I(signs[c.index - 1])
                if k == "[0]":
                    return I((-1) ** ((q - 1) // 4))
                return I(0)
            add(which, beta)
    else:
        plus, minus = _half_values(q, p, e, N, -1)
        for which, (fp, fm) in (("eta1", (plus, minus)), ("eta2", (minus, plus))):
            def eta(c: ClassLabel, fp=fp, fm=fm) -> CycInt:
                k = c.kind
                if k == "D":
                    return I((q - 1) // 2)
                if k == "F+":
                    return fp
                if k == "F-":
                    return fm
                if k == "pi":
                    return I(-signs[c.index - 1])
                if k == "[0]":
                    return I((-1) ** ((q + 5) // 4))
                return I(0)
            add(which, eta)

    n_phi = n_theta
    for r in range(1, n_phi + 1):
        def phi(c: ClassLabel, r=r) -> CycInt:
            k = c.kind
            if k == "D":
                return I(q + 1)
            if k in ("F+", "F-"):
                return I(1)
            if k == "theta":
                x = 2 * c.index * r * eps
                return CycInt(N, {x: 1}) + CycInt(N, {-x: 1})
            if k == "[0]":
                return I(2 * (-1) ** r if one_mod4 else 0)
            return I(0)
        add(f"phi_{r}", phi)

    n_chi = n_pi
    for s in range(1, n_chi + 1):
        def chi(c: ClassLabel, s=s) -> CycInt:
            k = c.kind
            if k == "D":
                return I(q - 1)
            if k in ("F+", "F-"):
                return I(-1)
            if k == "pi":
                x = 2 * c.index * s * dlt
                return -(CycInt(N, {x: 1}) + CycInt(N, {-x: 1}))
            if k == "[0]":
                return I(0 if one_mod4 else -2 * (-1) ** s)
            return I(0)
        add(f"chi_{s}", chi)

    return CharTable(q, N, classes, sizes, names, rows, signs)


@lru_cache(maxsize=None)
def build_char_table(q: int) -> CharTable:
    """Character table of PSL(2, q), validated by orthogonality."""
    p, e = factor_prime_power(q)
    if p == 2 or not is_prime(p):
        raise CharTableError("q must be an odd prime power")
    if q < 5:
        raise CharTableError("q must be at least 5")
    n_free = (q - 5) // 4 if q % 4 == 1 else (q - 3) // 4
    signs = tuple((-1) ** i for i in range(1, n_free + 1))
    table = _assemble(q, p, e, signs)
    if not (table.is_square() and table.first_orthogonality() and table.second_orthogonality()):
        raise CharTableError(f"character table fails orthogonality for q={q}")
    return table
