"""Dense linear algebra over GF(2) and GF(p).

GF(2) matrices keep each row as a Python int used as a bitset (bit ``j``
is column ``j``); Python ints are arrays of machine words, so row XOR is
a word-parallel operation.  Bits at or above ``ncols`` are always zero.

GF(p) matrices are numpy int64 arrays reduced mod p.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitMatrix",
    "PFMatrix",
    "popcount",
]


def popcount(x: int) -> int:
    return bin(x).count("1")


class BitMatrix:
    """Matrix over GF(2) with bit-packed rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self.rows = [0] * nrows
        else:
            if len(rows) != nrows:
                raise ValueError("row count mismatch")
            mask = (1 << ncols) - 1
            self.rows = [r & mask for r in rows]

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def ones(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, [(1 << ncols) - 1] * nrows)

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        a = (np.asarray(arr).astype(np.int64) & 1).astype(np.uint8)
        nrows, ncols = a.shape
        packed = np.packbits(a, axis=1, bitorder="little")
        return cls(nrows, ncols, [int.from_bytes(r.tobytes(), "little") for r in packed])

    @classmethod
    def from_support(cls, nrows: int, ncols: int, support: Iterable[Iterable[int]]) -> "BitMatrix":
        rows = []
        for cols in support:
            r = 0
            for c in cols:
                r ^= 1 << c
            rows.append(r)
        return cls(nrows, ncols, rows)

    # -- access ----------------------------------------------------------------

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def set(self, i: int, j: int, v: int = 1) -> None:
        if v & 1:
            self.rows[i] |= 1 << j
        else:
            self.rows[i] &= ~(1 << j)

    def row_support(self, i: int) -> list[int]:
        r, out, j = self.rows[i], [], 0
        while r:
            if r & 1:
                out.append(j)
            r >>= 1
            j += 1
        return out

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in self.row_support(i) if r else ():
                out[i, j] = 1
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.nrows, self.ncols, list(self.rows))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, BitMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"

    def row_weights(self) -> list[int]:
        return [popcount(r) for r in self.rows]

    def is_zero(self) -> bool:
        return not any(self.rows)

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return BitMatrix(self.nrows, self.ncols, [a ^ b for a, b in zip(self.rows, other.rows)])

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        orows = other.rows
        out = []
        for r in self.rows:
            acc = 0
            j = 0
            while r:
                low = r & -r
                j = low.bit_length() - 1
                acc ^= orows[j]
                r ^= low
            out.append(acc)
        return BitMatrix(self.nrows, other.ncols, out)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return BitMatrix(self.ncols, self.nrows, cols)

    T = property(transpose)

    def power(self, k: int) -> "BitMatrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        result = BitMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "BitMatrix":
        rows = []
        for i in row_idx:
            r = self.rows[i]
            v = 0
            for k, j in enumerate(col_idx):
                if (r >> j) & 1:
                    v |= 1 << k
            rows.append(v)
        return BitMatrix(len(row_idx), len(col_idx), rows)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return BitMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    # -- elimination -------------------------------------------------------------

    def echelon(self) -> tuple[list[int], list[int]]:
        """Reduced row echelon form: (nonzero rows, pivot columns)."""
        rows = [r for r in self.rows if r]
        pivots: list[int] = []
        basis: list[int] = []
        for r in rows:
            for b, pc in zip(basis, pivots):
                if (r >> pc) & 1:
                    r ^= b
            if r:
                pc = (r & -r).bit_length() - 1
                for k in range(len(basis)):
                    if (basis[k] >> pc) & 1:
                        basis[k] ^= r
                basis.append(r)
                pivots.append(pc)
        return basis, pivots

    def rank(self) -> int:
        return len(self.echelon()[0])

    def nullity(self) -> int:
        """Dimension of the right nullspace ``{x : M x = 0}``."""
        return self.ncols - self.rank()

    def row_space(self) -> "BitMatrix":
        basis, _ = self.echelon()
        return BitMatrix(len(basis), self.ncols, basis)

    def nullspace(self) -> "BitMatrix":
        """Basis (as rows) of ``{x : M x^T = 0}``."""
        basis, pivots = self.echelon()
        pivset = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivset]
        out = []
        for f in free:
            v = 1 << f
            for b, pc in zip(basis, pivots):
                if (b >> f) & 1:
                    v |= 1 << pc
            out.append(v)
        return BitMatrix(len(out), self.ncols, out)

    def contains_row(self, v: int) -> bool:
        """Whether ``v`` lies in the row space."""
        basis, pivots = self.echelon()
        for b, pc in zip(basis, pivots):
            if (v >> pc) & 1:
                v ^= b
        return v == 0

    def span_equal(self, other: "BitMatrix") -> bool:
        r = self.rank()
        return r == other.rank() and r == self.vstack(other).rank()


class PFMatrix:
    """Matrix over GF(p), p prime."""

    def __init__(self, p: int, data):
        self.p = p
        self.data = np.asarray(data, dtype=np.int64) % p

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    def rank(self) -> int:
        p = self.p
        a = self.data.copy()
        nrows, ncols = a.shape
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            piv = r + nz[0]
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            inv = pow(int(a[r, c]), p - 2, p)
            a[r, c:] = (a[r, c:] * inv) % p
            below = a[r + 1:, c]
            idx = np.flatnonzero(below)
            if idx.size:
                rows = r + 1 + idx
                a[rows, c:] = (a[rows, c:] - np.outer(a[rows, c], a[r, c:])) % p
            r += 1
        return r
