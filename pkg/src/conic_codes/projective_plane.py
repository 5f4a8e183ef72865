"""PG(2, q) together with the conic ``X1^2 = X0*X2`` and its polarity.

Points and lines are both stored as normalised coordinate triples (first
nonzero coordinate equal to 1), sorted by their integer encoding
``a0*q^2 + a1*q + a2``.  A point ``(a0,a1,a2)`` lies on a line
``[b0,b1,b2]`` when ``a0*b0 + a1*b1 + a2*b2 == 0``.

With respect to the conic, points split into absolute (on the conic),
external and internal points; lines split into tangents, secants and
passants.  The polarity swaps the two families.
"""

from __future__ import annotations

import enum
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .finite_field import FieldCtx, Residue, factor_prime_power, make_field

__all__ = [
    "LineClass",
    "Mat3",
    "PlaneCtx",
    "PlaneError",
    "PointClass",
    "ProjLine",
    "ProjPoint",
    "make_plane",
    "mat3_det",
    "mat3_inv",
    "mat3_mul",
]

PLANE_LIMIT = 101

Mat3 = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]


class PlaneError(ValueError):
    """Bad geometric input (wrong incidence, conic point, tangent line...)."""


class PointClass(enum.Enum):
    INTERNAL = "I"
    ABSOLUTE = "O"
    EXTERNAL = "E"


class LineClass(enum.Enum):
    PASSANT = "Pa"
    TANGENT = "T"
    SECANT = "Se"


class ProjPoint(NamedTuple):
    a0: int
    a1: int
    a2: int


class ProjLine(NamedTuple):
    b0: int
    b1: int
    b2: int


# --- 3x3 matrices over a field, entries as codes --------------------------

def mat3_mul(F: FieldCtx, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Mat3:
    add, mul = F.add, F.mul
    return tuple(
        tuple(add(add(mul(A[i][0], B[0][j]), mul(A[i][1], B[1][j])), mul(A[i][2], B[2][j]))
              for j in range(3))
        for i in range(3)
    )  # type: ignore[return-value]


def mat3_det(F: FieldCtx, A: Sequence[Sequence[int]]) -> int:
    add, sub, mul = F.add, F.sub, F.mul

    def m2(a, b, c, d):
        return sub(mul(a, d), mul(b, c))

    t0 = mul(A[0][0], m2(A[1][1], A[1][2], A[2][1], A[2][2]))
    t1 = mul(A[0][1], m2(A[1][0], A[1][2], A[2][0], A[2][2]))
    t2 = mul(A[0][2], m2(A[1][0], A[1][1], A[2][0], A[2][1]))
    return add(sub(t0, t1), t2)


def mat3_inv(F: FieldCtx, A: Sequence[Sequence[int]]) -> Mat3:
    det = mat3_det(F, A)
    if det == 0:
        raise PlaneError("singular matrix")
    sub, mul = F.sub, F.mul
    dinv = F.inv(det)
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != i]
            c = [y for y in range(3) if y != j]
            minor = sub(mul(A[r[0]][c[0]], A[r[1]][c[1]]), mul(A[r[0]][c[1]], A[r[1]][c[0]]))
            if (i + j) % 2:
                minor = F.neg(minor)
            cof[i][j] = minor
    # inverse = adj / det, adj = cof^T
    return tuple(tuple(mul(cof[j][i], dinv) for j in range(3)) for i in range(3))  # type: ignore


class PlaneCtx:
    """Points, lines, incidence and the conic's polarity in PG(2, q)."""

    def __init__(self, field: FieldCtx):
        if field.q > PLANE_LIMIT:
            raise PlaneError(f"plane construction limited to q <= {PLANE_LIMIT}")
        if field.add_table is None:
            raise PlaneError("field tables unavailable")
        self.field = field
        q = self.q = field.q
        triples = [(0, 0, 1)]
        triples += [(0, 1, a) for a in range(q)]
        triples += [(1, a, b) for a in range(q) for b in range(q)]
        self.n = len(triples)
        self.coords = np.array(triples, dtype=np.int64)
        self._index = np.full(q ** 3, -1, dtype=np.int64)
        self._index[self._encode(self.coords)] = np.arange(self.n)
        self.points = [ProjPoint(*t) for t in triples]
        self.lines = [ProjLine(*t) for t in triples]
        self._classify()
        self._build_polarity()

    # -- encoding and normalisation ------------------------------------------

    def _encode(self, arr: np.ndarray) -> np.ndarray:
        q = self.q
        return (arr[:, 0] * q + arr[:, 1]) * q + arr[:, 2]

    def normalize_array(self, arr: np.ndarray) -> np.ndarray:
        """Scale each nonzero row so its first nonzero entry is 1."""
        F = self.field
        arr = np.asarray(arr, dtype=np.int64)
        nz = arr != 0
        if not nz.any(axis=1).all():
            raise PlaneError("zero vector is not a projective point")
        first = nz.argmax(axis=1)
        lead = arr[np.arange(len(arr)), first]
        scale = F.inv_array[lead]
        return F.mul_table[arr, scale[:, None]].astype(np.int64)

    def normalize(self, triple: Sequence[int]) -> tuple[int, int, int]:
        return tuple(int(x) for x in self.normalize_array(np.array([triple]))[0])  # type: ignore

    def index_array(self, arr: np.ndarray) -> np.ndarray:
        """Indices of the (not necessarily normalised) rows of ``arr``."""
        return self._index[self._encode(self.normalize_array(arr))]

    def point_index(self, p: Sequence[int]) -> int:
        return int(self.index_array(np.array([p]))[0])

    line_index = point_index

    # -- vectorised linear algebra -------------------------------------------

    def _rows_times(self, arr: np.ndarray, M: Sequence[Sequence[int]]) -> np.ndarray:
        """Row vectors times a 3x3 matrix, entrywise over the field."""
        A, Mu = self.field.add_table, self.field.mul_table
        M = np.asarray(M, dtype=np.int64)
        out = np.empty_like(arr)
        for j in range(3):
            out[:, j] = A[A[Mu[arr[:, 0], M[0, j]], Mu[arr[:, 1], M[1, j]]], Mu[arr[:, 2], M[2, j]]]
        return out

    def _dots(self, arr: np.ndarray, vec: Sequence[int]) -> np.ndarray:
        A, Mu = self.field.add_table, self.field.mul_table
        return A[A[Mu[arr[:, 0], vec[0]], Mu[arr[:, 1], vec[1]]], Mu[arr[:, 2], vec[2]]]

    # -- classification --------------------------------------------------------

    def _classify(self) -> None:
        F = self.field
        A, Mu, Ng = F.add_table, F.mul_table, F.neg_array
        c = self.coords
        # points: a1^2 - a0*a2 ; lines: b1^2 - 4*b0*b2
        pv = A[Mu[c[:, 1], c[:, 1]], Ng[Mu[c[:, 0], c[:, 2]]]]
        four = F.from_int(4)
        lv = A[Mu[c[:, 1], c[:, 1]], Ng[Mu[Mu[c[:, 0], c[:, 2]], four]]]
        pcls, lcls = [], []
        for a, b in zip(pv.tolist(), lv.tolist()):
            ra, rb = F.residue(a), F.residue(b)
            pcls.append({Residue.ZERO: PointClass.ABSOLUTE, Residue.SQUARE: PointClass.EXTERNAL,
                         Residue.NONSQUARE: PointClass.INTERNAL}[ra])
            lcls.append({Residue.ZERO: LineClass.TANGENT, Residue.SQUARE: LineClass.SECANT,
                         Residue.NONSQUARE: LineClass.PASSANT}[rb])
        self.point_class = pcls
        self.line_class = lcls
        self.E = [i for i, k in enumerate(pcls) if k is PointClass.EXTERNAL]
        self.I = [i for i, k in enumerate(pcls) if k is PointClass.INTERNAL]
        self.O = [i for i, k in enumerate(pcls) if k is PointClass.ABSOLUTE]
        self.Se = [i for i, k in enumerate(lcls) if k is LineClass.SECANT]
        self.Pa = [i for i, k in enumerate(lcls) if k is LineClass.PASSANT]
        self.T = [i for i, k in enumerate(lcls) if k is LineClass.TANGENT]

    def classify_point(self, p: int | Sequence[int]) -> PointClass:
        return self.point_class[self._as_index(p)]

    def classify_line(self, l: int | Sequence[int]) -> LineClass:
        return self.line_class[self._as_index(l)]

    def _as_index(self, x: int | Sequence[int]) -> int:
        if isinstance(x, (int, np.integer)):
            return int(x)
        return self.point_index(x)

    # -- polarity --------------------------------------------------------------

    def _build_polarity(self) -> None:
        F = self.field
        c = self.coords
        # P=(x,y,z) -> [z, -2y, x]
        m2 = F.from_int(-2)
        img = np.stack([c[:, 2], F.mul_table[c[:, 1], m2], c[:, 0]], axis=1)
        self.perp = self.index_array(img)
        # [b0,b1,b2] -> (b0,b1,b2) * M^-1 = (-2*b2, b1, -2*b0)
        img2 = np.stack([F.mul_table[c[:, 2], m2], c[:, 1], F.mul_table[c[:, 0], m2]], axis=1)
        self.pole = self.index_array(img2)

    def polarity_point(self, p: int | Sequence[int]) -> int:
        """Index of the polar line of a point."""
        return int(self.perp[self._as_index(p)])

    def polarity_line(self, l: int | Sequence[int]) -> int:
        """Index of the pole of a line."""
        return int(self.pole[self._as_index(l)])

    # -- incidence ---------------------------------------------------------------

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean matrix ``inc[line, point]``."""
        A, Mu = self.field.add_table, self.field.mul_table
        c = self.coords
        t = Mu[c[:, 0][:, None], c[:, 0][None, :]]
        t = A[t, Mu[c[:, 1][:, None], c[:, 1][None, :]]]
        t = A[t, Mu[c[:, 2][:, None], c[:, 2][None, :]]]
        return t == 0

    @cached_property
    def points_on(self) -> list[list[int]]:
        return [np.flatnonzero(row).tolist() for row in self.incidence]

    @cached_property
    def lines_through(self) -> list[list[int]]:
        return [np.flatnonzero(col).tolist() for col in self.incidence.T]

    def incident(self, p: int | Sequence[int], l: int | Sequence[int]) -> bool:
        pt = self.coords[self._as_index(p)]
        return int(self._dots(pt[None, :], self.coords[self._as_index(l)])[0]) == 0

    def _cross(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, int, int]:
        F = self.field
        s, m = F.sub, F.mul
        return (s(m(u[1], v[2]), m(u[2], v[1])),
                s(m(u[2], v[0]), m(u[0], v[2])),
                s(m(u[0], v[1]), m(u[1], v[0])))

    def join(self, p: int, r: int) -> int:
        """Line through two distinct points."""
        if p == r:
            raise PlaneError("join of a point with itself")
        return self.point_index(self._cross(self.coords[p].tolist(), self.coords[r].tolist()))

    def meet(self, l: int, m: int) -> int:
        """Intersection point of two distinct lines."""
        if l == m:
            raise PlaneError("meet of a line with itself")
        return self.point_index(self._cross(self.coords[l].tolist(), self.coords[m].tolist()))

    # -- collineations -------------------------------------------------------------

    def act_points(self, M: Sequence[Sequence[int]]) -> np.ndarray:
        """Permutation of point indices induced by ``P -> P*M``."""
        return self.index_array(self._rows_times(self.coords, M))

    def act_lines(self, M: Sequence[Sequence[int]]) -> np.ndarray:
        """Permutation of line indices induced by ``l -> M^-1 * l^T``."""
        Minv = mat3_inv(self.field, M)
        MinvT = [[Minv[j][i] for j in range(3)] for i in range(3)]
        return self.index_array(self._rows_times(self.coords, MinvT))

    def act_point(self, M: Sequence[Sequence[int]], p: int | Sequence[int]) -> int:
        row = self.coords[self._as_index(p)][None, :]
        return int(self.index_array(self._rows_times(row, M))[0])

    def act_line(self, M: Sequence[Sequence[int]], l: int | Sequence[int]) -> int:
        Minv = mat3_inv(self.field, M)
        MinvT = [[Minv[j][i] for j in range(3)] for i in range(3)]
        row = self.coords[self._as_index(l)][None, :]
        return int(self.index_array(self._rows_times(row, MinvT))[0])

    # -- class-valued helpers ---------------------------------------------------------

    def perp_meet_class(self, p: int | Sequence[int], l: int | Sequence[int]) -> PointClass:
        """Class of the point where the polar of ``p`` meets ``l``.

        Requires ``p`` off the conic, ``l`` not a tangent and ``p`` on ``l``.
        """
        pi, li = self._as_index(p), self._as_index(l)
        if self.point_class[pi] is PointClass.ABSOLUTE:
            raise PlaneError("point lies on the conic")
        if self.line_class[li] is LineClass.TANGENT:
            raise PlaneError("line is a tangent")
        if not self.incident(pi, li):
            raise PlaneError("point is not on the line")
        return self.point_class[self.meet(int(self.perp[pi]), li)]

    def verify_incidence_tables(self) -> dict[str, object]:
        """Tabulate incidences between point and line classes.

        Returns the census and, for each line class, the set of observed
        ``(#absolute, #external, #internal)`` triples (and dually for points).
        """
        inc = self.incidence
        pc = np.array([k.value for k in self.point_class])
        lc = np.array([k.value for k in self.line_class])
        masks = {k: pc == k for k in ("O", "E", "I")}
        per_line: dict[str, set] = {k.value: set() for k in LineClass}
        for li in range(self.n):
            row = inc[li]
            per_line[lc[li]].add(tuple(int((row & masks[k]).sum()) for k in ("O", "E", "I")))
        lmasks = {k: lc == k for k in ("T", "Se", "Pa")}
        per_point: dict[str, set] = {k.value: set() for k in PointClass}
        for pi in range(self.n):
            col = inc[:, pi]
            per_point[pc[pi]].add(tuple(int((col & lmasks[k]).sum()) for k in ("T", "Se", "Pa")))
        census = {"E": len(self.E), "I": len(self.I), "O": len(self.O),
                  "Se": len(self.Se), "Pa": len(self.Pa), "T": len(self.T)}
        return {"census": census, "per_line": per_line, "per_point": per_point}

    @staticmethod
    def expected_incidence_tables(q: int) -> dict[str, object]:
        census = {"E": q * (q + 1) // 2, "I": q * (q - 1) // 2, "O": q + 1,
                  "Se": q * (q + 1) // 2, "Pa": q * (q - 1) // 2, "T": q + 1}
        per_line = {"T": {(1, q, 0)}, "Se": {(2, (q - 1) // 2, (q - 1) // 2)},
                    "Pa": {(0, (q + 1) // 2, (q + 1) // 2)}}
        per_point = {"O": {(1, q, 0)}, "E": {(2, (q - 1) // 2, (q - 1) // 2)},
                     "I": {(0, (q + 1) // 2, (q + 1) // 2)}}
        return {"census": census, "per_line": per_line, "per_point": per_point}


@lru_cache(maxsize=None)
def _cached_plane(field: FieldCtx) -> PlaneCtx:
    return PlaneCtx(field)


def make_plane(field: FieldCtx | int) -> PlaneCtx:
    """Plane over ``field``; an integer is read as the prime power q."""
    if isinstance(field, int):
        p, e = factor_prime_power(field)
        field = make_field(p, e)
    return _cached_plane(field)
