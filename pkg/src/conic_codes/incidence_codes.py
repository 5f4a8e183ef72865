"""Binary codes built from the incidence structure of the conic.

``A`` is the line/point incidence matrix of PG(2, q) with rows ordered
tangents, passants, secants and columns ordered absolute, internal,
external points.  Named blocks ``A22, A23, A32, A33`` pick out passant
or secant rows against internal or external columns.  ``B`` is the
external-point adjacency ``B[i][j] = 1`` iff ``E_j`` lies on the polar of
``E_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, TextIO

import numpy as np

from .f2_linalg import BitMatrix, PFMatrix, popcount
from .projective_plane import LineClass, PlaneCtx, PointClass

__all__ = [
    "CodeReport",
    "IncidencePartition",
    "NeighborSets",
    "block_names",
    "build_partition",
    "code_dims",
    "direct_sum_checks",
    "expected_dim_L",
    "export_alist",
    "ext_index",
    "incidence_matrix",
    "intersection2_parities",
    "intersection_parities",
    "ldpc_dims",
    "matrix_B",
    "matrix_C",
    "matrix_D",
    "neighbor_sets",
    "parity_checks",
    "power_identities",
    "rank_2",
    "rank_p",
    "read_alist",
    "submatrix",
    "write_alist",
]

ROW_CLASSES = {"1": "T", "2": "Pa", "3": "Se"}
COL_CLASSES = {"1": "O", "2": "I", "3": "E"}


def block_names() -> list[str]:
    return [f"A{i}{j}" for i in "123" for j in "123"]


def _rows_of(plane: PlaneCtx, tag: str) -> list[int]:
    return {"T": plane.T, "Pa": plane.Pa, "Se": plane.Se}[tag]


def _cols_of(plane: PlaneCtx, tag: str) -> list[int]:
    return {"O": plane.O, "I": plane.I, "E": plane.E}[tag]


def _bits_from_bool(mat: np.ndarray) -> BitMatrix:
    return BitMatrix.from_dense(mat)


def incidence_matrix(plane: PlaneCtx) -> BitMatrix:
    """Full incidence matrix with the block ordering described above."""
    rows = plane.T + plane.Pa + plane.Se
    cols = plane.O + plane.I + plane.E
    return _bits_from_bool(plane.incidence[np.ix_(rows, cols)])


def submatrix(plane: PlaneCtx, name: str) -> BitMatrix:
    if len(name) != 3 or name[0] != "A" or name[1] not in ROW_CLASSES or name[2] not in COL_CLASSES:
        raise ValueError(f"unknown block {name!r}")
    rows = _rows_of(plane, ROW_CLASSES[name[1]])
    cols = _cols_of(plane, COL_CLASSES[name[2]])
    return _bits_from_bool(plane.incidence[np.ix_(rows, cols)])


@dataclass(frozen=True)
class IncidencePartition:
    """The nine blocks ``A11 .. A33`` with their row and column labels."""

    A: BitMatrix
    blocks: dict[str, BitMatrix]
    row_labels: dict[str, list[int]]
    col_labels: dict[str, list[int]]

    def reassemble(self) -> BitMatrix:
        rows = []
        for i in "123":
            parts = [self.blocks[f"A{i}{j}"] for j in "123"]
            for r in range(parts[0].nrows):
                v, shift = 0, 0
                for part in parts:
                    v |= part.rows[r] << shift
                    shift += part.ncols
                rows.append(v)
        return BitMatrix(self.A.nrows, self.A.ncols, rows)


def build_partition(plane: PlaneCtx) -> IncidencePartition:
    blocks = {name: submatrix(plane, name) for name in block_names()}
    row_labels = {t: _rows_of(plane, t) for t in ROW_CLASSES.values()}
    col_labels = {t: _cols_of(plane, t) for t in COL_CLASSES.values()}
    return IncidencePartition(incidence_matrix(plane), blocks, row_labels, col_labels)


def ext_index(plane: PlaneCtx) -> dict[int, int]:
    """Map from point index to position within the external points."""
    return {p: i for i, p in enumerate(plane.E)}


@lru_cache(maxsize=None)
def matrix_B(plane: PlaneCtx) -> BitMatrix:
    E = plane.E
    polars = plane.perp[E]
    return _bits_from_bool(plane.incidence[np.ix_(polars, E)])


@lru_cache(maxsize=None)
def matrix_C(plane: PlaneCtx) -> BitMatrix:
    """``B^4 + I``."""
    B = matrix_B(plane)
    return B.power(4) + BitMatrix.identity(B.nrows)


def matrix_D(plane: PlaneCtx) -> BitMatrix:
    """``C + J``."""
    C = matrix_C(plane)
    return C + BitMatrix.ones(C.nrows, C.ncols)


def ldpc_dims(plane: PlaneCtx, name: str = "A33") -> dict[str, int]:
    """Length and dimension of the binary code with parity checks ``name``."""
    H = submatrix(plane, name)
    return {"n": H.ncols, "k": H.nullity()}


def expected_dim_L(q: int) -> int:
    """Closed form for the dimension of the code with parity checks A33."""
    base = (q - 1) ** 2 // 4
    return base + 1 if q % 4 == 1 else base - 1


def rank_2(plane: PlaneCtx) -> int:
    return incidence_matrix(plane).rank()


def rank_p(plane: PlaneCtx, name: str | None = None) -> int:
    """Rank over GF(p), p the field characteristic, of ``A`` or a block."""
    p = plane.field.p
    if name is None:
        rows = plane.T + plane.Pa + plane.Se
        cols = plane.O + plane.I + plane.E
    else:
        rows = _rows_of(plane, ROW_CLASSES[name[1]])
        cols = _cols_of(plane, COL_CLASSES[name[2]])
    return PFMatrix(p, plane.incidence[np.ix_(rows, cols)].astype(np.int64)).rank()


# --- neighbourhoods of external points -------------------------------------

@dataclass(frozen=True)
class NeighborSets:
    """Point-index sets attached to an external point ``P``.

    ``N``: external points on the secants through P (P itself included only
    when q = 3 mod 4).  ``T``: external points other than P on the two
    tangents through P.  ``Na``: the augmented set used for the rows of
    ``B^4 + I``.  ``Nprime``: external points outside ``Na``.
    """

    N: frozenset[int]
    T: frozenset[int]
    Na: frozenset[int]
    Nprime: frozenset[int]


def neighbor_sets(plane: PlaneCtx, p: int) -> NeighborSets:
    if plane.point_class[p] is not PointClass.EXTERNAL:
        raise ValueError("neighbour sets are defined for external points only")
    q = plane.q
    ext = set(plane.E)
    N: set[int] = set()
    T: set[int] = set()
    for l in plane.lines_through[p]:
        pts = ext.intersection(plane.points_on[l])
        if plane.line_class[l] is LineClass.SECANT:
            N |= pts
        elif plane.line_class[l] is LineClass.TANGENT:
            T |= pts
    N.discard(p)
    T.discard(p)
    if q % 4 == 3:
        N.add(p)
    r = q % 8
    if r == 1:
        Na = N | {p} | T
    elif r == 5:
        Na = N | {p}
    elif r == 7:
        Na = (N | T) - {p}
    else:
        Na = N - {p}
    return NeighborSets(frozenset(N), frozenset(T), frozenset(Na), frozenset(ext - Na))


def _bits(positions: Iterable[int]) -> int:
    v = 0
    for i in positions:
        v |= 1 << i
    return v


def power_identities(plane: PlaneCtx) -> dict[str, bool]:
    """Row-level identities between powers of ``B`` and neighbour sets."""
    q = plane.q
    B = matrix_B(plane)
    B2 = B @ B
    B3 = B2 @ B
    B4 = B2 @ B2
    B5 = B4 @ B
    C = B4 + BitMatrix.identity(B.nrows)
    pos = ext_index(plane)
    rows_B2 = rows_B4 = rows_C = True
    for i, p in enumerate(plane.E):
        ns = neighbor_sets(plane, p)
        n_vec = _bits(pos[x] for x in ns.N)
        t_vec = _bits(pos[x] for x in ns.T)
        rows_B2 &= B2.rows[i] == n_vec
        want4 = n_vec if q % 8 in (3, 5) else n_vec ^ t_vec
        rows_B4 &= B4.rows[i] == want4
        rows_C &= C.rows[i] == _bits(pos[x] for x in ns.Na)
    nullB = B.nullspace()
    out = {
        "B_symmetric": B.is_symmetric(),
        "B_zero_diagonal": all(not B.get(i, i) for i in range(B.nrows)),
        "B_row_weight": set(B.row_weights()) == {(q - 1) // 2},
        "B5_eq_B": B5 == B,
        "B3_eq_B": B3 == B,
        "B2_rows_are_N": rows_B2,
        "B4_rows": rows_B4,
        "C_rows_are_Na": rows_C,
        "rowspace_C_eq_null_B": C.span_equal(nullB),
    }
    if q % 4 == 1:
        D = C + BitMatrix.ones(C.nrows, C.ncols)
        j_vec = (1 << B.ncols) - 1
        rowD = D.row_space()
        out["J_not_in_rowspace_D"] = not rowD.contains_row(j_vec)
        out["null_B_eq_J_plus_rowspace_D"] = (
            nullB.rank() == rowD.rank() + 1
            and nullB.span_equal(rowD.vstack(BitMatrix(1, B.ncols, [j_vec])))
        )
        out["B4_rows_even"] = all(w % 2 == 0 for w in B4.row_weights())
    return out


def direct_sum_checks(plane: PlaneCtx) -> dict[str, bool]:
    """Row space and null space of ``B`` split GF(2)^E; for q = 1 mod 4 the
    null space further splits as ``<J> + rowspace(D)``."""
    B = matrix_B(plane)
    n = B.ncols
    row, null = B.row_space(), B.nullspace()
    out = {
        "rank_plus_nullity": row.rank() + null.rank() == n,
        "row_null_trivial": row.vstack(null).rank() == row.rank() + null.rank(),
    }
    if plane.q % 4 == 1:
        rowD = matrix_D(plane).row_space()
        j_row = BitMatrix(1, n, [(1 << n) - 1])
        both = rowD.vstack(j_row)
        out["J_direct_rowspace_D"] = both.rank() == rowD.rank() + 1
        out["null_B_eq_J_plus_rowspace_D"] = both.span_equal(null)
    return out


@dataclass(frozen=True)
class CodeReport:
    matrix: str
    q: int
    n: int
    rank: int

    @property
    def k(self) -> int:
        return self.n - self.rank


def code_dims(plane: PlaneCtx) -> dict[str, CodeReport]:
    """Binary codes whose parity checks are the blocks A22, A23, A32, A33."""
    out = {}
    for name in ("A22", "A23", "A32", "A33"):
        H = submatrix(plane, name)
        out[name] = CodeReport(name, plane.q, H.ncols, H.rank())
    return out


# --- parity statements about secants and neighbourhoods ----------------------

def intersection_parities(plane: PlaneCtx) -> dict[str, object]:
    """Parities of the number of secants through P meeting a secant l in E.

    For every secant ``l`` with pole ``P'`` and every external ``P`` off
    ``l`` with ``P != P'``, counts secants through ``P`` whose meet with
    ``l`` is external.  Returns the observed parities split by whether P
    lies on a tangent through ``P'``.
    """
    on_tangent: set[int] = set()
    other: set[int] = set()
    ext = set(plane.E)
    for l in plane.Se:
        pole = int(plane.pole[l])
        tang_pts: set[int] = set()
        for t in plane.lines_through[pole]:
            if plane.line_class[t] is LineClass.TANGENT:
                tang_pts.update(plane.points_on[t])
        on_l = set(plane.points_on[l])
        ext_on_l = ext & on_l
        for p in plane.E:
            if p in on_l or p == pole:
                continue
            count = 0
            for m in plane.lines_through[p]:
                if plane.line_class[m] is LineClass.SECANT and plane.meet(m, l) in ext_on_l:
                    count += 1
            (on_tangent if p in tang_pts else other).add(count % 2)
    return {"on_tangent": on_tangent, "other": other}


def intersection2_parities(plane: PlaneCtx) -> dict[str, set[int]]:
    """Parities of ``|N_E(P1) & N_E(P2)|`` keyed by the type of line P1P2."""
    pos = ext_index(plane)
    vec = {p: _bits(pos[x] for x in neighbor_sets(plane, p).N) for p in plane.E}
    out: dict[str, set[int]] = {k.value: set() for k in LineClass}
    E = plane.E
    for a in range(len(E)):
        for b in range(a + 1, len(E)):
            p1, p2 = E[a], E[b]
            kind = plane.line_class[plane.join(p1, p2)].value
            out[kind].add(popcount(vec[p1] & vec[p2]) % 2)
    return out


# --- alist ---------------------------------------------------------------------

def parity_checks(plane: PlaneCtx) -> dict[str, bool]:
    """Secant-count and neighbourhood-overlap parities against their
    predicted values, over all admissible configurations."""
    q = plane.q
    plus_minus_one = q % 8 in (1, 7)
    one = intersection_parities(plane)
    two = intersection2_parities(plane)
    return {
        "secants_on_tangent": one["on_tangent"] <= {int(plus_minus_one)},
        "secants_other": one["other"] <= {0},
        "overlap_passant": two["Pa"] <= {0},
        "overlap_secant": two["Se"] <= {1},
        "overlap_tangent": two["T"] <= {int(plus_minus_one)},
    }


def export_alist(H: BitMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_alist(H, fh)


def write_alist(H: BitMatrix, fh: TextIO) -> None:
    """Write ``H`` in MacKay's alist format (columns first, 1-based)."""
    m, n = H.nrows, H.ncols
    row_supp = [H.row_support(i) for i in range(m)]
    col_supp: list[list[int]] = [[] for _ in range(n)]
    for i, supp in enumerate(row_supp):
        for j in supp:
            col_supp[j].append(i)
    col_deg = [len(c) for c in col_supp]
    row_deg = [len(r) for r in row_supp]
    fh.write(f"{n} {m}\n")
    fh.write(f"{max(col_deg, default=0)} {max(row_deg, default=0)}\n")
    fh.write(" ".join(map(str, col_deg)) + "\n")
    fh.write(" ".join(map(str, row_deg)) + "\n")
    for c in col_supp:
        fh.write(" ".join(str(i + 1) for i in c) + "\n")
    for r in row_supp:
        fh.write(" ".join(str(j + 1) for j in r) + "\n")


def read_alist(fh: TextIO) -> BitMatrix:
    lines = [ln.split() for ln in fh.read().splitlines()]
    n, m = int(lines[0][0]), int(lines[0][1])
    rows_part = lines[4 + n: 4 + n + m]
    support = [[int(x) - 1 for x in r if int(x) > 0] for r in rows_part]
    H = BitMatrix.from_support(m, n, support)
    col_part = lines[4: 4 + n]
    Ht = BitMatrix.from_support(n, m, [[int(x) - 1 for x in c if int(x) > 0] for c in col_part])
    if Ht.transpose() != H:
        raise ValueError("alist column and row lists disagree")
    return H
