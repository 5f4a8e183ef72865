"""2-blocks of PSL(2, q) and the block decomposition of GF(2^k)^E.

Blocks are the classes of the relation "same central character mod 2":
two ordinary characters lie in one block exactly when the reductions of
``|C| chi(x_C) / chi(1)`` agree on every class ``C``.  Block idempotents
are the reductions of ``sum_{chi in B} chi(1) chi(x_C^-1) / |H|``.

The permutation module ``GF(2^k)^E`` (E = external points) is cut by the
idempotents; the code-related subspaces ``Ker``, ``Im`` of the adjacency
map ``B`` and ``Im`` of ``D = B^4 + I + J`` are measured block by block.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .brauer import BrauerReduction, make_reduction
from .characters import CharTable, build_char_table
from .cyclotomic import CycInt
from .f2_linalg import BitMatrix
from .group_action import ClassLabel, GroupCtx
from .incidence_codes import matrix_B, matrix_D

__all__ = [
    "Block",
    "BlockData",
    "block_module_dims",
    "block_partition",
    "block_shape",
    "central_product",
    "block_sanity",
    "expected_block_shape",
    "expected_principal_sum",
    "expression_checks",
    "idempotent_checks",
    "idempotent_coeffs",
    "induced_decomposition",
    "induced_expectations",
    "kernel_decomposition_checks",
    "make_block_data",
    "principal_sum_at_involution",
    "stab_induced_decomposition",
    "structure_constants",
    "v2",
    "wbo_check",
]


def v2(n: int) -> int:
    n = abs(n)
    k = 0
    while n and n % 2 == 0:
        n //= 2
        k += 1
    return k


@dataclass(frozen=True)
class Block:
    members: tuple[int, ...]
    names: tuple[str, ...]
    defect: int
    kind: str  # "principal", "defect0" or "other"

    def __len__(self) -> int:
        return len(self.members)


def block_partition(table: CharTable, reduction: BrauerReduction | None = None) -> list[Block]:
    """Blocks of ``table`` ordered principal, defect zero, remaining."""
    red = reduction or make_reduction(table.N)
    keys: dict[tuple[int, ...], list[int]] = {}
    for i in range(len(table.names)):
        lam = [red.reduce(table.omega(i, j)) for j in range(len(table.classes))]
        keys.setdefault(tuple(lam), []).append(i)
    a = v2(table.order)
    blocks = []
    for members in keys.values():
        d = a - min(v2(table.degree(i)) for i in members)
        names = tuple(table.names[i] for i in members)
        if "1" in names:
            kind = "principal"
        elif d == 0:
            kind = "defect0"
        else:
            kind = "other"
        blocks.append(Block(tuple(members), names, d, kind))
    order = {"principal": 0, "defect0": 1, "other": 2}
    blocks.sort(key=lambda b: (order[b.kind], b.members))
    return blocks


def block_shape(blocks: list[Block]) -> dict[str, object]:
    return {
        "principal": len(blocks[0]),
        "defect0": sum(1 for b in blocks if b.kind == "defect0"),
        "other": sorted(len(b) for b in blocks if b.kind == "other"),
        "other_defects": sorted({b.defect for b in blocks if b.kind == "other"}),
    }


def expected_block_shape(q: int) -> dict[str, object]:
    """Block shape predicted from ``q -+ 1 = m * 2^n``."""
    if q % 4 == 1:
        n, m = v2(q - 1), (q - 1) >> v2(q - 1)
        return {"principal": 2 ** (n - 2) + 3, "defect0": (q - 1) // 4,
                "other": [2 ** (n - 1)] * ((m - 1) // 2),
                "other_defects": [n - 1] if m > 1 else []}
    n, m = v2(q + 1), (q + 1) >> v2(q + 1)
    return {"principal": 2 ** (n - 2) + 3, "defect0": (q - 3) // 4,
            "other": [2 ** (n - 1)] * ((m - 1) // 2),
            "other_defects": [n - 1] if m > 1 else []}


def idempotent_coeffs(table: CharTable, block: Block, red: BrauerReduction) -> dict[ClassLabel, int]:
    """Class-sum coefficients of the block idempotent over GF(2^k)."""
    v = v2(table.order)
    out = {}
    for j, c in enumerate(table.classes):
        s = CycInt(table.N)
        for i in block.members:
            s = s + table.values[i][j].conj() * table.degree(i)
        out[c] = red.two_adic_quotient(s, v)
    return out


@dataclass
class BlockData:
    table: CharTable
    reduction: BrauerReduction
    blocks: list[Block]
    idempotents: list[dict[ClassLabel, int]]


@lru_cache(maxsize=None)
def make_block_data(q: int) -> BlockData:
    table = build_char_table(q)
    red = make_reduction(table.N)
    blocks = block_partition(table, red)
    idem = [idempotent_coeffs(table, b, red) for b in blocks]
    return BlockData(table, red, blocks, idem)


# --- checks on the character side ----------------------------------------------

def _class_by_kind(table: CharTable, kind: str) -> list[int]:
    return [j for j, c in enumerate(table.classes) if c.kind == kind]


def expression_checks(data: BlockData) -> dict[str, bool]:
    """Entries of the block idempotents that are forced by the character table."""
    t, q = data.table, data.table.q
    cls = {k: _class_by_kind(t, k) for k in ("D", "F+", "F-", "theta", "[0]", "pi")}
    res: dict[str, bool] = {}

    def val(e: dict, kind: str) -> list[int]:
        return [e[t.classes[j]] for j in cls[kind]]

    for b, e in zip(data.blocks, data.idempotents):
        tag = b.kind if b.kind != "other" else "other"
        checks = []
        if b.kind == "principal":
            checks += [val(e, "D") == [1], val(e, "[0]") == [0], val(e, "F+") == val(e, "F-")]
            checks.append(all(x == 1 for x in val(e, "pi" if q % 4 == 1 else "theta")))
        else:
            checks += [val(e, "D") == [0], val(e, "F+") == [1], val(e, "F-") == [1], val(e, "[0]") == [0]]
            if (b.kind == "defect0") == (q % 4 == 1):
                checks.append(all(x == 0 for x in val(e, "theta")))
            else:
                checks.append(all(x == 0 for x in val(e, "pi")))
        key = f"expression_{tag}"
        res[key] = res.get(key, True) and all(checks)
    return res


def wbo_check(data: BlockData, group: GroupCtx) -> bool:
    """Block orthogonality between 2-regular and 2-singular classes."""
    t = data.table
    singular = {c for c in t.classes
                if group.element_order(group.index[group.class_reps[c]]) % 2 == 0}
    for b in data.blocks:
        for h, ch in enumerate(t.classes):
            if ch in singular:
                continue
            for g, cg in enumerate(t.classes):
                if cg not in singular:
                    continue
                s = CycInt(t.N)
                for i in b.members:
                    s = s + t.values[i][h] * t.values[i][g].conj()
                if not s.is_zero():
                    return False
    return True


def principal_sum_at_involution(data: BlockData) -> int:
    """Sum over principal-block characters of degree q+1 (q=1 mod 4) or q-1
    (q=3 mod 4) of their value at an involution."""
    t = data.table
    q = t.q
    deg = q + 1 if q % 4 == 1 else q - 1
    j = _class_by_kind(t, "[0]")[0]
    s = CycInt(t.N)
    for i in data.blocks[0].members:
        if t.degree(i) == deg:
            s = s + t.values[i][j]
    v = s.rational()
    assert v is not None
    return v


def expected_principal_sum(q: int) -> int:
    return {1: -2, 5: 0, 7: 2, 3: 0}[q % 8]


# --- the permutation character on external points -------------------------------

def induced_decomposition(table: CharTable, stab_counts: dict[ClassLabel, int]) -> dict[str, int]:
    """Multiplicities of the irreducibles in the permutation character on E.

    ``stab_counts[C] = |K & C|`` for the stabiliser ``K`` of an external point.
    """
    k = sum(stab_counts.values())
    out = {}
    for i, name in enumerate(table.names):
        s = CycInt(table.N)
        for j, c in enumerate(table.classes):
            n = stab_counts.get(c, 0)
            if n:
                s = s + table.values[i][j] * n
        v = s.rational()
        if v is None or v % k:
            raise ArithmeticError(f"non-integral multiplicity for {name}")
        out[name] = v // k
    return out


def stab_induced_decomposition(table: CharTable, group: GroupCtx) -> dict[str, int]:
    """Decomposition of the permutation character of ``H`` on external points."""
    p = group.plane.E[0]
    return induced_decomposition(table, group.class_counts(group.stab_H(p)))


def induced_expectations(table: CharTable, mult: dict[str, int]) -> dict[str, bool]:
    q = table.q
    n_phi = sum(1 for n in table.names if n.startswith("phi_"))
    n_chi = sum(1 for n in table.names if n.startswith("chi_"))
    phi_total = sum(v for n, v in mult.items() if n.startswith("phi_"))
    chi_total = sum(v for n, v in mult.items() if n.startswith("chi_"))
    res = {"trivial_once": mult["1"] == 1}
    if q % 4 == 1:
        beta = 1 if q % 8 == 1 else 0
        res["chi_each_once"] = all(mult[f"chi_{s}"] == 1 for s in range(1, n_chi + 1))
        res["gamma_twice"] = mult["gamma"] == 2
        res["beta"] = mult["beta1"] == beta and mult["beta2"] == beta
        res["phi_count"] = phi_total == ((q - 9) // 4 if q % 8 == 1 else (q - 5) // 4)
    else:
        eta = 1 if q % 8 == 3 else 0
        res["phi_each_once"] = all(mult[f"phi_{r}"] == 1 for r in range(1, n_phi + 1))
        res["gamma_once"] = mult["gamma"] == 1
        res["eta"] = mult["eta1"] == eta and mult["eta2"] == eta
        res["chi_count"] = chi_total == ((q - 3) // 4 if q % 8 == 3 else (q + 1) // 4)
    deg_sum = sum(mult[n] * table.degree(i) for i, n in enumerate(table.names))
    res["degree_sum"] = deg_sum == q * (q + 1) // 2
    return res


# --- centre of the group algebra -------------------------------------------------

def structure_constants(group: GroupCtx, classes: list[ClassLabel]) -> dict[tuple, int]:
    """``a[C1, C2, C3] = #{(x, y) in C1 x C2 : x y = z}`` for fixed z in C3."""
    out = {}
    members = group.class_members
    for c3 in classes:
        z = group.class_reps[c3]
        for c1 in classes:
            counts = {c: 0 for c in classes}
            for x in members[c1]:
                y = group.mul2(group.inv2(group.elements[x]), z)
                counts[group.labels[group.index[y]]] += 1
            for c2 in classes:
                out[(c1, c2, c3)] = counts[c2]
    return out


def central_product(F, consts: dict[tuple, int], classes: list[ClassLabel],
                    u: dict[ClassLabel, int], w: dict[ClassLabel, int]) -> dict[ClassLabel, int]:
    out = {c: 0 for c in classes}
    for c1 in classes:
        if not u[c1]:
            continue
        for c2 in classes:
            if not w[c2]:
                continue
            prod = F.mul(u[c1], w[c2])
            for c3 in classes:
                if consts[(c1, c2, c3)] & 1:
                    out[c3] ^= prod
    return out


def idempotent_checks(data: BlockData, group: GroupCtx) -> dict[str, bool]:
    classes = data.table.classes
    consts = structure_constants(group, classes)
    F = data.reduction.field
    total = {c: 0 for c in classes}
    for e in data.idempotents:
        for c in classes:
            total[c] ^= e[c]
    unit = {c: int(c.kind == "D") for c in classes}
    ok_orth = True
    for a, ea in enumerate(data.idempotents):
        for b, eb in enumerate(data.idempotents):
            want = ea if a == b else {c: 0 for c in classes}
            ok_orth &= central_product(F, consts, classes, ea, eb) == want
    return {"idempotents_sum_to_one": total == unit, "idempotents_orthogonal": ok_orth}


# --- block components of the code subspaces ------------------------------------------

def _apply_idempotent(data: BlockData, group: GroupCtx, e: dict[ClassLabel, int],
                      basis: BitMatrix) -> np.ndarray:
    """Rows ``v * e`` for ``v`` in ``basis`` as a GF(2^k) matrix."""
    out = np.zeros((basis.nrows, basis.ncols), dtype=np.int64)
    trans = group.transport_parity
    for c, coeff in e.items():
        if not coeff:
            continue
        prod = (basis @ trans[c]).to_dense().astype(bool)
        out[prod] ^= coeff
    return out


def block_module_dims(data: BlockData, group: GroupCtx) -> list[dict[str, int]]:
    """Per block, dimensions of ``e_B`` applied to the relevant subspaces."""
    plane = group.plane
    B = matrix_B(plane)
    spaces = {"all": BitMatrix.identity(B.nrows), "ker": B.nullspace(), "im": B.row_space()}
    if plane.q % 4 == 1:
        spaces["im2"] = matrix_D(plane).row_space()
    F = data.reduction.field
    out = []
    for b, e in zip(data.blocks, data.idempotents):
        row = {"block": b.kind, "size": len(b)}
        for name, V in spaces.items():
            row[name] = F.rank(_apply_idempotent(data, group, e, V)) if V.nrows else 0
        out.append(row)
    return out


def block_sanity(data: BlockData, group: GroupCtx) -> dict[str, bool]:
    """Consistency checks on the partition, its idempotents and its modules."""
    t = data.table
    other = block_partition(t, make_reduction(t.N, "greatest"))
    covered = sorted(i for b in data.blocks for i in b.members)
    res = {
        "partition_covers_irr": covered == list(range(len(t.names))),
        "partition_factor_invariant": sorted(b.members for b in other)
        == sorted(b.members for b in data.blocks),
        "degree_square_sum": t.degree_square_sum() == t.order,
        "wbo": wbo_check(data, group),
        "p2_sum": principal_sum_at_involution(data) == expected_principal_sum(t.q),
    }
    res.update(idempotent_checks(data, group))
    mult = stab_induced_decomposition(t, group)
    dims = block_module_dims(data, group)
    res["block_rank_matches_induced"] = all(
        row["all"] == sum(mult[t.names[i]] * t.degree(i) for i in b.members)
        for b, row in zip(data.blocks, dims)
    )
    res["block_dims_sum_to_E"] = sum(row["all"] for row in dims) == len(group.plane.E)
    return res


def kernel_decomposition_checks(data: BlockData, group: GroupCtx) -> dict[str, bool]:
    """Block-wise shape of ``Ker(B)`` and the annihilated images."""
    q = data.table.q
    dims = block_module_dims(data, group)
    by_kind: dict[str, list[dict[str, int]]] = {}
    for row in dims:
        by_kind.setdefault(row["block"], []).append(row)
    d0 = by_kind.get("defect0", [])
    oth = by_kind.get("other", [])
    pr = by_kind["principal"][0]
    total = sum(row["ker"] for row in dims)
    if q % 4 == 1:
        return {
            "defect0_ker_dims": len(d0) == (q - 1) // 4 and all(r["ker"] == q - 1 for r in d0),
            "principal_ker_trivial": pr["ker"] == 1,
            "other_ker_zero": all(r["ker"] == 0 for r in oth),
            "defect0_im_zero": all(r["im"] == 0 for r in d0),
            "principal_im2_zero": pr["im2"] == 0,
            "other_im2_zero": all(r["im2"] == 0 for r in oth),
            "ker_total": total == 1 + (q - 1) ** 2 // 4,
        }
    return {
        "defect0_ker_dims": len(d0) == (q - 3) // 4 and all(r["ker"] == q + 1 for r in d0),
        "principal_ker_zero": pr["ker"] == 0,
        "other_ker_zero": all(r["ker"] == 0 for r in oth),
        "ker_total": total == (q - 1) ** 2 // 4 - 1,
    }
