"""Exhaustive parity sweeps of class-wise intersection counts.

For external points ``P, Q`` and a conjugacy class ``C`` of ``G``, the
counts of interest are ``|C & U|`` where ``U`` is one of

* ``H_{P,Q}``: elements sending the polar of P to a secant through Q
  (equivalently, sending P into ``E & Q^perp``);
* ``U_{P, N'(Q)}``: elements sending P outside the augmented
  neighbourhood of Q (q = 1 mod 4);
* ``U_{P, Na(Q)}``: elements sending P into the augmented neighbourhood
  of Q (q = 3 mod 4).

Parities of all of them at once are entries of GF(2) products
``T_C * W^T`` where ``T_C`` is the class transport-parity matrix and the
rows of ``W`` are the characteristic vectors of the target sets.
"""

from __future__ import annotations

from typing import Callable

from .f2_linalg import BitMatrix
from .group_action import ClassLabel, GroupCtx
from .incidence_codes import ext_index, matrix_B, neighbor_sets

__all__ = ["odd_class_sets", "parity_class_checks", "parity_profile", "target_matrix"]

OddSets = dict[tuple[int, int], frozenset[str]]


def target_matrix(group: GroupCtx, kind: str) -> BitMatrix:
    """Rows indexed by Q in E: ``"polar"`` (E & Q^perp), ``"Na"`` or ``"Nprime"``."""
    plane = group.plane
    if kind == "polar":
        return matrix_B(plane)
    pos = ext_index(plane)
    rows = []
    for q in plane.E:
        ns = neighbor_sets(plane, q)
        members = ns.Na if kind == "Na" else ns.Nprime
        v = 0
        for x in members:
            v |= 1 << pos[x]
        rows.append(v)
    n = len(plane.E)
    return BitMatrix(n, n, rows)


def odd_class_sets(group: GroupCtx, kind: str) -> OddSets:
    """For every ordered pair of external positions, the G-classes with odd count."""
    W = target_matrix(group, kind).transpose()
    prods = {c: (m @ W) for c, m in group.merged_transport_parity().items()}
    n = len(group.plane.E)
    out: OddSets = {}
    names = {c: str(c) for c in prods}
    for i in range(n):
        rows = {c: prods[c].rows[i] for c in prods}
        for j in range(n):
            out[(i, j)] = frozenset(names[c] for c, r in rows.items() if (r >> j) & 1)
    return out


def parity_profile(group: GroupCtx, p: int, q: int, kind: str = "polar") -> dict[ClassLabel, int]:
    """``|C & U| mod 2`` for each G-class, for one pair of external points."""
    pos = ext_index(group.plane)
    W = target_matrix(group, kind)
    i, j = pos[p], pos[q]
    w = W.rows[j]
    out = {}
    for c, m in group.merged_transport_parity().items():
        out[c] = bin(m.rows[i] & w).count("1") & 1
    return out


def _pair_type(group: GroupCtx, i: int, j: int) -> tuple[str, bool]:
    plane = group.plane
    E = plane.E
    p, q = E[i], E[j]
    line = plane.join(p, q)
    return plane.line_class[line].value, bool(plane.incidence[int(plane.perp[p]), q])


def _kinds(s: frozenset[str]) -> dict[str, int]:
    out = {"D": 0, "theta": 0, "pi": 0, "[4]": 0, "[0]": 0}
    for name in s:
        out[name.split("_")[0]] += 1
    return out


def _only(allowed: set[str], max_theta: int | None = None, max_pi: int | None = None,
          ignore_zero: bool = True) -> Callable[[frozenset[str]], bool]:
    def test(s: frozenset[str]) -> bool:
        k = _kinds(s)
        if ignore_zero:
            k["[0]"] = 0
        for name, n in k.items():
            if n and name not in allowed:
                return False
        if max_theta is not None and k["theta"] > max_theta:
            return False
        if max_pi is not None and k["pi"] > max_pi:
            return False
        return True
    return test


EVEN = _only(set())


def parity_class_checks(group: GroupCtx) -> dict[str, object]:
    """Check every case of the class-parity statements over all point pairs.

    Returns ``{"checks": {name: bool}, "observed": {case: sorted odd sets}}``.
    """
    q = group.q
    n = len(group.plane.E)
    types = {(i, j): _pair_type(group, i, j) for i in range(n) for j in range(n) if i != j}
    polar = odd_class_sets(group, "polar")
    checks: dict[str, bool] = {}
    observed: dict[str, set] = {}

    def run(prefix: str, table: OddSets, rules: dict[tuple[str, bool | None], Callable]) -> None:
        for key in rules:
            checks[f"{prefix}[{key[0]}{'' if key[1] is None else (',in_perp' if key[1] else ',off_perp')}]"] = True
        for (i, j), (lt, inperp) in types.items():
            for (rt, rin), rule in rules.items():
                if rt == lt and (rin is None or rin == inperp):
                    name = f"{prefix}[{rt}{'' if rin is None else (',in_perp' if rin else ',off_perp')}]"
                    s = table[(i, j)]
                    observed.setdefault(name, set()).add(tuple(sorted(s)))
                    if not rule(s):
                        checks[name] = False

    # polar sets, P != Q
    if q % 4 == 1:
        run("polar_q1mod4", polar, {
            ("Se", False): _only({"theta"}, max_theta=2),
            ("Se", True): _only({"D"}),
            ("Pa", None): EVEN,
            ("T", None): _only({"theta"}),
        })
    else:
        run("polar_q3mod4", polar, {
            ("Se", False): EVEN,
            ("Pa", True): _only({"D"}),
            ("Pa", False): _only({"pi"}, max_pi=2),
            ("T", None): _only({"pi"}, max_pi=1),
        })
    checks["polar_diagonal_even"] = all(EVEN(polar[(i, i)]) for i in range(n))

    if q % 4 == 1:
        aug = odd_class_sets(group, "Nprime")
        tangent_rule = _only({"pi"}) if q % 8 == 1 else _only({"D", "pi"})
        run("nprime_q1mod4", aug, {
            ("Pa", None): _only({"D", "pi"}, max_pi=1),
            ("Se", None): EVEN,
            ("T", None): tangent_rule,
        })
        checks["augmented_diagonal_even"] = all(_only(set(), ignore_zero=False)(aug[(i, i)]) for i in range(n))
    else:
        aug = odd_class_sets(group, "Na")
        tangent_rule = _only({"theta"}) if q % 8 == 3 else _only({"D", "theta"})
        run("na_q3mod4", aug, {
            ("Se", None): _only({"D", "theta"}, max_theta=1),
            ("Pa", None): EVEN,
            ("T", None): tangent_rule,
        })
        checks["augmented_diagonal_even"] = all(_only(set(), ignore_zero=False)(aug[(i, i)]) for i in range(n))
    return {"checks": checks, "observed": {k: sorted(v) for k, v in observed.items()}}
