"""The conic's stabiliser acting on points and lines of PG(2, q).

``H`` is the image of SL(2, q) under the symmetric-square map ``tau``
(isomorphic to PSL(2, q)); ``G = H u d*H`` with ``d = diag(1, xi^-1,
xi^-2)`` is the full image of PGL(2, q).  Points are acted on as row
vectors on the right, lines by ``l -> M^-1 l^T``.

Elements of ``H`` are stored as normalised SL(2, q) quadruples
``(a, b, c, d)``: of the pair ``+-g`` the one whose first nonzero entry has
discrete log below ``(q-1)/2`` is kept.

Conjugacy classes of ``H`` are labelled ``D`` (identity), ``F+``/``F-``
(nontrivial unipotents), ``theta_i`` (split semisimple), ``[0]``
(involutions) and ``pi_k`` (nonsplit semisimple).  ``[4]`` is the union of
``F+`` and ``F-``, which is a single class of ``G``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .f2_linalg import BitMatrix
from .finite_field import FieldCtx, Residue, prime_factors
from .projective_plane import LineClass, Mat3, PlaneCtx, PointClass, mat3_mul

__all__ = [
    "ClassLabel",
    "GROUP_LIMIT",
    "GroupCtx",
    "GroupElem",
    "GroupError",
    "make_group",
    "tau",
]

GROUP_LIMIT = 31

SL2 = tuple[int, int, int, int]


class GroupError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ClassLabel:
    """Conjugacy class tag; ``kind`` is one of D, F+, F-, [4], theta, [0], pi."""

    rank: int
    kind: str
    index: int = 0

    def __str__(self) -> str:
        if self.kind in ("theta", "pi"):
            return f"{self.kind}_{self.index}"
        return self.kind

    @property
    def merged(self) -> "ClassLabel":
        """The ``G``-class tag (``F+`` and ``F-`` fuse into ``[4]``)."""
        if self.kind in ("F+", "F-"):
            return ClassLabel(1, "[4]")
        return self


@dataclass(frozen=True)
class GroupElem:
    """An element of ``H``: normalised SL(2, q) entries and the 3x3 image."""

    sl2: SL2
    m3: Mat3


def _label(kind: str, index: int = 0) -> ClassLabel:
    rank = {"D": 0, "F+": 1, "F-": 1, "[4]": 1, "theta": 2, "[0]": 3, "pi": 4}[kind]
    sub = {"F-": 1}.get(kind, 0)
    return ClassLabel(rank, kind, index if kind in ("theta", "pi") else sub)


D_LABEL = _label("D")
FPLUS = _label("F+")
FMINUS = _label("F-")
ZERO = _label("[0]")
FOUR = ClassLabel(1, "[4]")


def tau(F: FieldCtx, g: SL2) -> Mat3:
    """Symmetric square of a 2x2 matrix, acting on ``(1, t, t^2)``."""
    a, b, c, d = g
    m, ad = F.mul, F.add
    two = F.from_int(2)
    return (
        (m(a, a), m(a, b), m(b, b)),
        (m(two, m(a, c)), ad(m(a, d), m(b, c)), m(two, m(b, d))),
        (m(c, c), m(c, d), m(d, d)),
    )


class GroupCtx:
    """Enumerated ``H`` and ``G`` with their permutation actions."""

    def __init__(self, plane: PlaneCtx):
        F = plane.field
        if F.q > GROUP_LIMIT:
            raise GroupError(f"group enumeration limited to q <= {GROUP_LIMIT}")
        self.plane = plane
        self.field = F
        q = self.q = F.q
        self.half = (q - 1) // 2
        elems = self._enumerate_sl2()
        self.elements: list[SL2] = elems
        self.index = {g: i for i, g in enumerate(elems)}
        self.order = len(elems)
        self.identity = self.index[(1, 0, 0, 1)]
        self.m3: list[Mat3] = [tau(F, g) for g in elems]
        xi_inv = F.inv(F.xi)
        self.d_matrix: Mat3 = ((1, 0, 0), (0, xi_inv, 0), (0, 0, F.mul(xi_inv, xi_inv)))
        self._build_class_params()
        self._classify_all()
        self._build_actions()

    # -- elements ------------------------------------------------------------

    def normalize(self, g: Sequence[int]) -> SL2:
        F = self.field
        for x in g:
            if x:
                if F.log(x) >= self.half:
                    return tuple(F.neg(y) for y in g)  # type: ignore[return-value]
                return tuple(g)  # type: ignore[return-value]
        raise GroupError("zero matrix")

    def _enumerate_sl2(self) -> list[SL2]:
        F = self.field
        out = set()
        for a in range(F.q):
            for b in range(F.q):
                if a:
                    ainv = F.inv(a)
                    for c in range(F.q):
                        d = F.mul(F.add(1, F.mul(b, c)), ainv)
                        out.add(self.normalize((a, b, c, d)))
                elif b:
                    c = F.neg(F.inv(b))
                    for d in range(F.q):
                        out.add(self.normalize((a, b, c, d)))
        return sorted(out)

    def mul2(self, g: Sequence[int], h: Sequence[int]) -> SL2:
        F = self.field
        a, b, c, d = g
        e, f, x, y = h
        m, ad = F.mul, F.add
        return self.normalize((ad(m(a, e), m(b, x)), ad(m(a, f), m(b, y)),
                               ad(m(c, e), m(d, x)), ad(m(c, f), m(d, y))))

    def inv2(self, g: Sequence[int]) -> SL2:
        F = self.field
        a, b, c, d = g
        return self.normalize((d, F.neg(b), F.neg(c), a))

    def mul(self, i: int, j: int) -> int:
        return self.index[self.mul2(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self.index[self.inv2(self.elements[i])]

    def element_order(self, i: int) -> int:
        g = self.elements[i]
        x, n = g, 1
        while self.index[x] != self.identity:
            x = self.mul2(x, g)
            n += 1
        return n

    def trace_invariant(self, g: Sequence[int]) -> int:
        """``(a + d)^2``, which equals ``trace(tau(g)) + 1``."""
        s = self.field.add(g[0], g[3])
        return self.field.mul(s, s)

    # -- conjugacy classes -----------------------------------------------------

    def _quadratic_torus(self) -> list[int]:
        """Traces ``nu^k + nu^-k`` for ``nu`` of order q+1 in GF(q^2), k = 0..q."""
        F = self.field
        q, xi = F.q, F.xi
        m, ad = F.mul, F.add

        def qmul(u, v):
            return (ad(m(u[0], v[0]), m(m(u[1], v[1]), xi)), ad(m(u[0], v[1]), m(u[1], v[0])))

        def qpow(u, n):
            r = (1, 0)
            while n:
                if n & 1:
                    r = qmul(r, u)
                u = qmul(u, u)
                n >>= 1
            return r

        big = q * q - 1
        cofactors = [big // r for r in prime_factors(big)]
        w = None
        for u0 in range(q):
            for u1 in range(1, q):
                if all(qpow((u0, u1), c) != (1, 0) for c in cofactors):
                    w = (u0, u1)
                    break
            if w:
                break
        assert w is not None
        nu = qpow(w, q - 1)
        traces = []
        x = (1, 0)
        for _ in range(q + 1):
            traces.append(ad(x[0], x[0]))  # nu^k + nu^(kq) = 2 * real part
            x = qmul(x, nu)
        assert x == (1, 0)
        return traces

    def _build_class_params(self) -> None:
        F = self.field
        q = self.q
        xi = F.xi
        self.n_theta = (q - 5) // 4 if q % 4 == 1 else (q - 3) // 4
        self.n_pi = (q - 1) // 4 if q % 4 == 1 else (q - 3) // 4
        theta_T = {}
        for l in range(1, self.n_theta + 1):
            t = F.add(F.exp(l), F.exp(-l))
            theta_T[F.mul(t, t)] = l
        traces = self._quadratic_torus()
        pi_T = {}
        for k in range(1, self.n_pi + 1):
            t = traces[k]
            pi_T[F.mul(t, t)] = k
        self._theta_T = theta_T
        self._pi_T = pi_T
        self._pi_trace = {k: traces[k] for k in range(1, self.n_pi + 1)}
        one = 1
        reps: dict[ClassLabel, SL2] = {
            D_LABEL: (1, 0, 0, 1),
            FPLUS: self.normalize((1, 0, 1, 1)),
            FMINUS: self.normalize((1, 0, xi, 1)),
        }
        for l in range(1, self.n_theta + 1):
            reps[_label("theta", l)] = self.normalize((F.exp(l), 0, 0, F.exp(-l)))
        if q % 4 == 1:
            s = (q - 1) // 4
            reps[ZERO] = self.normalize((F.exp(s), 0, 0, F.exp(-s)))
        else:
            reps[ZERO] = self.normalize((0, F.neg(one), one, 0))
        for k in range(1, self.n_pi + 1):
            reps[_label("pi", k)] = self.normalize((self._pi_trace[k], F.neg(one), one, 0))
        self.class_reps = dict(sorted(reps.items()))

    def _classify_all(self) -> None:
        F = self.field
        four = F.from_int(4)
        fplus_rep = self.class_reps[FPLUS]
        fplus = {self.mul2(self.mul2(h, fplus_rep), self.inv2(h)) for h in self.elements}
        labels = []
        for g in self.elements:
            T = self.trace_invariant(g)
            if g == (1, 0, 0, 1):
                lab = D_LABEL
            elif T == 0:
                lab = ZERO
            elif T == four:
                lab = FPLUS if g in fplus else FMINUS
            elif F.residue(F.sub(T, four)) is Residue.SQUARE:
                lab = _label("theta", self._theta_T[T])
            else:
                lab = _label("pi", self._pi_T[T])
            labels.append(lab)
        self.labels = labels
        members: dict[ClassLabel, list[int]] = {lab: [] for lab in self.class_reps}
        for i, lab in enumerate(labels):
            members[lab].append(i)
        self.class_members = members

    @property
    def classes(self) -> list[ClassLabel]:
        return list(self.class_reps)

    @property
    def merged_classes(self) -> list[ClassLabel]:
        return sorted({c.merged for c in self.class_reps})

    def classify_element(self, g: Sequence[int]) -> ClassLabel:
        F = self.field
        a, b, c, d = (int(x) for x in g)
        if F.sub(F.mul(a, d), F.mul(b, c)) != 1:
            raise GroupError("not an element of SL(2, q)")
        return self.labels[self.index[self.normalize((a, b, c, d))]]

    def element(self, i: int) -> GroupElem:
        return GroupElem(self.elements[i], self.m3[i])

    def class_sizes(self) -> dict[ClassLabel, int]:
        return {c: len(m) for c, m in self.class_members.items()}

    def expected_class_sizes(self) -> dict[ClassLabel, int]:
        q = self.q
        out = {D_LABEL: 1, FPLUS: (q * q - 1) // 2, FMINUS: (q * q - 1) // 2}
        for l in range(1, self.n_theta + 1):
            out[_label("theta", l)] = q * (q + 1)
        out[ZERO] = q * (q + 1) // 2 if q % 4 == 1 else q * (q - 1) // 2
        for k in range(1, self.n_pi + 1):
            out[_label("pi", k)] = q * (q - 1)
        return out

    def class_conjugation_check(self) -> bool:
        """Every labelled class is a single conjugacy class of ``H``."""
        for lab, rep in self.class_reps.items():
            orbit = {self.mul2(self.mul2(h, rep), self.inv2(h)) for h in self.elements}
            if sorted(self.index[g] for g in orbit) != self.class_members[lab]:
                return False
        return True

    def inverse_class(self, lab: ClassLabel) -> ClassLabel:
        return self.labels[self.inv(self.index[self.class_reps[lab]])]

    # -- actions -------------------------------------------------------------------

    def _build_actions(self) -> None:
        plane = self.plane
        self.point_perm = np.stack([plane.act_points(m) for m in self.m3])
        self.line_perm = np.stack([plane.act_lines(m) for m in self.m3])
        self.d_point = plane.act_points(self.d_matrix)
        self.d_line = plane.act_lines(self.d_matrix)

    @cached_property
    def g_point_perm(self) -> np.ndarray:
        """Point permutations of all of ``G``: ``H`` first, then ``d*H``."""
        coset = self.point_perm[:, self.d_point]
        return np.concatenate([self.point_perm, coset])

    @cached_property
    def g_line_perm(self) -> np.ndarray:
        coset = self.line_perm[:, self.d_line]
        return np.concatenate([self.line_perm, coset])

    def g_matrices(self) -> list[Mat3]:
        return self.m3 + [mat3_mul(self.field, self.d_matrix, m) for m in self.m3]

    # -- stabilisers and orbits ------------------------------------------------------

    def stab_H(self, p: int) -> list[int]:
        return np.flatnonzero(self.point_perm[:, p] == p).tolist()

    def stab_G(self, p: int) -> list[int]:
        return np.flatnonzero(self.g_point_perm[:, p] == p).tolist()

    def stab_G_line(self, l: int) -> list[int]:
        return np.flatnonzero(self.g_line_perm[:, l] == l).tolist()

    def stabilizers(self, p: int) -> tuple[list[int], list[int], dict[ClassLabel, int]]:
        """``(Stab_H(p), Stab_G(p), profile)`` for an external point ``p``.

        Indices into ``Stab_G`` at or above ``order`` refer to the coset ``d*H``.
        """
        if self.plane.point_class[p] is not PointClass.EXTERNAL:
            raise GroupError("stabilizer profile is defined for external points only")
        return self.stab_H(p), self.stab_G(p), self.stabilizer_profile(p)

    def stabilizer_profile(self, p: int) -> dict[ClassLabel, int]:
        """``|Stab_H(p) & C|`` for every ``G``-class ``C``."""
        out = {c: 0 for c in self.merged_classes}
        for h in self.stab_H(p):
            out[self.labels[h].merged] += 1
        return out

    def expected_stabilizer_profile(self) -> dict[ClassLabel, int]:
        q = self.q
        out = {}
        for c in self.merged_classes:
            if c.kind == "D":
                out[c] = 1
            elif c.kind == "[0]":
                out[c] = (q + 1) // 2 if q % 4 == 1 else (q - 1) // 2
            elif c.kind == "theta":
                out[c] = 2
            else:
                out[c] = 0
        return out

    @staticmethod
    def _orbits(perms: np.ndarray, domain: Iterable[int]) -> list[frozenset[int]]:
        domain = list(domain)
        seen: set[int] = set()
        out = []
        for x in domain:
            if x in seen:
                continue
            orb = frozenset(perms[:, x].tolist())
            seen |= orb
            out.append(orb)
        return out

    def orbit_checks(self) -> dict[str, bool]:
        """Transitivity and stabiliser-order statements for ``G`` and ``K``."""
        plane = self.plane
        q = self.q
        gp, gl = self.g_point_perm, self.g_line_perm
        res: dict[str, bool] = {}
        for name, dom in (("E", plane.E), ("I", plane.I), ("O", plane.O)):
            res[f"G_transitive_{name}"] = self._orbits(gp, dom) == [frozenset(dom)]
        for name, dom in (("Se", plane.Se), ("Pa", plane.Pa), ("T", plane.T)):
            res[f"G_transitive_{name}"] = self._orbits(gl, dom) == [frozenset(dom)]
        k_trans = k_orders = stab_line = True
        for p in plane.E:
            K = self.stab_G(p)
            kp, kl = gp[K], gl[K]
            polar = int(plane.perp[p])
            on_polar = plane.points_on[polar]
            for cls in (PointClass.INTERNAL, PointClass.EXTERNAL, PointClass.ABSOLUTE):
                dom = [x for x in on_polar if plane.point_class[x] is cls]
                k_trans &= len(self._orbits(kp, dom)) == 1
            through = plane.lines_through[p]
            for cls in (LineClass.PASSANT, LineClass.SECANT, LineClass.TANGENT):
                dom = [x for x in through if plane.line_class[x] is cls]
                k_trans &= len(self._orbits(kl, dom)) == 1
            for x in on_polar:
                want = q - 1 if plane.point_class[x] is PointClass.ABSOLUTE else 4
                k_orders &= int((kp[:, x] == x).sum()) == want
            stab_line &= sorted(self.stab_G_line(polar)) == sorted(K)
        res["K_transitive"] = k_trans
        res["K_point_stabilizer_orders"] = k_orders
        res["stab_polar_eq_stab_point"] = stab_line
        return res

    def polarity_commutes(self) -> bool:
        """``(P^perp)^g == (P^g)^perp`` for every g in G and every point P."""
        perp = self.plane.perp
        lhs = self.g_line_perm[:, perp]
        rhs = perp[self.g_point_perm]
        return bool((lhs == rhs).all())

    # -- intersection sets -------------------------------------------------------------

    def H_PQ(self, p: int, r: int) -> list[int]:
        """Elements h with ``(p^perp)^h`` a secant through ``r``."""
        plane = self.plane
        imgs = self.line_perm[:, int(plane.perp[p])]
        through = set(plane.lines_through[r])
        return [h for h, l in enumerate(imgs.tolist())
                if l in through and plane.line_class[l] is LineClass.SECANT]

    def S_Pl(self, p: int, l: int) -> list[int]:
        """Elements mapping the polar of ``p`` onto ``l``."""
        imgs = self.line_perm[:, int(self.plane.perp[p])]
        return np.flatnonzero(imgs == l).tolist()

    def U_PW(self, p: int, W: Iterable[int]) -> list[int]:
        """Elements moving ``p`` into the point set ``W``."""
        mask = np.zeros(self.plane.n, dtype=bool)
        mask[list(W)] = True
        return np.flatnonzero(mask[self.point_perm[:, p]]).tolist()

    def class_counts(self, elems: Iterable[int]) -> dict[ClassLabel, int]:
        out = {c: 0 for c in self.classes}
        for h in elems:
            out[self.labels[h]] += 1
        return out

    @cached_property
    def transport_parity(self) -> dict[ClassLabel, BitMatrix]:
        """For each class C, the E x E matrix ``#{h in C : E_i^h = E_j} mod 2``."""
        plane = self.plane
        E = np.array(plane.E)
        pos = np.full(plane.n, -1, dtype=np.int64)
        pos[E] = np.arange(len(E))
        nE = len(E)
        out = {}
        for c, members in self.class_members.items():
            img = pos[self.point_perm[np.array(members)][:, E]]  # |C| x |E|
            counts = np.zeros((nE, nE), dtype=np.int64)
            np.add.at(counts, (np.broadcast_to(np.arange(nE), img.shape), img), 1)
            out[c] = BitMatrix.from_dense(counts & 1)
        return out

    def merged_transport_parity(self) -> dict[ClassLabel, BitMatrix]:
        out: dict[ClassLabel, BitMatrix] = {}
        for c, m in self.transport_parity.items():
            key = c.merged
            out[key] = out[key] + m if key in out else m
        return out


@lru_cache(maxsize=None)
def make_group(plane: PlaneCtx) -> GroupCtx:
    return GroupCtx(plane)
