import random

import pytest

from conic_codes import make_plane
from conic_codes.group_action import make_group
from conic_codes.incidence_codes import neighbor_sets
from conic_codes.parity_sweeps import odd_class_sets, parity_class_checks, parity_profile


def _merged_parities(G, elems):
    out = {}
    for c, n in G.class_counts(elems).items():
        out[c.merged] = (out.get(c.merged, 0) + n) % 2
    return out


@pytest.mark.parametrize("q,samples", [(5, None), (7, 80), (9, 60), (13, 30)])
def test_matrix_route_matches_enumeration(q, samples):
    G = make_group(make_plane(q))
    E = G.plane.E
    pairs = [(p, r) for p in E for r in E]
    if samples is not None:
        pairs = random.Random(q).sample(pairs, samples)
    aug = "Nprime" if q % 4 == 1 else "Na"
    for p, r in pairs:
        assert parity_profile(G, p, r) == _merged_parities(G, G.H_PQ(p, r))
        ns = neighbor_sets(G.plane, r)
        target = ns.Nprime if aug == "Nprime" else ns.Na
        assert parity_profile(G, p, r, aug) == _merged_parities(G, G.U_PW(p, target))


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13])
def test_all_cases_hold(q):
    report = parity_class_checks(make_group(make_plane(q)))
    assert all(report["checks"].values()), report["checks"]


def test_case_examples():
    G5 = make_group(make_plane(5))
    obs5 = parity_class_checks(G5)["observed"]
    assert all(set(s) <= {"[0]"} for s in obs5["polar_q1mod4[Pa]"])
    G7 = make_group(make_plane(7))
    assert parity_class_checks(G7)["observed"]["polar_q3mod4[Se,off_perp]"] == [()]
    G13 = make_group(make_plane(13))
    diag = odd_class_sets(G13, "polar")
    n = len(G13.plane.E)
    assert all(diag[(i, i)] <= {"[0]"} for i in range(n))


def test_tangent_case_vacuous_at_q11():
    obs = parity_class_checks(make_group(make_plane(11)))["observed"]
    assert obs["polar_q3mod4[T]"] == [()]
