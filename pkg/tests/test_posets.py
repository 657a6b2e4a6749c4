import pytest

from kanlim.posets import (
    ElementNotFound,
    FinPoset,
    NotAPoset,
    NotMonotone,
    PosetMap,
    butterfly_poset,
    butterfly_poset_literal,
    crown_poset,
    cylinder_poset,
    export_dot,
    g_map,
    i_map,
    identity_poset_map,
    is_cofinal,
    is_monotone,
    p_edge_map,
    p_V_map,
    p_vy_map,
    point_poset,
    poset_I,
    poset_V,
    pr_map,
    slice_to,
    standard_maps,
    standard_posets,
    vo_poset,
    vy_poset,
    w_poset,
)
from kanlim.randomgen import random_monotone_map, random_poset

N = 4


def test_crown_counts():
    C = crown_poset(N)
    assert len(C) == 2 * N and len(C.hasse) == 2 * N and C.height == 1


def test_butterfly_counts():
    D = butterfly_poset(N)
    assert len(D) == 12 and len(D.hasse) == 16 and D.height == 2


def test_literal_butterfly_rejected():
    with pytest.raises(NotAPoset):
        butterfly_poset_literal(N)


def test_covering_relation_enforced():
    with pytest.raises(NotAPoset):
        FinPoset((0, 1, 2), ((0, 1), (1, 2), (0, 2)))
    # from_relations reduces the shortcut instead
    P = FinPoset.from_relations((0, 1, 2), ((0, 1), (1, 2), (0, 2)))
    assert set(P.hasse) == {(0, 1), (1, 2)}


def test_V_and_products():
    V = poset_V()
    assert set(V.elements) == {(1, 0), (0, 0), (0, 1)}
    assert V.minimal() == ((0, 0),)
    II = poset_I().product(poset_I())
    assert len(II) == 4 and II.height == 2


def test_height_additive_on_products():
    for P in (poset_I(), poset_V(), crown_poset(N), butterfly_poset(N)):
        for Q in (poset_I(), crown_poset(N)):
            assert P.product(Q).height == P.height + Q.height


def test_pr_and_i_maps():
    pr = pr_map(N)
    assert is_monotone(pr)
    assert pr((f"beta_1", f"beta_2")) == "beta_3"
    assert pr((f"beta_1", f"zeta_2")) == "gamma_3"
    assert pr((f"zeta_3", f"zeta_2")) == "zeta_1"
    i = i_map(N)
    assert is_monotone(i)
    assert is_cofinal(i)


def test_slices():
    pr = pr_map(N)
    assert len(slice_to(pr, "zeta_0")) == 32
    assert len(slice_to(pr, "gamma_0")) == 16
    assert len(slice_to(pr, "beta_0")) == 4
    with pytest.raises(ElementNotFound):
        slice_to(pr, "nope")


def test_slice_monotone_in_target(rng):
    for _ in range(10):
        P = random_poset(rng, 6)
        Q = random_poset(rng, 5)
        f = random_monotone_map(rng, P, Q)
        for d in Q.elements:
            for dp in Q.elements:
                if Q.leq(d, dp):
                    sd = set(slice_to(f, d).elements)
                    sdp = set(slice_to(f, dp).elements)
                    assert sd <= sdp


def test_cofinality_examples():
    assert not is_cofinal(PosetMap(point_poset(), poset_I(), {"*": 0}))
    assert is_cofinal(identity_poset_map(butterfly_poset(N)))


def test_p_V():
    pv = p_V_map()
    assert pv((1, 1)) == 1
    assert all(pv(x) == 0 for x in pv.source if x != (1, 1))


def test_auxiliary_posets():
    for n in range(N):
        VO = vo_poset(N, n)
        VY = vy_poset(N, n)
        W = w_poset(N, n)
        assert len(VO) == 5 * N
        assert len(VY) == 3 * N
        assert len(W) == 2 * N and W.height == 1
        assert is_monotone(g_map(N, n))
        assert is_monotone(p_vy_map(N, n))


def test_cylinder_poset():
    pr = pr_map(N)
    B, pB, jB = cylinder_poset(pr, "gamma_0", "zeta_0")
    assert len(B) == 16 + 32
    assert is_monotone(pB) and is_monotone(jB)
    pe = p_edge_map(pr, "gamma_0", "zeta_0")
    assert is_monotone(pe)
    assert sum(1 for c in pe.source if pe(c) == 0) == 16


def test_not_monotone_rejected():
    I = poset_I()
    with pytest.raises(NotMonotone):
        PosetMap(I, I, {0: 1, 1: 0})


def test_standard_bundles():
    sp = standard_posets(3)
    assert len(sp["C_N"]) == 8 and len(sp["D_N"]) == 12
    sm = standard_maps(3)
    assert is_monotone(sm["pr"]) and is_monotone(sm["i"])


def test_export_dot():
    dot = export_dot(poset_V())
    assert dot.count("->") == 2
    assert export_dot(poset_I()).count("->") == 1
    assert export_dot(crown_poset(N)).count("->") == 8
    d4 = export_dot(butterfly_poset(N))
    nodes = [l for l in d4.splitlines() if l.endswith(";") and "->" not in l and "rankdir" not in l]
    assert len(nodes) == 12 and d4.count("->") == 16
    # deterministic
    assert dot == export_dot(poset_V())


def test_down_sets_and_orders():
    D = butterfly_poset(N)
    assert set(D.down_set("zeta_0")) == {
        "zeta_0",
        "gamma_0",
        "gamma_1",
        "beta_0",
        "beta_1",
        "beta_2",
    }
    assert D.leq("beta_1", "zeta_0") and not D.leq("zeta_0", "beta_1")
