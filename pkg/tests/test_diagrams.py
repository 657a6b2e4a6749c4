import pytest

from kanlim.complexes import (
    cohomology_table,
    concentrated_complex,
    identity_chain_map,
    unit_complex,
)
from kanlim.diagrams import (
    CxDiagram,
    DiagramError,
    ModDiagram,
    constant_diagram,
    diagram_tensor,
    is_reedy_cofibrant,
    latching_map,
    pullback,
    strict_colim,
    strict_colim_cx,
    strict_lkan,
)
from kanlim.palgebra import (
    FpModule,
    ModuleMap,
    cyclic_module,
    free_module,
    identity_map,
    scalar_map,
    tensor_and_tor,
    zero_map,
    zero_module,
)
from kanlim.posets import (
    PosetMap,
    butterfly_poset,
    identity_poset_map,
    p_V_map,
    point_poset,
    poset_I,
    poset_V,
    slice_to,
)
from kanlim.randomgen import (
    random_matrix_map,
    random_mod_diagram,
    random_module,
    random_monotone_map,
    random_poset,
)

P = 3


def test_functoriality_rejected(p):
    Z1 = free_module(p, 1)
    II = poset_I().product(poset_I())
    with pytest.raises(DiagramError):
        ModDiagram(
            II,
            {x: Z1 for x in II},
            {
                ((0, 0), (1, 0)): identity_map(Z1),
                ((0, 0), (0, 1)): identity_map(Z1),
                ((1, 0), (1, 1)): identity_map(Z1),
                ((0, 1), (1, 1)): scalar_map(Z1, 3),
            },
        )


def test_pullback_examples(p):
    V = poset_V()
    Z1 = free_module(p, 1)
    X = ModDiagram(
        V,
        {(0, 0): Z1, (1, 0): cyclic_module(p, 1), (0, 1): Z1},
        {
            ((0, 0), (1, 0)): ModuleMap(Z1, cyclic_module(p, 1), [[1]]),
            ((0, 0), (0, 1)): scalar_map(Z1, 3),
        },
    )
    assert pullback(identity_poset_map(V), X).vertices == X.vertices
    const = pullback(PosetMap(V, point_poset(), {x: "*" for x in V}),
                     ModDiagram(point_poset(), {"*": Z1}, {}))
    assert all(v == Z1 for v in const.vertices.values())


def test_colim_examples(p):
    Z1 = free_module(p, 1)
    z = zero_module(p)
    V = poset_V()
    # identity leg forces the middle and that branch to collapse
    X = ModDiagram(
        V,
        {(0, 0): Z1, (1, 0): Z1, (0, 1): Z1},
        {((0, 0), (1, 0)): zero_map(Z1, Z1), ((0, 0), (0, 1)): identity_map(Z1)},
    )
    assert strict_colim(X).module == Z1
    # both legs zero: the middle dies alone
    Y = ModDiagram(
        V,
        {(0, 0): Z1, (1, 0): Z1, (0, 1): Z1},
        {((0, 0), (1, 0)): zero_map(Z1, Z1), ((0, 0), (0, 1)): zero_map(Z1, Z1)},
    )
    assert strict_colim(Y).module == free_module(p, 2)
    cd = constant_diagram(poset_I(), cyclic_module(p, 2))
    assert strict_colim(cd).module == cyclic_module(p, 2)


def test_colim_universal_property(rng, p):
    for _ in range(20):
        Pp = random_poset(rng, 5)
        X = random_mod_diagram(rng, Pp, p)
        col = strict_colim(X)
        T = random_module(rng, p, 2, 2)
        h = random_matrix_map(rng, col.module, T)
        legs = {c: h @ col.legs[c] for c in Pp.elements}
        u = col.induced(T, legs)
        assert u.equal(h)
        for c in Pp.elements:
            assert (u @ col.legs[c]).equal(legs[c])


def test_lkan_point_inclusion(p):
    D = butterfly_poset(4)
    pt = point_poset()
    inc = PosetMap(pt, D, {"*": "beta_0"})
    X = ModDiagram(pt, {"*": free_module(p, 1)}, {})
    lk = strict_lkan(inc, X)
    for d in D.elements:
        expected = free_module(p, 1) if D.leq("beta_0", d) else zero_module(p)
        assert lk.vertices[d] == expected


def test_lkan_pushout_corner(p):
    Z1 = free_module(p, 1)
    II = poset_I().product(poset_I())
    sq = ModDiagram(
        II,
        {x: Z1 for x in II},
        {
            ((0, 0), (1, 0)): scalar_map(Z1, 3),
            ((0, 0), (0, 1)): scalar_map(Z1, 3),
            ((1, 0), (1, 1)): identity_map(Z1),
            ((0, 1), (1, 1)): identity_map(Z1),
        },
    )
    lk = strict_lkan(p_V_map(), sq)
    assert lk.vertices[0] == FpModule(p, 1, (1,))  # pushout of 3, 3
    assert lk.vertices[1] == Z1


def test_lkan_along_identity_compares(rng, p):
    for _ in range(8):
        Pp = random_poset(rng, 5)
        X = random_mod_diagram(rng, Pp, p)
        idm = identity_poset_map(Pp)
        for c in Pp.elements:
            sl = slice_to(idm, c)
            col = strict_colim(X.restrict(sl.elements))
            cmp = col.induced(X.vertices[c], {b: X.total_map(b, c) for b in sl.elements})
            assert cmp.is_iso()


def test_reedy_examples(p):
    Z1 = free_module(p, 1)
    I = poset_I()
    bad = ModDiagram(
        I, {0: Z1, 1: cyclic_module(p, 1)}, {(0, 1): ModuleMap(Z1, cyclic_module(p, 1), [[1]])}
    )
    assert not is_reedy_cofibrant(bad)
    good = ModDiagram(I, {0: Z1, 1: Z1}, {(0, 1): scalar_map(Z1, 3)})
    assert is_reedy_cofibrant(good)
    # zero on the minimal vertex: latching at minimals is 0 -> X
    V = poset_V()
    zd = ModDiagram(
        V,
        {(0, 0): zero_module(p), (1, 0): Z1, (0, 1): Z1},
        {
            ((0, 0), (1, 0)): zero_map(zero_module(p), Z1),
            ((0, 0), (0, 1)): zero_map(zero_module(p), Z1),
        },
    )
    assert is_reedy_cofibrant(zd)
    assert latching_map(zd, (0, 0)).source.is_zero


def test_diagram_tensor_unit_and_zero(p, moore_cx):
    I = poset_I()
    U = unit_complex(p)
    md = CxDiagram(I, {0: moore_cx, 1: moore_cx}, {(0, 1): identity_chain_map(moore_cx)})
    ud = constant_diagram(I, U)
    t = diagram_tensor(md, ud)
    for (c, d) in t.shape.elements:
        assert cohomology_table(t.vertices[(c, d)]) == cohomology_table(moore_cx)
    zd = constant_diagram(I, concentrated_complex(p, 0, zero_module(p)))
    tz = diagram_tensor(md, zd)
    assert all(v.is_zero for v in tz.vertices.values())


def test_colim_of_tensor_is_tensor_of_colims(rng, p):
    """For Reedy cofibrant diagrams with flat vertices."""
    for _ in range(8):
        P1 = random_poset(rng, 4)
        P2 = random_poset(rng, 3)
        X = random_mod_diagram(rng, P1, p, max_rank=1, max_exp=1, cofibrant=True)
        Y = random_mod_diagram(rng, P2, p, max_rank=1, max_exp=1, cofibrant=True)
        if any(not m.is_free for m in X.vertices.values()):
            continue
        if any(not m.is_free for m in Y.vertices.values()):
            continue
        t = diagram_tensor(X, Y)
        lhs = strict_colim(t).module
        rhs = tensor_and_tor(strict_colim(X).module, strict_colim(Y).module)[0]
        assert lhs == rhs


def test_colim_cx(p, moore_cx):
    I = poset_I()
    md = CxDiagram(I, {0: moore_cx, 1: moore_cx}, {(0, 1): identity_chain_map(moore_cx)})
    colim, legs = strict_colim_cx(md)
    assert cohomology_table(colim) == cohomology_table(moore_cx)
    for c in I.elements:
        assert legs[c].target == colim
