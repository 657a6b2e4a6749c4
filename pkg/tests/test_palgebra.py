import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from kanlim.matrix import Matrix, inverse, kernel_basis, smith_form
from kanlim.palgebra import (
    CompositionError,
    FpModule,
    MapNotWellDefined,
    ModuleMap,
    PrimeMismatch,
    Subquotient,
    canonical_form,
    cyclic_module,
    direct_sum,
    free_module,
    identity_map,
    is_subquotient_class,
    map_algebra,
    scalar_map,
    subquotients,
    tensor_and_tor,
    tensor_map,
    tensor_module,
    zero_map,
    zero_module,
)
from kanlim.randomgen import random_matrix_map, random_module
from kanlim.scalar import InvalidScalar, QQ, valuation

P = 3

small_ints = st.integers(min_value=-40, max_value=40)


@st.composite
def int_matrices(draw, max_dim=4):
    m = draw(st.integers(min_value=0, max_value=max_dim))
    n = draw(st.integers(min_value=0, max_value=max_dim))
    rows = [[draw(small_ints) for _ in range(n)] for _ in range(m)]
    return Matrix(rows, ncols=n)


# -- Smith normal form -------------------------------------------------


def test_snf_units_normalize():
    sf = smith_form(Matrix([[2, 0], [0, 3]]), P)
    assert [sf.D[0, 0], sf.D[1, 1]] == [1, 3]
    assert sf.U * sf.D * sf.V == Matrix([[2, 0], [0, 3]])


def test_snf_unit_pivot_first():
    M = Matrix([[3, 1], [0, 3]])
    sf = smith_form(M, P)
    assert [sf.D[0, 0], sf.D[1, 1]] == [1, 9]
    assert sf.U * sf.D * sf.V == M


def test_snf_zero_matrix():
    sf = smith_form(Matrix.zero(2, 3), P)
    assert sf.D.is_zero() and sf.rank == 0


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_snf_factorization_properties(M):
    sf = smith_form(M, P)
    assert sf.U * sf.D * sf.V == M
    assert sf.Uinv * M * sf.Vinv == sf.D
    vals = []
    for i in range(min(M.nrows, M.ncols)):
        x = sf.D[i, i]
        if x != 0:
            v = valuation(x, P)
            assert x == QQ(P) ** v
            vals.append(v)
        for j in range(min(M.nrows, M.ncols)):
            if i != j:
                assert sf.D[i, j] == 0
    assert vals == sorted(vals)


@settings(max_examples=40, deadline=None)
@given(int_matrices(), st.randoms(use_true_random=False))
def test_snf_diagonal_invariant_under_permutation(M, rnd):
    rows = list(M.rows)
    rnd.shuffle(rows)
    if not rows:
        return
    cols = list(zip(*rows))
    rnd.shuffle(cols)
    M2 = Matrix(list(zip(*cols)), ncols=M.ncols)
    assert smith_form(M, P).diag == smith_form(M2, P).diag


def test_non_plocal_entry_rejected():
    with pytest.raises(InvalidScalar):
        canonical_form(1, [[QQ(1, 3)]], P)


# -- canonical forms ----------------------------------------------------


def test_canonical_form_examples():
    assert canonical_form(1, [[6]], P) == cyclic_module(P, 1)
    assert canonical_form(2, [], P) == free_module(P, 2)
    assert canonical_form(1, [[1]], P) == zero_module(P)


@settings(max_examples=40, deadline=None)
@given(int_matrices(max_dim=3), st.randoms(use_true_random=False))
def test_canonical_form_complete_invariant(M, rnd):
    """Invertible row and column operations do not change the class."""
    rows = [list(r) for r in M.rows]
    m, n = M.nrows, M.ncols
    for _ in range(6):
        if m >= 2:
            i, j = rnd.randrange(m), rnd.randrange(m)
            if i != j:
                c = rnd.choice([1, -1, 2, P])
                rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
        if n >= 2:
            i, j = rnd.randrange(n), rnd.randrange(n)
            if i != j:
                c = rnd.choice([1, -1, 2, P])
                for r in rows:
                    r[i] += c * r[j]
    M2 = Matrix(rows, ncols=n)
    assert canonical_form(m, M, P) == canonical_form(m, M2, P)


# -- maps and subquotients ----------------------------------------------


def test_well_definedness_torsion_to_free():
    with pytest.raises(MapNotWellDefined):
        ModuleMap(cyclic_module(P, 1), free_module(P, 1), [[1]])


def test_well_definedness_valuation():
    with pytest.raises(MapNotWellDefined):
        ModuleMap(cyclic_module(P, 1), cyclic_module(P, 2), [[1]])
    ModuleMap(cyclic_module(P, 1), cyclic_module(P, 2), [[3]])  # fine


def test_subquotients_examples(p):
    f = ModuleMap(free_module(p, 1), cyclic_module(p, 2), [[3]])
    sq = subquotients(f)
    assert sq.kernel[0] == free_module(p, 1)
    assert sq.image[0] == cyclic_module(p, 1)
    assert sq.cokernel[0] == cyclic_module(p, 1)
    assert (f @ sq.kernel[1]).is_zero
    assert (sq.cokernel[1] @ sq.image[1]).is_zero

    ident = identity_map(cyclic_module(p, 1))
    sq2 = subquotients(ident)
    assert sq2.kernel[0].is_zero and sq2.cokernel[0].is_zero

    z = zero_map(free_module(p, 1), free_module(p, 1))
    sq3 = subquotients(z)
    assert sq3.kernel[0] == free_module(p, 1)
    assert sq3.cokernel[0] == free_module(p, 1)


def test_image_contained_in_kernel_witness(rng, p):
    """For composable f, g with g o f = 0, the image of f factors through
    the kernel of g by a monomorphism."""
    from kanlim.derived import factor_through_mono

    for _ in range(25):
        A = random_module(rng, p, 2, 2)
        B = random_module(rng, p, 2, 2)
        f = random_matrix_map(rng, A, B)
        sq = subquotients(f)
        g = sq.cokernel[1]  # g o f = 0 by construction
        ker_g = subquotients(g).kernel
        w = factor_through_mono(ker_g[1], sq.image[1])
        assert w.is_mono()


def test_direct_sum_biproduct_laws(rng, p):
    for _ in range(20):
        ms = [random_module(rng, p, 2, 2) for _ in range(3)]
        ds = direct_sum(ms, p)
        for i in range(3):
            for j in range(3):
                comp = ds.projections[i] @ ds.injections[j]
                if i == j:
                    assert comp.equal(identity_map(ms[i]))
                else:
                    assert comp.is_zero
        total = None
        for i in range(3):
            term = ds.injections[i] @ ds.projections[i]
            total = term if total is None else total + term
        assert total.equal(identity_map(ds.module))


def test_direct_sum_examples(p):
    assert direct_sum([cyclic_module(p, 1), free_module(p, 1)], p).module == FpModule(p, 1, (1,))
    assert direct_sum([], p).module == zero_module(p)
    assert direct_sum([cyclic_module(p, 1), cyclic_module(p, 2)], p).module == FpModule(p, 0, (1, 2))


# -- tensor and Tor ------------------------------------------------------


def test_tensor_and_tor_examples(p):
    t, tor = tensor_and_tor(cyclic_module(p, 1), cyclic_module(p, 2))
    assert t == cyclic_module(p, 1) and tor == cyclic_module(p, 1)
    M = FpModule(p, 1, (2,))
    t, tor = tensor_and_tor(free_module(p, 1), M)
    assert t == M and tor.is_zero
    t, tor = tensor_and_tor(zero_module(p), M)
    assert t.is_zero and tor.is_zero
    with pytest.raises(ValueError):
        FpModule(5, 0, (2, 1))
    with pytest.raises(PrimeMismatch):
        tensor_and_tor(free_module(3, 1), free_module(5, 1))


def test_tensor_agrees_with_presentation_oracle(rng, p):
    """The PID formula against brute force from free presentations."""
    for _ in range(20):
        M = random_module(rng, p, 2, 3)
        Nm = random_module(rng, p, 2, 3)
        formula = tensor_and_tor(M, Nm)[0]
        gm, gn = M.ngens, Nm.ngens
        rels = []
        for j, e in enumerate(M.torsion):
            i = M.free_rank + j
            for k in range(gn):
                col = [0] * (gm * gn)
                col[i * gn + k] = P**e
                rels.append(col)
        for j, e in enumerate(Nm.torsion):
            i = Nm.free_rank + j
            for k in range(gm):
                col = [0] * (gm * gn)
                col[k * gn + i] = P**e
                rels.append(col)
        assert canonical_form(gm * gn, rels, p) == formula


def _tor_data(M, X):
    """Tor(M, X) as the kernel of id_M (x) relations(X), built from the
    free presentation of X -- independent of the closed formula."""
    from kanlim.matrix import solve_matrix

    R = X.relations()
    k, g = R.ncols, X.ngens
    dsK = direct_sum([M] * k, M.p)
    dsG = direct_sum([M] * g, M.p)
    blocks = {
        (i, j): scalar_map(M, R[i, j])
        for i in range(g)
        for j in range(k)
        if R[i, j] != 0
    }
    rhat = dsG.map_from_blocks(dsK, blocks)
    sq = subquotients(rhat)
    return dsK, sq.kernel


def _tor_induced(M, u, src_module, tgt_module, src_data, tgt_data):
    """Map on Tor induced by u, via a lift of u to the relation covers."""
    from kanlim.matrix import solve_matrix
    from kanlim.palgebra import homology_at

    R_src, R_tgt = src_module.relations(), tgt_module.relations()
    lift = solve_matrix(R_tgt, u.mat * R_src, M.p)
    dsK_s, (tor_s, mono_s) = src_data
    dsK_t, (tor_t, mono_t) = tgt_data
    blocks = {
        (i, j): scalar_map(M, lift[i, j])
        for i in range(R_tgt.ncols)
        for j in range(R_src.ncols)
        if lift[i, j] != 0
    }
    on_cover = dsK_t.map_from_blocks(dsK_s, blocks)
    amb_s = Subquotient(dsK_s.module, S=mono_s.mat)
    amb_t = Subquotient(dsK_t.module, S=mono_t.mat)
    return amb_s.induced_map(amb_t, on_cover)


def test_tor_six_term_exactness(rng, p):
    """For 0 -> A -> B -> C -> 0, the sequence
    Tor(M,B) -> Tor(M,C) -> M(x)A -> M(x)B -> M(x)C -> 0 is exact."""
    for _ in range(10):
        B = random_module(rng, p, 2, 3)
        f = random_matrix_map(rng, random_module(rng, p, 2, 3), B)
        sq = subquotients(f)
        A, incl = sq.image  # A >-> B ->> C
        C, epi = sq.cokernel
        M = random_module(rng, p, 2, 3)
        tdA = tensor_module(M, A)
        tdB = tensor_module(M, B)
        tdC = tensor_module(M, C)
        ta = tensor_map(identity_map(M), incl, tdA, tdB)
        tb = tensor_map(identity_map(M), epi, tdB, tdC)
        # exact at M(x)C: surjectivity
        assert tb.is_epi()
        # exact at M(x)B: ker(tb)/im(ta) = 0
        from kanlim.palgebra import kernel_lattice

        mid = Subquotient(tdB.module, S=kernel_lattice(tb), T=ta.mat)
        assert mid.module.is_zero
        # Tor side: torB -> torC with kernel isomorphic to Tor(M, A),
        # and coker(torB -> torC) isomorphic to ker(M(x)A -> M(x)B)
        datB = _tor_data(M, B)
        datC = _tor_data(M, C)
        datA = _tor_data(M, A)
        t = _tor_induced(M, epi, B, C, datB, datC)
        assert subquotients(t).kernel[0] == datA[1][0]
        delta_image = subquotients(ta).kernel[0]
        assert subquotients(t).cokernel[0] == delta_image
        # the formula agrees with the presentation-level oracle
        assert tensor_and_tor(M, B)[1] == datB[1][0]
        assert tensor_and_tor(M, C)[1] == datC[1][0]


def test_tensor_map_functorial(rng, p):
    for _ in range(10):
        A, B, C = (random_module(rng, p, 2, 2) for _ in range(3))
        A2, B2, C2 = (random_module(rng, p, 2, 2) for _ in range(3))
        f1 = random_matrix_map(rng, A, B)
        f2 = random_matrix_map(rng, B, C)
        g1 = random_matrix_map(rng, A2, B2)
        g2 = random_matrix_map(rng, B2, C2)
        tAA = tensor_module(A, A2)
        tBB = tensor_module(B, B2)
        tCC = tensor_module(C, C2)
        lhs = tensor_map(f2 @ f1, g2 @ g1, tAA, tCC)
        rhs = tensor_map(f2, g2, tBB, tCC) @ tensor_map(f1, g1, tAA, tBB)
        assert lhs.equal(rhs)


# -- map algebra ----------------------------------------------------------


def test_map_algebra_examples(p):
    Z1 = free_module(p, 1)
    three = scalar_map(Z1, 3)
    out = map_algebra(three, three)
    assert out["compose"].equal(scalar_map(Z1, 9))
    assert out["is_mono"] and not out["is_epi"] and not out["is_iso"]
    two = ModuleMap(cyclic_module(p, 2), cyclic_module(p, 2), [[2]])
    assert map_algebra(two, two)["is_iso"]
    with pytest.raises(CompositionError):
        zero_map(Z1, zero_module(p)) @ zero_map(cyclic_module(p, 1), cyclic_module(p, 1))


def test_inverse_roundtrip(rng, p):
    from kanlim.randomgen import random_automorphism

    for _ in range(15):
        M = random_module(rng, p, 2, 3)
        a = random_automorphism(rng, M)
        assert (a @ a.inverse()).equal(identity_map(M))
        assert (a.inverse() @ a).equal(identity_map(M))


def test_subquotient_class_order():
    assert is_subquotient_class(cyclic_module(P, 1), cyclic_module(P, 2))
    assert not is_subquotient_class(cyclic_module(P, 2), cyclic_module(P, 1))
    assert is_subquotient_class(FpModule(P, 0, (1, 2)), FpModule(P, 1, (3,)))
    assert not is_subquotient_class(free_module(P, 1), FpModule(P, 0, (3,)))


def test_matrix_inverse(p):
    M = Matrix([[1, 1], [0, 2]])
    Minv = inverse(M, p)
    assert Minv * M == Matrix.identity(2)
    assert inverse(Matrix([[3]]), p) is None
