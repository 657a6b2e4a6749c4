"""Finitely generated modules over Z_(p) in canonical form.

Over the local PID Z_(p) every finitely generated module is

    M = Z_(p)^r  (+)  Z/p^e1 (+) ... (+) Z/p^es,

and the pair (r, sorted exponents) is a complete isomorphism invariant.
``FpModule`` stores exactly that pair; maps are matrices on the canonical
generators (free generators first, then torsion generators in ascending
exponent order).  All kernels, images, cokernels and subquotients reduce
to Smith normal form computations from :mod:`kanlim.matrix`.

>>> p = 3
>>> M = canonical_form(1, [[6]], p)       # coker(6) = Z/3 since 2 is a unit
>>> M
FpModule(p=3, free_rank=0, torsion=(1,))
>>> direct_sum([M, free_module(p, 2)], p).module
FpModule(p=3, free_rank=2, torsion=(1,))
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .matrix import (
    Matrix,
    kernel_basis,
    inverse,
    lattice_basis,
    preimage_gens,
    smith_form,
    solve_matrix,
)
from .scalar import (
    INF,
    PAlgebraError,
    InvalidScalar,
    QQ,
    plocal,
    residue,
    valuation,
)


class MapNotWellDefined(PAlgebraError):
    pass


class PrimeMismatch(PAlgebraError):
    pass


class CompositionError(PAlgebraError):
    pass


def _check_odd_prime(p):
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    n = 3
    while n * n <= p:
        if p % n == 0:
            raise ValueError(f"p must be an odd prime, got {p}")
        n += 2


@dataclass(frozen=True)
class FpModule:
    """Canonical form of a finitely generated Z_(p)-module."""

    p: int
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        _check_odd_prime(self.p)
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(e < 1 for e in self.torsion):
            raise ValueError("torsion exponents must be positive")
        if list(self.torsion) != sorted(self.torsion):
            raise ValueError("torsion exponents must be ascending")

    @property
    def ngens(self):
        return self.free_rank + len(self.torsion)

    def gen_exponent(self, i):
        """Exponent of generator i; INF means infinite order (free)."""
        if i < self.free_rank:
            return INF
        return self.torsion[i - self.free_rank]

    def exponents(self):
        return tuple(
            INF if i < self.free_rank else self.torsion[i - self.free_rank]
            for i in range(self.ngens)
        )

    def relations(self) -> Matrix:
        """Columns generate the relation lattice in generator coordinates."""
        cols = []
        for j, e in enumerate(self.torsion):
            col = [QQ(0)] * self.ngens
            col[self.free_rank + j] = QQ(self.p) ** e
            cols.append(tuple(col))
        return Matrix.from_cols(cols, self.ngens)

    @property
    def is_zero(self):
        return self.ngens == 0

    @property
    def is_free(self):
        return not self.torsion

    def describe(self):
        parts = []
        if self.free_rank:
            parts.append(
                f"Z_({self.p})" + (f"^{self.free_rank}" if self.free_rank > 1 else "")
            )
        parts.extend(f"Z/{self.p}^{e}" if e > 1 else f"Z/{self.p}" for e in self.torsion)
        return " + ".join(parts) if parts else "0"


def zero_module(p):
    return FpModule(p, 0, ())


def free_module(p, rank):
    return FpModule(p, rank, ())


def cyclic_module(p, exponent):
    return FpModule(p, 0, (exponent,))


# ---------------------------------------------------------------------------
# presentations and canonicalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Canonicalization:
    """Iso  Z^g/im(relations)  ->  canonical module.

    ``to_c`` maps presentation coordinates to canonical coordinates,
    ``from_c`` picks representatives; to_c * from_c = id exactly.
    """

    module: FpModule
    to_c: Matrix
    from_c: Matrix


def canonicalize(ngens: int, relations: Matrix, p: int) -> Canonicalization:
    """Invariant-factor decomposition of Z_(p)^ngens / colspan(relations)."""
    if relations.nrows != ngens:
        raise ValueError("relations live in generator coordinates")
    sf = smith_form(relations, p)
    vals = [valuation(d, p) for d in sf.diag]
    free_idx = list(range(sf.rank, ngens))
    tors_idx = [i for i, v in enumerate(vals) if v > 0]
    keep = free_idx + tors_idx
    torsion = tuple(vals[i] for i in tors_idx)
    module = FpModule(p, len(free_idx), torsion)
    to_c = sf.Uinv.take_rows(keep)
    from_c = sf.U.take_cols(keep)
    return Canonicalization(module, to_c, from_c)


def canonical_form(generators: int, relations, p: int) -> FpModule:
    """Canonical form of the module presented by generators and relations.

    ``relations`` is a sequence of relation vectors (each of length
    ``generators``) or a Matrix whose columns are the relations.
    """
    if isinstance(relations, Matrix):
        rel = relations
    else:
        rel = Matrix.from_cols(
            [tuple(plocal(x, p) for x in r) for r in relations], generators
        )
    for _, _, x in rel.entries():
        plocal(x, p)
    return canonicalize(generators, rel, p).module


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------


class ModuleMap:
    """A Z_(p)-linear map between canonical modules.

    The matrix acts on canonical generators: column j is the image of the
    j-th source generator.  Well-definedness demands that the entry from a
    source generator of order p^a to a target generator of order p^b has
    valuation >= max(0, b - a); entries from torsion generators to free
    generators must vanish.  Entries into torsion generators are stored as
    canonical residues mod p^b.
    """

    __slots__ = ("source", "target", "mat")

    def __init__(self, source: FpModule, target: FpModule, mat, check=True):
        if source.p != target.p:
            raise PrimeMismatch("source and target over different primes")
        if not isinstance(mat, Matrix):
            mat = Matrix(
                tuple(tuple(plocal(x, source.p) for x in row) for row in mat),
                ncols=source.ngens,
            )
        if mat.shape != (target.ngens, source.ngens):
            raise MapNotWellDefined(
                f"matrix shape {mat.shape} != {(target.ngens, source.ngens)}"
            )
        p = source.p
        if check:
            src_e = source.exponents()
            tgt_e = target.exponents()
            for i, j, x in mat.entries():
                if x == 0:
                    continue
                plocal(x, p)
                need = tgt_e[i] - src_e[j] if src_e[j] is not INF else 0
                if tgt_e[i] is INF and src_e[j] is not INF:
                    raise MapNotWellDefined(
                        f"entry ({i},{j}) maps torsion into a free generator"
                    )
                if need > 0 and valuation(x, p) < need:
                    raise MapNotWellDefined(
                        f"entry ({i},{j})={x} needs valuation >= {need}"
                    )
        self.source = source
        self.target = target
        if not target.torsion:
            self.mat = mat
        else:
            rows = []
            for i in range(target.ngens):
                e = target.gen_exponent(i)
                if e is INF:
                    rows.append(mat.rows[i])
                else:
                    rows.append(tuple(QQ(residue(x, p, e)) for x in mat.rows[i]))
            self.mat = Matrix._raw(tuple(rows), source.ngens)

    @property
    def p(self):
        return self.source.p

    # -- algebra -------------------------------------------------------
    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        if other.target != self.source:
            raise CompositionError(
                f"cannot compose: {other.target} -> ... -> {self.source}"
            )
        return ModuleMap(other.source, self.target, self.mat * other.mat, check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise CompositionError("sum of non-parallel maps")
        return ModuleMap(self.source, self.target, self.mat + other.mat, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ModuleMap(self.source, self.target, -self.mat, check=False)

    def scale(self, c):
        return ModuleMap(
            self.source, self.target, self.mat.scale(plocal(c, self.p)), check=False
        )

    def equal(self, other: "ModuleMap") -> bool:
        """Equality as module maps (entries are stored as residues)."""
        return (
            self.source == other.source
            and self.target == other.target
            and self.mat == other.mat
        )

    def __eq__(self, other):
        return isinstance(other, ModuleMap) and self.equal(other)

    def __hash__(self):
        return hash((self.source, self.target, self.mat))

    def __repr__(self):
        return f"ModuleMap({self.source.describe()} -> {self.target.describe()})"

    @property
    def is_zero(self):
        return self.mat.is_zero()

    def kernel(self):
        return subquotients(self).kernel

    def is_mono(self):
        return subquotients(self).kernel[0].is_zero

    def is_epi(self):
        return subquotients(self).cokernel[0].is_zero

    def is_iso(self):
        sq = subquotients(self)
        return sq.kernel[0].is_zero and sq.cokernel[0].is_zero

    def inverse(self) -> "ModuleMap":
        """Two-sided inverse of an isomorphism (solve through relations)."""
        sol = solve_matrix(
            self.mat.hstack(self.target.relations()),
            Matrix.identity(self.target.ngens),
            self.p,
        )
        if sol is None:
            raise CompositionError("map is not invertible")
        inv = sol.take_rows(range(self.source.ngens))
        return ModuleMap(self.target, self.source, inv)


def zero_map(source: FpModule, target: FpModule) -> ModuleMap:
    return ModuleMap(
        source, target, Matrix.zero(target.ngens, source.ngens), check=False
    )


def identity_map(m: FpModule) -> ModuleMap:
    return ModuleMap(m, m, Matrix.identity(m.ngens), check=False)


def scalar_map(m: FpModule, c) -> ModuleMap:
    return identity_map(m).scale(c)


# ---------------------------------------------------------------------------
# subquotients
# ---------------------------------------------------------------------------


class Subquotient:
    """(span(S) + relations) / (span(T) + relations) inside an ambient module.

    S and T are matrices of column vectors in ambient generator
    coordinates; T defaults to nothing, S to the whole module.  Provides
    the canonical form together with classification of ambient vectors
    and representatives of generators -- the engine behind kernels,
    cokernels, cohomology and filtration subquotients.
    """

    def __init__(self, ambient: FpModule, S=None, T=None):
        p = ambient.p
        g = ambient.ngens
        self.ambient = ambient
        self.p = p
        if S is None:
            S = Matrix.identity(g)
        if T is None:
            T = Matrix.zero(g, 0)
        self.S = S
        self.T = T
        rel_amb = ambient.relations()
        denom = T.hstack(rel_amb)
        self._denom = denom
        rels = preimage_gens(S, denom, p) if S.ncols else Matrix.zero(0, 0)
        self._canon = canonicalize(S.ncols, rels, p)
        self._solver = S.hstack(denom)

    @property
    def module(self) -> FpModule:
        return self._canon.module

    def classify(self, vec: Matrix) -> Matrix:
        """Coordinates of the class of an ambient vector, or raise."""
        sol = solve_matrix(self._solver, vec, self.p)
        if sol is None:
            raise PAlgebraError("vector does not lie in the subquotient span")
        y = sol.take_rows(range(self.S.ncols))
        return self._canon.to_c * y

    def classify_matrix(self, vecs: Matrix) -> Matrix:
        return self.classify(vecs)

    def rep(self, j) -> Matrix:
        """An ambient representative of the j-th canonical generator."""
        return self.S * self._canon.from_c.take_cols([j])

    def reps(self) -> Matrix:
        return self.S * self._canon.from_c

    def contains(self, vec: Matrix) -> bool:
        return solve_matrix(self._solver, vec, self.p) is not None

    def induced_map(self, other: "Subquotient", h: ModuleMap) -> ModuleMap:
        """Map self -> other induced by h on ambients (assumed compatible)."""
        img = h.mat * self.reps()
        return ModuleMap(self.module, other.module, other.classify(img))


@dataclass(frozen=True)
class SubquotientData:
    kernel: tuple  # (FpModule, mono into source)
    image: tuple  # (FpModule, mono into target)
    cokernel: tuple  # (FpModule, epi from target)
    image_epi: ModuleMap = field(compare=False, default=None)


def kernel_lattice(f: ModuleMap) -> Matrix:
    """Generators of {x : f(x) = 0 in target} in source coordinates."""
    return preimage_gens(f.mat, f.target.relations(), f.p)


def subquotients(f: ModuleMap) -> SubquotientData:
    """Kernel, image and cokernel of a map, with witness maps.

    The kernel mono composed into the source is exact (composite with f is
    zero), the image mono lands in the target, the cokernel epi collapses
    the image.

    >>> p = 3
    >>> f = ModuleMap(free_module(p, 1), cyclic_module(p, 2), [[3]])
    >>> sq = subquotients(f)
    >>> sq.kernel[0], sq.image[0], sq.cokernel[0]
    (FpModule(p=3, free_rank=1, torsion=()), FpModule(p=3, free_rank=0, torsion=(1,)), FpModule(p=3, free_rank=0, torsion=(1,)))
    """
    p = f.p
    lat = kernel_lattice(f)
    ker = Subquotient(f.source, S=lat)
    ker_mono = ModuleMap(ker.module, f.source, ker.reps())
    img = Subquotient(f.target, S=f.mat)
    img_mono = ModuleMap(img.module, f.target, img.reps())
    img_epi = ModuleMap(f.source, img.module, img.classify(f.mat))
    cok = Subquotient(f.target, T=f.mat)
    cok_epi = ModuleMap(f.target, cok.module, cok.classify(Matrix.identity(f.target.ngens)))
    return SubquotientData(
        kernel=(ker.module, ker_mono),
        image=(img.module, img_mono),
        cokernel=(cok.module, cok_epi),
        image_epi=img_epi,
    )


def homology_at(u, v) -> Subquotient:
    """ker(v)/im(u) for composable u: A->B, v: B->C with v o u = 0.

    Either map may be None (interpreted as zero in or out of B).
    """
    if u is not None and v is not None and u.target != v.source:
        raise CompositionError("homology_at needs composable maps")
    mid = v.source if v is not None else u.target
    S = kernel_lattice(v) if v is not None else None
    T = u.mat if u is not None else None
    return Subquotient(mid, S=S, T=T)


def map_invariants(f: ModuleMap):
    """(kernel, image, cokernel) canonical forms -- an iso invariant of f."""
    sq = subquotients(f)
    return (sq.kernel[0], sq.image[0], sq.cokernel[0])


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectSum:
    module: FpModule
    injections: tuple
    projections: tuple
    placements: tuple = ()  # per summand: global index of each generator

    def map_from_blocks(self, source_sum: "DirectSum", blocks: dict) -> ModuleMap:
        """Assemble a map of direct sums from {(i, j): ModuleMap} blocks."""
        out = [[QQ(0)] * source_sum.module.ngens for _ in range(self.module.ngens)]
        for (i, j), blk in blocks.items():
            tplace = self.placements[i]
            splace = source_sum.placements[j]
            for r, row in enumerate(blk.mat.rows):
                orow = out[tplace[r]]
                for c, x in enumerate(row):
                    if x != 0:
                        orow[splace[c]] += x
        return ModuleMap(
            source_sum.module,
            self.module,
            Matrix._raw(tuple(tuple(r) for r in out), source_sum.module.ngens),
            check=False,
        )


def direct_sum(summands, p) -> DirectSum:
    """Biproduct with injections and projections.

    Canonical generator order interleaves summands: all free generators
    first (by summand), then torsion generators sorted by exponent with
    summand order breaking ties.
    """
    summands = list(summands)
    for m in summands:
        if m.p != p:
            raise PrimeMismatch("direct sum over mixed primes")
    free_slots = []
    tors_slots = []
    for si, m in enumerate(summands):
        for k in range(m.free_rank):
            free_slots.append((si, k))
        for k, e in enumerate(m.torsion):
            tors_slots.append((e, si, m.free_rank + k))
    tors_slots.sort()
    total = FpModule(p, len(free_slots), tuple(e for e, _, _ in tors_slots))
    place = {}
    for pos, (si, k) in enumerate(free_slots):
        place[(si, k)] = pos
    for pos, (_, si, k) in enumerate(tors_slots):
        place[(si, k)] = len(free_slots) + pos
    injections = []
    projections = []
    placements = []
    for si, m in enumerate(summands):
        inj = [[QQ(0)] * m.ngens for _ in range(total.ngens)]
        for k in range(m.ngens):
            inj[place[(si, k)]][k] = QQ(1)
        inj_m = Matrix._raw(tuple(tuple(r) for r in inj), m.ngens)
        injections.append(ModuleMap(m, total, inj_m, check=False))
        projections.append(ModuleMap(total, m, inj_m.transpose(), check=False))
        placements.append(tuple(place[(si, k)] for k in range(m.ngens)))
    return DirectSum(total, tuple(injections), tuple(projections), tuple(placements))


# ---------------------------------------------------------------------------
# tensor products and Tor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TensorData:
    """M (x) N in canonical form, with the Kronecker presentation kept.

    Pair generator (i, j) sits at presentation index i * N.ngens + j.
    """

    left: FpModule
    right: FpModule
    canon: Canonicalization

    @property
    def module(self):
        return self.canon.module


def tensor_module(M: FpModule, N: FpModule) -> TensorData:
    if M.p != N.p:
        raise PrimeMismatch("tensor over mixed primes")
    p = M.p
    gm, gn = M.ngens, N.ngens
    cols = []
    for j, e in enumerate(M.torsion):
        i = M.free_rank + j
        for k in range(gn):
            col = [QQ(0)] * (gm * gn)
            col[i * gn + k] = QQ(p) ** e
            cols.append(tuple(col))
    for j, e in enumerate(N.torsion):
        i = N.free_rank + j
        for k in range(gm):
            col = [QQ(0)] * (gm * gn)
            col[k * gn + i] = QQ(p) ** e
            cols.append(tuple(col))
    rel = Matrix.from_cols(cols, gm * gn)
    return TensorData(M, N, canonicalize(gm * gn, rel, p))


def _kron(A: Matrix, B: Matrix) -> Matrix:
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            rows.append(tuple(x * y for x in ra for y in rb))
    return Matrix(tuple(rows), ncols=A.ncols * B.ncols)


def tensor_map(f: ModuleMap, g: ModuleMap, src: TensorData, tgt: TensorData) -> ModuleMap:
    """f (x) g transported through the canonical forms."""
    if src.left != f.source or src.right != g.source:
        raise CompositionError("tensor_map source data mismatch")
    if tgt.left != f.target or tgt.right != g.target:
        raise CompositionError("tensor_map target data mismatch")
    big = tgt.canon.to_c * _kron(f.mat, g.mat) * src.canon.from_c
    return ModuleMap(src.module, tgt.module, big, check=False)


def tor_module(M: FpModule, N: FpModule) -> FpModule:
    """Tor_1(M, N): one copy of Z/p^min(a,b) per pair of torsion factors."""
    if M.p != N.p:
        raise PrimeMismatch("Tor over mixed primes")
    exps = sorted(min(a, b) for a in M.torsion for b in N.torsion)
    return FpModule(M.p, 0, tuple(exps))


def tensor_and_tor(M: FpModule, N: FpModule):
    """(M (x) N, Tor_1(M, N)) by the PID formulas.

    >>> p = 3
    >>> tensor_and_tor(cyclic_module(p, 1), cyclic_module(p, 2))
    (FpModule(p=3, free_rank=0, torsion=(1,)), FpModule(p=3, free_rank=0, torsion=(1,)))
    """
    return tensor_module(M, N).module, tor_module(M, N)


# ---------------------------------------------------------------------------
# map algebra, spec-level bundles
# ---------------------------------------------------------------------------


def map_algebra(f: ModuleMap, g: ModuleMap) -> dict:
    """Composite and comparison data for a pair of maps.

    ``compose`` is g o f (run f first) and requires composability; the
    remaining entries describe f alone or the parallel pair.
    """
    out = {
        "is_mono": f.is_mono(),
        "is_epi": f.is_epi(),
    }
    out["is_iso"] = out["is_mono"] and out["is_epi"]
    if g.source == f.target:
        out["compose"] = g @ f
    if g.source == f.source and g.target == f.target:
        out["equal"] = f.equal(g)
    return out


def is_subquotient_class(M: FpModule, N: FpModule) -> bool:
    """True if M is (isomorphic to) a subquotient of N.

    Over a DVR this holds iff the factor lists, sorted descending with
    free factors counted as infinite, dominate pointwise.
    """
    if M.p != N.p:
        raise PrimeMismatch("subquotient test over mixed primes")
    ms = [INF] * M.free_rank + sorted(M.torsion, reverse=True)
    ns = [INF] * N.free_rank + sorted(N.torsion, reverse=True)
    if len(ms) > len(ns):
        return False
    return all(m <= n for m, n in zip(ms, ns))
