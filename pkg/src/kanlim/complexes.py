"""N-cyclic cochain complexes of Z_(p)-modules, N = 2p - 2.

A quasi-periodic complex of period N is stored on one fundamental domain:
modules C^0 ... C^{N-1} with differentials d^n : C^n -> C^{(n+1) mod N}
and d o d = 0.  N is even, so the Koszul sign (-1)^s is well defined on
residues and the tensor product below closes up cyclically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .matrix import Matrix
from .palgebra import (
    CompositionError,
    DirectSum,
    FpModule,
    ModuleMap,
    PAlgebraError,
    PrimeMismatch,
    Subquotient,
    direct_sum,
    free_module,
    homology_at,
    identity_map,
    subquotients,
    tensor_map,
    tensor_module,
    tor_module,
    zero_map,
    zero_module,
)


class InvalidComplex(PAlgebraError):
    pass


class FlatnessViolation(PAlgebraError):
    pass


class CyclicComplex:
    """Cochain complex on Z/N-graded modules, N = 2p - 2."""

    __slots__ = ("p", "N", "modules", "diffs", "_h")

    def __init__(self, p, modules, diffs, check=True):
        N = 2 * p - 2
        modules = tuple(modules)
        diffs = tuple(diffs)
        if len(modules) != N or len(diffs) != N:
            raise InvalidComplex(f"expected {N} modules and differentials")
        if check:
            for n in range(N):
                d = diffs[n]
                if d.source != modules[n] or d.target != modules[(n + 1) % N]:
                    raise InvalidComplex(f"differential {n} has wrong endpoints")
            for n in range(N):
                if not (diffs[(n + 1) % N] @ diffs[n]).is_zero:
                    raise InvalidComplex(f"d o d != 0 at degree {n}")
        self.p = p
        self.N = N
        self.modules = modules
        self.diffs = diffs
        self._h = {}

    def module(self, n) -> FpModule:
        return self.modules[n % self.N]

    def diff(self, n) -> ModuleMap:
        return self.diffs[n % self.N]

    @property
    def is_flat(self):
        return all(m.is_free for m in self.modules)

    @property
    def is_zero(self):
        return all(m.is_zero for m in self.modules)

    def __eq__(self, other):
        return (
            isinstance(other, CyclicComplex)
            and self.p == other.p
            and self.modules == other.modules
            and self.diffs == other.diffs
        )

    def __hash__(self):
        return hash((self.p, self.modules, self.diffs))

    def __repr__(self):
        return "CyclicComplex[" + ", ".join(m.describe() for m in self.modules) + "]"

    def cohomology_data(self, n) -> Subquotient:
        n = n % self.N
        if n not in self._h:
            self._h[n] = homology_at(self.diff(n - 1), self.diff(n))
        return self._h[n]


def zero_complex(p) -> CyclicComplex:
    z = zero_module(p)
    zm = zero_map(z, z)
    return CyclicComplex(p, (z,) * (2 * p - 2), (zm,) * (2 * p - 2), check=False)


def unit_complex(p) -> CyclicComplex:
    """Z_(p) concentrated in degree 0 -- the tensor unit."""
    N = 2 * p - 2
    one = free_module(p, 1)
    z = zero_module(p)
    mods = [one if n == 0 else z for n in range(N)]
    diffs = [zero_map(mods[n], mods[(n + 1) % N]) for n in range(N)]
    return CyclicComplex(p, mods, diffs, check=False)


def concentrated_complex(p, n, M: FpModule) -> CyclicComplex:
    N = 2 * p - 2
    z = zero_module(p)
    mods = [M if k == n % N else z for k in range(N)]
    diffs = [zero_map(mods[k], mods[(k + 1) % N]) for k in range(N)]
    return CyclicComplex(p, mods, diffs, check=False)


class ChainMap:
    """Degreewise map commuting with the differentials (cyclically)."""

    __slots__ = ("source", "target", "parts")

    def __init__(self, source: CyclicComplex, target: CyclicComplex, parts, check=True):
        if source.p != target.p:
            raise PrimeMismatch("chain map between different primes")
        parts = tuple(parts)
        if len(parts) != source.N:
            raise InvalidComplex("wrong number of components")
        if check:
            for n in range(source.N):
                f = parts[n]
                if f.source != source.modules[n] or f.target != target.modules[n]:
                    raise InvalidComplex(f"component {n} has wrong endpoints")
                lhs = target.diffs[n] @ f
                rhs = parts[(n + 1) % source.N] @ source.diffs[n]
                if not lhs.equal(rhs):
                    raise InvalidComplex(f"does not commute with d at degree {n}")
        self.source = source
        self.target = target
        self.parts = parts

    @property
    def p(self):
        return self.source.p

    def part(self, n) -> ModuleMap:
        return self.parts[n % self.source.N]

    def compose(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise CompositionError("chain maps do not compose")
        return ChainMap(
            other.source,
            self.target,
            tuple(f @ g for f, g in zip(self.parts, other.parts)),
            check=False,
        )

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        return ChainMap(
            self.source,
            self.target,
            tuple(f + g for f, g in zip(self.parts, other.parts)),
            check=False,
        )

    def __sub__(self, other):
        return ChainMap(
            self.source,
            self.target,
            tuple(f - g for f, g in zip(self.parts, other.parts)),
            check=False,
        )

    def __neg__(self):
        return ChainMap(self.source, self.target, tuple(-f for f in self.parts), check=False)

    def scale(self, c):
        return ChainMap(
            self.source, self.target, tuple(f.scale(c) for f in self.parts), check=False
        )

    def equal(self, other):
        return (
            self.source == other.source
            and self.target == other.target
            and all(f.equal(g) for f, g in zip(self.parts, other.parts))
        )

    def __eq__(self, other):
        return isinstance(other, ChainMap) and self.equal(other)

    def __hash__(self):
        return hash((self.source, self.target, self.parts))

    @property
    def is_zero(self):
        return all(f.is_zero for f in self.parts)


def zero_chain_map(source, target) -> ChainMap:
    return ChainMap(
        source,
        target,
        tuple(
            zero_map(source.modules[n], target.modules[n]) for n in range(source.N)
        ),
        check=False,
    )


def identity_chain_map(c) -> ChainMap:
    return ChainMap(c, c, tuple(identity_map(m) for m in c.modules), check=False)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------


def cohomology(C: CyclicComplex, n) -> FpModule:
    """H^n(C) = ker d^n / im d^{n-1} in canonical form."""
    return C.cohomology_data(n).module


def cohomology_table(C: CyclicComplex):
    return tuple(cohomology(C, n) for n in range(C.N))


def h_map(f: ChainMap, n) -> ModuleMap:
    """The induced map H^n(f)."""
    src = f.source.cohomology_data(n)
    tgt = f.target.cohomology_data(n)
    return src.induced_map(tgt, f.part(n))


def is_quasi_iso(f: ChainMap) -> bool:
    return all(h_map(f, n).is_iso() for n in range(f.source.N))


# ---------------------------------------------------------------------------
# shift and cone
# ---------------------------------------------------------------------------


def shift(C: CyclicComplex, k) -> CyclicComplex:
    """(shift(C, k))^n = C^{n+k}, differential scaled by (-1)^k."""
    N = C.N
    sign = -1 if k % 2 else 1
    mods = [C.module(n + k) for n in range(N)]
    diffs = [C.diff(n + k).scale(sign) for n in range(N)]
    return CyclicComplex(C.p, mods, diffs, check=False)


def shift_chain_map(f: ChainMap, k) -> ChainMap:
    return ChainMap(
        shift(f.source, k),
        shift(f.target, k),
        tuple(f.part(n + k) for n in range(f.source.N)),
        check=False,
    )


@dataclass(frozen=True)
class Cone:
    complex: CyclicComplex
    incl: ChainMap  # target -> cone
    proj: ChainMap  # cone -> shift(source, 1)


def mapping_cone(f: ChainMap) -> Cone:
    """cone(f)^n = X^{n+1} (+) Y^n with d = [[-dX, 0], [f, dY]]."""
    X, Y = f.source, f.target
    N = X.N
    sums = [direct_sum([X.module(n + 1), Y.module(n)], X.p) for n in range(N)]
    mods = [s.module for s in sums]
    diffs = []
    for n in range(N):
        blocks = {
            (0, 0): -X.diff(n + 1),
            (1, 0): f.part(n + 1),
            (1, 1): Y.diff(n),
        }
        diffs.append(sums[(n + 1) % N].map_from_blocks(sums[n], blocks))
    cone = CyclicComplex(X.p, mods, diffs)
    incl = ChainMap(Y, cone, tuple(sums[n].injections[1] for n in range(N)), check=False)
    sX = shift(X, 1)
    proj = ChainMap(cone, sX, tuple(sums[n].projections[0] for n in range(N)), check=False)
    return Cone(cone, incl, proj)


# ---------------------------------------------------------------------------
# cyclic tensor product
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _TensorLayout:
    """Degreewise layout of C (x) D: summands (s, t) with s + t = n mod N."""

    pairs: tuple  # per degree: tuple of (s, t)
    tensors: dict  # (s, t) -> TensorData
    sums: tuple  # per degree: DirectSum


@lru_cache(maxsize=None)
def _tensor_layout(C: CyclicComplex, D: CyclicComplex) -> _TensorLayout:
    N = C.N
    pairs = []
    tensors = {}
    sums = []
    for n in range(N):
        pn = tuple((s, (n - s) % N) for s in range(N))
        pairs.append(pn)
        for s, t in pn:
            if (s, t) not in tensors:
                tensors[(s, t)] = tensor_module(C.modules[s], D.modules[t])
        sums.append(direct_sum([tensors[st].module for st in pn], C.p))
    return _TensorLayout(tuple(pairs), tensors, tuple(sums))


def tensor_cyclic(C: CyclicComplex, D: CyclicComplex) -> CyclicComplex:
    """(C (x) D)^n = sum of C^s (x) D^t over s + t = n (mod N).

    d(x (x) y) = dx (x) y + (-1)^s x (x) dy; the sign is well defined
    because N is even.
    """
    if C.p != D.p:
        raise PrimeMismatch("tensor of complexes over different primes")
    N = C.N
    lay = _tensor_layout(C, D)
    diffs = []
    for n in range(N):
        src = lay.sums[n]
        tgt = lay.sums[(n + 1) % N]
        tgt_pos = {st: k for k, st in enumerate(lay.pairs[(n + 1) % N])}
        blocks = {}
        for j, (s, t) in enumerate(lay.pairs[n]):
            left = tensor_map(
                C.diffs[s],
                identity_map(D.modules[t]),
                lay.tensors[(s, t)],
                lay.tensors[((s + 1) % N, t)],
            )
            blocks[(tgt_pos[((s + 1) % N, t)], j)] = left
            right = tensor_map(
                identity_map(C.modules[s]),
                D.diffs[t],
                lay.tensors[(s, t)],
                lay.tensors[(s, (t + 1) % N)],
            )
            if s % 2:
                right = -right
            key = (tgt_pos[(s, (t + 1) % N)], j)
            if key in blocks:
                blocks[key] = blocks[key] + right
            else:
                blocks[key] = right
        diffs.append(tgt.map_from_blocks(src, blocks))
    return CyclicComplex(C.p, tuple(s.module for s in lay.sums), tuple(diffs))


def tensor_summand_injection(C, D, n, s) -> ModuleMap:
    """Injection of the (s, t) summand into (C (x) D)^n, t = n - s."""
    lay = _tensor_layout(C, D)
    k = lay.pairs[n % C.N].index((s % C.N, (n - s) % C.N))
    return lay.sums[n % C.N].injections[k]


def tensor_chain_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g : C (x) D -> C' (x) D' (chain maps carry no Koszul sign)."""
    src = _tensor_layout(f.source, g.source)
    tgt = _tensor_layout(f.target, g.target)
    N = f.source.N
    parts = []
    for n in range(N):
        blocks = {}
        for j, (s, t) in enumerate(src.pairs[n]):
            blocks[(j, j)] = tensor_map(
                f.parts[s], g.parts[t], src.tensors[(s, t)], tgt.tensors[(s, t)]
            )
        parts.append(tgt.sums[n].map_from_blocks(src.sums[n], blocks))
    return ChainMap(
        tensor_cyclic(f.source, g.source), tensor_cyclic(f.target, g.target), parts
    )


# ---------------------------------------------------------------------------
# flat replacement and derived tensor
# ---------------------------------------------------------------------------


def _free(p, rank):
    return free_module(p, rank)


def resolution_replacement(C: CyclicComplex):
    """Degreewise-free complex quasi-isomorphic to C, built from a two-row
    free resolution per degree and totalized periodically.

    Returns (P, q) with q : P -> C a quasi-isomorphism.  Deterministic in
    C; used even for flat C when an independent second replacement is
    wanted.
    """
    p, N = C.p, C.N
    from .palgebra import kernel_lattice

    # cocycles Z^n and coboundaries B^{n+1} as subquotients of the C^n;
    # the image presentation keeps d-preimages of its generators.
    z_sub = [Subquotient(C.modules[n], S=kernel_lattice(C.diffs[n])) for n in range(N)]
    img_sub = [Subquotient(C.modules[(n + 1) % N], S=C.diffs[n].mat) for n in range(N)]

    p0 = []
    eps = []
    d0 = []
    for n in range(N):
        zc = z_sub[n]
        nz = zc.module.ngens
        nb_next = img_sub[n].module.ngens  # covers B^{n+1}
        p0.append(_free(p, nz + nb_next))
        lift = img_sub[n]._canon.from_c  # d-preimages in C^n coordinates
        eps_mat = zc.reps().hstack(lift)
        eps.append(ModuleMap(p0[n], C.modules[n], eps_mat, check=False))
    for n in range(N):
        nz = z_sub[n].module.ngens
        nzn = z_sub[(n + 1) % N].module.ngens
        nb = img_sub[n].module.ngens
        nbn = img_sub[(n + 1) % N].module.ngens
        cols = []
        zero_col = (0,) * (nzn + nbn)
        for _ in range(nz):
            cols.append(zero_col)
        for j in range(nb):
            w = C.diffs[n].mat * img_sub[n]._canon.from_c.take_cols([j])
            y = z_sub[(n + 1) % N].classify(w)
            cols.append(tuple(y.col(0)) + (0,) * nbn)
        d0.append(
            ModuleMap(
                p0[n],
                p0[(n + 1) % N],
                Matrix.from_cols([tuple(c) for c in cols], nzn + nbn),
                check=False,
            )
        )

    from .matrix import lattice_basis, preimage_gens, solve_matrix

    v = []
    p1 = []
    for n in range(N):
        lat = lattice_basis(
            preimage_gens(eps[n].mat, C.modules[n].relations(), p), p
        )
        p1.append(_free(p, lat.ncols))
        v.append(ModuleMap(p1[n], p0[n], lat, check=False))
    d1 = []
    for n in range(N):
        rhs = d0[n].mat * v[n].mat
        sol = solve_matrix(v[(n + 1) % N].mat, rhs, p)
        if sol is None:
            raise InvalidComplex("flat replacement row-1 differential failed")
        d1.append(ModuleMap(p1[n], p1[(n + 1) % N], sol, check=False))

    sums = [direct_sum([p0[n], p1[(n + 1) % N]], p) for n in range(N)]
    diffs = []
    for n in range(N):
        blocks = {
            (0, 0): d0[n],
            (0, 1): v[(n + 1) % N],
            (1, 1): -d1[(n + 1) % N],
        }
        diffs.append(sums[(n + 1) % N].map_from_blocks(sums[n], blocks))
    P = CyclicComplex(p, tuple(s.module for s in sums), tuple(diffs))
    q = ChainMap(
        P, C, tuple(eps[n] @ sums[n].projections[0] for n in range(N))
    )
    return P, q


def flat_replacement(C: CyclicComplex):
    """(P, q) with P degreewise torsion-free and q a quasi-isomorphism.

    Already-flat complexes are returned unchanged with the identity.
    """
    if C.is_flat:
        return C, identity_chain_map(C)
    return resolution_replacement(C)


def derived_tensor(C: CyclicComplex, D: CyclicComplex) -> CyclicComplex:
    """Tensor of flat replacements; cohomology independent of the choice."""
    PC, _ = flat_replacement(C)
    PD, _ = flat_replacement(D)
    return tensor_cyclic(PC, PD)


def kunneth_oracle(C: CyclicComplex, D: CyclicComplex):
    """Expected cohomology of C (x) D for degreewise flat inputs.

    H^n = sum_{s+t=n} H^s(C) (x) H^t(D)  +  sum_{s+t=n+1} Tor(H^s, H^t),
    all indices mod N.  Independent of the tensor implementation: uses
    only the PID formulas on cohomology.
    """
    if not (C.is_flat and D.is_flat):
        raise FlatnessViolation("Kunneth oracle needs degreewise flat inputs")
    N = C.N
    hc = cohomology_table(C)
    hd = cohomology_table(D)
    out = []
    for n in range(N):
        parts = []
        for s in range(N):
            t = (n - s) % N
            parts.append(tensor_module(hc[s], hd[t]).module)
        for s in range(N):
            t = (n + 1 - s) % N
            parts.append(tor_module(hc[s], hd[t]))
        out.append(direct_sum(parts, C.p).module)
    return tuple(out)
