"""Seeded random instances: modules, maps, complexes, diagrams, posets.

Complexes are assembled from elementary pieces (a two-term cell with an
arbitrary map, or a concentrated module) and then scrambled by
valuation-respecting automorphisms, so d o d = 0 holds by construction
while the matrices look generic.  All generators take a
``random.Random`` so runs are reproducible from a seed.
"""

from __future__ import annotations

import random

from .matrix import Matrix
from .palgebra import (
    FpModule,
    ModuleMap,
    direct_sum,
    free_module,
    identity_map,
    zero_map,
    zero_module,
)
from .complexes import ChainMap, CyclicComplex, zero_chain_map
from .diagrams import CxDiagram, ModDiagram, constant_diagram, pullback
from .posets import FinPoset, PosetMap
from .scalar import QQ


def random_module(rng: random.Random, p, max_rank=3, max_exp=3) -> FpModule:
    rank = rng.randint(0, max_rank)
    tors = sorted(rng.randint(1, max_exp) for _ in range(rng.randint(0, max_rank)))
    return FpModule(p, rank, tuple(tors))


def random_matrix_map(rng, M: FpModule, N: FpModule) -> ModuleMap:
    """A uniformly scruffy well-defined map M -> N."""
    p = M.p
    rows = []
    for i in range(N.ngens):
        e_t = N.gen_exponent(i)
        row = []
        for j in range(M.ngens):
            e_s = M.gen_exponent(j)
            if e_t == float("inf") and e_s != float("inf"):
                row.append(QQ(0))
                continue
            need = 0
            if e_t != float("inf") and e_s != float("inf"):
                need = max(0, int(e_t - e_s))
            elif e_t != float("inf"):
                need = 0
            row.append(QQ(rng.randint(-4, 4) * p**need))
        rows.append(tuple(row))
    return ModuleMap(M, N, Matrix(rows, ncols=M.ngens))


def random_automorphism(rng, M: FpModule) -> ModuleMap:
    """Random valuation-respecting automorphism (unit lower x upper)."""
    p = M.p
    g = M.ngens

    def tri(upper):
        rows = []
        for i in range(g):
            e_i = M.gen_exponent(i)
            row = []
            for j in range(g):
                if i == j:
                    u = rng.choice([1, 2, -1, -2, 4])
                    row.append(QQ(u))
                    continue
                lower_ok = (i > j) != upper
                if not lower_ok:
                    row.append(QQ(0))
                    continue
                e_j = M.gen_exponent(j)
                if e_i == float("inf") and e_j != float("inf"):
                    row.append(QQ(0))
                    continue
                need = 0
                if e_i != float("inf") and e_j != float("inf"):
                    need = max(0, int(e_i - e_j))
                row.append(QQ(rng.randint(-2, 2) * p**need))
            rows.append(tuple(row))
        return ModuleMap(M, M, Matrix(rows, ncols=g))

    return tri(False) @ tri(True)


def random_complex(
    rng, p, max_rank=3, max_exp=3, flat=False, scramble=True
) -> CyclicComplex:
    """Random N-cyclic complex built from elementary pieces.

    Each degree receives a two-term cell [R -> S] (sitting in slots n and
    n+1) and an optional concentrated module, so the differential squares
    to zero by construction; a final conjugation by random automorphisms
    hides the block structure.
    """
    N = 2 * p - 2

    def rmod():
        if flat:
            return free_module(p, rng.randint(0, max_rank))
        return random_module(rng, p, max_rank=max_rank, max_exp=max_exp)

    parts = [[] for _ in range(N)]
    blocks = [dict() for _ in range(N)]
    for n in range(N):
        R, S = rmod(), rmod()
        si = len(parts[n])
        parts[n].append(R)
        ti = len(parts[(n + 1) % N])
        parts[(n + 1) % N].append(S)
        blocks[n][(ti, si)] = random_matrix_map(rng, R, S)
        if rng.random() < 0.4:
            parts[n].append(rmod())
    sums = [direct_sum(ms, p) for ms in parts]
    diffs = [sums[(n + 1) % N].map_from_blocks(sums[n], blocks[n]) for n in range(N)]
    C = CyclicComplex(p, [s.module for s in sums], diffs)
    if not scramble:
        return C
    autos = [random_automorphism(rng, m) for m in C.modules]
    inv = [a.inverse() for a in autos]
    mods = C.modules
    diffs = [autos[(n + 1) % N] @ C.diffs[n] @ inv[n] for n in range(N)]
    return CyclicComplex(p, mods, diffs, check=False)


def random_flat_cell_complex(rng, p, max_rank=3, max_exp=3, scramble=True) -> CyclicComplex:
    """Random degreewise-free complex with every rank <= max_rank.

    Uses the cell decomposition of free complexes over a PID: a sum of
    two-term cells [Z --p^k--> Z] and single free points, with cell
    counts chosen so the per-degree ranks respect the bound; a final
    conjugation by unit automorphisms hides the cells.
    """
    N = 2 * p - 2
    for _ in range(100):
        cells = [0] * N  # cells starting at degree n
        points = [0] * N
        for n in range(N):
            used = cells[(n - 1) % N] if n > 0 else 0
            avail = max_rank - used
            if avail < 0:
                break
            cells[n] = rng.randint(0, avail)
            points[n] = rng.randint(0, avail - cells[n])
        else:
            if cells[N - 1] + cells[0] + points[0] <= max_rank:
                break
    ranks = [cells[(n - 1) % N] + cells[n] + points[n] for n in range(N)]
    mods = [free_module(p, r) for r in ranks]
    diffs = []
    for n in range(N):
        rows = []
        # generator order at degree n: incoming cell targets, cell sources, points
        for i in range(ranks[(n + 1) % N]):
            row = [QQ(0)] * ranks[n]
            if i < cells[n]:
                k = rng.randint(0, max_exp)
                row[cells[(n - 1) % N] + i] = QQ(p) ** k
            rows.append(tuple(row))
        diffs.append(
            ModuleMap(mods[n], mods[(n + 1) % N], Matrix(rows, ncols=ranks[n]), check=False)
        )
    C = CyclicComplex(p, mods, diffs)
    if not scramble:
        return C
    autos = [random_automorphism(rng, m) for m in C.modules]
    inv = [a.inverse() for a in autos]
    return CyclicComplex(
        p,
        C.modules,
        [autos[(n + 1) % N] @ C.diffs[n] @ inv[n] for n in range(N)],
        check=False,
    )


def random_chain_map(rng, p, max_rank=2, max_exp=2, flat=False):
    """(X, Y, f) with f: X -> Y a nontrivial chain map.

    Built from shared elementary pieces: the map is a scalar times the
    identity on shared cells plus zero elsewhere, conjugated by random
    automorphisms on both sides.
    """
    N = 2 * p - 2

    def rmod():
        if flat:
            return free_module(p, rng.randint(0, max_rank))
        return random_module(rng, p, max_rank=max_rank, max_exp=max_exp)

    src_parts = [[] for _ in range(N)]
    tgt_parts = [[] for _ in range(N)]
    src_blocks = [dict() for _ in range(N)]
    tgt_blocks = [dict() for _ in range(N)]
    fmap = [dict() for _ in range(N)]  # degree -> {(tgt_idx, src_idx): map}
    for n in range(N):
        shared = rng.random() < 0.8
        R, S = rmod(), rmod()
        si = len(src_parts[n]); src_parts[n].append(R)
        sj = len(src_parts[(n + 1) % N]); src_parts[(n + 1) % N].append(S)
        g = random_matrix_map(rng, R, S)
        src_blocks[n][(sj, si)] = g
        if shared:
            ti = len(tgt_parts[n]); tgt_parts[n].append(R)
            tj = len(tgt_parts[(n + 1) % N]); tgt_parts[(n + 1) % N].append(S)
            tgt_blocks[n][(tj, ti)] = g
            c = rng.choice([0, 1, 1, 2, p])
            fmap[n][(ti, si)] = identity_map(R).scale(c)
            fmap[(n + 1) % N][(tj, sj)] = identity_map(S).scale(c)
        else:
            R2, S2 = rmod(), rmod()
            ti = len(tgt_parts[n]); tgt_parts[n].append(R2)
            tj = len(tgt_parts[(n + 1) % N]); tgt_parts[(n + 1) % N].append(S2)
            tgt_blocks[n][(tj, ti)] = random_matrix_map(rng, R2, S2)
    src_sums = [direct_sum(ms, p) for ms in src_parts]
    tgt_sums = [direct_sum(ms, p) for ms in tgt_parts]
    X = CyclicComplex(
        p,
        [s.module for s in src_sums],
        [src_sums[(n + 1) % N].map_from_blocks(src_sums[n], src_blocks[n]) for n in range(N)],
    )
    Y = CyclicComplex(
        p,
        [s.module for s in tgt_sums],
        [tgt_sums[(n + 1) % N].map_from_blocks(tgt_sums[n], tgt_blocks[n]) for n in range(N)],
    )
    parts = [tgt_sums[n].map_from_blocks(src_sums[n], fmap[n]) for n in range(N)]
    f = ChainMap(X, Y, parts)
    ax = [random_automorphism(rng, m) for m in X.modules]
    ay = [random_automorphism(rng, m) for m in Y.modules]
    axi = [a.inverse() for a in ax]
    X2 = CyclicComplex(
        p, X.modules, [ax[(n + 1) % N] @ X.diffs[n] @ axi[n] for n in range(N)], check=False
    )
    ayi = [a.inverse() for a in ay]
    Y2 = CyclicComplex(
        p, Y.modules, [ay[(n + 1) % N] @ Y.diffs[n] @ ayi[n] for n in range(N)], check=False
    )
    f2 = ChainMap(X2, Y2, [ay[n] @ parts[n] @ axi[n] for n in range(N)])
    return X2, Y2, f2


def random_poset(rng, max_elems=8) -> FinPoset:
    n = rng.randint(1, max_elems)
    elems = list(range(n))
    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                rels.append((i, j))
    return FinPoset.from_relations(elems, rels)


def random_monotone_map(rng, P: FinPoset, Q: FinPoset) -> PosetMap:
    """Random monotone map, built along a linear extension with retries."""
    for _ in range(200):
        out = {}
        ok = True
        for x in P.topo_order():
            lower = [out[a] for (a, b) in P.hasse if b == x]
            candidates = [
                q
                for q in Q.elements
                if all(Q.leq(l, q) for l in lower)
            ]
            if not candidates:
                ok = False
                break
            out[x] = rng.choice(candidates)
        if ok:
            return PosetMap(P, Q, out)
    raise RuntimeError("failed to sample a monotone map")


def random_mod_diagram(rng, P: FinPoset, p, max_rank=2, max_exp=2, cofibrant=False) -> ModDiagram:
    """Random module diagram over P.

    Cofibrant diagrams are sums of one-vertex extensions (values placed
    at a vertex and spread over its up-set by identities); general
    diagrams add a chain of maps pulled back along the height function,
    which introduces non-monomorphic latchings.
    """
    pieces = []
    for d in P.elements:
        if rng.random() < 0.7:
            M = random_module(rng, p, max_rank=max_rank, max_exp=max_exp)
            pieces.append((d, M))
    verts = {c: [] for c in P.elements}
    for (d, M) in pieces:
        for c in P.elements:
            if P.leq(d, c):
                verts[c].append(M)
    sums = {c: direct_sum(verts[c], p) for c in P.elements}
    edges = {}
    for (a, b) in P.hasse:
        blocks = {}
        # summand order in verts is the piece order restricted to the down-set
        idx_a = [k for k, (d, M) in enumerate(pieces) if P.leq(d, a)]
        idx_b = [k for k, (d, M) in enumerate(pieces) if P.leq(d, b)]
        for pos_a, k in enumerate(idx_a):
            pos_b = idx_b.index(k)
            blocks[(pos_b, pos_a)] = identity_map(pieces[k][1])
        edges[(a, b)] = sums[b].map_from_blocks(sums[a], blocks)
    X = ModDiagram(P, {c: sums[c].module for c in P.elements}, edges, check=False, p=p)
    if cofibrant:
        return _twist(rng, X)
    # add a pulled-back chain to break cofibrancy
    h = P.height
    chain = FinPoset(tuple(range(h + 1)), tuple((i, i + 1) for i in range(h)))
    depth = {}
    for x in P.topo_order():
        below = [depth[a] + 1 for (a, b) in P.hasse if b == x]
        depth[x] = max(below, default=0)
    hmap = PosetMap(P, chain, {x: depth[x] for x in P.elements})
    values = [random_module(rng, p, max_rank=max_rank, max_exp=max_exp) for _ in range(h + 1)]
    cedges = {
        (i, i + 1): random_matrix_map(rng, values[i], values[i + 1]) for i in range(h)
    }
    chain_diag = ModDiagram(chain, dict(enumerate(values)), cedges, check=False, p=p)
    Y = pullback(hmap, chain_diag)
    both = {
        c: direct_sum([X.vertices[c], Y.vertices[c]], p) for c in P.elements
    }
    edges = {}
    for (a, b) in P.hasse:
        blocks = {(0, 0): X.edges[(a, b)], (1, 1): Y.edges[(a, b)]}
        edges[(a, b)] = both[b].map_from_blocks(both[a], blocks)
    Z = ModDiagram(P, {c: both[c].module for c in P.elements}, edges, check=False, p=p)
    return _twist(rng, Z)


def _twist(rng, X: ModDiagram) -> ModDiagram:
    autos = {c: random_automorphism(rng, X.vertices[c]) for c in X.shape.elements}
    inv = {c: autos[c].inverse() for c in X.shape.elements}
    edges = {
        (a, b): autos[b] @ X.edges[(a, b)] @ inv[a] for (a, b) in X.shape.hasse
    }
    return ModDiagram(X.shape, dict(X.vertices), edges, check=False, p=X.p)


def random_cx_diagram(rng, P: FinPoset, p, max_rank=1, max_exp=2, flat=False) -> CxDiagram:
    """Complex diagram: one-vertex extensions of random complexes."""
    pieces = []
    for d in P.elements:
        if rng.random() < 0.6:
            C = random_complex(rng, p, max_rank=max_rank, max_exp=max_exp, flat=flat)
            pieces.append((d, C))
    from .derived import _dsum_complexes

    verts = {}
    inj_index = {}
    for c in P.elements:
        mine = [C for (d, C) in pieces if P.leq(d, c)]
        total, injs, projs = _dsum_complexes(mine, p)
        verts[c] = total
        inj_index[c] = ([k for k, (d, C) in enumerate(pieces) if P.leq(d, c)], injs, projs)
    edges = {}
    for (a, b) in P.hasse:
        idx_a, injs_a, projs_a = inj_index[a]
        idx_b, injs_b, projs_b = inj_index[b]
        e = zero_chain_map(verts[a], verts[b])
        for pos_a, k in enumerate(idx_a):
            pos_b = idx_b.index(k)
            e = e + (injs_b[pos_b] @ projs_a[pos_a])
        edges[(a, b)] = e
    return CxDiagram(P, verts, edges, check=False, p=p)
