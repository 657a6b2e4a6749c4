"""Gaussian reduction of degreewise-free cyclic complexes.

Eliminating a unit entry of a differential splits off an acyclic
two-term summand; repeating until no unit entries remain shrinks a
complex to a quasi-isomorphic one whose differentials are divisible by
p.  The homotopy equivalence (phi down, psi up, phi o psi = id) is
tracked so that maps between reduced complexes can be transported.

Only valid for complexes of free modules; complexes with torsion are
returned unreduced.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import Matrix
from .palgebra import ModuleMap, free_module
from .complexes import ChainMap, CyclicComplex, identity_chain_map
from .scalar import QQ, valuation


@dataclass
class Reduction:
    complex: CyclicComplex
    down: ChainMap  # original -> reduced (phi)
    up: ChainMap  # reduced -> original (psi); down o up = id


def cohomology_table_reduced(C: CyclicComplex):
    """Cohomology table, Gaussian-reducing flat complexes first."""
    from .complexes import cohomology_table

    if C.is_flat:
        C = morse_reduce(C).complex
    return cohomology_table(C)


def _sparse_of(mat: Matrix):
    d = {}
    for i, j, x in mat.entries():
        if x != 0:
            d[(i, j)] = x
    return d


def morse_core(N, alive, d, p):
    """Destructively eliminate unit entries of sparse differentials.

    ``alive`` is a list of per-degree index lists, ``d`` a list of
    per-degree {(target_index, source_index): scalar} dicts.  No
    equivalence tracking; used when only the reduced complex matters.
    """
    from collections import deque

    work = deque()
    for n in range(N):
        for (i, j), x in d[n].items():
            if valuation(x, p) == 0:
                work.append((n, i, j))
    alive_sets = [set(a) for a in alive]
    while work:
        n, i, j = work.popleft()
        a = d[n].get((i, j))
        if a is None or valuation(a, p) != 0:
            continue
        np1 = (n + 1) % N
        nm1 = (n - 1) % N
        col = {r: x for (r, s), x in d[n].items() if s == j and r != i}
        row = {s: x for (r, s), x in d[n].items() if r == i and s != j}
        for r, cr in col.items():
            coef = cr / a
            for s, bs in row.items():
                key = (r, s)
                v = d[n].get(key, QQ(0)) - coef * bs
                if v == 0:
                    d[n].pop(key, None)
                else:
                    d[n][key] = v
                    if valuation(v, p) == 0:
                        work.append((n, r, s))
        for key in [k for k in d[n] if k[0] == i or k[1] == j]:
            del d[n][key]
        for key in [k for k in d[nm1] if k[0] == j]:
            del d[nm1][key]
        for key in [k for k in d[np1] if k[1] == i]:
            del d[np1][key]
        alive_sets[n].discard(j)
        alive_sets[np1].discard(i)
    return [sorted(s) for s in alive_sets], d


def morse_reduce(C: CyclicComplex, check=False) -> Reduction:
    """Split off acyclic summands along unit entries of the differentials."""
    if not C.is_flat:
        return Reduction(C, identity_chain_map(C), identity_chain_map(C))
    p, N = C.p, C.N
    alive = [list(range(C.modules[n].ngens)) for n in range(N)]
    d = [_sparse_of(C.diffs[n].mat) for n in range(N)]
    # phi[n]: rows indexed by current gens, cols by original gens
    phi = [{i: {i: QQ(1)} for i in alive[n]} for n in range(N)]
    # psi[n]: cols indexed by current gens, rows by original gens
    psi = [{i: {i: QQ(1)} for i in alive[n]} for n in range(N)]

    from collections import deque

    work = deque()
    for n in range(N):
        for (i, j), x in d[n].items():
            if valuation(x, p) == 0:
                work.append((n, i, j))

    while work:
        n, i, j = work.popleft()
        a = d[n].get((i, j))
        if a is None or valuation(a, p) != 0:
            continue
        np1 = (n + 1) % N
        nm1 = (n - 1) % N
        col = {r: x for (r, s), x in d[n].items() if s == j and r != i}
        row = {s: x for (r, s), x in d[n].items() if r == i and s != j}
        # d[n] := d[n] - col * row / a  on the remaining block
        for r, cr in col.items():
            coef = cr / a
            for s, bs in row.items():
                key = (r, s)
                v = d[n].get(key, QQ(0)) - coef * bs
                if v == 0:
                    d[n].pop(key, None)
                else:
                    d[n][key] = v
                    if valuation(v, p) == 0:
                        work.append((n, r, s))
        for key in [k for k in d[n] if k[0] == i or k[1] == j]:
            del d[n][key]
        # drop row j of d[n-1], column i of d[n+1]
        for key in [k for k in d[nm1] if k[0] == j]:
            del d[nm1][key]
        for key in [k for k in d[np1] if k[1] == i]:
            del d[np1][key]
        # phi at degree n: drop current row j
        del phi[n][j]
        # phi at degree n+1: row_r -= (col_r / a) * row_i, then drop row i
        base = phi[np1][i]
        for r, cr in col.items():
            coef = cr / a
            tgt = phi[np1][r]
            for oc, val in base.items():
                v = tgt.get(oc, QQ(0)) - coef * val
                if v == 0:
                    tgt.pop(oc, None)
                else:
                    tgt[oc] = v
        del phi[np1][i]
        # psi at degree n: col_s -= (row_s / a) * col_j, then drop col j
        basec = psi[n][j]
        for s, bs in row.items():
            coef = bs / a
            tgt = psi[n][s]
            for orow, val in basec.items():
                v = tgt.get(orow, QQ(0)) - coef * val
                if v == 0:
                    tgt.pop(orow, None)
                else:
                    tgt[orow] = v
        del psi[n][j]
        # psi at degree n+1: drop col i
        del psi[np1][i]
        alive[n].remove(j)
        alive[np1].remove(i)

    mods = [free_module(p, len(alive[n])) for n in range(N)]
    pos = [{g: k for k, g in enumerate(sorted(alive[n]))} for n in range(N)]
    diffs = []
    for n in range(N):
        rows = [[QQ(0)] * len(alive[n]) for _ in range(len(alive[(n + 1) % N]))]
        for (i, j), x in d[n].items():
            rows[pos[(n + 1) % N][i]][pos[n][j]] = x
        diffs.append(
            ModuleMap(
                mods[n],
                mods[(n + 1) % N],
                Matrix(tuple(tuple(r) for r in rows), ncols=len(alive[n])),
                check=False,
            )
        )
    small = CyclicComplex(p, mods, diffs, check=check)

    down_parts = []
    up_parts = []
    for n in range(N):
        g_orig = C.modules[n].ngens
        ph = [[QQ(0)] * g_orig for _ in range(len(alive[n]))]
        for cur, rowd in phi[n].items():
            for oc, val in rowd.items():
                ph[pos[n][cur]][oc] = val
        down_parts.append(
            ModuleMap(
                C.modules[n],
                mods[n],
                Matrix(tuple(tuple(r) for r in ph), ncols=g_orig),
                check=False,
            )
        )
        ps = [[QQ(0)] * len(alive[n]) for _ in range(g_orig)]
        for cur, cold in psi[n].items():
            for orow, val in cold.items():
                ps[orow][pos[n][cur]] = val
        up_parts.append(
            ModuleMap(
                mods[n],
                C.modules[n],
                Matrix(tuple(tuple(r) for r in ps), ncols=len(alive[n])),
                check=False,
            )
        )
    down = ChainMap(C, small, down_parts, check=check)
    up = ChainMap(small, C, up_parts, check=check)
    return Reduction(small, down, up)
