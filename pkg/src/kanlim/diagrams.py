"""Poset-indexed diagrams of modules and of cyclic complexes.

Edge maps are stored on Hasse edges only; composites along longer
intervals are generated on demand and functoriality (path independence)
is validated by exhaustive interval comparison at construction time for
hand-built diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    ChainMap,
    CyclicComplex,
    identity_chain_map,
    tensor_chain_map,
    tensor_cyclic,
    zero_chain_map,
)
from .matrix import Matrix
from .palgebra import (
    FpModule,
    ModuleMap,
    PAlgebraError,
    Subquotient,
    direct_sum,
    identity_map,
    tensor_map,
    tensor_module,
    zero_map,
    zero_module,
)
from .posets import FinPoset, PosetMap, slice_to


class DiagramError(PAlgebraError):
    pass


class _BaseDiagram:
    __slots__ = ("shape", "vertices", "edges", "_totals", "p")

    def __init__(self, shape: FinPoset, vertices: dict, edges: dict, check=True, p=None):
        if set(vertices) != set(shape.elements):
            raise DiagramError("vertex values must cover the shape")
        if set(edges) != set(shape.hasse):
            raise DiagramError("edge maps must cover exactly the Hasse edges")
        self.shape = shape
        self.vertices = dict(vertices)
        self.edges = dict(edges)
        self._totals = {}
        ps = {v.p for v in self.vertices.values()}
        if len(ps) > 1:
            raise DiagramError("mixed primes in diagram")
        if ps:
            vp = ps.pop()
            if p is not None and p != vp:
                raise DiagramError("stated prime disagrees with vertex values")
            p = vp
        if p is None:
            raise DiagramError("empty diagram needs an explicit prime")
        self.p = p
        if check:
            self._validate()

    def _identity(self, value):
        raise NotImplementedError

    def _endpoints_ok(self, edge_map, a, b):
        raise NotImplementedError

    def _validate(self):
        for (a, b), f in self.edges.items():
            if not self._endpoints_ok(f, a, b):
                raise DiagramError(f"edge ({a}, {b}) has wrong endpoints")
        # path independence on every interval
        for a in self.shape.elements:
            reached = {a: self._identity(self.vertices[a])}
            for x in self.shape.topo_order():
                if x != a and not self.shape.lt(a, x):
                    continue
                for (u, v) in self.shape.hasse:
                    if u != x or (v != a and not self.shape.lt(a, v)):
                        continue
                    if x not in reached:
                        continue
                    cand = self.edges[(u, v)] @ reached[x]
                    if v in reached:
                        if not reached[v].equal(cand):
                            raise DiagramError(
                                f"inconsistent composites {a} -> {v}"
                            )
                    else:
                        reached[v] = cand

    def total_map(self, a, b):
        """The composite along any Hasse path from a to b (a <= b)."""
        if (a, b) in self._totals:
            return self._totals[(a, b)]
        if a == b:
            out = self._identity(self.vertices[a])
        elif not self.shape.leq(a, b):
            raise DiagramError(f"{a} and {b} are not related")
        else:
            out = None
            for (u, v) in self.shape.hasse:
                if v == b and self.shape.leq(a, u):
                    out = self.edges[(u, v)] @ self.total_map(a, u)
                    break
            if out is None:  # pragma: no cover
                raise DiagramError(f"no path {a} -> {b}")
        self._totals[(a, b)] = out
        return out

    def restrict(self, subset):
        """Induced diagram on a subset (covers recomputed, maps composed)."""
        sub = self.shape.induced(subset)
        verts = {x: self.vertices[x] for x in sub.elements}
        edges = {(a, b): self.total_map(a, b) for (a, b) in sub.hasse}
        return type(self)(sub, verts, edges, check=False, p=self.p)


class ModDiagram(_BaseDiagram):
    """Diagram of FpModules over a finite poset."""

    __slots__ = ()

    def _identity(self, value):
        return identity_map(value)

    def _endpoints_ok(self, f, a, b):
        return f.source == self.vertices[a] and f.target == self.vertices[b]


class CxDiagram(_BaseDiagram):
    """Diagram of CyclicComplexes over a finite poset."""

    __slots__ = ()

    @property
    def N(self):
        return 2 * self.p - 2

    def _identity(self, value):
        return identity_chain_map(value)

    def _endpoints_ok(self, f, a, b):
        return f.source == self.vertices[a] and f.target == self.vertices[b]

    def degreewise(self, n) -> ModDiagram:
        verts = {x: c.module(n) for x, c in self.vertices.items()}
        edges = {e: f.part(n) for e, f in self.edges.items()}
        return ModDiagram(self.shape, verts, edges, check=False, p=self.p)


def constant_diagram(shape, value):
    if isinstance(value, CyclicComplex):
        return CxDiagram(
            shape,
            {x: value for x in shape},
            {e: identity_chain_map(value) for e in shape.hasse},
            check=False,
        )
    return ModDiagram(
        shape,
        {x: value for x in shape},
        {e: identity_map(value) for e in shape.hasse},
        check=False,
    )


def pullback(f: PosetMap, X):
    """(f^* X)_c = X_{f(c)}, edges by the total maps of X."""
    m = f.as_dict
    shape = f.source
    verts = {c: X.vertices[m[c]] for c in shape.elements}
    edges = {(a, b): X.total_map(m[a], m[b]) for (a, b) in shape.hasse}
    return type(X)(shape, verts, edges, check=False, p=X.p)


# ---------------------------------------------------------------------------
# colimits
# ---------------------------------------------------------------------------


@dataclass
class Colimit:
    """Strict colimit of a module diagram with its universal data."""

    module: FpModule
    legs: dict  # vertex -> ModuleMap X_c -> module
    _sum: object
    _coker: Subquotient
    _order: tuple

    def induced(self, target: FpModule, legs: dict) -> ModuleMap:
        """Unique map out of the colimit restricting to ``legs``."""
        from .scalar import QQ

        ds = self._sum
        rows = [[QQ(0)] * ds.module.ngens for _ in range(target.ngens)]
        for j, c in enumerate(self._order):
            place = ds.placements[j]
            lm = legs[c].mat
            for r in range(target.ngens):
                row = rows[r]
                lrow = lm.rows[r]
                for k, x in enumerate(lrow):
                    if x != 0:
                        row[place[k]] = x
        combined = Matrix._raw(tuple(tuple(r) for r in rows), ds.module.ngens)
        mat = combined * self._coker.reps()
        return ModuleMap(self.module, target, mat, check=False)


def strict_colim(X: ModDiagram) -> Colimit:
    """coker( sum over Hasse edges (iota_a - iota_b o X_e) -> sum X_c ).

    The legs form the universal cocone.
    """
    order = X.shape.elements
    ds = direct_sum([X.vertices[c] for c in order], X.p)
    pos = {c: k for k, c in enumerate(order)}
    cols = []
    for (a, b) in X.shape.hasse:
        inj_a = ds.injections[pos[a]]
        inj_b = ds.injections[pos[b]]
        rel = inj_a - (inj_b @ X.edges[(a, b)])
        for j in range(rel.mat.ncols):
            cols.append(rel.mat.col(j))
    T = Matrix.from_cols(cols, ds.module.ngens)
    cok = Subquotient(ds.module, T=T)
    epi_mat = cok.classify(Matrix.identity(ds.module.ngens))
    legs = {}
    for c in order:
        legs[c] = ModuleMap(
            X.vertices[c],
            cok.module,
            epi_mat * ds.injections[pos[c]].mat,
            check=False,
        )
    return Colimit(cok.module, legs, ds, cok, order)


def strict_colim_cx(X: CxDiagram):
    """(colimit complex, legs as chain maps); degreewise colimits with
    induced differentials."""
    N = X.N
    per_degree = [strict_colim(X.degreewise(n)) for n in range(N)]
    diffs = []
    for n in range(N):
        nxt = per_degree[(n + 1) % N]
        legs = {
            c: nxt.legs[c] @ X.vertices[c].diffs[n] for c in X.shape.elements
        }
        diffs.append(per_degree[n].induced(nxt.module, legs))
    colim = CyclicComplex(X.p, tuple(c.module for c in per_degree), tuple(diffs))
    legs = {
        c: ChainMap(
            X.vertices[c],
            colim,
            tuple(per_degree[n].legs[c] for n in range(N)),
            check=False,
        )
        for c in X.shape.elements
    }
    return colim, legs


def strict_lkan(f: PosetMap, X: ModDiagram) -> ModDiagram:
    """Left Kan extension: vertex at d is the colimit over {c : f(c) <= d}."""
    D = f.target
    colims = {}
    for d in D.elements:
        sl = slice_to(f, d)
        colims[d] = strict_colim(X.restrict(sl.elements))
    verts = {d: colims[d].module for d in D.elements}
    edges = {}
    for (d, dp) in D.hasse:
        legs = {c: colims[dp].legs[c] for c in colims[d]._order}
        edges[(d, dp)] = colims[d].induced(colims[dp].module, legs)
    return ModDiagram(D, verts, edges, check=False)


def strict_lkan_cx(f: PosetMap, X: CxDiagram) -> CxDiagram:
    D = f.target
    data = {}
    per_degree = {}
    for d in D.elements:
        sl = slice_to(f, d)
        restricted = X.restrict(sl.elements)
        per_degree[d] = [strict_colim(restricted.degreewise(n)) for n in range(X.N)]
        colims = per_degree[d]
        diffs = []
        for n in range(X.N):
            nxt = colims[(n + 1) % X.N]
            legs = {c: nxt.legs[c] @ X.vertices[c].diffs[n] for c in sl.elements}
            diffs.append(colims[n].induced(nxt.module, legs))
        data[d] = CyclicComplex(X.p, tuple(c.module for c in colims), tuple(diffs))
    edges = {}
    for (d, dp) in D.hasse:
        parts = []
        for n in range(X.N):
            src = per_degree[d][n]
            tgt = per_degree[dp][n]
            legs = {c: tgt.legs[c] for c in src._order}
            parts.append(src.induced(tgt.module, legs))
        edges[(d, dp)] = ChainMap(data[d], data[dp], parts, check=False)
    return CxDiagram(D, data, edges, check=False)


# ---------------------------------------------------------------------------
# Reedy cofibrancy and diagram tensor
# ---------------------------------------------------------------------------


def latching_map(X: ModDiagram, c) -> ModuleMap:
    """colim over {c' < c} -> X_c, induced by the edges."""
    below = X.shape.down_set(c, strict=True)
    if not below:
        return zero_map(zero_module(X.p), X.vertices[c])
    colim = strict_colim(X.restrict(below))
    legs = {b: X.total_map(b, c) for b in below}
    return colim.induced(X.vertices[c], legs)


def is_reedy_cofibrant(X) -> bool:
    """All latching maps colim_{c' < c} X -> X_c are monomorphisms.

    For complex diagrams the condition is tested degreewise.
    """
    if isinstance(X, CxDiagram):
        return all(is_reedy_cofibrant(X.degreewise(n)) for n in range(X.N))
    for c in X.shape.elements:
        below = X.shape.down_set(c, strict=True)
        if not below:
            continue
        colim = strict_colim(X.restrict(below))
        legs = {b: X.total_map(b, c) for b in below}
        if not colim.induced(X.vertices[c], legs).is_mono():
            return False
    return True


def diagram_tensor(X, U):
    """Vertexwise tensor over the product poset.

    For module diagrams the edges are f (x) 1 and 1 (x) g; for complex
    diagrams the cyclic tensor with Koszul signs is used.
    """
    shape = X.shape.product(U.shape)
    if isinstance(X, CxDiagram) != isinstance(U, CxDiagram):
        raise DiagramError("cannot tensor a module diagram with a complex diagram")
    if isinstance(X, CxDiagram):
        verts = {
            (c, d): tensor_cyclic(X.vertices[c], U.vertices[d])
            for c in X.shape.elements
            for d in U.shape.elements
        }
        edges = {}
        for ((a, b), (a2, b2)) in shape.hasse:
            if a == a2:
                f = identity_chain_map(X.vertices[a])
                g = U.edges[(b, b2)]
            else:
                f = X.edges[(a, a2)]
                g = identity_chain_map(U.vertices[b])
            edges[((a, b), (a2, b2))] = tensor_chain_map(f, g)
        return CxDiagram(shape, verts, edges, check=False)
    tds = {
        (c, d): tensor_module(X.vertices[c], U.vertices[d])
        for c in X.shape.elements
        for d in U.shape.elements
    }
    verts = {k: td.module for k, td in tds.items()}
    edges = {}
    for ((a, b), (a2, b2)) in shape.hasse:
        if a == a2:
            f = identity_map(X.vertices[a])
            g = U.edges[(b, b2)]
        else:
            f = X.edges[(a, a2)]
            g = identity_map(U.vertices[b])
        edges[((a, b), (a2, b2))] = tensor_map(f, g, tds[(a, b)], tds[(a2, b2)])
    return ModDiagram(shape, verts, edges, check=False)
