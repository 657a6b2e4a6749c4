"""Finite posets, monotone maps, and the specific index shapes used by
the derived Kan extension machinery.

Elements are hashable identifiers (strings like ``"beta_0"``, ints, or
tuples of identifiers for product posets); the element tuple fixes a
deterministic order used everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass


class PosetError(Exception):
    pass


class NotAPoset(PosetError):
    pass


class NotMonotone(PosetError):
    pass


class ElementNotFound(PosetError):
    pass


class FinPoset:
    """A finite poset with Hasse (covering) edges.

    Construct with :meth:`from_hasse` when the covers are known, or
    :meth:`from_relations` for an arbitrary generating relation set (which
    must not create cycles -- antisymmetry is enforced).
    """

    __slots__ = ("elements", "hasse", "_index", "_leq", "_height")

    def __init__(self, elements, hasse):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise NotAPoset("duplicate elements")
        index = {x: i for i, x in enumerate(elements)}
        for a, b in hasse:
            if a not in index or b not in index:
                raise ElementNotFound(f"edge ({a}, {b}) uses unknown element")
        self.elements = elements
        self._index = index
        hasse = tuple(sorted(set(hasse), key=lambda e: (index[e[0]], index[e[1]])))
        leq = self._closure(elements, hasse, index)
        reduced = []
        for a, b in hasse:
            if any(
                (a, c) in leq and (c, b) in leq and c != a and c != b
                for c in elements
            ):
                raise NotAPoset(f"edge ({a}, {b}) is not a covering relation")
            reduced.append((a, b))
        self.hasse = tuple(reduced)
        self._leq = leq
        self._height = None

    @staticmethod
    def _closure(elements, edges, index):
        up = {x: set() for x in elements}
        for a, b in edges:
            if a == b:
                raise NotAPoset(f"relation {a} < {a}")
            up[a].add(b)
        order = {}
        seen = {}
        for x in elements:
            FinPoset._reach(x, up, seen)
        leq = set()
        for x in elements:
            leq.add((x, x))
            for y in seen[x]:
                if y == x:
                    continue
                leq.add((x, y))
        for x in elements:
            for y in seen[x]:
                if y != x and x in seen[y]:
                    raise NotAPoset(f"cycle through {x} and {y}")
        return frozenset(leq)

    @staticmethod
    def _reach(x, up, seen):
        if x in seen:
            return seen[x]
        seen[x] = {x}
        acc = {x}
        stack = [x]
        visited = {x}
        while stack:
            c = stack.pop()
            for y in up[c]:
                if y not in visited:
                    visited.add(y)
                    acc.add(y)
                    stack.append(y)
        seen[x] = acc
        return acc

    @classmethod
    def from_hasse(cls, elements, hasse):
        return cls(elements, hasse)

    @classmethod
    def from_relations(cls, elements, relations):
        """Build from a generating set of relations; raises NotAPoset on a
        cycle, and reduces shortcuts to covering edges."""
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        leq = cls._closure(elements, tuple(relations), index)
        strict = [(a, b) for (a, b) in leq if a != b]
        covers = [
            (a, b)
            for (a, b) in strict
            if not any((a, c) in leq and (c, b) in leq and c not in (a, b) for c in elements)
        ]
        return cls(elements, covers)

    # -- order ----------------------------------------------------------
    def leq(self, a, b):
        return (a, b) in self._leq

    def lt(self, a, b):
        return a != b and (a, b) in self._leq

    def __contains__(self, x):
        return x in self._index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, FinPoset)
            and self.elements == other.elements
            and self.hasse == other.hasse
        )

    def __hash__(self):
        return hash((self.elements, self.hasse))

    def __repr__(self):
        return f"FinPoset({len(self.elements)} elements, {len(self.hasse)} covers)"

    def down_set(self, x, strict=False):
        if x not in self._index:
            raise ElementNotFound(x)
        return tuple(
            y for y in self.elements if self.leq(y, x) and (not strict or y != x)
        )

    def up_set(self, x, strict=False):
        if x not in self._index:
            raise ElementNotFound(x)
        return tuple(
            y for y in self.elements if self.leq(x, y) and (not strict or y != x)
        )

    def covers_into(self, x):
        return tuple(a for (a, b) in self.hasse if b == x)

    def maximal(self):
        return tuple(
            x for x in self.elements if all(not self.lt(x, y) for y in self.elements)
        )

    def minimal(self):
        return tuple(
            x for x in self.elements if all(not self.lt(y, x) for y in self.elements)
        )

    @property
    def height(self):
        """Longest chain length: sup k with x_0 < x_1 < ... < x_k."""
        if self._height is None:
            depth = {}
            for x in self.topo_order():
                below = [depth[a] + 1 for (a, b) in self.hasse if b == x]
                depth[x] = max(below, default=0)
            self._height = max(depth.values(), default=0)
        return self._height

    def topo_order(self):
        out = []
        placed = set()
        elems = list(self.elements)
        while elems:
            progressed = False
            for x in list(elems):
                if all(a in placed for (a, b) in self.hasse if b == x):
                    out.append(x)
                    placed.add(x)
                    elems.remove(x)
                    progressed = True
            if not progressed:  # pragma: no cover - acyclicity already enforced
                raise NotAPoset("cycle detected in topo sort")
        return tuple(out)

    def induced(self, subset):
        """Induced subposet; covering relations are recomputed."""
        subset = [x for x in self.elements if x in set(subset)]
        rels = [
            (a, b)
            for a in subset
            for b in subset
            if a != b and self.leq(a, b)
        ]
        return FinPoset.from_relations(subset, rels)

    def product(self, other):
        elems = [(a, b) for a in self.elements for b in other.elements]
        hasse = []
        for a, a2 in self.hasse:
            for b in other.elements:
                hasse.append(((a, b), (a2, b)))
        for a in self.elements:
            for b, b2 in other.hasse:
                hasse.append(((a, b), (a, b2)))
        return FinPoset(elems, hasse)

    def is_connected(self):
        if not self.elements:
            return False
        adj = {x: set() for x in self.elements}
        for a, b in self.hasse:
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.elements[0]}
        stack = [self.elements[0]]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.elements)


@dataclass(frozen=True)
class PosetMap:
    source: FinPoset
    target: FinPoset
    mapping: tuple  # pairs (x, f(x)) in source element order

    def __init__(self, source, target, mapping):
        if isinstance(mapping, dict):
            items = tuple((x, mapping[x]) for x in source.elements)
        else:
            items = tuple(mapping)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", items)
        m = dict(items)
        if set(m) != set(source.elements):
            raise ElementNotFound("map must be defined on every source element")
        for x, y in items:
            if y not in target:
                raise ElementNotFound(f"{y} not in target")
        for a, b in source.hasse:
            if not target.leq(m[a], m[b]):
                raise NotMonotone(f"edge ({a}, {b}) maps to unrelated pair")

    def __call__(self, x):
        return dict(self.mapping)[x]

    @property
    def as_dict(self):
        return dict(self.mapping)

    def compose(self, other: "PosetMap") -> "PosetMap":
        if other.target != self.source:
            raise NotMonotone("poset maps do not compose")
        f, g = other.as_dict, self.as_dict
        return PosetMap(other.source, self.target, {x: g[f[x]] for x in other.source})


def identity_poset_map(P):
    return PosetMap(P, P, {x: x for x in P})


def constant_poset_map(P, Q, q):
    return PosetMap(P, Q, {x: q for x in P})


def to_point_map(P):
    return constant_poset_map(P, point_poset(), "*")


def is_monotone(f: PosetMap) -> bool:
    m = f.as_dict
    return all(f.target.leq(m[a], m[b]) for a, b in f.source.hasse)


def slice_to(f: PosetMap, d) -> FinPoset:
    """The subposet {c : f(c) <= d} of the source (a down-set)."""
    if d not in f.target:
        raise ElementNotFound(d)
    m = f.as_dict
    return f.source.induced([c for c in f.source if f.target.leq(m[c], d)])


def is_cofinal(f: PosetMap) -> bool:
    """True iff every {c : d <= f(c)} is nonempty and connected.

    This is the finality condition making colimits along f invariant
    under restriction.
    """
    m = f.as_dict
    for d in f.target:
        over = [c for c in f.source if f.target.leq(d, m[c])]
        if not over:
            return False
        if not f.source.induced(over).is_connected():
            return False
    return True


# ---------------------------------------------------------------------------
# the standard shapes
# ---------------------------------------------------------------------------


def point_poset():
    return FinPoset(("*",), ())


def poset_I():
    """The arrow 0 < 1."""
    return FinPoset((0, 1), ((0, 1),))


def poset_V():
    """Pushout corner {(1,0), (0,0), (0,1)} inside I x I, (0,0) minimal."""
    return poset_I().product(poset_I()).induced([(1, 0), (0, 0), (0, 1)])


def beta(n, N):
    return f"beta_{n % N}"


def gamma(n, N):
    return f"gamma_{n % N}"


def zeta(n, N):
    return f"zeta_{n % N}"


def crown_poset(N) -> FinPoset:
    """C_N: vertices beta_n, zeta_n with beta_n <= zeta_n, beta_{n+1} <= zeta_n."""
    if N < 2 or N % 2:
        raise NotAPoset("crown needs even N >= 2")
    elems = [beta(n, N) for n in range(N)] + [zeta(n, N) for n in range(N)]
    hasse = []
    for n in range(N):
        hasse.append((beta(n, N), zeta(n, N)))
        hasse.append((beta((n + 1) % N, N), zeta(n, N)))
    return FinPoset(elems, hasse)


def butterfly_poset(N) -> FinPoset:
    """D_N with layers beta < gamma < zeta.

    Relations: beta_n <= gamma_n, beta_{n+1} <= gamma_n, gamma_n <= zeta_n,
    gamma_{n+1} <= zeta_n.  (The literal generating set with
    gamma_{n+1} <= beta_n instead of gamma_{n+1} <= zeta_n closes into a
    cycle for even N and is rejected by :class:`FinPoset`; this is the
    unique minimal correction making both pr and i monotone.)
    """
    elems = (
        [beta(n, N) for n in range(N)]
        + [gamma(n, N) for n in range(N)]
        + [zeta(n, N) for n in range(N)]
    )
    hasse = []
    for n in range(N):
        hasse.append((beta(n, N), gamma(n, N)))
        hasse.append((beta((n + 1) % N, N), gamma(n, N)))
        hasse.append((gamma(n, N), zeta(n, N)))
        hasse.append((gamma((n + 1) % N, N), zeta(n, N)))
    return FinPoset(elems, hasse)


def butterfly_poset_literal(N) -> FinPoset:
    """The uncorrected relation set; raises NotAPoset for even N."""
    elems = (
        [beta(n, N) for n in range(N)]
        + [gamma(n, N) for n in range(N)]
        + [zeta(n, N) for n in range(N)]
    )
    rels = []
    for n in range(N):
        rels.append((beta((n + 1) % N, N), gamma(n, N)))
        rels.append((beta(n, N), gamma(n, N)))
        rels.append((gamma((n + 1) % N, N), beta(n, N)))
        rels.append((gamma(n, N), zeta(n, N)))
    return FinPoset.from_relations(elems, rels)


def pr_map(N) -> PosetMap:
    """pr : C_N x C_N -> D_N, additive on indices, layer by vertex types."""
    C = crown_poset(N)
    CC = C.product(C)
    D = butterfly_poset(N)

    def value(pair):
        a, b = pair
        sa, na = a.split("_")
        sb, nb = b.split("_")
        n = (int(na) + int(nb)) % N
        if sa == "beta" and sb == "beta":
            return beta(n, N)
        if sa == "zeta" and sb == "zeta":
            return zeta(n, N)
        return gamma(n, N)

    return PosetMap(CC, D, {x: value(x) for x in CC})


def i_map(N) -> PosetMap:
    """i : C_N -> D_N, beta_n -> gamma_n, zeta_n -> zeta_n (cofinal image)."""
    C = crown_poset(N)
    D = butterfly_poset(N)
    out = {}
    for x in C:
        kind, n = x.split("_")
        out[x] = gamma(int(n), N) if kind == "beta" else zeta(int(n), N)
    return PosetMap(C, D, out)


def p_V_map() -> PosetMap:
    """I x I -> I sending only (1,1) to 1."""
    II = poset_I().product(poset_I())
    return PosetMap(II, poset_I(), {x: 1 if x == (1, 1) else 0 for x in II})


def p_edge_map(f: PosetMap, d, dprime) -> PosetMap:
    """p_d^{d'} : (C -> d') -> I, c -> 0 iff f(c) <= d."""
    if not f.target.leq(d, dprime):
        raise ElementNotFound(f"{d} <= {dprime} is not an edge of the target")
    S = slice_to(f, dprime)
    m = f.as_dict
    return PosetMap(S, poset_I(), {c: 0 if f.target.leq(m[c], d) else 1 for c in S})


def cylinder_poset(f: PosetMap, d, dprime):
    """B = (C->d) x I glued to (C->d') along (C->d) x {1}.

    Returns (B, p_B : B -> I, j_B : B -> source of f); the lower layer is
    tagged as (c, 0), the upper layer keeps the elements of C->d'.
    """
    Sd = slice_to(f, d)
    Sdp = slice_to(f, dprime)
    lower = [(c, 0) for c in Sd.elements]
    elems = lower + list(Sdp.elements)
    hasse = [((a, 0), (b, 0)) for (a, b) in Sd.hasse]
    hasse += list(Sdp.hasse)
    hasse += [((c, 0), c) for c in Sd.elements]
    B = FinPoset.from_relations(elems, hasse)
    pB = PosetMap(B, poset_I(), {x: 0 if x in set(lower) else 1 for x in B})
    jB = PosetMap(
        B, f.source, {x: (x[0] if x in set(lower) else x) for x in B}
    )
    return B, pB, jB


def vo_poset(N, n) -> FinPoset:
    """Sub-poset of C_N x C_N -> zeta_n used to compute the gamma edge."""
    C = crown_poset(N)
    CC = C.product(C)
    elems = []
    for s in range(N):
        t = (n - s) % N
        elems.append((zeta(s, N), zeta(t, N)))
        elems.append((zeta(s, N), beta(t, N)))
        elems.append((beta(s, N), zeta(t, N)))
        elems.append((beta(s, N), beta(t, N)))
        elems.append((beta((s + 1) % N, N), beta(t, N)))
    return CC.induced(elems)


def vy_poset(N, n) -> FinPoset:
    """Chevron poset: beta pairs under alpha_{s,t} under zeta pairs."""
    elems = []
    rels = []
    for s in range(N):
        t = (n - s) % N
        elems.append(("alpha", s, t))
        elems.append((zeta(s, N), zeta(t, N)))
        elems.append((beta((s + 1) % N, N), beta(t, N)))
    for s in range(N):
        t = (n - s) % N
        rels.append(((beta((s + 1) % N, N), beta(t, N)), ("alpha", s, t)))
        rels.append(((beta(s, N), beta((t + 1) % N, N)), ("alpha", s, t)))
        rels.append((("alpha", s, t), (zeta(s, N), zeta(t, N))))
    return FinPoset.from_relations(elems, rels)


def w_poset(N, n) -> FinPoset:
    """The crown-shaped subposet {(zeta_s, zeta_t), (beta_{s+1}, beta_t)}."""
    C = crown_poset(N)
    CC = C.product(C)
    elems = []
    for s in range(N):
        t = (n - s) % N
        elems.append((zeta(s, N), zeta(t, N)))
        elems.append((beta((s + 1) % N, N), beta(t, N)))
    return CC.induced(elems)


def g_map(N, n) -> PosetMap:
    """VO_n -> VY_n collapsing the three middle vertices to alpha_{s,t}."""
    VO = vo_poset(N, n)
    VY = vy_poset(N, n)
    out = {}
    for x in VO:
        a, b = x
        sa, s = a.split("_")
        sb, t = b.split("_")
        s, t = int(s), int(t)
        if sa == "zeta" and sb == "zeta":
            out[x] = x
        elif sa == "beta" and sb == "beta" and (s + t) % N == (n + 1) % N:
            out[x] = x
        else:
            if sa == "beta" and sb == "beta":
                out[x] = ("alpha", s, t)
            elif sa == "zeta":
                out[x] = ("alpha", s, t)
            else:  # (beta_s, zeta_t)
                out[x] = ("alpha", s, t)
    return PosetMap(VO, VY, out)


def p_vy_map(N, n) -> PosetMap:
    VY = vy_poset(N, n)
    return PosetMap(
        VY,
        poset_I(),
        {x: 1 if (isinstance(x[0], str) and x[0].startswith("zeta")) else 0 for x in VY},
    )


def standard_posets(p=3, N=None) -> dict:
    """The named posets for the prime p (N = 2p - 2 unless given)."""
    N = N if N is not None else 2 * p - 2
    return {
        "I": poset_I(),
        "V": poset_V(),
        "C_N": crown_poset(N),
        "D_N": butterfly_poset(N),
        "VO": lambda n: vo_poset(N, n),
        "VY": lambda n: vy_poset(N, n),
        "W": lambda n: w_poset(N, n),
        "B": cylinder_poset,
    }


def standard_maps(p=3, N=None) -> dict:
    N = N if N is not None else 2 * p - 2
    return {
        "pr": pr_map(N),
        "i": i_map(N),
        "p_V": p_V_map(),
        "p_edge": p_edge_map,
        "p_B": cylinder_poset,
        "g": lambda n: g_map(N, n),
        "p_VY": lambda n: p_vy_map(N, n),
    }


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def _dot_name(x):
    if isinstance(x, tuple):
        return "(" + ",".join(_dot_name(y) for y in x) + ")"
    return str(x)


def export_dot(P: FinPoset) -> str:
    """Graphviz DOT text of the Hasse diagram, deterministic order."""
    lines = ["digraph poset {", "  rankdir=BT;"]
    for x in P.elements:
        lines.append(f'  "{_dot_name(x)}";')
    for a, b in P.hasse:
        lines.append(f'  "{_dot_name(a)}" -> "{_dot_name(b)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
