"""Dense exact matrices over Z_(p) and the Smith normal form solvers.

Everything downstream (canonical forms, kernels, colimits, spectral
sequences) reduces to the routines in this file.  Matrices are immutable
tuples of rows of exact rationals.  The Smith normal form uses a fixed
pivot rule -- entry of minimal p-adic valuation, ties broken by row-major
position -- so every computation in the package is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalar import INF, QQ, rational, valuation

_ZERO = QQ(0)
_ONE = QQ(1)


class Matrix:
    """An immutable exact matrix; rows are tuples of rationals."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(QQ(x) for x in row) for row in rows)
        self.rows = rows
        self.nrows = len(rows)
        if rows:
            self.ncols = len(rows[0])
            if any(len(r) != self.ncols for r in rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols mismatch")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs explicit ncols")
            self.ncols = ncols

    @classmethod
    def _raw(cls, rows, ncols):
        """Internal constructor: rows are already tuples of exact scalars."""
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(m, n):
        return Matrix._raw(tuple((_ZERO,) * n for _ in range(m)), n)

    @staticmethod
    def identity(n):
        return Matrix._raw(
            tuple(
                tuple(_ONE if i == j else _ZERO for j in range(n))
                for i in range(n)
            ),
            n,
        )

    @staticmethod
    def from_cols(cols, nrows):
        if not cols:
            return Matrix.zero(nrows, 0)
        return Matrix(tuple(zip(*cols)), ncols=len(cols))

    @staticmethod
    def column(entries):
        return Matrix(tuple((QQ(x),) for x in entries), ncols=1)

    # -- access --------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def cols(self):
        return [self.col(j) for j in range(self.ncols)]

    def entries(self):
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                yield i, j, x

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_zero(self):
        return all(x == 0 for row in self.rows for x in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"Matrix({[list(map(str, r)) for r in self.rows]}, {self.nrows}x{self.ncols})"

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch in +")
        return Matrix._raw(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            ),
            self.ncols,
        )

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch in -")
        return Matrix._raw(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            ),
            self.ncols,
        )

    def __neg__(self):
        return Matrix._raw(
            tuple(tuple(-a for a in row) for row in self.rows), self.ncols
        )

    def scale(self, c):
        c = QQ(c)
        return Matrix._raw(
            tuple(tuple(c * a for a in row) for row in self.rows),
            self.ncols,
        )

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
        bt = list(zip(*other.rows)) if other.rows else []
        out = []
        for row in self.rows:
            nz = [(j, x) for j, x in enumerate(row) if x != 0]
            if other.ncols == 0:
                out.append(())
                continue
            new = [_ZERO] * other.ncols
            for j, x in nz:
                brow = other.rows[j]
                for k, y in enumerate(brow):
                    if y != 0:
                        new[k] += x * y
            out.append(tuple(new))
        return Matrix._raw(tuple(out), other.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        return Matrix._raw(
            tuple(ra + rb for ra, rb in zip(self.rows, other.rows)),
            self.ncols + other.ncols,
        )

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("vstack col mismatch")
        return Matrix._raw(self.rows + other.rows, self.ncols)

    def take_cols(self, idx):
        return Matrix._raw(
            tuple(tuple(row[j] for j in idx) for row in self.rows),
            len(idx),
        )

    def take_rows(self, idx):
        return Matrix._raw(tuple(self.rows[i] for i in idx), self.ncols)

    def transpose(self):
        if not self.rows:
            return Matrix._raw(tuple(() for _ in range(self.ncols)), 0)
        return Matrix._raw(tuple(zip(*self.rows)), self.nrows)

    @staticmethod
    def block(grid, row_dims, col_dims):
        """Assemble from a {(i, j): Matrix} dict; missing blocks are zero."""
        out = [[_ZERO] * sum(col_dims) for _ in range(sum(row_dims))]
        roff = [0]
        for d in row_dims:
            roff.append(roff[-1] + d)
        coff = [0]
        for d in col_dims:
            coff.append(coff[-1] + d)
        for (bi, bj), m in grid.items():
            if m.shape != (row_dims[bi], col_dims[bj]):
                raise ValueError("block shape mismatch")
            r0, c0 = roff[bi], coff[bj]
            for i, row in enumerate(m.rows):
                orow = out[r0 + i]
                for j, x in enumerate(row):
                    if x != 0:
                        orow[c0 + j] = x
        return Matrix._raw(tuple(tuple(r) for r in out), sum(col_dims))


@dataclass(frozen=True)
class SmithForm:
    """M = U * D * V with D = Uinv * M * Vinv diagonal of p-powers."""

    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix
    diag: tuple  # nonzero diagonal entries, ascending valuation
    rank: int


def _min_valuation_pivot(A, start, p):
    best = None
    best_val = INF
    for i in range(start, len(A)):
        row = A[i]
        for j in range(start, len(row)):
            x = row[j]
            if x == 0:
                continue
            v = valuation(x, p)
            if v < best_val:
                best_val = v
                best = (i, j)
                if v == 0:
                    return best
    return best


def smith_form(M: Matrix, p: int) -> SmithForm:
    """Smith normal form over Z_(p).

    Diagonal entries are powers of p in ascending valuation (units are
    normalized to 1); U, V are invertible over Z_(p).  Deterministic.
    """
    m, n = M.shape
    A = [list(row) for row in M.rows]
    U = [list(row) for row in Matrix.identity(m).rows]
    Ui = [list(row) for row in Matrix.identity(m).rows]
    V = [list(row) for row in Matrix.identity(n).rows]
    Vi = [list(row) for row in Matrix.identity(n).rows]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        Ui[i], Ui[k] = Ui[k], Ui[i]
        for r in U:
            r[i], r[k] = r[k], r[i]

    def row_add(i, k, c):
        # row_i += c * row_k ; U gets col_k -= c * col_i
        Ai, Ak = A[i], A[k]
        for j in range(n):
            if Ak[j]:
                Ai[j] += c * Ak[j]
        Uii, Uik = Ui[i], Ui[k]
        for j in range(m):
            if Uik[j]:
                Uii[j] += c * Uik[j]
        for r in U:
            if r[i]:
                r[k] -= c * r[i]

    def row_scale(i, u):
        A[i] = [u * x for x in A[i]]
        Ui[i] = [u * x for x in Ui[i]]
        inv = _ONE / u
        for r in U:
            r[i] *= inv

    def col_swap(j, l):
        for r in A:
            r[j], r[l] = r[l], r[j]
        for r in Vi:
            r[j], r[l] = r[l], r[j]
        V[j], V[l] = V[l], V[j]

    def col_add(j, l, c):
        # col_j += c * col_l ; V gets row_l -= c * row_j
        for r in A:
            if r[l]:
                r[j] += c * r[l]
        for r in Vi:
            if r[l]:
                r[j] += c * r[l]
        Vl, Vj = V[l], V[j]
        for t in range(n):
            if Vj[t]:
                Vl[t] -= c * Vj[t]

    t = 0
    limit = min(m, n)
    while t < limit:
        piv = _min_valuation_pivot(A, t, p)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        pivot = A[t][t]
        for i in range(m):
            if i != t and A[i][t] != 0:
                row_add(i, t, -A[i][t] / pivot)
        for j in range(n):
            if j != t and A[t][j] != 0:
                col_add(j, t, -A[t][j] / pivot)
        t += 1

    diag = []
    for k in range(t):
        x = A[k][k]
        v = valuation(x, p)
        target = QQ(p) ** v
        if x != target:
            row_scale(k, target / x)
        diag.append(target)

    return SmithForm(
        U=Matrix._raw(tuple(tuple(r) for r in U), m),
        D=Matrix._raw(tuple(tuple(r) for r in A), n),
        V=Matrix._raw(tuple(tuple(r) for r in V), n),
        Uinv=Matrix._raw(tuple(tuple(r) for r in Ui), m),
        Vinv=Matrix._raw(tuple(tuple(r) for r in Vi), n),
        diag=tuple(diag),
        rank=t,
    )


def kernel_basis(M: Matrix, p: int) -> Matrix:
    """Basis (as columns) of {x : M x = 0} over Z_(p)."""
    sf = smith_form(M, p)
    idx = list(range(sf.rank, M.ncols))
    return sf.Vinv.take_cols(idx)


def solve(M: Matrix, b, p: int):
    """One p-local solution x of M x = b (b a column Matrix), or None."""
    sf = smith_form(M, p)
    return _solve_with(sf, M.shape, b, p)


def _solve_with(sf: SmithForm, shape, b: Matrix, p: int):
    m, n = shape
    y = sf.Uinv * b
    z = [_ZERO] * n
    for i in range(m):
        yi = y[i, 0]
        if i < sf.rank:
            d = sf.diag[i]
            if valuation(yi, p) < valuation(d, p):
                return None
            z[i] = yi / d
        elif yi != 0:
            return None
    return sf.Vinv * Matrix.column(z)


def solve_matrix(M: Matrix, B: Matrix, p: int):
    """Solve M X = B column by column (one SNF); None if any fails."""
    sf = smith_form(M, p)
    cols = []
    for j in range(B.ncols):
        x = _solve_with(sf, M.shape, B.take_cols([j]), p)
        if x is None:
            return None
        cols.append(x.col(0))
    return Matrix.from_cols(cols, M.ncols)


def lattice_basis(G: Matrix, p: int) -> Matrix:
    """Basis of the column span of G (a free Z_(p)-lattice)."""
    sf = smith_form(G, p)
    cols = []
    for i in range(sf.rank):
        cols.append(tuple(sf.diag[i] * x for x in sf.U.col(i)))
    return Matrix.from_cols(cols, G.nrows)


def preimage_gens(A: Matrix, B: Matrix, p: int) -> Matrix:
    """Generators (columns) of the lattice {x : A x in colspan(B)}."""
    if B.ncols == 0:
        return kernel_basis(A, p)
    k = kernel_basis(A.hstack(-B), p)
    return lattice_basis(k.take_rows(range(A.ncols)), p)


def inverse(M: Matrix, p: int):
    """Inverse of a Z_(p)-invertible square matrix, or None."""
    if M.nrows != M.ncols:
        return None
    sf = smith_form(M, p)
    if sf.rank != M.nrows or any(d != 1 for d in sf.diag):
        return None
    return sf.Vinv * sf.Uinv
