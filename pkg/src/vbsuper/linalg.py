"""Exact rational dense linear algebra.

Deterministic by construction: reduced row echelon with leftmost pivots,
free variables set to zero in solve(), kernel basis ordered by free-column
index, and complements chosen from the standard basis at non-pivot indices.
All values are immutable in spirit; no function mutates its arguments.
"""

from .scalars import Q, ZERO, ONE, rational


class DimensionMismatch(ValueError):
    pass


class Matrix:
    """Dense matrix of exact rationals, row-major storage."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = [rational(x) for x in entries]
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                "need %d entries, got %d" % (rows * cols, len(entries)))
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @staticmethod
    def from_rows(rows_list):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        flat = []
        for r in rows_list:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
            flat.extend(r)
        return Matrix(rows, cols, flat)

    @staticmethod
    def identity(n):
        return Matrix(n, n, [ONE if i == j else ZERO
                             for i in range(n) for j in range(n)])

    @staticmethod
    def zero(rows, cols):
        return Matrix(rows, cols, [ZERO] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return tuple(self.entries[i * self.cols: (i + 1) * self.cols])

    def col(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      [self.entries[i * self.cols + j]
                       for j in range(self.cols) for i in range(self.rows)])

    def is_zero(self):
        return all(x == 0 for x in self.entries)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries)))

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("matrix add shape mismatch")
        return Matrix(self.rows, self.cols,
                      [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("matrix sub shape mismatch")
        return Matrix(self.rows, self.cols,
                      [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c):
        c = rational(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    "cannot multiply %dx%d by %dx%d"
                    % (self.rows, self.cols, other.rows, other.cols))
            n, m, k = self.rows, self.cols, other.cols
            a, b = self.entries, other.entries
            out = [ZERO] * (n * k)
            for i in range(n):
                arow = a[i * m:(i + 1) * m]
                for l in range(m):
                    ail = arow[l]
                    if ail:
                        brow = b[l * k:(l + 1) * k]
                        base = i * k
                        for j in range(k):
                            if brow[j]:
                                out[base + j] += ail * brow[j]
            return Matrix(n, k, out)
        return NotImplemented

    def apply(self, vec):
        """Matrix-vector product, vec of length cols."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length %d, need %d"
                                    % (len(vec), self.cols))
        out = []
        for i in range(self.rows):
            s = ZERO
            base = i * self.cols
            for j, v in enumerate(vec):
                if v:
                    s += self.entries[base + j] * v
            out.append(s)
        return tuple(out)

    def __repr__(self):
        return "Matrix(%d, %d, %r)" % (self.rows, self.cols,
                                       [str(x) for x in self.entries])


def rref(mat):
    """Reduced row echelon form.  Returns (rref matrix, pivot column list)."""
    m = mat.row_list()
    rows, cols = mat.rows, mat.cols
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return Matrix.from_rows(m) if rows else mat, pivots


def rank(mat):
    return len(rref(mat)[1])


def solve(mat, b):
    """Solve M x = b.  Returns a solution tuple or None if inconsistent.

    Deterministic: free variables are set to zero.
    """
    if len(b) != mat.rows:
        raise DimensionMismatch("rhs length %d, need %d" % (len(b), mat.rows))
    aug = Matrix(mat.rows, mat.cols + 1,
                 [x for i in range(mat.rows)
                  for x in list(mat.row(i)) + [rational(b[i])]])
    red, pivots = rref(aug)
    if mat.cols in pivots:
        return None
    x = [ZERO] * mat.cols
    for r, c in enumerate(pivots):
        x[c] = red[r, mat.cols]
    return tuple(x)


def solve_matrix(mat, rhs):
    """Columnwise solve; returns Matrix X with mat @ X = rhs, or None."""
    cols = []
    for j in range(rhs.cols):
        x = solve(mat, rhs.col(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_rows(cols).transpose()


def inverse(mat):
    if mat.rows != mat.cols:
        raise DimensionMismatch("inverse of non-square matrix")
    inv = solve_matrix(mat, Matrix.identity(mat.rows))
    if inv is None or rank(mat) != mat.rows:
        raise ValueError("matrix is singular")
    return inv


def kernel(mat):
    """Null space basis as a Subspace, ordered by free-column index."""
    red, pivots = rref(mat)
    pivot_set = set(pivots)
    free = [c for c in range(mat.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * mat.cols
        v[f] = ONE
        for r, c in enumerate(pivots):
            v[c] = -red[r, f]
        basis.append(tuple(v))
    return Subspace(mat.cols, basis, reduce=False)


def image(mat):
    """Column space of mat as a Subspace."""
    return Subspace(mat.rows, [mat.col(j) for j in range(mat.cols)]).reduced()


class Subspace:
    """Subspace of Q^n given by a list of independent basis vectors.

    The constructor reduces redundant spanning sets; pass reduce=False to
    assert independence instead.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, basis, reduce=True):
        basis = [tuple(rational(x) for x in v) for v in basis]
        for v in basis:
            if len(v) != ambient_dim:
                raise DimensionMismatch("basis vector of wrong length")
        if reduce and basis:
            red, pivots = rref(Matrix.from_rows(basis))
            basis = [red.row(i) for i in range(len(pivots))]
        self.ambient_dim = ambient_dim
        self.basis = basis

    @property
    def dim(self):
        return len(self.basis)

    def reduced(self):
        return Subspace(self.ambient_dim, self.basis)

    def matrix(self):
        """Basis vectors as columns (ambient_dim x dim)."""
        if not self.basis:
            return Matrix.zero(self.ambient_dim, 0)
        return Matrix.from_rows([list(v) for v in self.basis]).transpose()

    def contains(self, vec):
        return self.coordinates(vec) is not None

    def coordinates(self, vec):
        """Coefficients of vec in this basis, or None if not in the span."""
        if not self.basis:
            return () if all(x == 0 for x in vec) else None
        return solve(self.matrix(), vec)

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.reduced().basis == other.reduced().basis)

    def __repr__(self):
        return "Subspace(dim %d of Q^%d)" % (self.dim, self.ambient_dim)


def complement(space):
    """Coordinate complement of a subspace.

    Standard basis vectors at the non-pivot indices of the reduced basis;
    the lowest-index pivot positions are consumed by the subspace itself.
    """
    red = space.reduced()
    if red.basis:
        _, pivots = rref(Matrix.from_rows([list(v) for v in red.basis]))
    else:
        pivots = []
    pivot_set = set(pivots)
    n = space.ambient_dim
    basis = []
    for i in range(n):
        if i not in pivot_set:
            v = [ZERO] * n
            v[i] = ONE
            basis.append(tuple(v))
    return Subspace(n, basis, reduce=False)


def intersect(a, b):
    """Intersection of two subspaces of the same ambient space."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient dims differ")
    if not a.basis or not b.basis:
        return Subspace(a.ambient_dim, [])
    # null space of [A | -B] gives coefficient pairs with A x = B y
    am, bm = a.matrix(), b.matrix()
    joint = Matrix(a.ambient_dim, am.cols + bm.cols,
                   [x for i in range(a.ambient_dim)
                    for x in list(am.row(i)) + [-y for y in bm.row(i)]])
    vecs = []
    for v in kernel(joint).basis:
        coeff = v[:am.cols]
        vecs.append(am.apply(coeff))
    return Subspace(a.ambient_dim, vecs)
