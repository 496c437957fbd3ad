"""Finite-dimensional commutative base rings and their modules.

The desk-scale substitute for smooth geometry: the ring R plays the role of
the function algebra, finitely generated R-modules play the role of section
spaces of vector bundles, and derivations of R play the role of vector
fields.  The point case R = Q recovers ordinary Lie algebra data.

All structure is given by explicit rational structure constants with respect
to a chosen Q-basis.
"""

from .linalg import Matrix, Subspace, kernel, rank, solve
from .scalars import Q, ZERO, ONE, rational


class RingAxiomError(ValueError):
    pass


class BaseRingMismatch(ValueError):
    pass


class BaseRing:
    """Commutative unital algebra over Q with explicit structure constants.

    mult[i][j] is the coordinate vector of b_i * b_j.
    """

    def __init__(self, dim, mult, unit):
        self.dim = dim
        self.mult = [[tuple(rational(x) for x in mult[i][j])
                      for j in range(dim)] for i in range(dim)]
        self.unit = tuple(rational(x) for x in unit)
        for i in range(dim):
            for j in range(dim):
                if len(self.mult[i][j]) != dim:
                    raise RingAxiomError("mult tensor has wrong shape")
        if len(self.unit) != dim:
            raise RingAxiomError("unit vector has wrong length")

    def multiply(self, u, v):
        out = [ZERO] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ui * vj
                for k, m in enumerate(self.mult[i][j]):
                    if m:
                        out[k] += c * m
        return tuple(out)

    def mult_operator(self, f):
        """Matrix of multiplication by the element with coordinates f."""
        cols = []
        for j in range(self.dim):
            basis = [ZERO] * self.dim
            basis[j] = ONE
            cols.append(self.multiply(f, basis))
        return Matrix.from_rows([list(c) for c in cols]).transpose()

    def basis_element(self, i):
        v = [ZERO] * self.dim
        v[i] = ONE
        return tuple(v)

    def is_point(self):
        return self.dim == 1

    def __eq__(self, other):
        return (isinstance(other, BaseRing) and self.dim == other.dim
                and self.mult == other.mult and self.unit == other.unit)

    def __repr__(self):
        return "BaseRing(dim=%d)" % self.dim


def check_ring(ring):
    """Report violated ring axioms with witness basis indices.

    Returns a list of strings; empty iff the structure constants define a
    commutative associative unital algebra.
    """
    report = []
    d = ring.dim
    for i in range(d):
        for j in range(i + 1, d):
            if ring.mult[i][j] != ring.mult[j][i]:
                report.append("commutativity fails at basis pair (%d, %d)"
                              % (i, j))
    for i in range(d):
        for j in range(d):
            for k in range(d):
                left = ring.multiply(ring.mult[i][j], ring.basis_element(k))
                right = ring.multiply(ring.basis_element(i), ring.mult[j][k])
                if left != right:
                    report.append(
                        "associativity fails at basis triple (%d, %d, %d)"
                        % (i, j, k))
    for i in range(d):
        b = ring.basis_element(i)
        if ring.multiply(ring.unit, b) != b:
            report.append("unit fails on the left at basis index %d" % i)
        if ring.multiply(b, ring.unit) != b:
            report.append("unit fails on the right at basis index %d" % i)
    return report


# ---------------------------------------------------------------------------
# standard rings

def rationals():
    return BaseRing(1, [[(ONE,)]], (ONE,))


def truncated_polynomials(order):
    """Q[x]/(x^order) with basis 1, x, ..., x^(order-1)."""
    d = order
    mult = [[tuple(ONE if k == i + j else ZERO for k in range(d))
             for j in range(d)] for i in range(d)]
    unit = tuple(ONE if k == 0 else ZERO for k in range(d))
    return BaseRing(d, mult, unit)


def product_of_rationals(n):
    """Q x ... x Q in the standard idempotent basis."""
    mult = [[tuple(ONE if (i == j and k == i) else ZERO for k in range(n))
             for j in range(n)] for i in range(n)]
    unit = tuple(ONE for _ in range(n))
    return BaseRing(n, mult, unit)


def rational_factors(ring):
    """Indices of the standard idempotent factors if the ring is presented
    as a finite product of Q in its standard basis, else None.

    Used by classification, where constant rank means equal rank over every
    factor.  Rings in any other presentation are rejected there.
    """
    d = ring.dim
    for i in range(d):
        for j in range(d):
            expected = tuple((ONE if (i == j and k == i) else ZERO)
                             for k in range(d))
            if ring.mult[i][j] != expected:
                return None
    if ring.unit != tuple(ONE for _ in range(d)):
        return None
    return list(range(d))


# ---------------------------------------------------------------------------
# modules

class RModule:
    """Finitely generated R-module with explicit action structure constants.

    action[r] is the dim x dim matrix of the action of ring basis element r
    on module coordinates.  Modules need not be free.
    """

    def __init__(self, ring, dim, action):
        self.ring = ring
        self.dim = dim
        if len(action) != ring.dim:
            raise RingAxiomError("action tensor has wrong ring dimension")
        self.action = []
        for r in range(ring.dim):
            a = action[r]
            if not isinstance(a, Matrix):
                a = Matrix.from_rows([[rational(x) for x in row] for row in a])
            if a.rows != dim or a.cols != dim:
                raise RingAxiomError("action matrix %d has wrong shape" % r)
            self.action.append(a)

    def act(self, f, w):
        """Action of ring element f (coordinates) on module element w."""
        out = [ZERO] * self.dim
        for r, fr in enumerate(f):
            if fr:
                v = self.action[r].apply(w)
                out = [o + fr * x for o, x in zip(out, v)]
        return tuple(out)

    def act_operator(self, f):
        m = Matrix.zero(self.dim, self.dim)
        for r, fr in enumerate(f):
            if fr:
                m = m + self.action[r].scale(fr)
        return m

    def basis_element(self, i):
        v = [ZERO] * self.dim
        v[i] = ONE
        return tuple(v)

    def __eq__(self, other):
        return (isinstance(other, RModule) and self.ring == other.ring
                and self.dim == other.dim and self.action == other.action)

    def __repr__(self):
        return "RModule(dim=%d over ring dim %d)" % (self.dim, self.ring.dim)


def check_module(mod):
    """Report violated module axioms (unit identity, associativity)."""
    report = []
    ring = mod.ring
    unit_op = mod.act_operator(ring.unit)
    if unit_op != Matrix.identity(mod.dim):
        report.append("unit does not act as identity")
    for r in range(ring.dim):
        for s in range(ring.dim):
            prod = ring.mult[r][s]
            lhs = mod.action[r] * mod.action[s]
            rhs = mod.act_operator(prod)
            if lhs != rhs:
                report.append(
                    "action not associative at ring basis pair (%d, %d)"
                    % (r, s))
    return report


def free_module(ring, rk):
    """Free module R^rk; coordinates are rk blocks of ring coordinates."""
    d = ring.dim * rk
    action = []
    for r in range(ring.dim):
        reg = ring.mult_operator(ring.basis_element(r))
        m = Matrix.zero(d, d)
        rows = m.row_list()
        for b in range(rk):
            for i in range(ring.dim):
                for j in range(ring.dim):
                    rows[b * ring.dim + i][b * ring.dim + j] = reg[i, j]
        action.append(Matrix.from_rows(rows))
    return RModule(ring, d, action)


def ring_as_module(ring):
    return free_module(ring, 1)


def zero_module(ring):
    return RModule(ring, 0, [Matrix.zero(0, 0) for _ in range(ring.dim)])


def direct_sum_modules(v, w):
    if v.ring != w.ring:
        raise BaseRingMismatch("direct sum over different base rings")
    d = v.dim + w.dim
    action = []
    for r in range(v.ring.dim):
        m = Matrix.zero(d, d)
        rows = m.row_list()
        for i in range(v.dim):
            for j in range(v.dim):
                rows[i][j] = v.action[r][i, j]
        for i in range(w.dim):
            for j in range(w.dim):
                rows[v.dim + i][v.dim + j] = w.action[r][i, j]
        action.append(Matrix.from_rows(rows))
    return RModule(v.ring, d, action)


def submodule_as_module(mod, basis_vectors):
    """The R-submodule spanned by the given independent coordinate vectors,
    as a standalone RModule together with inclusion and projection maps.

    The span must be closed under the ring action.  The projection is the
    coordinate projection along the kernel of (inclusion | complement),
    i.e. it depends only on the chosen basis, deterministically.
    """
    space = Subspace(mod.dim, basis_vectors, reduce=False)
    incl = space.matrix()
    action = []
    for r in range(mod.ring.dim):
        cols = []
        for v in basis_vectors:
            img = mod.action[r].apply(v)
            coords = space.coordinates(img)
            if coords is None:
                raise RingAxiomError("span not closed under the ring action")
            cols.append(list(coords))
        action.append(Matrix.from_rows(cols).transpose()
                      if cols else Matrix.zero(0, 0))
    sub = RModule(mod.ring, len(basis_vectors), action)
    return sub, incl


# ---------------------------------------------------------------------------
# derivations

class DerivationSpace:
    """Basis of the Leibniz solution space Der(R), as dim x dim matrices."""

    def __init__(self, ring, basis):
        self.ring = ring
        self.basis = basis

    @property
    def dim(self):
        return len(self.basis)

    def operator(self, coords):
        m = Matrix.zero(self.ring.dim, self.ring.dim)
        for c, b in zip(coords, self.basis):
            if c:
                m = m + b.scale(c)
        return m

    def contains(self, matrix):
        return self.coordinates(matrix) is not None

    def coordinates(self, matrix):
        vecs = [list(b.entries) for b in self.basis]
        if not vecs:
            return () if matrix.is_zero() else None
        big = Matrix.from_rows(vecs).transpose()
        return solve(big, matrix.entries)


def derivations(ring):
    """Solve the Leibniz constraints L(ab) = L(a) b + a L(b) exactly."""
    d = ring.dim
    # unknowns: entries of L, row-major
    rows = []
    for i in range(d):
        for j in range(d):
            prod = ring.mult[i][j]
            # one equation per output coordinate k
            for k in range(d):
                row = [ZERO] * (d * d)
                # L applied to b_i b_j
                for p in range(d):
                    if prod[p]:
                        row[k * d + p] += prod[p]
                # minus L(b_i) b_j: L(b_i) = sum_p L[p,i] b_p
                for p in range(d):
                    coeff = ring.mult[p][j][k]
                    if coeff:
                        row[p * d + i] -= coeff
                # minus b_i L(b_j)
                for p in range(d):
                    coeff = ring.mult[i][p][k]
                    if coeff:
                        row[p * d + j] -= coeff
                rows.append(row)
    mat = Matrix.from_rows(rows) if rows else Matrix.zero(0, d * d)
    basis = [Matrix(d, d, v) for v in kernel(mat).basis]
    return DerivationSpace(ring, basis)


# ---------------------------------------------------------------------------
# hom modules

class HomSpace:
    """The R-module of R-linear maps V -> W.

    Elements are stored in coordinates with respect to a computed basis of
    R-linear maps; to_matrix/from_matrix convert to honest W x V matrices.
    """

    def __init__(self, source, target):
        if source.ring != target.ring:
            raise BaseRingMismatch("hom between modules over different rings")
        self.source = source
        self.target = target
        self.maps = self._solve_maps()
        self.module = self._build_module()

    def _solve_maps(self):
        nv, nw = self.source.dim, self.target.dim
        n = nw * nv  # unknown T entries, row-major (W x V)
        rows = []
        for r in range(self.source.ring.dim):
            av = self.source.action[r]
            aw = self.target.action[r]
            # T A_r - B_r T = 0, entrywise
            for i in range(nw):
                for j in range(nv):
                    row = [ZERO] * n
                    for p in range(nv):
                        if av[p, j]:
                            row[i * nv + p] += av[p, j]
                    for p in range(nw):
                        if aw[i, p]:
                            row[p * nv + j] -= aw[i, p]
                    rows.append(row)
        mat = Matrix.from_rows(rows) if rows else Matrix.zero(0, n)
        return [Matrix(nw, nv, v) for v in kernel(mat).basis]

    def _build_module(self):
        ring = self.source.ring
        action = []
        for r in range(ring.dim):
            aw = self.target.action[r]
            cols = []
            for t in self.maps:
                img = aw * t  # (f . T)(v) = f . T(v)
                coords = self.from_matrix(img)
                if coords is None:
                    raise RingAxiomError("hom space not closed under action")
                cols.append(list(coords))
            action.append(Matrix.from_rows(cols).transpose()
                          if cols else Matrix.zero(0, 0))
        return RModule(ring, len(self.maps), action)

    @property
    def dim(self):
        return len(self.maps)

    def to_matrix(self, coords):
        m = Matrix.zero(self.target.dim, self.source.dim)
        for c, t in zip(coords, self.maps):
            if c:
                m = m + t.scale(c)
        return m

    def from_matrix(self, matrix):
        """Coordinates of an R-linear map, or None if not in the span."""
        if not self.maps:
            return () if matrix.is_zero() else None
        big = Matrix.from_rows([list(t.entries) for t in self.maps]).transpose()
        return solve(big, matrix.entries)


def module_hom_space(source, target):
    return HomSpace(source, target)


def dual_module(mod):
    """Hom_R(V, R) with the evaluation structure.

    Returns the HomSpace; its .maps are ring.dim x mod.dim matrices
    representing maps into the ring's coordinates.
    """
    return HomSpace(mod, ring_as_module(mod.ring))
