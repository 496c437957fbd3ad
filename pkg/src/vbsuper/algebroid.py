"""Lie-Rinehart algebroids, connections, forms and their cohomology.

A (desk-scale) Lie algebroid is a module A over a base ring R with a
Q-bilinear antisymmetric bracket and an anchor into Der(R) satisfying the
Leibniz rule and the Jacobi identity.  Forms are alternating R-multilinear
maps A^p -> W stored as full rational coordinate tensors; all differentials
and cohomology are exact linear algebra.

Sign convention for the differential (fixed once, inherited everywhere):

    (d w)(X_0, ..., X_p) = sum_i (-1)^i  nabla_{X_i} w(..no X_i..)
                         + sum_{i<j} (-1)^{i+j} w([X_i, X_j], ..no X_i, X_j..)

so in degree 1, (d w)(X, Y) = nabla_X w(Y) - nabla_Y w(X) - w([X, Y]).
"""

from itertools import combinations

from .linalg import Matrix, Subspace, kernel, rank, solve
from .basering import (RModule, BaseRingMismatch, derivations, ring_as_module,
                       free_module)
from .scalars import Q, ZERO, ONE, rational


class FormError(ValueError):
    pass


class NotFlat(ValueError):
    pass


# ---------------------------------------------------------------------------
# algebroids

class Algebroid:
    """Lie-Rinehart structure: module, bracket tensor, anchor into Der(R).

    bracket[i][j] is the coordinate vector of [e_i, e_j]; anchor[i] is the
    derivation matrix of rho(e_i) acting on ring coordinates.
    """

    def __init__(self, ring, module_A, bracket, anchor):
        self.ring = ring
        self.module_A = module_A
        d = module_A.dim
        self.bracket = [[tuple(rational(x) for x in bracket[i][j])
                         for j in range(d)] for i in range(d)]
        self.anchor = []
        for i in range(d):
            a = anchor[i]
            if not isinstance(a, Matrix):
                a = Matrix.from_rows([[rational(x) for x in row] for row in a])
            self.anchor.append(a)
        self._formspaces = {}
        self._derivations = None

    @property
    def dim(self):
        return self.module_A.dim

    def bracket_vec(self, u, v):
        """Q-bilinear extension of the bracket tensor."""
        out = [ZERO] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ui * vj
                for k, b in enumerate(self.bracket[i][j]):
                    if b:
                        out[k] += c * b
        return tuple(out)

    def anchor_op(self, u):
        m = Matrix.zero(self.ring.dim, self.ring.dim)
        for i, ui in enumerate(u):
            if ui:
                m = m + self.anchor[i].scale(ui)
        return m

    def derivation_space(self):
        if self._derivations is None:
            self._derivations = derivations(self.ring)
        return self._derivations

    def form_space(self, coeff, degree):
        key = (degree, coeff.dim, tuple(coeff.action))
        fs = self._formspaces.get(key)
        if fs is None:
            fs = FormSpace(self, coeff, degree)
            self._formspaces[key] = fs
        return fs


def check_algebroid(alg):
    """Witness report for antisymmetry, anchor, Leibniz, Jacobi."""
    report = []
    d = alg.dim
    ring = alg.ring
    mod = alg.module_A
    zero = tuple([ZERO] * d)
    for i in range(d):
        for j in range(d):
            lhs = alg.bracket[i][j]
            rhs = tuple(-x for x in alg.bracket[j][i])
            if lhs != rhs:
                report.append("bracket not antisymmetric at pair (%d, %d)"
                              % (i, j))
    ders = alg.derivation_space()
    for i in range(d):
        if not ders.contains(alg.anchor[i]):
            report.append("anchor image %d is not a derivation" % i)
    # R-linearity of the anchor
    for r in range(ring.dim):
        act = mod.action[r]
        mult = ring.mult_operator(ring.basis_element(r))
        for i in range(d):
            lhs = Matrix.zero(ring.dim, ring.dim)
            for j in range(d):
                if act[j, i]:
                    lhs = lhs + alg.anchor[j].scale(act[j, i])
            rhs = mult * alg.anchor[i]
            if lhs != rhs:
                report.append(
                    "anchor not R-linear at ring index %d, basis %d" % (r, i))
    # Leibniz: [e_i, f e_j] = f [e_i, e_j] + rho(e_i)(f) e_j
    for i in range(d):
        for r in range(ring.dim):
            for j in range(d):
                f_ej = mod.action[r].col(j)
                lhs = alg.bracket_vec(mod.basis_element(i), f_ej)
                rho_f = alg.anchor[i].apply(ring.basis_element(r))
                rhs = tuple(
                    a + b for a, b in zip(
                        mod.act(ring.basis_element(r), alg.bracket[i][j]),
                        mod.act(rho_f, mod.basis_element(j))))
                if lhs != rhs:
                    report.append(
                        "Leibniz fails at (basis %d, ring %d, basis %d)"
                        % (i, r, j))
    for i in range(d):
        for j in range(d):
            for k in range(d):
                s = [ZERO] * d
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    t = alg.bracket_vec(mod.basis_element(a),
                                        alg.bracket[b][c])
                    s = [x + y for x, y in zip(s, t)]
                if tuple(s) != zero:
                    report.append("Jacobi fails at triple (%d, %d, %d)"
                                  % (i, j, k))
    # anchor is a bracket morphism (implied, still checked)
    for i in range(d):
        for j in range(d):
            lhs = alg.anchor_op(alg.bracket[i][j])
            rhs = alg.anchor[i] * alg.anchor[j] - alg.anchor[j] * alg.anchor[i]
            if lhs != rhs:
                report.append("anchor not a bracket morphism at (%d, %d)"
                              % (i, j))
    return report


# ---------------------------------------------------------------------------
# connections

class Connection:
    """A-connection on an R-module: nabla[i] acts on coeff coordinates."""

    def __init__(self, algebroid, coeff, nabla):
        self.algebroid = algebroid
        self.coeff = coeff
        self.nabla = []
        for i in range(algebroid.dim):
            n = nabla[i]
            if not isinstance(n, Matrix):
                n = Matrix.from_rows([[rational(x) for x in row] for row in n])
            if n.rows != coeff.dim or n.cols != coeff.dim:
                raise FormError("connection matrix %d has wrong shape" % i)
            self.nabla.append(n)

    def covariant(self, u, w):
        """nabla_X w for X with A-coordinates u."""
        out = [ZERO] * self.coeff.dim
        for i, ui in enumerate(u):
            if ui:
                v = self.nabla[i].apply(w)
                out = [o + ui * x for o, x in zip(out, v)]
        return tuple(out)

    def operator(self, u):
        m = Matrix.zero(self.coeff.dim, self.coeff.dim)
        for i, ui in enumerate(u):
            if ui:
                m = m + self.nabla[i].scale(ui)
        return m

    def curvature(self, i, j):
        """F_{e_i, e_j} as a matrix on coefficients."""
        alg = self.algebroid
        comm = self.nabla[i] * self.nabla[j] - self.nabla[j] * self.nabla[i]
        return comm - self.operator(alg.bracket[i][j])


def check_connection(conn):
    """R-linearity in X and the Leibniz rule, on basis triples."""
    report = []
    alg = conn.algebroid
    ring = alg.ring
    modA, w = alg.module_A, conn.coeff
    for r in range(ring.dim):
        actA = modA.action[r]
        actW = w.act_operator(ring.basis_element(r))
        for i in range(alg.dim):
            lhs = Matrix.zero(w.dim, w.dim)
            for j in range(alg.dim):
                if actA[j, i]:
                    lhs = lhs + conn.nabla[j].scale(actA[j, i])
            if lhs != actW * conn.nabla[i]:
                report.append("nabla not R-linear in X at (ring %d, basis %d)"
                              % (r, i))
    for i in range(alg.dim):
        for r in range(ring.dim):
            actW = w.act_operator(ring.basis_element(r))
            rho_f = alg.anchor[i].apply(ring.basis_element(r))
            lhs = conn.nabla[i] * actW
            rhs = actW * conn.nabla[i] + w.act_operator(rho_f)
            if lhs != rhs:
                report.append("Leibniz fails at (basis %d, ring %d)" % (i, r))
    return report


def scalar_connection(algebroid):
    """The natural action of A on the base ring itself, via the anchor."""
    return Connection(algebroid, ring_as_module(algebroid.ring),
                      list(algebroid.anchor))


def hom_connection(conn_c, conn_s, hom):
    """Induced connection on Hom(E, C): nabla phi = nabla^c phi - phi nabla^s.

    conn_c lives on the target (C), conn_s on the source (E) of hom.
    """
    alg = conn_c.algebroid
    nabla = []
    for i in range(alg.dim):
        cols = []
        for t in hom.maps:
            img = conn_c.nabla[i] * t - t * conn_s.nabla[i]
            coords = hom.from_matrix(img)
            if coords is None:
                raise FormError("hom connection leaves the hom space")
            cols.append(list(coords))
        nabla.append(Matrix.from_rows(cols).transpose()
                     if cols else Matrix.zero(0, 0))
    return Connection(alg, hom.module, nabla)


def dual_connection(conn, dual):
    """Dual connection on Hom(W, R): <nabla' s, w> = rho(X)<s,w> - <s, nabla w>.

    dual is the HomSpace Hom(W, R); the pairing is evaluation into ring
    coordinates.
    """
    alg = conn.algebroid
    nabla = []
    for i in range(alg.dim):
        cols = []
        for t in dual.maps:
            img = alg.anchor[i] * t - t * conn.nabla[i]
            coords = dual.from_matrix(img)
            if coords is None:
                raise FormError("dual connection leaves the dual space")
            cols.append(list(coords))
        nabla.append(Matrix.from_rows(cols).transpose()
                     if cols else Matrix.zero(0, 0))
    return Connection(alg, dual.module, nabla)


def is_flat(conn):
    """True iff all curvature matrices vanish; cross-checked against d.d = 0
    on the basis 0- and 1-forms."""
    alg = conn.algebroid
    flat = all(conn.curvature(i, j).is_zero()
               for i in range(alg.dim) for j in range(alg.dim))
    dd_zero = True
    for p in (0, 1):
        space = alg.form_space(conn.coeff, p)
        for b in space.multilinear_basis():
            w = space.form_from_compact(b)
            ddw = ce_differential(conn, ce_differential(conn, w))
            if not ddw.is_zero():
                dd_zero = False
                break
        if not dd_zero:
            break
    if flat != dd_zero:
        raise AssertionError("curvature and d.d flatness verdicts disagree")
    return flat


# ---------------------------------------------------------------------------
# forms

def _shuffle_sign(subset, rest):
    """Sign of the permutation sorting (subset + rest), both increasing."""
    seq = list(subset) + list(rest)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class FormSpace:
    """The space Omega^p(A; W) in compact coordinates.

    Compact coordinates enumerate values on strictly increasing basis
    tuples; the R-multilinear constraint subspace is computed once.
    """

    def __init__(self, algebroid, coeff, degree):
        if degree < 0:
            raise FormError("negative form degree")
        self.algebroid = algebroid
        self.coeff = coeff
        self.degree = degree
        self.tuples = list(combinations(range(algebroid.dim), degree))
        self.compact_dim = len(self.tuples) * coeff.dim
        self._tuple_index = {t: n for n, t in enumerate(self.tuples)}
        self._mlbasis = None

    def zero(self):
        return Form(self, [ZERO] * self.compact_dim, check=False)

    def form_from_compact(self, coords, check=False):
        return Form(self, list(coords), check=check)

    def basis_index(self, idx_tuple, w_index):
        return self._tuple_index[idx_tuple] * self.coeff.dim + w_index

    def multilinear_basis(self):
        """Basis of the R-multilinearity constraint subspace (compact)."""
        if self._mlbasis is not None:
            return self._mlbasis
        if self.algebroid.ring.dim == 1 or self.degree == 0:
            self._mlbasis = [
                tuple(ONE if i == j else ZERO for i in range(self.compact_dim))
                for j in range(self.compact_dim)]
            return self._mlbasis
        rows = []
        d, p, dw = self.algebroid.dim, self.degree, self.coeff.dim
        modA = self.algebroid.module_A
        ring = self.algebroid.ring
        actW = [self.coeff.action[r] for r in range(ring.dim)]
        all_tuples = self._all_tuples()
        for t in all_tuples:
            for s in range(p):
                for r in range(ring.dim):
                    col = modA.action[r].col(t[s])
                    # w(..., f e_{t_s}, ...) - f . w(t):  one row per W coord
                    for k in range(dw):
                        row = [ZERO] * self.compact_dim
                        for j in range(d):
                            if col[j]:
                                t2 = t[:s] + (j,) + t[s + 1:]
                                self._accumulate(row, t2, k, col[j])
                        for m in range(dw):
                            if actW[r][k, m]:
                                self._accumulate(row, t, m, -actW[r][k, m])
                        if any(row):
                            rows.append(row)
        if rows:
            ker = kernel(Matrix.from_rows(rows))
            self._mlbasis = list(ker.basis)
        else:
            self._mlbasis = [
                tuple(ONE if i == j else ZERO for i in range(self.compact_dim))
                for j in range(self.compact_dim)]
        return self._mlbasis

    def _all_tuples(self):
        def rec(prefix, depth):
            if depth == 0:
                yield tuple(prefix)
                return
            for i in range(self.algebroid.dim):
                yield from rec(prefix + [i], depth - 1)
        return rec([], self.degree)

    def _accumulate(self, row, idx_tuple, w_index, coeff):
        """Add coeff * (full tensor value at idx_tuple, coord w_index) to a
        constraint row, resolving antisymmetry into compact coordinates."""
        if len(set(idx_tuple)) != len(idx_tuple):
            return
        key = tuple(sorted(idx_tuple))
        sign = _perm_sign(idx_tuple)
        row[self.basis_index(key, w_index)] += coeff * sign

    def contains_compact(self, coords):
        basis = self.multilinear_basis()
        if not basis:
            return all(x == 0 for x in coords)
        m = Matrix.from_rows([list(b) for b in basis]).transpose()
        return solve(m, coords) is not None


def _perm_sign(idx_tuple):
    seq = list(idx_tuple)
    sign = 1
    n = len(seq)
    for i in range(n):
        for j in range(i + 1, n):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class Form:
    """Element of Omega^p(A; W), alternating R-multilinear.

    Stored compactly (values on increasing tuples); value() reconstructs the
    full antisymmetric tensor entry at any basis tuple.
    """

    def __init__(self, space, compact, check=True):
        if len(compact) != space.compact_dim:
            raise FormError("wrong number of compact coordinates")
        self.space = space
        self.compact = [rational(x) for x in compact]
        if check and not space.contains_compact(self.compact):
            raise FormError("tensor is not R-multilinear")

    @property
    def degree(self):
        return self.space.degree

    def value(self, idx_tuple):
        """Coefficient vector at an arbitrary basis index tuple."""
        dw = self.space.coeff.dim
        if len(set(idx_tuple)) != len(idx_tuple):
            return tuple([ZERO] * dw)
        key = tuple(sorted(idx_tuple))
        sign = _perm_sign(idx_tuple)
        base = self.space._tuple_index[key] * dw
        if sign == 1:
            return tuple(self.compact[base:base + dw])
        return tuple(-x for x in self.compact[base:base + dw])

    def evaluate(self, vectors):
        """Multilinear evaluation on a list of coordinate vectors in A."""
        if len(vectors) != self.degree:
            raise FormError("wrong arity")
        dw = self.space.coeff.dim
        out = [ZERO] * dw

        def rec(chosen, coeff, depth):
            if depth == len(vectors):
                v = self.value(tuple(chosen))
                for k in range(dw):
                    if v[k]:
                        out[k] += coeff * v[k]
                return
            for i, x in enumerate(vectors[depth]):
                if x:
                    rec(chosen + [i], coeff * x, depth + 1)
        rec([], ONE, 0)
        return tuple(out)

    def is_zero(self):
        return all(x == 0 for x in self.compact)

    def __add__(self, other):
        self._same_space(other)
        return Form(self.space,
                    [a + b for a, b in zip(self.compact, other.compact)],
                    check=False)

    def __sub__(self, other):
        self._same_space(other)
        return Form(self.space,
                    [a - b for a, b in zip(self.compact, other.compact)],
                    check=False)

    def __neg__(self):
        return Form(self.space, [-a for a in self.compact], check=False)

    def scale(self, c):
        c = rational(c)
        return Form(self.space, [c * a for a in self.compact], check=False)

    def __eq__(self, other):
        return (isinstance(other, Form) and self.space.degree ==
                other.space.degree and self.compact == other.compact)

    def _same_space(self, other):
        if (self.space.degree != other.space.degree
                or self.space.compact_dim != other.space.compact_dim):
            raise FormError("form space mismatch")

    def __repr__(self):
        return "Form(p=%d, coeff dim %d)" % (self.degree, self.space.coeff.dim)


def form_from_tensor(algebroid, coeff, degree, values, check=True):
    """Build a form from a dict {increasing tuple: coeff vector} (or a full
    callable on tuples).  Missing tuples are zero."""
    space = algebroid.form_space(coeff, degree)
    compact = [ZERO] * space.compact_dim
    for t, vec in values.items():
        t = tuple(t)
        if tuple(sorted(t)) != t:
            raise FormError("keys must be strictly increasing tuples")
        for k, x in enumerate(vec):
            compact[space.basis_index(t, k)] = rational(x)
    return Form(space, compact, check=check)


def wedge_pair(f1, f2, pair, target_coeff):
    """Wedge of a p-form and a q-form with a coefficient pairing.

    pair(u, v) maps coefficient coordinate vectors of f1 and f2 to those of
    target_coeff.  Sum over shuffles with the usual sign.
    """
    alg = f1.space.algebroid
    p, q = f1.degree, f2.degree
    space = alg.form_space(target_coeff, p + q)
    compact = [ZERO] * space.compact_dim
    dw = target_coeff.dim
    for t in space.tuples:
        acc = [ZERO] * dw
        for subset in combinations(range(p + q), p):
            rest = tuple(i for i in range(p + q) if i not in subset)
            sign = _shuffle_sign(subset, rest)
            u = f1.value(tuple(t[i] for i in subset))
            v = f2.value(tuple(t[i] for i in rest))
            w = pair(u, v)
            if sign == 1:
                acc = [a + x for a, x in zip(acc, w)]
            else:
                acc = [a - x for a, x in zip(acc, w)]
        base = space._tuple_index[t] * dw
        for k in range(dw):
            compact[base + k] = acc[k]
    return Form(space, compact, check=False)


def ce_differential(conn, form):
    """Chevalley-Eilenberg differential via the Cartan formula."""
    alg = conn.algebroid
    if form.space.algebroid is not alg:
        raise FormError("form does not live on the connection's algebroid")
    if form.space.coeff.dim != conn.coeff.dim:
        raise FormError("coefficient module mismatch")
    p = form.degree
    space = alg.form_space(conn.coeff, p + 1)
    dw = conn.coeff.dim
    compact = [ZERO] * space.compact_dim
    for t in space.tuples:
        acc = [ZERO] * dw
        for i in range(p + 1):
            rest = t[:i] + t[i + 1:]
            v = conn.nabla[t[i]].apply(form.value(rest))
            if i % 2 == 0:
                acc = [a + x for a, x in zip(acc, v)]
            else:
                acc = [a - x for a, x in zip(acc, v)]
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                br = alg.bracket[t[i]][t[j]]
                rest = tuple(t[k] for k in range(p + 1) if k != i and k != j)
                v = [ZERO] * dw
                for m, bm in enumerate(br):
                    if bm:
                        val = form.value((m,) + rest)
                        v = [a + bm * x for a, x in zip(v, val)]
                if (i + j) % 2 == 0:
                    acc = [a + x for a, x in zip(acc, v)]
                else:
                    acc = [a - x for a, x in zip(acc, v)]
        base = space._tuple_index[t] * dw
        for k in range(dw):
            compact[base + k] = acc[k]
    return Form(space, compact, check=False)


# ---------------------------------------------------------------------------
# cohomology

def differential_matrix(conn, degree):
    """Matrix of d: Omega^degree -> Omega^(degree+1) on the R-multilinear
    subspace bases.  Returns (matrix, domain basis, codomain basis)."""
    alg = conn.algebroid
    dom = alg.form_space(conn.coeff, degree)
    cod = alg.form_space(conn.coeff, degree + 1)
    dom_basis = dom.multilinear_basis()
    cod_basis = cod.multilinear_basis()
    cod_mat = (Matrix.from_rows([list(b) for b in cod_basis]).transpose()
               if cod_basis else Matrix.zero(cod.compact_dim, 0))
    cols = []
    for b in dom_basis:
        img = ce_differential(conn, dom.form_from_compact(b))
        coords = (solve(cod_mat, img.compact) if cod_basis
                  else ((),) if img.is_zero() else None)
        if coords is None:
            raise FormError("differential leaves the R-multilinear subspace")
        cols.append(list(coords) if cod_basis else [])
    n_rows = len(cod_basis)
    if cols:
        mat = Matrix.from_rows(cols).transpose() if n_rows else \
            Matrix.zero(0, len(cols))
    else:
        mat = Matrix.zero(n_rows, 0)
    return mat, dom, cod


def cohomology(conn, degree):
    """(dimension, list of representative Forms) of H^degree.

    Requires a flat connection.  Computed as ker d_n modulo im d_{n-1};
    cross-checked by rank-nullity.
    """
    if not is_flat(conn):
        raise NotFlat("cohomology of a non-flat connection")
    alg = conn.algebroid
    if degree > alg.dim:
        return 0, []
    d_n, dom, _ = differential_matrix(conn, degree)
    ker_n = kernel(d_n)
    if degree == 0:
        im_basis = []
    else:
        d_prev, _, _ = differential_matrix(conn, degree - 1)
        im_basis = [d_prev.col(j) for j in range(d_prev.cols)]
    im_space = Subspace(len(dom.multilinear_basis()), im_basis)
    # representatives: kernel vectors independent modulo the image
    reps = []
    span = [list(v) for v in im_space.basis]
    current_rank = len(span)
    for v in ker_n.basis:
        trial = span + [list(v)]
        if rank(Matrix.from_rows(trial)) > current_rank:
            span = trial
            current_rank += 1
            reps.append(v)
    dim_h = ker_n.dim - im_space.dim
    if dim_h != len(reps):
        raise AssertionError("cohomology dimension computed two ways disagrees")
    ml = dom.multilinear_basis()
    forms = []
    for v in reps:
        compact = [ZERO] * dom.compact_dim
        for c, b in zip(v, ml):
            if c:
                compact = [a + c * x for a, x in zip(compact, b)]
        forms.append(dom.form_from_compact(compact))
    return dim_h, forms


def exactness_certificate(conn, form):
    """A primitive eta with d eta = form, or None if form is not exact.

    form must be closed (d form = 0); raises otherwise.
    """
    if not ce_differential(conn, form).is_zero():
        raise FormError("form is not closed")
    p = form.degree
    if p == 0:
        return None if not form.is_zero() else \
            conn.algebroid.form_space(conn.coeff, 0).zero()
    d_prev, dom_prev, cod = differential_matrix(conn, p - 1)
    cod_basis = cod.multilinear_basis()
    cod_mat = (Matrix.from_rows([list(b) for b in cod_basis]).transpose()
               if cod_basis else Matrix.zero(cod.compact_dim, 0))
    target = solve(cod_mat, form.compact)
    if target is None:
        raise FormError("closed form does not lie in the R-multilinear space")
    x = solve(d_prev, target)
    if x is None:
        return None
    ml = dom_prev.multilinear_basis()
    compact = [ZERO] * dom_prev.compact_dim
    for c, b in zip(x, ml):
        if c:
            compact = [a + c * y for a, y in zip(compact, b)]
    return dom_prev.form_from_compact(compact)
