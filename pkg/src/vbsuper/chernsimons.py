"""Secondary characteristic forms of flat superconnections.

Over a scalar base ring (dimension 1), a flat superconnection D on the
graded space C[1] + E has, for each metric g and positive integer k, an
odd characteristic form obtained by transgressing between D and its
metric adjoint over the product with the shifted tangent space of the
unit interval.  All t-dependence is kept as exact polynomial
coefficients; the Berezin integral and the integral over [0, 1] are
exact rational operations.

The adjoint operator is not hand-coded: it is solved from its defining
pairing identity

    d <a, s> = <D a, s> + (-1)^{|a|} <a, adjoint(D) s>

on a basis, then cross-checked by squaring.
"""

from .linalg import Matrix, inverse, solve
from .scalars import Q, ZERO, ONE, rational
from .algebroid import (Form, FormError, NotFlat, scalar_connection,
                        ce_differential, form_from_tensor, _shuffle_sign,
                        exactness_certificate, cohomology,
                        differential_matrix)
from .superconn import (SuperData, superconnection_matrix, is_flat_super,
                        section)


class MetricError(ValueError):
    pass


def _require_scalar_ring(data):
    if not data.algebroid.ring.is_point():
        raise FormError(
            "characteristic forms are implemented for scalar base rings")


class GradedMetric:
    """Gram matrices on C and E; symmetric and invertible."""

    def __init__(self, data, gram_C, gram_E):
        self.data = data
        self.gram_C = gram_C if isinstance(gram_C, Matrix) else \
            Matrix.from_rows([[rational(x) for x in r] for r in gram_C])
        self.gram_E = gram_E if isinstance(gram_E, Matrix) else \
            Matrix.from_rows([[rational(x) for x in r] for r in gram_E])
        for name, g, n in (("C", self.gram_C, data.C.dim),
                           ("E", self.gram_E, data.E.dim)):
            if g.rows != n or g.cols != n:
                raise MetricError("gram matrix on %s has wrong shape" % name)
            if g != g.transpose():
                raise MetricError("gram matrix on %s is not symmetric" % name)
            try:
                inverse(g) if n else None
            except Exception:
                raise MetricError("gram matrix on %s is singular" % name)


def identity_metric(data):
    return GradedMetric(data, Matrix.identity(data.C.dim),
                        Matrix.identity(data.E.dim))


# ---------------------------------------------------------------------------
# nonhomogeneous scalar forms

class MixedForm:
    """Scalar-coefficient form with components of several degrees."""

    def __init__(self, algebroid, parts=None):
        self.algebroid = algebroid
        self.parts = {}
        if parts:
            for d, f in parts.items():
                if not f.is_zero():
                    self.parts[d] = f

    def component(self, degree):
        f = self.parts.get(degree)
        if f is not None:
            return f
        from .basering import ring_as_module
        coeff = ring_as_module(self.algebroid.ring)
        return self.algebroid.form_space(coeff, degree).zero()

    def degrees(self):
        return sorted(self.parts)

    def _merge(self, degree, form):
        if degree in self.parts:
            form = self.parts[degree] + form
        if form.is_zero():
            self.parts.pop(degree, None)
        else:
            self.parts[degree] = form

    def __add__(self, other):
        out = MixedForm(self.algebroid, dict(self.parts))
        for d, f in other.parts.items():
            out._merge(d, f)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return MixedForm(self.algebroid,
                         {d: f.scale(c) for d, f in self.parts.items()})

    def is_zero(self):
        return not self.parts

    def __eq__(self, other):
        return isinstance(other, MixedForm) and self.parts == other.parts


def mixed_differential(algebroid, mixed):
    conn = scalar_connection(algebroid)
    out = MixedForm(algebroid)
    for d, f in mixed.parts.items():
        if d < algebroid.dim:
            out._merge(d + 1, ce_differential(conn, f))
    return out


# ---------------------------------------------------------------------------
# the adjoint via the evaluation pairing

class NhSuperOp:
    """Operator on a total graded space, possibly degree-nonhomogeneous.

    side is "primal" (acting on forms valued in C[1] + E) or "dual"
    (acting on forms valued in the dual bundle, C slots holding dual-C
    coefficients).
    """

    def __init__(self, data, matrix, side):
        self.data = data
        self.matrix = matrix
        self.side = side

    def square(self):
        return self.matrix * self.matrix

    def is_square_zero(self):
        return self.square().is_zero()


def _full_tuple(alg):
    return tuple(range(alg.dim))


def _pairing_form(total, vec_primal, dual_slot, dual_tuple, dual_index):
    """<element, basis dual form> as a scalar Form on A."""
    alg = total.data.algebroid
    from .basering import ring_as_module
    scal = ring_as_module(alg.ring)
    kind, q = dual_slot
    out_parts = {}
    for p in range(alg.dim - q + 1):
        slot = (kind, p)
        if slot not in total.offsets:
            continue
        space_p, _ = total.bases[slot]
        dimw = space_p.coeff.dim
        off = total.offsets[slot]
        target = alg.form_space(scal, p + q)
        compact = [ZERO] * target.compact_dim
        sign_internal = -1 if (kind == "C" and q % 2 == 1) else 1
        nonzero = False
        for idx_s, s in enumerate(space_p.tuples):
            if set(s) & set(dual_tuple):
                continue
            merged = tuple(sorted(s + dual_tuple))
            sh = _shuffle_sign(s, dual_tuple)
            x = vec_primal[off + idx_s * dimw + dual_index]
            if x:
                nonzero = True
                compact[target._tuple_index[merged]] += sh * sign_internal * x
        if nonzero:
            out_parts[p + q] = target.form_from_compact(compact)
    return MixedForm(alg, out_parts)


def adjoint_superconnection(data):
    """The adjoint operator on the dual graded space, solved exactly.

    Requires flat data; the result squares to zero (checked).  Dual C
    coefficients sit in the C slots, dual E coefficients in the E slots.
    """
    _require_scalar_ring(data)
    if is_flat_super(data):
        raise NotFlat("adjoint of a non-flat superconnection")
    return NhSuperOp(data, _adjoint_matrix(data), "dual")


def operator_adjoint(data, opmat):
    """Pairing adjoint of an arbitrary operator matrix (no flatness
    assumption, no square check)."""
    return _adjoint_matrix(data, opmat=opmat, check_square=False)


def operator_transport(data, opmat, g):
    """Adjoint of an arbitrary operator transported back through g."""
    adj = operator_adjoint(data, opmat)
    gmat = _metric_block_matrix(data, g)
    return inverse(gmat) * adj * gmat


def _adjoint_target(data, dmat, j, dual_slot, dual_tuple, dual_index):
    """(-1)^{|a_j|} (d<a_j, s> - <D a_j, s>) for the j-th primal basis."""
    total = data.total_space()
    alg = data.algebroid
    pk, pp = None, None
    for slot in total.slots:
        off = total.offsets[slot]
        size = len(total.bases[slot][1])
        if off <= j < off + size:
            pk, pp = slot
            break
    vec = [ZERO] * total.dim
    vec[j] = ONE
    paired = _pairing_form(total, vec, dual_slot, dual_tuple, dual_index)
    rhs = mixed_differential(alg, paired) - _pairing_form(
        total, dmat.col(j), dual_slot, dual_tuple, dual_index)
    parity = pp + (1 if pk == "C" else 0)
    return rhs.scale(-1) if parity % 2 == 1 else rhs


def _adjoint_matrix(data, opmat=None, check_square=True):
    alg = data.algebroid
    total = data.total_space()
    dmat = superconnection_matrix(data) if opmat is None else opmat
    n = alg.dim
    full = _full_tuple(alg)
    cols = []
    for dual_slot in total.slots:
        kind, q = dual_slot
        space_q, _ = total.bases[dual_slot]
        dimw = space_q.coeff.dim
        for t in space_q.tuples:
            for b in range(dimw):
                col = [ZERO] * total.dim
                # each output coordinate is isolated by pairing against
                # the primal basis element on the complementary tuple
                for out_slot in total.slots:
                    ok, oq = out_slot
                    space_o, _ = total.bases[out_slot]
                    ooff = total.offsets[out_slot]
                    comp_slot = (ok, n - oq)
                    if comp_slot not in total.offsets:
                        continue
                    space_c, _ = total.bases[comp_slot]
                    coff = total.offsets[comp_slot]
                    for idx_o, s_o in enumerate(space_o.tuples):
                        rest = tuple(i for i in range(n) if i not in s_o)
                        idx_c = space_c._tuple_index[rest]
                        sh = _shuffle_sign(rest, s_o)
                        sign_internal = -1 if (ok == "C" and oq % 2 == 1) \
                            else 1
                        for a in range(space_o.coeff.dim):
                            j = coff + idx_c * space_c.coeff.dim + a
                            target = _adjoint_target(data, dmat, j,
                                                     dual_slot, t, b)
                            val = target.component(n).value(full)[0]
                            col[ooff + idx_o * space_o.coeff.dim + a] = \
                                val * sh * sign_internal
                cols.append(col)
    adj = Matrix.from_rows(cols).transpose()
    if check_square and not (adj * adj).is_zero():
        raise AssertionError("adjoint of a flat operator fails to square "
                             "to zero")
    return adj


def verify_adjoint(data, adj):
    """Check the defining pairing identity on every basis pair."""
    total = data.total_space()
    alg = data.algebroid
    dmat = superconnection_matrix(data)
    for dual_slot in total.slots:
        space_q, _ = total.bases[dual_slot]
        doff = total.offsets[dual_slot]
        dimw = space_q.coeff.dim
        for idx_t, t in enumerate(space_q.tuples):
            for b in range(dimw):
                jd = doff + idx_t * dimw + b
                image = adj.col(jd)
                for j in range(total.dim):
                    lhs = _adjoint_target(data, dmat, j, dual_slot, t, b)
                    rhs = MixedForm(alg)
                    for dual_slot2 in total.slots:
                        space2, _ = total.bases[dual_slot2]
                        off2 = total.offsets[dual_slot2]
                        dimw2 = space2.coeff.dim
                        for idx2, t2 in enumerate(space2.tuples):
                            for b2 in range(dimw2):
                                c = image[off2 + idx2 * dimw2 + b2]
                                if c:
                                    vec = [ZERO] * total.dim
                                    vec[j] = ONE
                                    rhs = rhs + _pairing_form(
                                        total, vec, dual_slot2, t2,
                                        b2).scale(c)
                    if not (lhs - rhs).is_zero():
                        return False
    return True


def metric_transport(data, g):
    """The adjoint transported back to C[1] + E through the metric."""
    _require_scalar_ring(data)
    if is_flat_super(data):
        raise NotFlat("metric transport of a non-flat superconnection")
    adj = _adjoint_matrix(data)
    gmat = _metric_block_matrix(data, g)
    out = inverse(gmat) * adj * gmat
    if not (out * out).is_zero():
        raise AssertionError("transported operator fails to square to zero")
    return NhSuperOp(data, out, "primal")


def _metric_block_matrix(data, g):
    total = data.total_space()
    m = Matrix.zero(total.dim, total.dim)
    entries = list(m.entries)
    for (kind, p) in total.slots:
        space, _ = total.bases[(kind, p)]
        off = total.offsets[(kind, p)]
        gram = g.gram_C if kind == "C" else g.gram_E
        dimw = space.coeff.dim
        for idx in range(len(space.tuples)):
            base = off + idx * dimw
            for i in range(dimw):
                for j in range(dimw):
                    entries[(base + i) * total.dim + (base + j)] = gram[i, j]
    return Matrix(total.dim, total.dim, entries)


# ---------------------------------------------------------------------------
# polynomial-in-t operators and the transgression

class TPolyOp:
    """Matrix with entries polynomial in t, stored as t-power coefficients."""

    def __init__(self, coeffs):
        self.coeffs = [c for c in coeffs]
        while len(self.coeffs) > 1 and self.coeffs[-1].is_zero():
            self.coeffs.pop()

    @classmethod
    def constant(cls, m):
        return cls([m])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else None
            b = other.coeffs[i] if i < len(other.coeffs) else None
            if a is None:
                out.append(b)
            elif b is None:
                out.append(a)
            else:
                out.append(a + b)
        return TPolyOp(out)

    def __mul__(self, other):
        dim = self.coeffs[0].rows
        out = [Matrix.zero(dim, dim)
               for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TPolyOp(out)

    def scale(self, c):
        return TPolyOp([m.scale(c) for m in self.coeffs])

    def eval(self, t0):
        t0 = rational(t0)
        out = self.coeffs[-1]
        for m in reversed(self.coeffs[:-1]):
            out = m + out.scale(t0)
        return out

    def d_dt(self):
        if len(self.coeffs) == 1:
            return TPolyOp([Matrix.zero(self.coeffs[0].rows,
                                        self.coeffs[0].cols)])
        return TPolyOp([m.scale(i + 1)
                        for i, m in enumerate(self.coeffs[1:])])

    def integrate01(self):
        out = self.coeffs[0].scale(Q(1, 1))
        for i, m in enumerate(self.coeffs[1:], start=1):
            out = out + m.scale(Q(1, i + 1))
        return out

    def power(self, k):
        out = TPolyOp([Matrix.identity(self.coeffs[0].rows)])
        for _ in range(k):
            out = out * self
        return out


class TIForm:
    """Even/odd split of a form over the interval factor.

    even[i] and odd[i] are MixedForms: the coefficients of t^i and of
    t-dot times t^i respectively.
    """

    def __init__(self, algebroid, even, odd):
        self.algebroid = algebroid
        self.even = list(even)
        self.odd = list(odd)

    def max_t_degree(self):
        return max(len(self.even), len(self.odd)) - 1

    def integrate_berezin(self):
        """Berezin integral: drop to the t-dot coefficient, then integrate
        the polynomial in t over [0, 1]."""
        out = MixedForm(self.algebroid)
        for i, f in enumerate(self.odd):
            out = out + f.scale(Q(1, i + 1))
        return out


class Transgression:
    """The segment operator between D and its metric transport.

    Squares to S(t)^2 + t-dot (D - transported D) with S(t) the linear
    interpolation; all blocks are exact polynomial matrices.
    """

    def __init__(self, data, g):
        _require_scalar_ring(data)
        self.data = data
        self.total = data.total_space()
        self.dmat = superconnection_matrix(data)
        self.gdmat = metric_transport(data, g).matrix
        self.segment = TPolyOp([self.gdmat, self.dmat - self.gdmat])

    def endpoint(self, t0):
        return self.segment.eval(t0)

    def square(self):
        """(P(t), Q): the even part P = S(t)^2 and the t-dot part Q."""
        return self.segment * self.segment, self.dmat - self.gdmat

    def power_2k(self, k):
        """T^{2k} = P^k + t-dot sum_j P^j Q P^{k-1-j}."""
        p, q = self.square()
        qop = TPolyOp.constant(q)
        even = p.power(k)
        dim = self.total.dim
        odd = TPolyOp.constant(Matrix.zero(dim, dim))
        for j in range(k):
            odd = odd + p.power(j) * qop * p.power(k - 1 - j)
        return even, odd


def transgression(data, g):
    return Transgression(data, g)


# ---------------------------------------------------------------------------
# supertrace

def _parity_split(total, matrix):
    even = list(Matrix.zero(total.dim, total.dim).entries)
    odd = list(even)
    for sl_out in total.slots:
        po = sl_out[1] + (1 if sl_out[0] == "C" else 0)
        ro = total.offsets[sl_out]
        no = len(total.bases[sl_out][1])
        for sl_in in total.slots:
            pi = sl_in[1] + (1 if sl_in[0] == "C" else 0)
            ci = total.offsets[sl_in]
            ni = len(total.bases[sl_in][1])
            dest = even if (po - pi) % 2 == 0 else odd
            for r in range(ro, ro + no):
                for c in range(ci, ci + ni):
                    dest[r * total.dim + c] = matrix[r, c]
    return (Matrix(total.dim, total.dim, even),
            Matrix(total.dim, total.dim, odd))


def _wedge_basis_operator(total, i):
    """Left multiplication by the i-th basis 1-form, as a matrix."""
    def fn(elem):
        data = total.data
        from .superconn import GradedElement
        from .basering import ring_as_module
        alg = data.algebroid
        scal = ring_as_module(alg.ring)
        theta = form_from_tensor(alg, scal, 1, {(i,): (1,)})
        out = GradedElement(data)
        from .algebroid import wedge_pair
        for (kind, p), f in elem.parts.items():
            if p + 1 <= alg.dim:
                coeff = data.C if kind == "C" else data.E
                pair = lambda u, v: tuple(u[0] * x for x in v)
                out._merge((kind, p + 1), wedge_pair(theta, f, pair, coeff))
        return out
    return total.matrix_of(fn)


def is_form_linear(total, matrix):
    """Whether an operator is wedge multiplication by an endomorphism-
    valued form: its even part must commute and its odd part
    anticommute with left multiplication by every 1-form."""
    even, odd = _parity_split(total, matrix)
    for i in range(total.data.algebroid.dim):
        lw = _wedge_basis_operator(total, i)
        if even * lw != lw * even:
            return False
        if odd * lw != (lw * odd).scale(-1):
            return False
    return True


def supertrace(op, check=True):
    """Supertrace of a form-linear operator, as a MixedForm.

    Reads the endomorphism-valued form off the section columns: trace
    over E minus trace over C, coefficient by coefficient.
    """
    if isinstance(op, NhSuperOp):
        data, matrix = op.data, op.matrix
        if op.side != "primal":
            raise FormError("supertrace expects a primal-side operator")
    else:
        data, matrix = op
    total = data.total_space()
    if check and not is_form_linear(total, matrix):
        raise FormError("supertrace of a non-form-linear operator")
    alg = data.algebroid
    from .basering import ring_as_module
    scal = ring_as_module(alg.ring)
    out = MixedForm(alg)
    for kind, sgn in (("E", 1), ("C", -1)):
        coeff = data.E if kind == "E" else data.C
        off0 = total.offsets[(kind, 0)]
        for j in range(coeff.dim):
            col = matrix.col(off0 + j)
            for (okind, p) in total.slots:
                if okind != kind:
                    continue
                space, _ = total.bases[(okind, p)]
                ooff = total.offsets[(okind, p)]
                target = alg.form_space(scal, p)
                compact = [ZERO] * target.compact_dim
                nz = False
                for idx in range(len(space.tuples)):
                    x = col[ooff + idx * coeff.dim + j]
                    if x:
                        nz = True
                        compact[idx] = x if sgn == 1 else -x
                if nz:
                    out = out + MixedForm(
                        alg, {p: target.form_from_compact(compact)})
    return out


def supertrace_tpoly(data, tpoly, check=True):
    return [supertrace((data, m), check=check) for m in tpoly.coeffs]


# ---------------------------------------------------------------------------
# characteristic forms

def cs_form(data, g, k):
    """The k-th secondary form: Berezin integral of str(T^{2k}).

    Exact at every step; the result is closed (checked here) and odd.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    tr = transgression(data, g)
    _, odd = tr.power_2k(k)
    strs = supertrace_tpoly(data, odd)
    ti = TIForm(data.algebroid, [], strs)
    out = ti.integrate_berezin()
    for d in out.degrees():
        if d % 2 == 0:
            raise AssertionError("even-degree component in an odd form")
    if not mixed_differential(data.algebroid, out).is_zero():
        raise AssertionError("characteristic form is not closed")
    return out


def cs_closed_form_remark(data, g, k):
    """str(D (gD D)^{k-1} - (gD D)^{k-1} gD); proportional to cs_form."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    tr = transgression(data, g)
    d, gd = tr.dmat, tr.gdmat
    core = Matrix.identity(d.rows)
    for _ in range(k - 1):
        core = gd * d * core
    expr = d * core - core * gd
    return supertrace((data, expr))


# ---------------------------------------------------------------------------
# classes and certificates

def class_coordinates(algebroid, form):
    """Coordinates of a closed homogeneous scalar form in a fixed basis
    of representatives of its cohomology, plus nothing else: returns
    None if the form is not closed."""
    conn = scalar_connection(algebroid)
    if not ce_differential(conn, form).is_zero():
        return None
    deg = form.degree
    dim_h, reps = cohomology(conn, deg)
    if dim_h == 0:
        return () if exactness_certificate(conn, form) is not None else None
    cols = [list(r.compact) for r in reps]
    if deg > 0:
        d_prev, dom_prev, _ = differential_matrix(conn, deg - 1)
        ml = dom_prev.multilinear_basis()
        for j in range(d_prev.cols):
            v = d_prev.col(j)
            compact = [ZERO] * form.space.compact_dim
            # image columns are in the codomain multilinear basis, which
            # over a scalar ring is the compact basis itself
            cod_ml = form.space.multilinear_basis()
            for c, b in zip(v, cod_ml):
                if c:
                    compact = [a + c * x for a, x in zip(compact, b)]
            cols.append(compact)
    mat = Matrix.from_rows(cols).transpose()
    x = solve(mat, form.compact)
    if x is None:
        return None
    return tuple(x[:dim_h])


class CsClass:
    """Cohomology class handle of a characteristic form.

    Stores the representative, its coordinates in a deterministic basis
    of H^{2k-1}, and exactness certificates for the components in every
    other degree.
    """

    def __init__(self, data, k, representative, coordinates, certificates):
        self.data = data
        self.k = k
        self.representative = representative
        self.coordinates = coordinates
        self.certificates = certificates

    def __eq__(self, other):
        return (isinstance(other, CsClass) and self.k == other.k
                and self.coordinates == other.coordinates)


def cs_class(data, k, g=None):
    """Class handle of cs_form; certifies degree concentration.

    Every component in a degree other than 2k-1 must be exact, with the
    primitive recorded; the remaining coordinates identify the class.
    """
    if g is None:
        g = identity_metric(data)
    rep = cs_form(data, g, k)
    alg = data.algebroid
    conn = scalar_connection(alg)
    certificates = {}
    target = 2 * k - 1
    for d in rep.degrees():
        if d == target:
            continue
        eta = exactness_certificate(conn, rep.component(d))
        if eta is None:
            raise AssertionError(
                "component outside the expected degree is not exact")
        certificates[d] = eta
    if target <= alg.dim:
        coords = class_coordinates(alg, rep.component(target))
        if coords is None:
            raise AssertionError("representative is not closed")
    else:
        coords = ()
    return CsClass(data, k, rep, coords, certificates)


def forms_cohomologous(algebroid, f1, f2):
    """Whether two mixed closed forms differ by an exact form, with the
    degree-wise primitives as witnesses; returns dict or None."""
    conn = scalar_connection(algebroid)
    diff = f1 - f2
    witnesses = {}
    for d in diff.degrees():
        eta = exactness_certificate(conn, diff.component(d))
        if eta is None:
            return None
        witnesses[d] = eta
    return witnesses


def self_adjoint_comparison(data, g):
    """A degree-1 operator equal to its own metric transport.

    The block differential with zero connection forms works for any
    metric: its transport is solved through the same pairing machinery
    and compared, not assumed.
    """
    from .algebroid import Connection
    alg = data.algebroid
    zc = [Matrix.zero(data.C.dim, data.C.dim) for _ in range(alg.dim)]
    ze = [Matrix.zero(data.E.dim, data.E.dim) for _ in range(alg.dim)]
    hom = data.hom_ec()
    zero_omega = form_from_tensor(alg, hom.module, 2, {})
    flat0 = SuperData(alg, data.E, data.C,
                      Matrix.zero(data.E.dim, data.C.dim),
                      Connection(alg, data.C, zc),
                      Connection(alg, data.E, ze), zero_omega)
    omat = superconnection_matrix(flat0)
    tmat = metric_transport(flat0, GradedMetric(flat0, g.gram_C,
                                                g.gram_E)).matrix
    if omat != tmat:
        raise AssertionError("comparison operator is not self-adjoint")
    return flat0, omat
