"""Flat superconnections on a two-term graded complex of R-modules.

The data: an algebroid A, a side module E (even, degree 0), a core module C
(odd, degree -1), an R-linear core anchor partial: C -> E, A-connections on
C and E, and a 2-form Omega valued in Hom(E, C).  The total operator

    D = D^c + D^s + partial + Omega

acts on Omega(A) tensor (C[1] + E), with the sign rules

    partial(w a) = (-1)^p w . partial(a),   Omega(w e) = (-1)^p w ^ Omega(e)

for a p-form w, a core section a and a side section e.  D^2 = 0 is
equivalent to four pointwise conditions, checked both ways here.

Curvature convention: throughout this module the conditions are stated with
the commutator-first curvature F_{X,Y} = [nabla_X, nabla_Y] - nabla_[X,Y]
(the same convention as Connection.curvature), under which flatness reads

    partial nabla^c = nabla^s partial,  F^c = -Omega partial,
    F^s = -partial Omega,               the induced derivative of Omega = 0.
"""

from .linalg import Matrix
from .scalars import Q, ZERO, rational
from .basering import module_hom_space, ring_as_module
from .algebroid import (Connection, Form, FormError, ce_differential,
                        check_connection, hom_connection, dual_connection,
                        wedge_pair, form_from_tensor)


class SuperDataError(ValueError):
    pass


class SuperData:
    """Superconnection data (A, E, C, partial, nabla^c, nabla^s, Omega).

    E is the side module, C the core module; partial maps C into E.
    Constructors admit non-flat tuples; flatness is a checked property.
    """

    def __init__(self, algebroid, E, C, core_anchor, nabla_c, nabla_s,
                 Omega):
        self.algebroid = algebroid
        self.E = E
        self.C = C
        if not isinstance(core_anchor, Matrix):
            core_anchor = Matrix.from_rows(
                [[rational(x) for x in row] for row in core_anchor])
        if core_anchor.rows != E.dim or core_anchor.cols != C.dim:
            raise SuperDataError("core anchor must map C coordinates into E")
        self.core_anchor = core_anchor
        self.nabla_c = nabla_c
        self.nabla_s = nabla_s
        if nabla_c.coeff.dim != C.dim or nabla_s.coeff.dim != E.dim:
            raise SuperDataError("connections attached to the wrong modules")
        self._hom_ec = None
        self._hom_ce = None
        self._total = None
        if isinstance(Omega, Form):
            self.Omega = Omega
        else:
            self.Omega = form_from_tensor(algebroid, self.hom_ec().module, 2,
                                          Omega)
        if self.Omega.degree != 2:
            raise SuperDataError("Omega must be a 2-form")
        if self.Omega.space.coeff.dim != self.hom_ec().dim:
            raise SuperDataError("Omega must take values in Hom(E, C)")

    def hom_ec(self):
        """Hom(E, C), the space where Omega and gauges take values."""
        if self._hom_ec is None:
            self._hom_ec = module_hom_space(self.E, self.C)
        return self._hom_ec

    def hom_ce(self):
        if self._hom_ce is None:
            self._hom_ce = module_hom_space(self.C, self.E)
        return self._hom_ce

    def omega_matrix(self, i, j):
        """Omega_{e_i, e_j} as a C x E coordinate matrix."""
        return self.hom_ec().to_matrix(self.Omega.value((i, j)))

    def total_space(self):
        if self._total is None:
            self._total = TotalSpace(self)
        return self._total

    def validate(self):
        """Witness report for the non-differential axioms of the data."""
        report = []
        if self.hom_ce().from_matrix(self.core_anchor) is None:
            report.append("core anchor is not R-linear")
        for line in check_connection(self.nabla_c):
            report.append("core connection: " + line)
        for line in check_connection(self.nabla_s):
            report.append("side connection: " + line)
        return report


# ---------------------------------------------------------------------------
# graded elements and the total operator

class GradedElement:
    """Element of Omega(A) tensor (C[1] + E): forms keyed by ('C'|'E', p)."""

    def __init__(self, data, parts=None):
        self.data = data
        self.parts = {}
        if parts:
            for key, form in parts.items():
                if not form.is_zero():
                    self.parts[key] = form

    def component(self, kind, p):
        form = self.parts.get((kind, p))
        if form is not None:
            return form
        coeff = self.data.C if kind == "C" else self.data.E
        return self.data.algebroid.form_space(coeff, p).zero()

    def _merge(self, key, form):
        if key in self.parts:
            form = self.parts[key] + form
        if form.is_zero():
            self.parts.pop(key, None)
        else:
            self.parts[key] = form

    def __add__(self, other):
        out = GradedElement(self.data, dict(self.parts))
        for key, form in other.parts.items():
            out._merge(key, form)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return GradedElement(self.data, {k: f.scale(c)
                                         for k, f in self.parts.items()})

    def is_zero(self):
        return not self.parts

    def __eq__(self, other):
        return isinstance(other, GradedElement) and self.parts == other.parts


def section(data, kind, coords):
    """Degree-0 form with the given C or E coefficient vector."""
    coeff = data.C if kind == "C" else data.E
    space = data.algebroid.form_space(coeff, 0)
    return GradedElement(data, {(kind, 0): space.form_from_compact(
        [rational(x) for x in coords])})


def apply_D(data, elem):
    """The superconnection applied to a graded element."""
    alg = data.algebroid
    hom = data.hom_ec()
    out = GradedElement(data)
    for (kind, p), form in elem.parts.items():
        if kind == "C":
            if p < alg.dim:
                out._merge(("C", p + 1), ce_differential(data.nabla_c, form))
            moved = _apply_coeff_map(alg, data.E, data.core_anchor, form)
            out._merge(("E", p), moved if p % 2 == 0 else moved.scale(-1))
        else:
            if p < alg.dim:
                out._merge(("E", p + 1), ce_differential(data.nabla_s, form))
            if p + 2 <= alg.dim:
                pair = lambda h, v: hom.to_matrix(h).apply(v)
                wedged = wedge_pair(data.Omega, form, pair, data.C)
                out._merge(("C", p + 2),
                           wedged if p % 2 == 0 else wedged.scale(-1))
    return out


def _apply_coeff_map(alg, target_coeff, matrix, form):
    space = alg.form_space(target_coeff, form.degree)
    compact = [ZERO] * space.compact_dim
    dw = target_coeff.dim
    for n, t in enumerate(form.space.tuples):
        src = form.compact[n * form.space.coeff.dim:
                           (n + 1) * form.space.coeff.dim]
        img = matrix.apply(src)
        base = n * dw
        for k in range(dw):
            compact[base + k] = img[k]
    return space.form_from_compact(compact)


class TotalSpace:
    """Coordinates on Omega(A) tensor (C[1] + E), slotwise.

    Each slot is ('C'|'E', p) with the R-multilinear basis of the form
    space; operators become exact rational matrices here.
    """

    def __init__(self, data):
        self.data = data
        alg = data.algebroid
        self.slots = []
        self.offsets = {}
        self.bases = {}
        dim = 0
        for p in range(alg.dim + 1):
            for kind, coeff in (("C", data.C), ("E", data.E)):
                space = alg.form_space(coeff, p)
                basis = space.multilinear_basis()
                slot = (kind, p)
                self.slots.append(slot)
                self.offsets[slot] = dim
                self.bases[slot] = (space, basis)
                dim += len(basis)
        self.dim = dim

    def slot_degree(self, slot):
        kind, p = slot
        return p - 1 if kind == "C" else p

    def vector(self, elem):
        from .linalg import solve
        vec = [ZERO] * self.dim
        for slot, form in elem.parts.items():
            space, basis = self.bases[slot]
            if not basis:
                if not form.is_zero():
                    raise FormError("component outside the multilinear space")
                continue
            mat = Matrix.from_rows([list(b) for b in basis]).transpose()
            coords = solve(mat, form.compact)
            if coords is None:
                raise FormError("component outside the multilinear space")
            base = self.offsets[slot]
            for k, c in enumerate(coords):
                vec[base + k] = c
        return tuple(vec)

    def element(self, vec):
        parts = {}
        for slot in self.slots:
            space, basis = self.bases[slot]
            base = self.offsets[slot]
            compact = [ZERO] * space.compact_dim
            nonzero = False
            for k, b in enumerate(basis):
                c = vec[base + k]
                if c:
                    nonzero = True
                    compact = [a + c * x for a, x in zip(compact, b)]
            if nonzero:
                parts[slot] = space.form_from_compact(compact)
        return GradedElement(self.data, parts)

    def basis_element(self, slot, k):
        space, basis = self.bases[slot]
        form = space.form_from_compact(list(basis[k]))
        return GradedElement(self.data, {slot: form})

    def matrix_of(self, fn):
        """Matrix of a linear map on graded elements."""
        cols = []
        for slot in self.slots:
            _, basis = self.bases[slot]
            for k in range(len(basis)):
                img = fn(self.basis_element(slot, k))
                cols.append(list(self.vector(img)))
        if not cols:
            return Matrix.zero(0, 0)
        return Matrix.from_rows(cols).transpose()


def superconnection_matrix(data):
    return data.total_space().matrix_of(lambda e: apply_D(data, e))


# ---------------------------------------------------------------------------
# flatness

_CONDITION_NAMES = (
    "condition 1 (core anchor intertwines the connections)",
    "condition 2 (core curvature equals the Omega contraction)",
    "condition 3 (side curvature equals the Omega contraction)",
    "condition 4 (Omega is covariantly closed)",
)


def curvature_components(data):
    """The three graded components of D^2 as witness data.

    Keyed by internal degree: comp[1] holds the chain-map defects, comp[0]
    the curvature defects on C and E, comp[-1] the covariant derivative of
    Omega (a Hom(E, C)-valued 3-form).  All zero iff the data is flat.
    """
    alg = data.algebroid
    par = data.core_anchor
    hconn = hom_connection(data.nabla_c, data.nabla_s, data.hom_ec())
    comp = {}
    comp[-1] = ce_differential(hconn, data.Omega)
    comp[0] = (
        [data.nabla_c.curvature(i, j) + data.omega_matrix(i, j) * par
         for i in range(alg.dim) for j in range(i + 1, alg.dim)],
        [data.nabla_s.curvature(i, j) + par * data.omega_matrix(i, j)
         for i in range(alg.dim) for j in range(i + 1, alg.dim)])
    comp[1] = [par * data.nabla_c.nabla[i] - data.nabla_s.nabla[i] * par
               for i in range(alg.dim)]
    return comp


def flatness_report(data):
    """Which of the four flatness conditions fail, with witnesses."""
    comp = curvature_components(data)
    report = []
    for i, m in enumerate(comp[1]):
        if not m.is_zero():
            report.append(_CONDITION_NAMES[0] + " fails at basis %d" % i)
    core_defects, side_defects = comp[0]
    for n, m in enumerate(core_defects):
        if not m.is_zero():
            report.append(_CONDITION_NAMES[1] + " fails at pair %d" % n)
    for n, m in enumerate(side_defects):
        if not m.is_zero():
            report.append(_CONDITION_NAMES[2] + " fails at pair %d" % n)
    if not comp[-1].is_zero():
        report.append(_CONDITION_NAMES[3] + " fails")
    return report


def is_flat_super(data):
    """Report of failing flatness conditions; empty iff D^2 = 0.

    The pointwise verdict is cross-checked against the square of the
    operator matrix on the whole graded space.
    """
    report = flatness_report(data)
    dmat = superconnection_matrix(data)
    operator_flat = (dmat * dmat).is_zero()
    if (not report) != operator_flat:
        raise AssertionError(
            "pointwise and operator flatness verdicts disagree")
    return report


# ---------------------------------------------------------------------------
# gauge transformations

class SigmaGauge:
    """Gauge parameter: a 1-form with values in Hom(E, C).

    As an operator it has total degree 0, vanishes on the C slots and
    commutes evenly with form multiplication: sigma(w e) = w ^ sigma(e).
    u = 1 + sigma is an automorphism with u^{-1} = 1 - sigma since
    sigma^2 = 0.
    """

    def __init__(self, data, form_or_values):
        self.data = data
        hom = data.hom_ec()
        if isinstance(form_or_values, Form):
            self.form = form_or_values
        else:
            self.form = form_from_tensor(data.algebroid, hom.module, 1,
                                         form_or_values)
        if self.form.degree != 1 or self.form.space.coeff.dim != hom.dim:
            raise SuperDataError("sigma must be a 1-form valued in Hom(E, C)")

    def matrix(self, i):
        return self.data.hom_ec().to_matrix(self.form.value((i,)))

    def matrix_at(self, coords):
        return self.data.hom_ec().to_matrix(self.form.evaluate([coords]))

    def apply(self, elem):
        data = self.data
        hom = data.hom_ec()
        out = GradedElement(data)
        pair = lambda h, v: hom.to_matrix(h).apply(v)
        for (kind, p), form in elem.parts.items():
            if kind == "E" and p + 1 <= data.algebroid.dim:
                wedged = wedge_pair(self.form, form, pair, data.C)
                out._merge(("C", p + 1),
                           wedged if p % 2 == 0 else wedged.scale(-1))
        return out

    def operator_matrix(self):
        return self.data.total_space().matrix_of(self.apply)


def gauge_transform_exp(data, sigma):
    """Conjugated superconnection u D u^{-1}, u = 1 + sigma, as new data.

    Computed on the total space as D + [sigma, D] + (1/2)[sigma,[sigma,D]]
    (the series terminates: the triple bracket vanishes), cross-checked
    against literal conjugation, then re-read into pointwise data.
    """
    total = data.total_space()
    dmat = superconnection_matrix(data)
    smat = sigma.operator_matrix()
    if not (smat * smat).is_zero():
        raise SuperDataError("sigma squared does not vanish")
    c1 = smat * dmat - dmat * smat
    c2 = smat * c1 - c1 * smat
    c3 = smat * c2 - c2 * smat
    if not c3.is_zero():
        raise AssertionError("the bracket series fails to terminate")
    dnew = dmat + c1 + c2.scale(Q(1, 2))
    ident = Matrix.identity(total.dim)
    conj = (ident + smat) * dmat * (ident - smat)
    if dnew != conj:
        raise AssertionError("bracket expansion disagrees with conjugation")
    new = _extract_superdata(data, dnew)
    rebuilt = superconnection_matrix(new)
    if rebuilt != dnew:
        raise AssertionError(
            "conjugated operator is not of superconnection type")
    return new


def _extract_superdata(data, dmat):
    """Read (partial, nabla^c, nabla^s, Omega) off an operator matrix."""
    alg = data.algebroid
    total = data.total_space()
    c_cols, s_cols, par_cols = [], [], []
    omega_cols = []
    for j in range(data.C.dim):
        img = total.element(dmat.apply(total.vector(
            section(data, "C", data.C.basis_element(j)))))
        par_cols.append(list(img.component("E", 0).value(())))
        c_cols.append([list(img.component("C", 1).value((i,)))
                       for i in range(alg.dim)])
    for j in range(data.E.dim):
        img = total.element(dmat.apply(total.vector(
            section(data, "E", data.E.basis_element(j)))))
        s_cols.append([list(img.component("E", 1).value((i,)))
                       for i in range(alg.dim)])
        omega_cols.append(img.component("C", 2))
    partial = Matrix.from_rows(par_cols).transpose() if par_cols else \
        Matrix.zero(data.E.dim, 0)
    nabla_c = [Matrix.from_rows([c_cols[j][i] for j in range(data.C.dim)]
                                ).transpose() if data.C.dim else
               Matrix.zero(0, 0) for i in range(alg.dim)]
    nabla_s = [Matrix.from_rows([s_cols[j][i] for j in range(data.E.dim)]
                                ).transpose() if data.E.dim else
               Matrix.zero(0, 0) for i in range(alg.dim)]
    hom = data.hom_ec()
    values = {}
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            m = Matrix.from_rows(
                [list(omega_cols[k].value((i, j)))
                 for k in range(data.E.dim)]).transpose() if data.E.dim \
                else Matrix.zero(data.C.dim, 0)
            coords = hom.from_matrix(m)
            if coords is None:
                raise AssertionError("extracted Omega is not R-linear")
            values[(i, j)] = coords
    omega = form_from_tensor(alg, hom.module, 2, values)
    return SuperData(alg, data.E, data.C, partial,
                     Connection(alg, data.C, nabla_c),
                     Connection(alg, data.E, nabla_s), omega)


def gauge_transform(data, sigma):
    """Pointwise gauge action; agrees with gauge_transform_exp exactly.

    The core anchor is unchanged; nabla^c gains sigma_X partial and
    nabla^s gains partial sigma_X.  The Omega formula below is the literal
    two-form component of the conjugation under this module's sign rules.
    """
    alg = data.algebroid
    par = data.core_anchor
    nabla_c = [data.nabla_c.nabla[i] + sigma.matrix(i) * par
               for i in range(alg.dim)]
    nabla_s = [data.nabla_s.nabla[i] + par * sigma.matrix(i)
               for i in range(alg.dim)]
    hom = data.hom_ec()
    values = {}
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            si, sj = sigma.matrix(i), sigma.matrix(j)
            m = (data.omega_matrix(i, j)
                 + sigma.matrix_at(alg.bracket[i][j])
                 - data.nabla_c.nabla[i] * sj + data.nabla_c.nabla[j] * si
                 - si * data.nabla_s.nabla[j] + sj * data.nabla_s.nabla[i]
                 - si * par * sj + sj * par * si)
            coords = hom.from_matrix(m)
            if coords is None:
                raise AssertionError("gauged Omega is not R-linear")
            values[(i, j)] = coords
    omega = form_from_tensor(alg, hom.module, 2, values)
    return SuperData(alg, data.E, data.C, par,
                     Connection(alg, data.C, nabla_c),
                     Connection(alg, data.E, nabla_s), omega)


# ---------------------------------------------------------------------------
# the fat algebroid structure

def fat_bracket(data, pair1, pair2):
    """Bracket of (X, phi) pairs, X in A coordinates, phi: E -> C.

    With flat data this is a Lie bracket on pairs; the Hom component is
    the decomposed bracket of linear sections.
    """
    x, phi = pair1
    y, psi = pair2
    alg = data.algebroid
    par = data.core_anchor
    nc_x = data.nabla_c.operator(x)
    nc_y = data.nabla_c.operator(y)
    ns_x = data.nabla_s.operator(x)
    ns_y = data.nabla_s.operator(y)
    om = data.hom_ec().to_matrix(data.Omega.evaluate([x, y]))
    bracket_a = alg.bracket_vec(x, y)
    hom_part = (-om + nc_x * psi - psi * ns_x - nc_y * phi + phi * ns_y
                + phi * par * psi - psi * par * phi)
    return bracket_a, hom_part


def fat_representations(data, pair):
    """The induced operators of (X, phi) on C and on E."""
    x, phi = pair
    on_c = data.nabla_c.operator(x) + phi * data.core_anchor
    on_e = data.nabla_s.operator(x) + data.core_anchor * phi
    return on_c, on_e


def jacobi_omega(data):
    """Max-norm residual of the cyclic cocycle identity of Omega.

    For flat data, Omega_{[X,Y],Z} + Omega_{X,Y} nabla^s_Z
    - nabla^c_Z Omega_{X,Y} + cyclic = 0 on all basis triples; the
    returned residual is exactly zero in that case.
    """
    alg = data.algebroid
    residual = ZERO
    for i in range(alg.dim):
        for j in range(alg.dim):
            for k in range(alg.dim):
                acc = Matrix.zero(data.C.dim, data.E.dim)
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    ea = alg.module_A.basis_element(a)
                    eb = alg.module_A.basis_element(b)
                    om_ab = data.hom_ec().to_matrix(
                        data.Omega.evaluate([ea, eb]))
                    om_brk = data.hom_ec().to_matrix(data.Omega.evaluate(
                        [alg.bracket[a][b], alg.module_A.basis_element(c)]))
                    acc = acc + om_brk + om_ab * data.nabla_s.nabla[c] \
                        - data.nabla_c.nabla[c] * om_ab
                for x in acc.entries:
                    if abs(x) > residual:
                        residual = abs(x)
    return residual


# ---------------------------------------------------------------------------
# dualization

def dualize(data):
    """The dual superconnection data, side C^* and core E^*.

    The core anchor dualizes to the plain adjoint of partial; the two
    connections dualize with their roles exchanged; Omega becomes minus
    its adjoint (the sign absorbs the canonical core identification, so
    the double dual is the identity on the 4-tuple).  Flat in, flat out.
    """
    if is_flat_super(data):
        raise SuperDataError("dualize requires flat data")
    alg = data.algebroid
    hs_e = module_hom_space(data.E, ring_as_module(alg.ring))
    hs_c = module_hom_space(data.C, ring_as_module(alg.ring))
    out = _dualize_unchecked(data, hs_e, hs_c)
    if is_flat_super(out):
        raise AssertionError("dual of flat data failed to be flat")
    return out


def dual_differential_check(data):
    """Verify the defining pairing identities of the dual data.

    The graded Leibniz identity for the evaluation pairing, checked on all
    generating sections: the core anchor, both connections and Omega each
    satisfy their adjoint relation against dualize(data).  The squared
    dual operator is also compared with flatness of the input.  Returns a
    witness report.
    """
    alg = data.algebroid
    hs_e = module_hom_space(data.E, ring_as_module(alg.ring))
    hs_c = module_hom_space(data.C, ring_as_module(alg.ring))
    dual_data = _dualize_unchecked(data, hs_e, hs_c)
    report = []
    # core anchor: <partial a, s> = <a, partial' s>
    for k, t in enumerate(hs_e.maps):
        lhs = t * data.core_anchor
        rhs = hs_c.to_matrix(dual_data.core_anchor.col(k))
        if lhs != rhs:
            report.append("core anchor pairing fails at dual basis %d" % k)
    # connections: rho(X)<a, s> = <nabla_X a, s> + <a, nabla'_X s>
    for i in range(alg.dim):
        rho = alg.anchor[i]
        for k, t in enumerate(hs_e.maps):
            lhs = rho * t - t * data.nabla_s.nabla[i]
            rhs = hs_e.to_matrix(dual_data.nabla_c.nabla[i].col(k))
            if lhs != rhs:
                report.append("side connection pairing fails at (%d, %d)"
                              % (i, k))
        for k, u in enumerate(hs_c.maps):
            lhs = rho * u - u * data.nabla_c.nabla[i]
            rhs = hs_c.to_matrix(dual_data.nabla_s.nabla[i].col(k))
            if lhs != rhs:
                report.append("core connection pairing fails at (%d, %d)"
                              % (i, k))
    # Omega: <Omega a, s> + <a, Omega' s> = 0
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            om = data.omega_matrix(i, j)
            om_dual = dual_data.omega_matrix(i, j)
            for k, u in enumerate(hs_c.maps):
                lhs = u * om
                rhs = hs_e.to_matrix(om_dual.col(k)).scale(-1)
                if lhs != rhs:
                    report.append("Omega pairing fails at (%d, %d, %d)"
                                  % (i, j, k))
    # the dual operator squares to zero exactly when the input is flat
    dmat = superconnection_matrix(dual_data)
    dual_flat = (dmat * dmat).is_zero()
    if dual_flat != (not flatness_report(data)):
        report.append("dual operator square disagrees with input flatness")
    return report


def _dualize_unchecked(data, hs_e, hs_c):
    """dualize() without the flatness gate, for diagnostic use."""
    alg = data.algebroid
    side = hs_c.module
    core = hs_e.module
    par_cols = []
    for t in hs_e.maps:
        coords = hs_c.from_matrix(t * data.core_anchor)
        if coords is None:
            raise SuperDataError("dual core anchor is not R-linear")
        par_cols.append(list(coords))
    partial = Matrix.from_rows(par_cols).transpose() if par_cols else \
        Matrix.zero(side.dim, 0)
    nabla_c = dual_connection(data.nabla_s, hs_e)
    nabla_s = dual_connection(data.nabla_c, hs_c)
    hom_new = module_hom_space(side, core)
    values = {}
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            om = data.omega_matrix(i, j)
            cols = []
            for u in hs_c.maps:
                coords = hs_e.from_matrix((u * om).scale(-1))
                if coords is None:
                    raise SuperDataError("dual Omega is not R-linear")
                cols.append(list(coords))
            m = Matrix.from_rows(cols).transpose() if cols else \
                Matrix.zero(core.dim, 0)
            coords = hom_new.from_matrix(m)
            if coords is None:
                raise SuperDataError("dual Omega is not R-linear")
            values[(i, j)] = coords
    omega = form_from_tensor(alg, hom_new.module, 2, values)
    return SuperData(alg, side, core, partial, nabla_c, nabla_s, omega)
