"""Constant-rank analysis of flat superconnection data.

Splits the core anchor into kernel / image / cokernel pieces, extracts
the 2x2 block structure of the connections, removes the off-diagonal
blocks by an explicit gauge, and assembles the invariant tuple
(ranks, restricted connections, obstruction class) together with the
type-0 + type-1 normal form.  The base ring must be a finite product of
the rationals so that constant rank is meaningful factor by factor.
"""

from .scalars import ZERO
from .linalg import (Matrix, Subspace, rank, kernel, image, intersect,
                     inverse, solve)
from .basering import (rational_factors, submodule_as_module,
                       module_hom_space, direct_sum_modules)
from .algebroid import (Connection, form_from_tensor, ce_differential,
                        hom_connection, is_flat, cohomology,
                        differential_matrix, exactness_certificate)
from .superconn import (SuperData, SuperDataError, SigmaGauge,
                        gauge_transform, is_flat_super)


class ClassifyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# splittings

def _factor_spaces(mod):
    """Idempotent images: the coordinate subspace of each ring factor."""
    ring = mod.ring
    out = []
    for f in range(ring.dim):
        out.append(image(mod.act_operator(ring.basis_element(f))))
    return out


def _greedy_extend(base, candidates, ambient):
    """Candidates (in order) extending span(base) to span(base+candidates)."""
    current = list(base)
    chosen = []
    span = Subspace(ambient, current)
    for v in candidates:
        if not span.contains(v):
            current.append(v)
            chosen.append(tuple(v))
            span = Subspace(ambient, current)
    return chosen


class RegularSplitting:
    """Adapted bases for a constant-rank core anchor.

    k_basis spans ker(partial); c1_basis is a complement of it in C;
    f_basis = -partial(c1_basis) spans im(partial); nu_basis is a
    complement of the image in E.  All four are assembled factor by
    factor, so every basis vector lives in a single ring factor and the
    spans are submodules.
    """

    def __init__(self, data, k_basis, c1_basis, nu_basis, f_basis):
        self.data = data
        self.k_basis = k_basis
        self.c1_basis = c1_basis
        self.nu_basis = nu_basis
        self.f_basis = f_basis
        cols_c = [list(v) for v in k_basis + c1_basis]
        cols_e = [list(v) for v in nu_basis + f_basis]
        self.S_C = (Matrix.from_rows(cols_c).transpose()
                    if cols_c else Matrix.zero(data.C.dim, 0))
        self.S_E = (Matrix.from_rows(cols_e).transpose()
                    if cols_e else Matrix.zero(data.E.dim, 0))
        if self.S_C.rows != self.S_C.cols or self.S_E.rows != self.S_E.cols:
            raise ClassifyError("adapted bases do not span the modules")
        self.S_C_inv = inverse(self.S_C) if self.S_C.rows else self.S_C
        self.S_E_inv = inverse(self.S_E) if self.S_E.rows else self.S_E

    @property
    def rank(self):
        return len(self.f_basis)

    def dims(self):
        return (len(self.k_basis), len(self.c1_basis),
                len(self.nu_basis), len(self.f_basis))


def regularity(data, reverse=False):
    """Adapted splitting when the core anchor has the same rank on every
    ring factor, else None.  reverse flips the greedy complement order;
    the classifying tuple must not depend on it."""
    ring = data.algebroid.ring
    if rational_factors(ring) is None:
        raise ClassifyError(
            "classification needs a base ring presented as a finite "
            "product of the rationals")
    partial = data.core_anchor
    cfs = _factor_spaces(data.C)
    efs = _factor_spaces(data.E)
    ranks = set()
    for cf in cfs:
        ranks.add(rank(partial * cf.matrix()) if cf.dim else 0)
    if len(ranks) > 1:
        return None
    K = kernel(partial)
    k_basis, c1_basis = [], []
    for cf in cfs:
        kf = intersect(K, cf)
        k_basis += [tuple(v) for v in kf.basis]
        cand = list(cf.basis)
        if reverse:
            cand = cand[::-1]
        c1_basis += _greedy_extend(list(kf.basis), cand, data.C.dim)
    f_basis = [tuple(-x for x in partial.apply(c)) for c in c1_basis]
    F = Subspace(data.E.dim, f_basis)
    nu_basis = []
    for ef in efs:
        ff = intersect(F, ef)
        cand = list(ef.basis)
        if reverse:
            cand = cand[::-1]
        nu_basis += _greedy_extend(list(ff.basis), cand, data.E.dim)
    return RegularSplitting(data, k_basis, c1_basis, nu_basis, f_basis)


# ---------------------------------------------------------------------------
# block extraction

def _blocks(m, row_split, col_split):
    """Cut a matrix into 2x2 blocks at the given indices."""
    def cut(r0, r1, c0, c1):
        return Matrix.from_rows(
            [[m[(i, j)] for j in range(c0, c1)] for i in range(r0, r1)]
        ) if (r1 > r0 and c1 > c0) else Matrix.zero(r1 - r0, c1 - c0)
    return (cut(0, row_split, 0, col_split),
            cut(0, row_split, col_split, m.cols),
            cut(row_split, m.rows, 0, col_split),
            cut(row_split, m.rows, col_split, m.cols))


class BlockData:
    """Connection and curvature blocks in an adapted basis.

    nabla_K / nabla_nu are the restrictions to ker(partial) and to the
    complement of its image; nabla_F is the middle block, forced equal
    on both sides; Gamma, Lambda are the surviving off-diagonal blocks;
    alpha holds the (K, nu) blocks of Omega, the rest of Omega is kept
    for reassembly checks.
    """

    def __init__(self, split):
        data = split.data
        self.split = split
        alg = data.algebroid
        nk = len(split.k_basis)
        nnu = len(split.nu_basis)
        self.nabla_K, self.nabla_nu, self.nabla_F = [], [], []
        self.Gamma, self.Lambda = [], []
        part = split.S_E_inv * data.core_anchor * split.S_C
        pk, pg, pl, pf = _blocks(part, nnu, nk)
        ident = Matrix.identity(split.rank)
        if not (pk.is_zero() and pg.is_zero() and pl.is_zero()
                and pf == ident.scale(-1)):
            raise ClassifyError("core anchor is not normalized by the "
                                "adapted bases")
        for i in range(alg.dim):
            nc = split.S_C_inv * data.nabla_c.nabla[i] * split.S_C
            ns = split.S_E_inv * data.nabla_s.nabla[i] * split.S_E
            nK, gam, zc, fC = _blocks(nc, nk, nk)
            nnu_blk, ze, lam, fE = _blocks(ns, nnu, nnu)
            if not zc.is_zero() or not ze.is_zero() or fC != fE:
                raise ClassifyError(
                    "structural zero violated at basis %d: input is not "
                    "flat" % i)
            self.nabla_K.append(nK)
            self.nabla_nu.append(nnu_blk)
            self.nabla_F.append(fC)
            self.Gamma.append(gam)
            self.Lambda.append(lam)
        self.alpha = {}
        self.omega_blocks = {}
        for i in range(alg.dim):
            for j in range(i + 1, alg.dim):
                om = split.S_C_inv * data.omega_matrix(i, j) * split.S_E
                a, b, c, d = _blocks(om, nk, nnu)
                self.alpha[(i, j)] = a
                self.omega_blocks[(i, j)] = (a, b, c, d)


def block_decompose(data, split):
    return BlockData(split)


def _curvature_matrices(algebroid, nabla):
    out = {}
    for i in range(algebroid.dim):
        for j in range(i + 1, algebroid.dim):
            comm = nabla[i] * nabla[j] - nabla[j] * nabla[i]
            br = Matrix.zero(nabla[0].rows, nabla[0].cols)
            for k, c in enumerate(algebroid.bracket[i][j]):
                if c:
                    br = br + nabla[k].scale(c)
            out[(i, j)] = comm - br
    return out


def block_diagonalize(data, split):
    """Gauge with the antidiagonal section built from Gamma and Lambda.

    Returns the transformed data (block-diagonal in the adapted basis)
    and the gauge itself.
    """
    if is_flat_super(data):
        raise SuperDataError("block diagonalization requires flat data")
    bd = BlockData(split)
    alg = data.algebroid
    nk, nc1, nnu, nf = split.dims()
    hs = data.hom_ec()
    values = {}
    for i in range(alg.dim):
        rows = [[ZERO] * (nnu + nf) for _ in range(nk + nc1)]
        for r in range(nk):
            for c in range(nf):
                rows[r][nnu + c] = bd.Gamma[i][(r, c)]
        for r in range(nc1):
            for c in range(nnu):
                rows[nk + r][c] = bd.Lambda[i][(r, c)]
        blk = Matrix.from_rows(rows) if rows else Matrix.zero(0, nnu + nf)
        orig = split.S_C * blk * split.S_E_inv
        coords = hs.from_matrix(orig)
        if coords is None:
            raise ClassifyError("antidiagonal section is not module-linear")
        values[(i,)] = coords
    sigma = SigmaGauge(data, form_from_tensor(alg, hs.module, 1, values))
    diag = gauge_transform(data, sigma)
    # verify the promised shape
    dbd = BlockData(RegularSplitting(diag, split.k_basis, split.c1_basis,
                                     split.nu_basis, split.f_basis))
    curv_f = _curvature_matrices(alg, bd.nabla_F)
    for i in range(alg.dim):
        if not dbd.Gamma[i].is_zero() or not dbd.Lambda[i].is_zero():
            raise AssertionError("gauge did not remove the off-diagonal "
                                 "connection blocks")
    for key, (_, b, c, d) in dbd.omega_blocks.items():
        if not b.is_zero() or not c.is_zero():
            raise AssertionError("gauged Omega is not block diagonal")
        if d != curv_f[key]:
            raise AssertionError("lower Omega block is not the commutator-"
                                 "first curvature of the middle connection")
    return diag, sigma


def extract_omega(data, split):
    """The obstruction 2-form on Hom(coker, ker), by the direct block
    formula and, independently, as the surviving block after the
    diagonalizing gauge; the two must agree.

    Returns (omega as a Form over the split submodules, class handle).
    """
    bd = BlockData(split)
    alg = data.algebroid
    direct = {}
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            direct[(i, j)] = (bd.alpha[(i, j)]
                              - bd.Gamma[i] * bd.Lambda[j]
                              + bd.Gamma[j] * bd.Lambda[i])
    diag, _ = block_diagonalize(data, split)
    dbd = BlockData(RegularSplitting(diag, split.k_basis, split.c1_basis,
                                     split.nu_basis, split.f_basis))
    for key in direct:
        if direct[key] != dbd.alpha[key]:
            raise AssertionError("block formula and gauge path disagree "
                                 "on the obstruction form")
    k_mod, _ = submodule_as_module(data.C, split.k_basis) \
        if split.k_basis else _trivial_submodule(data.C)
    nu_mod, _ = submodule_as_module(data.E, split.nu_basis) \
        if split.nu_basis else _trivial_submodule(data.E)
    conn_k = Connection(alg, k_mod, bd.nabla_K)
    conn_nu = Connection(alg, nu_mod, bd.nabla_nu)
    hom = module_hom_space(nu_mod, k_mod)
    values = {}
    for key, m in direct.items():
        coords = hom.from_matrix(m)
        if coords is None:
            raise ClassifyError("obstruction block is not module-linear")
        values[key] = coords
    omega = form_from_tensor(alg, hom.module, 2, values)
    handle = OmegaClass(alg, conn_k, conn_nu, hom, omega)
    return omega, handle


def _trivial_submodule(mod):
    from .basering import RModule
    sub = RModule(mod.ring, 0, [Matrix.zero(0, 0)] * mod.ring.dim)
    return sub, Matrix.zero(mod.dim, 0)


class OmegaClass:
    """Cohomology class handle for the obstruction form.

    Equality of two handles over the same complex is decided by an
    exactness certificate for the difference.
    """

    def __init__(self, algebroid, conn_k, conn_nu, hom, form):
        self.algebroid = algebroid
        self.conn_k = conn_k
        self.conn_nu = conn_nu
        self.hom = hom
        self.form = form
        if hom.dim:
            self.connection = hom_connection(conn_k, conn_nu, hom)
            if not is_flat(self.connection):
                raise ClassifyError("induced coefficient connection is "
                                    "not flat")
            if not ce_differential(self.connection, form).is_zero():
                raise ClassifyError("obstruction form is not closed")
        else:
            self.connection = None

    def same_complex(self, other):
        return (self.conn_k.nabla == other.conn_k.nabla
                and self.conn_nu.nabla == other.conn_nu.nabla
                and self.conn_k.coeff == other.conn_k.coeff
                and self.conn_nu.coeff == other.conn_nu.coeff)

    def difference_primitive(self, other):
        """Certificate that both handles represent the same class."""
        if not self.same_complex(other):
            return None
        if self.connection is None:
            return Matrix.zero(0, 0)
        return exactness_certificate(self.connection,
                                     self.form - other.form)

    def is_zero_class(self):
        if self.connection is None:
            return True
        return exactness_certificate(self.connection, self.form) is not None

    def coordinates(self):
        if self.connection is None:
            return ()
        return _class_coordinates(self.connection, self.form)


def _class_coordinates(conn, form):
    """Coordinates in a deterministic basis of H^deg, or None if the
    form is not closed."""
    if not ce_differential(conn, form).is_zero():
        return None
    deg = form.degree
    dim_h, reps = cohomology(conn, deg)
    cols = [list(r.compact) for r in reps]
    if deg > 0:
        d_prev, _, cod = differential_matrix(conn, deg - 1)
        cod_ml = cod.multilinear_basis()
        for j in range(d_prev.cols):
            v = d_prev.col(j)
            compact = [ZERO] * form.space.compact_dim
            for c, b in zip(v, cod_ml):
                if c:
                    compact = [a + c * x for a, x in zip(compact, b)]
            cols.append(compact)
    if not cols:
        return () if form.is_zero() else None
    mat = Matrix.from_rows(cols).transpose()
    x = solve(mat, form.compact)
    if x is None:
        return None
    return tuple(x[:dim_h])


# ---------------------------------------------------------------------------
# builders and direct sums

def build_type1(algebroid, module, conn):
    """Core anchor -identity, both connections equal, Omega the
    commutator-first curvature of the connection; flat for every
    connection, flat or not."""
    hom = module_hom_space(module, module)
    values = {}
    for i in range(algebroid.dim):
        for j in range(i + 1, algebroid.dim):
            coords = hom.from_matrix(conn.curvature(i, j))
            if coords is None:
                raise ClassifyError("curvature is not module-linear")
            values[(i, j)] = coords
    omega = form_from_tensor(algebroid, hom.module, 2, values)
    ident = Matrix.identity(module.dim)
    return SuperData(algebroid, module, module, ident.scale(-1),
                     Connection(algebroid, module, list(conn.nabla)),
                     conn, omega)


def build_type0(algebroid, side, core, conn_s, conn_c, omega):
    """Zero core anchor; requires both connections flat and the
    obstruction form closed under the induced coefficient connection."""
    report = []
    for name, conn in (("side", conn_s), ("core", conn_c)):
        for i in range(algebroid.dim):
            for j in range(i + 1, algebroid.dim):
                if not conn.curvature(i, j).is_zero():
                    report.append("%s connection has curvature at (%d, %d)"
                                  % (name, i, j))
    hom = module_hom_space(side, core)
    if hom.dim:
        hc = hom_connection(conn_c, conn_s, hom)
        if not ce_differential(hc, omega).is_zero():
            report.append("obstruction form is not closed")
    if report:
        raise ClassifyError("; ".join(report))
    return SuperData(algebroid, side, core, Matrix.zero(side.dim, core.dim),
                     conn_c, conn_s, omega)


def _same_algebroid(a, b):
    return (a.ring == b.ring and a.module_A == b.module_A
            and a.bracket == b.bracket and a.anchor == b.anchor)


def _block_diag(a, b):
    rows = [[ZERO] * (a.cols + b.cols) for _ in range(a.rows + b.rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            rows[i][j] = a[(i, j)]
    for i in range(b.rows):
        for j in range(b.cols):
            rows[a.rows + i][a.cols + j] = b[(i, j)]
    if not rows:
        return Matrix.zero(0, a.cols + b.cols)
    if not rows[0]:
        return Matrix.zero(a.rows + b.rows, 0)
    return Matrix.from_rows(rows)


def direct_sum(d1, d2):
    """Componentwise direct sum over a shared algebroid."""
    if not _same_algebroid(d1.algebroid, d2.algebroid):
        raise ClassifyError("direct sum over different algebroids")
    alg = d1.algebroid
    E = direct_sum_modules(d1.E, d2.E)
    C = direct_sum_modules(d1.C, d2.C)
    nc = [_block_diag(d1.nabla_c.nabla[i], d2.nabla_c.nabla[i])
          for i in range(alg.dim)]
    ns = [_block_diag(d1.nabla_s.nabla[i], d2.nabla_s.nabla[i])
          for i in range(alg.dim)]
    part = _block_diag(d1.core_anchor, d2.core_anchor)
    hom = module_hom_space(E, C)
    values = {}
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            m = _block_diag(d1.omega_matrix(i, j), d2.omega_matrix(i, j))
            coords = hom.from_matrix(m)
            if coords is None:
                raise ClassifyError("summed obstruction form is not "
                                    "module-linear")
            values[(i, j)] = coords
    omega = form_from_tensor(alg, hom.module, 2, values)
    return SuperData(alg, E, C, part, Connection(alg, C, nc),
                     Connection(alg, E, ns), omega)


# ---------------------------------------------------------------------------
# invariant tuple and normal form

class ClassifyingTuple:
    """The comparable invariant: module sizes, core-anchor rank, the two
    restricted connections in canonical bases, and the obstruction class
    coordinates in a deterministic cohomology basis."""

    def __init__(self, dims, rank_partial, nabla_K, nabla_nu, omega_coords):
        self.dims = dims
        self.rank_partial = rank_partial
        self.nabla_K = nabla_K
        self.nabla_nu = nabla_nu
        self.omega_coords = omega_coords

    def _key(self):
        return (self.dims, self.rank_partial, self.nabla_K, self.nabla_nu,
                self.omega_coords)

    def __eq__(self, other):
        return (isinstance(other, ClassifyingTuple)
                and self._key() == other._key())

    def __repr__(self):
        return ("ClassifyingTuple(dims=%r, rank=%d, omega=%r)"
                % (self.dims, self.rank_partial, self.omega_coords))


def classifying_tuple(data, split=None):
    """Invariant tuple in the canonical (forward greedy) bases.

    When the data was analysed with a different splitting, the
    obstruction representative is transported to the canonical cokernel
    basis through the quotient identification before taking class
    coordinates, so the result cannot depend on the splitting used.
    """
    canonical = regularity(data)
    if canonical is None:
        raise ClassifyError("core anchor does not have constant rank")
    if split is None:
        split = canonical
    omega, handle = extract_omega(data, split)
    if split.nu_basis == canonical.nu_basis \
            and split.k_basis == canonical.k_basis:
        can_handle = handle
        bd_can = BlockData(canonical)
    else:
        bd_can = BlockData(canonical)
        # transport: express canonical cokernel lifts in the split's
        # quotient coordinates
        nnu = len(split.nu_basis)
        qcols = [list(v) for v in split.nu_basis + split.f_basis]
        qmat = inverse(Matrix.from_rows(qcols).transpose()) \
            if qcols else Matrix.zero(0, 0)
        tr_rows = []
        for v in canonical.nu_basis:
            coords = qmat.apply(v)
            tr_rows.append(list(coords[:nnu]))
        tr = (Matrix.from_rows(tr_rows).transpose()
              if tr_rows else Matrix.zero(nnu, 0))
        # same kernel both ways: k bases are both canonical
        k_mod, _ = submodule_as_module(data.C, canonical.k_basis) \
            if canonical.k_basis else _trivial_submodule(data.C)
        nu_mod, _ = submodule_as_module(data.E, canonical.nu_basis) \
            if canonical.nu_basis else _trivial_submodule(data.E)
        conn_k = Connection(data.algebroid, k_mod, bd_can.nabla_K)
        conn_nu = Connection(data.algebroid, nu_mod, bd_can.nabla_nu)
        hom = module_hom_space(nu_mod, k_mod)
        values = {}
        for i in range(data.algebroid.dim):
            for j in range(i + 1, data.algebroid.dim):
                m = (handle.hom.to_matrix(omega.value((i, j)))
                     if handle.hom.dim else Matrix.zero(k_mod.dim,
                                                        len(split.nu_basis)))
                coords = hom.from_matrix(m * tr)
                if coords is None:
                    raise ClassifyError("transported obstruction is not "
                                        "module-linear")
                values[(i, j)] = coords
        can_form = form_from_tensor(data.algebroid, hom.module, 2, values)
        can_handle = OmegaClass(data.algebroid, conn_k, conn_nu, hom,
                                can_form)
    coords = can_handle.coordinates()
    if coords is None:
        raise ClassifyError("obstruction class has no coordinates")
    return ClassifyingTuple(
        (data.E.dim, data.C.dim), canonical.rank,
        tuple(bd_can.nabla_K), tuple(bd_can.nabla_nu), coords)


class RegularNormalForm:
    """Normal form bundle: the splitting, the diagonalizing gauge, the
    two summands, their direct sum, the adapted basis change, and the
    classifying tuple."""

    def __init__(self, split, gauge, diagonal, type0, type1, reassembled,
                 invariant):
        self.split = split
        self.gauge = gauge
        self.diagonal = diagonal
        self.type0 = type0
        self.type1 = type1
        self.reassembled = reassembled
        self.invariant = invariant


def normal_form(data, reverse=False):
    """Split flat regular data into a type-0 plus type-1 direct sum.

    The returned gauge turns the input into the adapted-basis conjugate
    of the reassembled sum; the invariant tuple is always computed in
    the canonical splitting.
    """
    report = is_flat_super(data)
    if report:
        raise SuperDataError("normal form requires flat data: "
                             + "; ".join(report))
    split = regularity(data, reverse=reverse)
    if split is None:
        raise ClassifyError("core anchor does not have constant rank")
    alg = data.algebroid
    diag, sigma = block_diagonalize(data, split)
    bd = BlockData(RegularSplitting(diag, split.k_basis, split.c1_basis,
                                    split.nu_basis, split.f_basis))
    k_mod, _ = submodule_as_module(data.C, split.k_basis) \
        if split.k_basis else _trivial_submodule(data.C)
    nu_mod, _ = submodule_as_module(data.E, split.nu_basis) \
        if split.nu_basis else _trivial_submodule(data.E)
    f_mod, _ = submodule_as_module(data.E, split.f_basis) \
        if split.f_basis else _trivial_submodule(data.E)
    conn_k = Connection(alg, k_mod, bd.nabla_K)
    conn_nu = Connection(alg, nu_mod, bd.nabla_nu)
    conn_f = Connection(alg, f_mod, bd.nabla_F)
    hom0 = module_hom_space(nu_mod, k_mod)
    values = {}
    for key, m in bd.alpha.items():
        coords = hom0.from_matrix(m)
        if coords is None:
            raise ClassifyError("obstruction block is not module-linear")
        values[key] = coords
    omega0 = form_from_tensor(alg, hom0.module, 2, values)
    type0 = build_type0(alg, nu_mod, k_mod, conn_nu, conn_k, omega0)
    type1 = build_type1(alg, f_mod, conn_f)
    reassembled = direct_sum(type0, type1)
    invariant = classifying_tuple(data, split)
    return RegularNormalForm(split, sigma, diag, type0, type1, reassembled,
                             invariant)


def reassembly_matches(nf):
    """Exact componentwise comparison of the gauged input with the
    adapted-basis conjugate of the reassembled direct sum."""
    split = nf.split
    diag, re = nf.diagonal, nf.reassembled
    if split.S_E_inv * diag.core_anchor * split.S_C != re.core_anchor:
        return False
    for i in range(diag.algebroid.dim):
        if split.S_C_inv * diag.nabla_c.nabla[i] * split.S_C \
                != re.nabla_c.nabla[i]:
            return False
        if split.S_E_inv * diag.nabla_s.nabla[i] * split.S_E \
                != re.nabla_s.nabla[i]:
            return False
    for i in range(diag.algebroid.dim):
        for j in range(i + 1, diag.algebroid.dim):
            if split.S_C_inv * diag.omega_matrix(i, j) * split.S_E \
                    != re.omega_matrix(i, j):
                return False
    return True


def isomorphic(d1, d2):
    """Verdict plus certificate for gauge-equivalence over the identity.

    True requires equal module sizes, equal core-anchor rank, equal
    restricted connections in the canonical bases, and an exactness
    certificate for the difference of the obstruction representatives.
    """
    if not _same_algebroid(d1.algebroid, d2.algebroid):
        return False, {"reason": "different algebroids"}
    if d1.E.dim != d2.E.dim or d1.C.dim != d2.C.dim:
        return False, {"reason": "module sizes differ"}
    nf1 = normal_form(d1)
    nf2 = normal_form(d2)
    t1, t2 = nf1.invariant, nf2.invariant
    if t1.rank_partial != t2.rank_partial:
        return False, {"reason": "core-anchor rank differs",
                       "ranks": (t1.rank_partial, t2.rank_partial)}
    if t1.nabla_K != t2.nabla_K:
        return False, {"reason": "kernel connection differs"}
    if t1.nabla_nu != t2.nabla_nu:
        return False, {"reason": "cokernel connection differs"}
    _, h1 = extract_omega(d1, regularity(d1))
    _, h2 = extract_omega(d2, regularity(d2))
    if not h1.same_complex(h2):
        return False, {"reason": "obstruction complexes differ"}
    eta = h1.difference_primitive(h2)
    if eta is None:
        return False, {"reason": "obstruction classes differ",
                       "coordinates": (t1.omega_coords, t2.omega_coords)}
    return True, {"tuple": t1, "primitive": eta,
                  "gauges": (nf1.gauge, nf2.gauge),
                  "splittings": (nf1.split, nf2.split)}
