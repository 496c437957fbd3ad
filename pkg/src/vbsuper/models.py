"""Ready-made instances: named Lie algebras over the rationals, the
adjoint superconnection data over a point, the zero-anchor adjoint
family over finite scalar rings, and a seed-deterministic generator of
flat test instances."""

import random

from .scalars import ZERO, rational
from .linalg import Matrix
from .basering import (rationals, free_module, zero_module, RModule,
                       module_hom_space, derivations)
from .algebroid import (Algebroid, Connection, check_algebroid,
                        form_from_tensor)
from .superconn import (SuperData, SigmaGauge, is_flat_super,
                        gauge_transform)
from .classify import build_type0, build_type1, direct_sum


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# named Lie algebras

def _structure(name, params):
    if name == "abelian":
        n = int((params or {}).get("n", 0))
        if n < 0:
            raise ModelError("abelian rank must be nonnegative")
        return n, {}
    if name == "aff1":
        return 2, {(0, 1): (0, 1)}
    if name == "sl2":
        # basis h, e, f
        return 3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2),
                   (1, 2): (1, 0, 0)}
    if name == "heisenberg":
        # basis x, y, z with [x, y] = z central
        return 3, {(0, 1): (0, 0, 1)}
    raise ModelError("unknown Lie algebra name: %r" % (name,))


def lie_algebra(name, params=None):
    """Structure constants over the rationals with zero anchor."""
    n, pairs = _structure(name, params)
    zero = tuple([ZERO] * n)
    bracket = [[list(zero) for _ in range(n)] for _ in range(n)]
    for (i, j), v in pairs.items():
        bracket[i][j] = [rational(x) for x in v]
        bracket[j][i] = [-rational(x) for x in v]
    alg = Algebroid(rationals(), free_module(rationals(), n), bracket,
                    [Matrix.zero(1, 1)] * n)
    report = check_algebroid(alg)
    if report:
        raise ModelError("; ".join(report))
    return alg


def adjoint_matrices(alg):
    """ad(e_i) as matrices on the coordinates of the algebroid module."""
    n = alg.dim
    return [Matrix.from_rows([[alg.bracket[i][j][k] for j in range(n)]
                              for k in range(n)]) for i in range(n)]


def adjoint_point_model(alg):
    """Core = the Lie algebra acting on itself, empty side module."""
    if not alg.ring.is_point():
        raise ModelError("adjoint point model needs a one-dimensional "
                         "base ring")
    C = alg.module_A
    E = zero_module(alg.ring)
    conn_c = Connection(alg, C, adjoint_matrices(alg))
    conn_s = Connection(alg, E, [Matrix.zero(0, 0)] * alg.dim)
    hom = module_hom_space(E, C)
    omega = form_from_tensor(alg, hom.module, 2, {})
    data = SuperData(alg, E, C, Matrix.zero(0, C.dim), conn_c, conn_s,
                     omega)
    report = is_flat_super(data)
    if report:
        raise ModelError("; ".join(report))
    return data


# ---------------------------------------------------------------------------
# zero-anchor adjoint family over a scalar ring

def derivation_module(ring):
    """Der(R) as an R-module in the derivation-space basis."""
    ders = derivations(ring)
    action = []
    for r in range(ring.dim):
        mult = ring.mult_operator(ring.basis_element(r))
        cols = []
        for b in ders.basis:
            coords = ders.coordinates(mult * b)
            if coords is None:
                raise ModelError("derivations are not closed under the "
                                 "ring action")
            cols.append(list(coords))
        action.append(Matrix.from_rows(cols).transpose()
                      if cols else Matrix.zero(0, 0))
    return RModule(ring, ders.dim, action), ders


def coefficientwise_nabla(ring, rk):
    """Der(R) acting coordinate block by coordinate block on R^rk."""
    t_mod, ders = derivation_module(ring)
    mats = []
    for b in ders.basis:
        rows = [[ZERO] * (ring.dim * rk) for _ in range(ring.dim * rk)]
        for blk in range(rk):
            for i in range(ring.dim):
                for j in range(ring.dim):
                    rows[blk * ring.dim + i][blk * ring.dim + j] = b[(i, j)]
        mats.append(Matrix.from_rows(rows))
    return t_mod, mats


def scaled_aff1_algebroid(ring, scale):
    """Rank-2 bundle of Lie algebras with [e1, e2] = scale * e2 over the
    given scalar ring; scale is a ring coordinate vector."""
    mod = free_module(ring, 2)
    d = mod.dim
    rd = ring.dim
    zero = [ZERO] * d
    bracket = [[list(zero) for _ in range(d)] for _ in range(d)]
    for p in range(rd):
        for q in range(rd):
            # [x^p e1, x^q e2] = (x^{p+q} scale) e2
            prod = ring.multiply(ring.basis_element(p),
                                 ring.basis_element(q))
            coeff = ring.multiply(prod, scale)
            vec = [ZERO] * d
            for r in range(rd):
                vec[rd + r] = coeff[r]
            i, j = p, rd + q
            bracket[i][j] = list(vec)
            bracket[j][i] = [-x for x in vec]
    alg = Algebroid(ring, mod, bracket,
                    [Matrix.zero(rd, rd)] * d)
    report = check_algebroid(alg)
    if report:
        raise ModelError("; ".join(report))
    return alg


def rho_zero_adjoint_model(alg, t_module, nabla_tilde):
    """Adjoint-type data for a bundle of Lie algebras.

    nabla_tilde is one matrix per basis element of the parameter module,
    acting on the coordinates of the algebroid module; it must be
    module-linear in the parameter slot and satisfy the derivation
    Leibniz rule in the other slot.  The side connection is zero, the
    core connection is the adjoint action, and the curvature form
    measures the parameter dependence of the bracket.
    """
    ring = alg.ring
    if any(not a.is_zero() for a in alg.anchor):
        raise ModelError("the zero-anchor adjoint model needs a bundle "
                         "of Lie algebras")
    modA = alg.module_A
    if len(nabla_tilde) != t_module.dim:
        raise ModelError("one parameter matrix per basis element required")
    ders = derivations(ring)
    # module linearity in the parameter slot
    for r in range(ring.dim):
        act_t = t_module.action[r]
        act_a = modA.act_operator(ring.basis_element(r))
        for b in range(t_module.dim):
            lhs = Matrix.zero(modA.dim, modA.dim)
            for bp in range(t_module.dim):
                if act_t[(bp, b)]:
                    lhs = lhs + nabla_tilde[bp].scale(act_t[(bp, b)])
            if lhs != act_a * nabla_tilde[b]:
                raise ModelError("parameter slot is not module-linear at "
                                 "(ring %d, basis %d)" % (r, b))
    # Leibniz rule against some derivation, solved per basis element
    for b in range(t_module.dim):
        for r in range(ring.dim):
            act_a = modA.act_operator(ring.basis_element(r))
            comm = nabla_tilde[b] * act_a - act_a * nabla_tilde[b]
            # comm must be the action of delta_b(x^r) for a single
            # derivation delta_b; solve column r of delta_b
            found = _solve_ring_action(modA, comm)
            if found is None:
                raise ModelError("Leibniz rule fails at (basis %d, ring %d)"
                                 % (b, r))
        delta = _leibniz_derivation(modA, nabla_tilde[b], ring)
        if delta is None or not ders.contains(delta):
            raise ModelError("parameter %d does not act by a derivation"
                             % b)
    conn_c = Connection(alg, modA, adjoint_matrices(alg))
    conn_s = Connection(alg, t_module,
                        [Matrix.zero(t_module.dim, t_module.dim)
                         for _ in range(alg.dim)])
    hom = module_hom_space(t_module, modA)
    values = {}
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            cols = []
            ei = modA.basis_element(i)
            ej = modA.basis_element(j)
            for b in range(t_module.dim):
                nt = nabla_tilde[b]
                v1 = alg.bracket_vec(tuple(nt.apply(ei)), ej)
                v2 = alg.bracket_vec(ei, tuple(nt.apply(ej)))
                v3 = nt.apply(alg.bracket[i][j])
                cols.append([a + c - d for a, c, d in zip(v1, v2, v3)])
            m = (Matrix.from_rows(cols).transpose()
                 if cols else Matrix.zero(modA.dim, 0))
            coords = hom.from_matrix(m)
            if coords is None:
                raise ModelError("curvature form is not module-linear")
            values[(i, j)] = coords
    omega = form_from_tensor(alg, hom.module, 2, values)
    data = SuperData(alg, t_module, modA,
                     Matrix.zero(t_module.dim, modA.dim), conn_c, conn_s,
                     omega)
    report = is_flat_super(data)
    if report:
        raise ModelError("closedness of the curvature form fails: "
                         + "; ".join(report))
    return data


def _solve_ring_action(mod, target):
    """Ring coordinates f with act_operator(f) == target, or None."""
    cols = [list(mod.action[r].entries) for r in range(mod.ring.dim)]
    if not cols:
        return () if target.is_zero() else None
    from .linalg import solve
    big = Matrix.from_rows(cols).transpose()
    return solve(big, target.entries)


def _leibniz_derivation(mod, nt, ring):
    """The derivation matrix induced by a Leibniz operator, or None."""
    cols = []
    for r in range(ring.dim):
        act = mod.act_operator(ring.basis_element(r))
        f = _solve_ring_action(mod, nt * act - act * nt)
        if f is None:
            return None
        cols.append(list(f))
    return Matrix.from_rows(cols).transpose() if cols else Matrix.zero(0, 0)


# ---------------------------------------------------------------------------
# seeded flat instances

_NAMED = ("abelian", "aff1", "sl2", "heisenberg")


def _random_flat_connection(alg, name, dim, rng):
    """A flat connection on a rank-dim space over the named algebra."""
    n = alg.dim
    if dim == 0:
        return [Matrix.zero(0, 0)] * n
    if name == "abelian":
        base = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(dim)]
                                 for _ in range(dim)])
        return [base.scale(rng.randint(-2, 2))
                + Matrix.identity(dim).scale(rng.randint(-2, 2))
                for _ in range(n)]
    if name == "aff1":
        n0 = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(dim)]
                               for _ in range(dim)])
        return [n0, Matrix.zero(dim, dim)]
    if name == "heisenberg":
        # strictly upper triangular 3x3 blocks plus central scalars
        mats = [Matrix.zero(dim, dim) for _ in range(3)]
        off = 0
        while off + 3 <= dim:
            a, b = rng.randint(-2, 2), rng.randint(-2, 2)
            triple = ([[a, 1, 0], [0, a, 0], [0, 0, a]],
                      [[b, 0, 0], [0, b, 1], [0, 0, b]],
                      [[0, 0, 1], [0, 0, 0], [0, 0, 0]])
            for t in range(3):
                rows = mats[t].row_list()
                for r in range(3):
                    for c in range(3):
                        rows[off + r][off + c] = rational(triple[t][r][c])
                mats[t] = Matrix.from_rows(rows)
            off += 3
        return mats
    if name == "sl2":
        std = [Matrix.from_rows(m) for m in
               ([[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]])]
        adm = adjoint_matrices(alg)
        blocks = []
        left = dim
        while left:
            b = rng.choice([x for x in (1, 2, 3) if x <= left])
            blocks.append(b)
            left -= b
        mats = []
        for i in range(3):
            rows = [[ZERO] * dim for _ in range(dim)]
            off = 0
            for b in blocks:
                src = std[i] if b == 2 else (adm[i] if b == 3 else None)
                if src is not None:
                    for r in range(b):
                        for c in range(b):
                            rows[off + r][off + c] = src[(r, c)]
                off += b
            mats.append(Matrix.from_rows(rows))
        return mats
    raise ModelError("unknown algebra name: %r" % (name,))


def _random_connection(alg, dim, rng):
    n = alg.dim
    return [Matrix.from_rows([[rng.randint(-2, 2) for _ in range(dim)]
                              for _ in range(dim)]) for _ in range(n)]


def random_flat_instance(seed, dims):
    """Deterministic flat instance: a gauge-scrambled direct sum of a
    type-1 block on a random connection and a type-0 block on random
    flat connections.

    dims = (type-1 rank, extra side rank, extra core rank), each at
    most 4.
    """
    n1, e0, c0 = dims
    if max(dims) > 4 or min(dims) < 0:
        raise ModelError("instance dimensions must be between 0 and 4")
    rng = random.Random(seed)
    name = rng.choice(_NAMED)
    params = {"n": rng.randint(1, 3)} if name == "abelian" else None
    alg = lie_algebra(name, params)
    f_mod = free_module(alg.ring, n1)
    type1 = build_type1(alg, f_mod,
                        Connection(alg, f_mod,
                                   _random_connection(alg, n1, rng)))
    side = free_module(alg.ring, e0)
    core = free_module(alg.ring, c0)
    conn_s = Connection(alg, side, _random_flat_connection(alg, name, e0,
                                                           rng))
    conn_c = Connection(alg, core, _random_flat_connection(alg, name, c0,
                                                           rng))
    hom = module_hom_space(side, core)
    omega0 = form_from_tensor(alg, hom.module, 2, {})
    type0 = build_type0(alg, side, core, conn_s, conn_c, omega0)
    data = direct_sum(type0, type1)
    hs = data.hom_ec()
    values = {(i,): tuple(rng.randint(-2, 2) for _ in range(hs.dim))
              for i in range(alg.dim)}
    sigma = SigmaGauge(data, form_from_tensor(alg, hs.module, 1, values))
    out = gauge_transform(data, sigma)
    report = is_flat_super(out)
    if report:
        raise ModelError("; ".join(report))
    return out
