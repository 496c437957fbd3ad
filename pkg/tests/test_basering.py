from vbsuper.linalg import Matrix
from vbsuper.basering import (rationals, truncated_polynomials,
                              product_of_rationals, rational_factors,
                              check_ring, check_module, free_module,
                              ring_as_module, zero_module, direct_sum_modules,
                              submodule_as_module, derivations,
                              module_hom_space, dual_module, BaseRing, RModule)


def test_standard_rings_pass_axioms():
    for ring in (rationals(), truncated_polynomials(3),
                 product_of_rationals(3)):
        assert check_ring(ring) == []


def test_check_ring_detects_bad_structure():
    bad = BaseRing(2, [[(1, 0), (0, 1)], [(1, 0), (0, 0)]], (1, 0))
    report = check_ring(bad)
    assert any("commutativity" in line for line in report)


def test_rational_factors_detection():
    assert rational_factors(product_of_rationals(3)) == [0, 1, 2]
    assert rational_factors(rationals()) == [0]
    assert rational_factors(truncated_polynomials(2)) is None


def test_free_module_axioms():
    ring = truncated_polynomials(2)
    mod = free_module(ring, 2)
    assert mod.dim == 4
    assert check_module(mod) == []
    assert check_module(ring_as_module(ring)) == []
    assert zero_module(ring).dim == 0


def test_direct_sum_and_submodule():
    ring = truncated_polynomials(2)
    mod = free_module(ring, 1)
    s = direct_sum_modules(mod, mod)
    assert s.dim == 4 and check_module(s) == []
    # x R inside R is a submodule with Q-basis (x)
    sub, incl = submodule_as_module(ring_as_module(ring), [(0, 1)])
    assert sub.dim == 1 and check_module(sub) == []
    assert incl.col(0) == (0, 1)


def test_derivations():
    assert derivations(rationals()).dim == 0
    assert derivations(product_of_rationals(2)).dim == 0
    d3 = derivations(truncated_polynomials(3))
    assert d3.dim == 2
    for b in d3.basis:
        # derivations kill the unit
        assert b.apply((1, 0, 0)) == (0, 0, 0)
    # closed under commutator
    a, b = d3.basis
    assert d3.contains(a * b - b * a)


def test_hom_space_and_dual():
    ring = truncated_polynomials(2)
    mod = free_module(ring, 1)
    hom = module_hom_space(mod, mod)
    assert hom.dim == 2
    m = hom.to_matrix((1, 0)) + hom.to_matrix((0, 1))
    coords = hom.from_matrix(m)
    assert coords == (1, 1)
    assert hom.from_matrix(Matrix.from_rows([[0, 1], [0, 0]])) is None
    dual = dual_module(mod)
    assert dual.dim == 2
    assert check_module(dual.module) == []
