from fractions import Fraction

from vbsuper.linalg import (Matrix, Subspace, rref, rank, solve, solve_matrix,
                            inverse, kernel, image, complement, intersect)


def test_matrix_arithmetic():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[0, 1], [1, 0]])
    assert (a * b).row_list() == [[2, 1], [4, 3]]
    assert (a + b).row_list() == [[1, 3], [4, 4]]
    assert (a - a).is_zero()
    assert a.transpose().row_list() == [[1, 3], [2, 4]]
    assert a.apply((1, 1)) == (3, 7)
    assert a.scale(Fraction(1, 2))[0, 1] == 1


def test_rref_and_rank():
    m = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    red, pivots = rref(m)
    assert pivots == [0, 1]
    assert rank(m) == 2
    assert red.row(2) == (0, 0, 0)


def test_solve_deterministic_free_vars_zero():
    m = Matrix.from_rows([[1, 2]])
    x = solve(m, (3,))
    assert x == (3, 0)
    assert m.apply(x) == (3,)
    assert solve(Matrix.from_rows([[1], [1]]), (0, 1)) is None


def test_solve_matrix_and_inverse():
    m = Matrix.from_rows([[2, 1], [1, 1]])
    inv = inverse(m)
    assert m * inv == Matrix.identity(2)
    assert solve_matrix(m, Matrix.identity(2)) == inv


def test_kernel_free_variable_form():
    ker = kernel(Matrix.from_rows([[1, 2]]))
    assert ker.basis == [(-2, 1)]
    ker2 = kernel(Matrix.from_rows([[1, 0, 1], [0, 1, 1]]))
    assert ker2.basis == [(-1, -1, 1)]
    assert kernel(Matrix.identity(3)).dim == 0


def test_image_subspace():
    im = image(Matrix.from_rows([[1, 2], [2, 4]]))
    assert im.dim == 1
    assert im.contains((1, 2))
    assert not im.contains((1, 0))


def test_subspace_coordinates_and_equality():
    s = Subspace(3, [(1, 0, 1), (0, 1, 0)])
    assert s.coordinates((2, 3, 2)) == (2, 3)
    assert s.coordinates((0, 0, 1)) is None
    t = Subspace(3, [(1, 1, 1), (1, -1, 1)])
    assert s == t


def test_complement_standard_basis():
    s = Subspace(2, [(1, 1)])
    c = complement(s)
    assert c.basis == [(0, 1)]
    full = Subspace(2, list(s.basis) + list(c.basis))
    assert full.dim == 2


def test_intersect():
    a = Subspace(3, [(1, 0, 0), (0, 1, 0)])
    b = Subspace(3, [(0, 1, 0), (0, 0, 1)])
    c = intersect(a, b)
    assert c.dim == 1
    assert c.contains((0, 1, 0))
