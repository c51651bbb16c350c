from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from vecrel.errors import DegenerateError, ValidationError
from vecrel.exact_linalg import (Matrix, ProjectivePoint, Subspace, det, fmt, inverse, kernel, line_meet, minor,
                                 multi_ratio, rank, solve)

small = st.integers(-9, 9)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(Matrix)


# ---------------------------------------------------------------- frozen examples

def test_kernel_single_equation():
    ker = kernel(Matrix([[1, 1]]))
    assert len(ker) == 1 and ProjectivePoint(ker[0]) == ProjectivePoint((1, -1))


def test_kernel_full_rank_is_empty():
    assert kernel(Matrix.identity(2)) == []


def test_kernel_by_hand():
    ker = kernel(Matrix([[1, 2, 3], [4, 5, 6]]))
    assert len(ker) == 1
    assert ProjectivePoint(ker[0]) == ProjectivePoint((1, -2, 1))


def test_minor_examples():
    assert minor(Matrix.identity(3), [0, 1, 2]) == 1
    assert minor(Matrix([[1, 2], [3, 4]]), [0, 1]) == -2
    assert minor(Matrix([[1, 2, 5], [3, 4, 7]]), [1, 1]) == 0


def test_minor_size_mismatch():
    with pytest.raises(ValidationError):
        minor(Matrix([[1, 2, 3], [4, 5, 6]]), [0])


def test_intersect_examples():
    a = Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
    b = Subspace.span([(0, 0, 1), (1, 1, 1)], 3)
    assert a.intersect(b) == Subspace.span([(1, 1, 0)], 3)
    assert a.intersect(a) == a
    e1, e2 = Subspace.span([(1, 0, 0)], 3), Subspace.span([(0, 1, 0)], 3)
    assert e1.intersect(e2).dim == 0


def test_multi_ratio_collinear_values():
    pts = [(0, 1), (1, 1), (2, 1), (3, 1)]
    assert multi_ratio(pts) == Fraction(-1, 3)


def test_multi_ratio_equal_neighbors_is_zero():
    assert multi_ratio([(0, 1), (0, 1), (2, 1), (3, 1)]) == 0


def test_multi_ratio_needs_collinear_triples():
    with pytest.raises(ValidationError):
        multi_ratio([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])


def test_fmt_is_canonical():
    assert fmt(Fraction(-6, 9)) == "-2/3"
    assert fmt(Fraction(4)) == "4/1"


def test_line_meet_parallel_lines_meet_at_infinity():
    p = line_meet((0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1))
    assert p == ProjectivePoint((1, 0, 0))


def test_line_meet_coincident_points_degenerate():
    with pytest.raises(DegenerateError):
        line_meet((1, 0, 1), (2, 0, 2), (0, 1, 1), (1, 1, 1))


def test_projective_point_rejects_zero():
    with pytest.raises(DegenerateError):
        ProjectivePoint((0, 0, 0))


# ---------------------------------------------------------------- properties

@given(matrices(3, 5))
def test_kernel_annihilates(m):
    ker = kernel(m)
    assert len(ker) == 5 - rank(m)
    for v in ker:
        assert all(x == 0 for x in m @ v)


@given(matrices(3, 3))
def test_det_of_inverse(m):
    assume(det(m) != 0)
    assert det(m) * det(inverse(m)) == 1


@given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve(m, b):
    assume(det(m) != 0)
    x = solve(m, b)
    assert tuple(m @ x) == tuple(Fraction(t) for t in b)


@given(matrices(2, 4), matrices(3, 4))
def test_intersection_dimension_formula(a_rows, b_rows):
    a = Subspace.span(a_rows.rows, 4)
    b = Subspace.span(b_rows.rows, 4)
    assert a.intersect(b).dim + a.sum(b).dim == a.dim + b.dim
    for v in a.intersect(b).basis:
        assert a.contains(v) and b.contains(v)


@st.composite
def collinear_chain(draw):
    """Six points in the plane, consecutive triples collinear (cyclically)."""
    corners = [draw(st.tuples(small, small, st.integers(1, 5))) for _ in range(3)]
    out = []
    for i in range(3):
        p, q = corners[i], corners[(i + 1) % 3]
        s, t = draw(st.integers(1, 7)), draw(st.integers(1, 7))
        out += [p, tuple(s * x + t * y for x, y in zip(p, q))]
    return out


@given(collinear_chain(), matrices(3, 3))
def test_multi_ratio_projective_invariance(points, T):
    assume(det(T) != 0)
    try:
        before = multi_ratio(points)
    except (DegenerateError, ValidationError):
        assume(False)
    after = multi_ratio([tuple(T @ p) for p in points])
    assert before == after


@given(collinear_chain())
def test_multi_ratio_cyclic_shift_by_two(points):
    try:
        value = multi_ratio(points)
    except (DegenerateError, ValidationError):
        assume(False)
    assert multi_ratio(points[2:] + points[:2]) == value
