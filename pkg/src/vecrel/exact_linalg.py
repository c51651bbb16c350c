"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  Vectors are tuples of fractions,
matrices are immutable :class:`Matrix` objects, subspaces keep a canonical
reduced-row-echelon basis, and projective points compare up to scale.

>>> kernel(Matrix([[1, 2, 3], [4, 5, 6]]))
[(Fraction(1, 1), Fraction(-2, 1), Fraction(1, 1))]
>>> minor(Matrix([[1, 2], [3, 4]]), [0, 1])
Fraction(-2, 1)
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from math import gcd
from typing import Iterable, Sequence

from .errors import DegenerateError, ValidationError

Vector = tuple  # tuple of Fraction


# ---------------------------------------------------------------- scalars

def Q(x) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise ValidationError("bad-scalar", f"cannot read {x!r} as an exact rational")


def fmt(x: Fraction) -> str:
    """Canonical string for a scalar: ``"p/q"`` (``"p/1"`` for integers).

    >>> fmt(Fraction(-6, 9))
    '-2/3'
    """
    x = Q(x)
    return f"{x.numerator}/{x.denominator}"


def vec(entries: Iterable) -> Vector:
    return tuple(Q(e) for e in entries)


def zero_vector(k: int) -> Vector:
    return (Fraction(0),) * k


def unit_vector(k: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(k))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def lincomb(terms: Iterable[tuple], k: int) -> Vector:
    """Sum of ``coef * vector`` over ``(coef, vector)`` pairs in dimension ``k``."""
    acc = [Fraction(0)] * k
    for c, v in terms:
        if c:
            for i, a in enumerate(v):
                acc[i] += c * a
    return tuple(acc)


def primitive(v: Sequence) -> Vector:
    """Scale a nonzero vector to coprime integers with positive leading entry.

    >>> primitive((Fraction(1, 2), Fraction(-1, 3)))
    (Fraction(3, 1), Fraction(-2, 1))
    """
    v = vec(v)
    if is_zero(v):
        raise DegenerateError("zero-vector", "cannot normalize the zero vector")
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    lead = next(a for a in ints if a)
    if lead < 0:
        g = -g
    return tuple(Fraction(a // g) for a in ints)


# ---------------------------------------------------------------- matrices

class Matrix:
    """Immutable rectangular matrix of fractions.

    The column count is stored explicitly so that ``0 x n`` matrices keep
    their width.
    """

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(vec(r) for r in rows)
        if ncols is None:
            if not rows:
                ncols = 0
            else:
                ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValidationError("not-rectangular", "rows have different lengths")
        self.rows = rows
        self.ncols = ncols

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls([[c[i] for c in cols] for i in range(nrows)], ncols=len(cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([unit_vector(n, i) for i in range(n)], ncols=n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.columns(), ncols=self.nrows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        return f"Matrix({[[fmt(x) for x in r] for r in self.rows]!r})"

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValidationError("size-mismatch", "inner dimensions differ")
            cols = other.columns()
            return Matrix([[dot(r, c) for c in cols] for r in self.rows], ncols=other.ncols)
        return tuple(dot(r, other) for r in self.rows)

    def scale_row(self, i: int, lam) -> "Matrix":
        rows = list(self.rows)
        rows[i] = vscale(lam, rows[i])
        return Matrix(rows, ncols=self.ncols)

    def scale_column(self, j: int, lam) -> "Matrix":
        return Matrix([r[:j] + (r[j] * lam,) + r[j + 1:] for r in self.rows], ncols=self.ncols)

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Matrix":
        rows = range(self.nrows) if rows is None else rows
        cols = range(self.ncols) if cols is None else list(cols)
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], ncols=len(cols))

    def to_json(self) -> list:
        return [[fmt(x) for x in r] for r in self.rows]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column list."""
    rows = [list(r) for r in m.rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return Matrix(rows, ncols=m.ncols), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel(m: Matrix) -> list[Vector]:
    """Basis of the right null space ``{x : m x = 0}``.

    >>> kernel(Matrix([[1, 1]]))
    [(Fraction(-1, 1), Fraction(1, 1))]
    >>> kernel(Matrix.identity(2))
    []
    """
    red, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -red.rows[i][f]
        basis.append(tuple(x))
    return basis


def left_kernel(m: Matrix) -> list[Vector]:
    return kernel(m.transpose())


def det(m: Matrix) -> Fraction:
    """Exact determinant via fraction-valued Gaussian elimination."""
    n = m.nrows
    if n != m.ncols:
        raise ValidationError("size-mismatch", "determinant of a non-square matrix", shape=m.shape)
    rows = [list(r) for r in m.rows]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        piv = rows[c][c]
        d *= piv
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / piv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return d


def minor(m: Matrix, cols: Sequence[int]) -> Fraction:
    """Determinant of the square submatrix on the given (0-based) columns.

    >>> minor(Matrix.identity(3), [0, 1, 2])
    Fraction(1, 1)
    >>> minor(Matrix([[1, 2], [3, 4]]), [0, 0])
    Fraction(0, 1)
    """
    if len(cols) != m.nrows:
        raise ValidationError("size-mismatch", "need as many columns as rows",
                              rows=m.nrows, cols=list(cols))
    return det(m.submatrix(cols=cols))


def inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if n != m.ncols:
        raise ValidationError("size-mismatch", "inverse of a non-square matrix")
    aug = Matrix([r + unit_vector(n, i) for i, r in enumerate(m.rows)], ncols=2 * n)
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DegenerateError("singular-matrix", "matrix is not invertible")
    return Matrix([r[n:] for r in red.rows], ncols=n)


def solve(m: Matrix, b: Sequence) -> Vector:
    """One solution of ``m x = b``; raises if the system is inconsistent."""
    aug = Matrix([r + (Q(bi),) for r, bi in zip(m.rows, b)], ncols=m.ncols + 1)
    red, pivots = rref(aug)
    if m.ncols in pivots:
        raise DegenerateError("inconsistent-system", "linear system has no solution")
    x = [Fraction(0)] * m.ncols
    for i, p in enumerate(pivots):
        x[p] = red.rows[i][-1]
    return tuple(x)


def det_leibniz(m: Matrix) -> Fraction:
    """Permutation-expansion determinant; used as an independent test oracle."""
    n = m.nrows
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = Fraction(sign)
        for i in range(n):
            prod *= m.rows[i][perm[i]]
        total += prod
    return total


# ---------------------------------------------------------------- subspaces

class Subspace:
    """Linear subspace of ``Q^k`` with a canonical RREF basis.

    >>> a = Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
    >>> b = Subspace.span([(0, 0, 1), (1, 1, 1)], 3)
    >>> a.intersect(b).basis
    ((Fraction(1, 1), Fraction(1, 1), Fraction(0, 1)),)
    """

    __slots__ = ("basis", "ambient")

    def __init__(self, basis: tuple, ambient: int):
        self.basis = basis
        self.ambient = ambient

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "Subspace":
        vs = [vec(v) for v in vectors]
        for v in vs:
            if len(v) != ambient:
                raise ValidationError("size-mismatch", "vector has wrong length")
        if not vs:
            return cls((), ambient)
        red, pivots = rref(Matrix(vs, ncols=ambient))
        return cls(tuple(red.rows[: len(pivots)]), ambient)

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls.span([unit_vector(ambient, i) for i in range(ambient)], ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return Subspace.span(self.basis + (vec(v),), self.ambient).dim == self.dim

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Exact intersection, computed as the complement of the sum of complements."""
        self._check(other)
        return self.complement().sum(other.complement()).complement()

    def complement(self) -> "Subspace":
        """Orthogonal complement with respect to the standard dot product."""
        if not self.basis:
            return Subspace.whole(self.ambient)
        return Subspace.span(kernel(Matrix(self.basis, ncols=self.ambient)), self.ambient)

    def _check(self, other):
        if self.ambient != other.ambient:
            raise ValidationError("size-mismatch", "subspaces live in different spaces")

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.basis, self.ambient))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


# ---------------------------------------------------------------- projective points

class ProjectivePoint:
    """Nonzero vector up to nonzero scale; hashing uses the primitive representative."""

    __slots__ = ("coords", "_key")

    def __init__(self, coords: Sequence):
        c = vec(coords)
        if is_zero(c):
            raise DegenerateError("zero-vector", "projective point needs a nonzero vector")
        self.coords = c
        self._key = primitive(c)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"ProjectivePoint({[fmt(x) for x in self._key]})"

    def normalized(self) -> Vector:
        return self._key


def proportional(u: Sequence, v: Sequence) -> bool:
    """True when ``u`` and ``v`` are linearly dependent (either may be zero)."""
    return rank(Matrix([vec(u), vec(v)])) <= 1


def join(*points) -> Subspace:
    """Linear span of the homogeneous coordinates of the given points/vectors."""
    vs = [p.coords if isinstance(p, ProjectivePoint) else vec(p) for p in points]
    return Subspace.span(vs, len(vs[0]))


def meet_point(a: Subspace, b: Subspace) -> ProjectivePoint:
    """The unique projective point of ``a ∩ b``; degenerate unless it is a line."""
    x = a.intersect(b)
    if x.dim != 1:
        raise DegenerateError("degenerate-intersection", "intersection is not a single point",
                              dim=x.dim)
    return ProjectivePoint(x.basis[0])


def line_meet(p1, p2, q1, q2) -> ProjectivePoint:
    """Point ``<p1 p2> ∩ <q1 q2>`` of two coplanar lines."""
    l1, l2 = join(p1, p2), join(q1, q2)
    if l1.dim != 2 or l2.dim != 2:
        raise DegenerateError("degenerate-intersection", "line spanned by coincident points")
    return meet_point(l1, l2)


def _coords(p) -> Vector:
    return p.coords if isinstance(p, ProjectivePoint) else vec(p)


def multi_ratio(points: Sequence) -> Fraction:
    """Multi-ratio ``[P_1, ..., P_2m]`` of a cyclic chain of collinear triples.

    For every ``i`` the points ``P_{2i-1}, P_{2i}, P_{2i+1}`` (indices mod 2m)
    lie on a line.  Writing ``P_{2i} = α P_{2i-1} + β P_{2i+1}`` in homogeneous
    coordinates, the product of ``β/α`` over ``i`` equals the product of the
    signed affine ratios ``(P_{2i-1} - P_{2i}) / (P_{2i} - P_{2i+1})`` in any
    affine chart, but needs no chart.

    >>> pts = [(0, 1), (1, 1), (2, 1), (3, 1)]
    >>> multi_ratio(pts)
    Fraction(-1, 3)
    """
    pts = [_coords(p) for p in points]
    if len(pts) % 2 or not pts:
        raise ValidationError("odd-length", "multi-ratio needs an even number of points")
    n = len(pts)
    total = Fraction(1)
    for i in range(0, n, 2):
        total *= _ratio(pts[i], pts[i + 1], pts[(i + 2) % n])
    return total


def _ratio(a: Vector, p: Vector, b: Vector) -> Fraction:
    """β/α with ``p = α a + β b``; if ``a ∝ b`` use the limiting affine ratio."""
    if is_zero(a) or is_zero(p) or is_zero(b):
        raise DegenerateError("degenerate-denominator", "zero homogeneous coordinates")
    if rank(Matrix([a, p, b])) > 2:
        raise ValidationError("not-collinear", "consecutive triple is not collinear")
    if proportional(a, b):
        # a and b coincide projectively, so the affine ratio is -1; the
        # factor 1/t (b = t a) keeps the cyclic product chart independent.
        if proportional(a, p):
            raise DegenerateError("degenerate-denominator", "consecutive points coincide")
        i = next(i for i, x in enumerate(a) if x)
        return -a[i] / b[i]
    alpha, beta = solve(Matrix.from_columns([a, b], len(a)), p)
    if alpha == 0:
        raise DegenerateError("degenerate-denominator", "consecutive points coincide")
    return beta / alpha


def cross_ratio(p1, p2, p3, p4) -> Fraction:
    return multi_ratio([p1, p2, p3, p4])


# ---------------------------------------------------------------- random helpers

def rng(seed=None) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def rand_scalar(r: random.Random, nonzero: bool = True, lo: int = -9, hi: int = 9) -> Fraction:
    while True:
        x = r.randint(lo, hi)
        if x or not nonzero:
            return Fraction(x)


def rand_vector(r: random.Random, k: int, lo: int = -9, hi: int = 9) -> Vector:
    while True:
        v = tuple(Fraction(r.randint(lo, hi)) for _ in range(k))
        if not is_zero(v):
            return v


def rand_matrix(r: random.Random, rows: int, cols: int, lo: int = -9, hi: int = 9) -> Matrix:
    return Matrix([[r.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], ncols=cols)


def rand_invertible(r: random.Random, k: int) -> Matrix:
    while True:
        m = rand_matrix(r, k, k)
        if det(m) != 0:
            return m
