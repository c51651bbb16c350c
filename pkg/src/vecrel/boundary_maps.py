"""Boundary restriction, boundary measurement (matching sums and path
sums), the right twist, membership in the measurement image, the
reconstruction map and edge-weight recovery.

Grassmann points are compared through their Plücker vectors, which are
defined up to a common nonzero scale.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .config_core import Configuration, configuration_from_weights
from .errors import DegenerateError, ValidationError
from .exact_linalg import (
    Matrix, Q, fmt, kernel, minor, primitive, rand_scalar, rank, rng, unit_vector,
    vec, zero_vector,
)
from .plabic_positroid import PlabicContext, in_positroid_variety
from .surface_graph import SurfaceGraph


def _context(g_or_ctx) -> PlabicContext:
    return g_or_ctx if isinstance(g_or_ctx, PlabicContext) else PlabicContext(g_or_ctx)


def _parity_sign(J) -> int:
    """``(-1)^((j_1 - 1) + ... + (j_k - k))`` for sorted ``J``."""
    s = sum(j - i for i, j in enumerate(sorted(J), start=1))
    return -1 if s % 2 else 1


# ---------------------------------------------------------------- Grassmann points

class GrassmannPoint:
    """Row span of a full-rank ``k x n`` matrix.

    >>> A = GrassmannPoint(Matrix([[1, 0, 1], [0, 1, 1]]))
    >>> B = GrassmannPoint(Matrix([[1, 1, 2], [0, 2, 2]]))
    >>> A == B
    True
    """

    def __init__(self, matrix: Matrix):
        if rank(matrix) != matrix.nrows:
            raise ValidationError("rank-deficient-A", "a Grassmann point needs a full-rank matrix")
        self.matrix = matrix

    @property
    def k(self) -> int:
        return self.matrix.nrows

    @property
    def n(self) -> int:
        return self.matrix.ncols

    def column(self, j: int):
        """Column ``j`` (1-based)."""
        return self.matrix.column(j - 1)

    def delta(self, J) -> Fraction:
        """Plücker coordinate for the sorted index set ``J`` (1-based)."""
        return minor(self.matrix, [j - 1 for j in sorted(J)])

    def plucker(self) -> dict:
        return {J: self.delta(J) for J in combinations(range(1, self.n + 1), self.k)}

    def normalized_plucker(self) -> dict:
        """Plücker vector scaled so its first nonzero entry is 1."""
        return normalize_plucker(self.plucker())

    @classmethod
    def from_plucker(cls, pl: dict, n: int, k: int) -> "GrassmannPoint":
        """Representative with the identity in the columns of the first nonzero coordinate."""
        pl = {tuple(sorted(J)): Q(x) for J, x in pl.items()}
        J0 = next((J for J in sorted(pl) if pl[J] != 0), None)
        if J0 is None:
            raise DegenerateError("zero-plucker", "every Plücker coordinate vanishes")
        rows = [[Fraction(0)] * n for _ in range(k)]
        for r, j0 in enumerate(J0):
            for j in range(1, n + 1):
                if j in J0:
                    rows[r][j - 1] = Fraction(1 if j == j0 else 0)
                    continue
                slot = list(J0)
                slot[r] = j
                srt = sorted(slot)
                sign = _perm_sign(slot, srt)
                rows[r][j - 1] = sign * pl.get(tuple(srt), Fraction(0)) / pl[J0]
        return cls(Matrix(rows, ncols=n))

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "matrix": self.matrix.to_json(),
                "plucker": plucker_json(self.normalized_plucker())}

    @classmethod
    def from_json(cls, data) -> "GrassmannPoint":
        try:
            rows = data["matrix"] if isinstance(data, dict) else data
            return cls(Matrix([[Q(x) for x in r] for r in rows]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError("bad-json", f"malformed Grassmann point: {exc}")

    def __eq__(self, other):
        return isinstance(other, GrassmannPoint) and plucker_proportional(self.plucker(), other.plucker())

    def __hash__(self):
        return hash(tuple(sorted(self.normalized_plucker().items())))

    def __repr__(self):
        return f"GrassmannPoint(k={self.k}, n={self.n})"


def _perm_sign(seq, srt) -> int:
    pos = [srt.index(x) for x in seq]
    sign = 1
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if pos[i] > pos[j]:
                sign = -sign
    return sign


def normalize_plucker(pl: dict) -> dict:
    first = next((pl[J] for J in sorted(pl) if pl[J] != 0), None)
    if first is None:
        raise DegenerateError("zero-plucker", "every Plücker coordinate vanishes")
    return {J: x / first for J, x in pl.items()}


def plucker_proportional(p1: dict, p2: dict) -> bool:
    """Whether two Plücker vectors agree up to a nonzero common scale."""
    keys = set(p1) | set(p2)
    try:
        a, b = normalize_plucker(p1), normalize_plucker(p2)
    except DegenerateError:
        return False
    return all(a.get(J, 0) == b.get(J, 0) for J in keys)


def plucker_json(pl: dict) -> dict:
    return {",".join(map(str, J)): fmt(pl[J]) for J in sorted(pl)}


# ---------------------------------------------------------------- restriction

def restrict_phi(c: Configuration) -> GrassmannPoint:
    """The point ``[v_1 ... v_n]`` of the boundary vectors."""
    return GrassmannPoint(c.boundary_matrix())


def minor_identity_holds(c: Configuration) -> bool:
    """``Delta_J(A) = lambda * eps_J * Delta_{W - J}(K)`` for one ``lambda`` and every ``J``.

    ``eps_J`` is the parity sign of ``(j_1 - 1) + ... + (j_k - k)``; the
    white columns of ``K`` are ordered boundary first.
    """
    g = c.graph
    A = c.boundary_matrix()
    K = c.kasteleyn_matrix()
    N = g.N
    lam = None
    for J in combinations(range(1, g.n + 1), c.k):
        lhs = minor(A, [j - 1 for j in J])
        rest = [i for i in range(N) if i + 1 not in J]
        rhs = _parity_sign(J) * minor(K, rest)
        if (lhs == 0) != (rhs == 0):
            return False
        if lhs == 0:
            continue
        ratio = lhs / rhs
        if lam is None:
            lam = ratio
        elif ratio != lam:
            return False
    return lam is not None


# ---------------------------------------------------------------- measurement

def matching_plucker(g: SurfaceGraph, weights: dict, cap: int | None = None) -> dict:
    """``Delta_J = sum over matchings avoiding J of the product of weights``."""
    ctx = PlabicContext(g) if cap is None else PlabicContext(g, cap)
    return _matching_plucker_ctx(ctx, g, weights)


def _matching_plucker_ctx(ctx, g, weights) -> dict:
    from .plabic_positroid import matchings_by_boundary
    table = matchings_by_boundary(g, ctx.cap)
    if not table:
        raise DegenerateError("no-matchings", "the graph has no almost perfect matching")
    k = g.k
    out = {J: Fraction(0) for J in combinations(range(1, g.n + 1), k)}
    for J, ms in table.items():
        total = Fraction(0)
        for m in ms:
            p = Fraction(1)
            for e in m:
                p *= Q(weights[e])
            total += p
        out[tuple(sorted(J))] = total
    return out


def boundary_measurement_matchings(g: SurfaceGraph, weights: dict, signs: dict | None = None) -> GrassmannPoint:
    """Grassmann point with Plücker coordinates given by matching sums.

    ``signs`` is accepted for symmetry with the configuration side (where
    ``K_e = eps_e^{-1} wt(e)``); the matching sum itself is unsigned.
    """
    for e in g.edges:
        if Q(weights[e]) == 0:
            raise ValidationError("zero-weight", f"weight of {e} is zero", edge=e)
    pl = matching_plucker(g, weights)
    return GrassmannPoint.from_plucker(pl, g.n, g.k)


def expanded_weights(ctx: PlabicContext, weights: dict) -> dict:
    """Extend weights on the original graph by 1 on the edges added by plabic expansion."""
    out = {e: Q(weights[e]) for e in ctx.original.edges}
    for e in ctx.graph.edges:
        out.setdefault(e, Fraction(1))
    return out


def contract_weights(ctx: PlabicContext, weights: dict) -> dict:
    """Weights on the original graph giving the same measurement as ``weights`` on the expanded one."""
    out = {e: Q(weights[e]) for e in ctx.original.edges}
    for j, w2, c, e_j, e_w2 in ctx.records:
        factor = Q(weights[e_j]) / Q(weights[e_w2])
        for e in ctx.original.rotation[j]:
            out[e] *= factor
    return out


def path_vectors(ctx: PlabicContext, weights: dict, basis: dict | None = None) -> dict:
    """Vectors ``~v_w`` of the acyclic recursion on the expanded graph.

    Sources ``i`` in ``I_1`` get the standard basis in increasing order
    unless ``basis`` supplies them.  Every other white ``w`` with incoming
    edge ``e`` from ``b`` gets ``(1 / wt(e)) * sum wt(b w') ~v_w'`` over the
    other edges at ``b``.
    """
    g = ctx.graph
    orient = ctx.orientation
    k = ctx.k
    wt = expanded_weights(ctx, weights) if set(weights) != set(g.edges) else {e: Q(x) for e, x in weights.items()}
    sources = sorted(ctx.I1)
    vt = {}
    for r, i in enumerate(sources):
        vt[g.boundary[i - 1]] = vec(basis[i]) if basis else unit_vector(k, r)
    order = orient.topological_order()
    if order is None:
        raise DegenerateError("cyclic-orientation", "the orientation has a cycle")
    for w in order:
        if g.color(w) != "white" or w in vt:
            continue
        inc = orient.incoming(w)
        if len(inc) != 1:
            raise DegenerateError("not-perfect", f"white vertex {w} has {len(inc)} incoming edges", vertex=w)
        e = inc[0]
        b = g.edges[e][0]
        acc = zero_vector(k)
        for f in g.rotation[b]:
            if f == e:
                continue
            wp = g.edges[f][1]
            acc = tuple(x + wt[f] * y for x, y in zip(acc, vt[wp]))
        if wt[e] == 0:
            raise ValidationError("zero-weight", f"weight of {e} is zero", edge=e)
        vt[w] = tuple(x / wt[e] for x in acc)
    return vt


def boundary_measurement_paths(g_or_ctx, weights: dict) -> GrassmannPoint:
    """Path-sum measurement: columns ``v_j = sigma_j ~v_j`` of the recursion.

    >>> from vecrel.catalog import fig9
    >>> ctx = PlabicContext(fig9())
    >>> A = boundary_measurement_paths(ctx, {e: 1 for e in fig9().edges})
    >>> A == boundary_measurement_matchings(fig9(), {e: 1 for e in fig9().edges})
    True
    """
    ctx = _context(g_or_ctx)
    vt = path_vectors(ctx, weights)
    g = ctx.graph
    cols = [tuple(ctx.sigma(j) * x for x in vt[g.boundary[j - 1]]) for j in range(1, ctx.n + 1)]
    return GrassmannPoint(Matrix.from_columns(cols, ctx.k))


# ---------------------------------------------------------------- twist

class TwistPoint:
    """Columns ``v'_1 .. v'_n`` of the right twist, each up to scale."""

    def __init__(self, columns: list):
        self.columns = [vec(c) for c in columns]

    @property
    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.columns, len(self.columns[0]))

    def delta(self, J) -> Fraction:
        return minor(self.matrix, [j - 1 for j in sorted(J)])

    def to_json(self) -> list:
        return [[fmt(x) for x in c] for c in self.columns]


def _as_matrix(A) -> Matrix:
    return A.matrix if isinstance(A, GrassmannPoint) else A


def check_open_positroid(A, ctx: PlabicContext):
    m = _as_matrix(A)
    if not in_positroid_variety(m, ctx.positroid):
        raise ValidationError("outside-open-positroid", "a forbidden Plücker minor is nonzero")
    for j, I in enumerate(ctx.necklace, start=1):
        if minor(m, [i - 1 for i in sorted(I)]) == 0:
            raise ValidationError("outside-open-positroid", f"necklace minor I_{j} vanishes", j=j)


def right_twist(A, necklace: list) -> TwistPoint:
    """``v'_j`` spanning the orthogonal complement of ``H_j = span{v_i : i in I_j - {j}}``.

    >>> A = Matrix([[1, 0, 1], [0, 1, 1]])
    >>> right_twist(A, [{1, 2}, {2, 3}, {1, 3}]).columns[0]
    (Fraction(1, 1), Fraction(0, 1))
    """
    m = _as_matrix(A)
    k = m.nrows
    cols = []
    for j, I in enumerate(necklace, start=1):
        if minor(m, [i - 1 for i in sorted(I)]) == 0:
            raise DegenerateError("necklace-minor-vanishes", f"Delta_I_{j} vanishes", j=j)
        rows = [m.column(i - 1) for i in sorted(I) if i != j]
        ker = kernel(Matrix(rows, ncols=k)) if rows else [unit_vector(k, 0)] if k == 1 else None
        if ker is None or len(ker) != 1:
            raise DegenerateError("necklace-minor-vanishes", f"H_{j} is not a hyperplane", j=j)
        cols.append(primitive(ker[0]))
    return TwistPoint(cols)


def in_T_G(A, g_or_ctx) -> bool:
    """Whether ``A`` lies in the image of the boundary measurement map.

    Requires ``A`` in the open positroid variety; then tests that every
    face label minor of the twist is nonzero.
    """
    ctx = _context(g_or_ctx)
    check_open_positroid(A, ctx)
    tw = right_twist(A, ctx.necklace)
    return all(tw.delta(S) != 0 for S in ctx.labels["faces"].values())


# ---------------------------------------------------------------- reconstruction

def internal_lines(A, ctx: PlabicContext, twist: TwistPoint | None = None) -> dict:
    """Generator of ``L_w`` (intersection of ``H_j`` over ``j`` in ``S_w``) per internal white."""
    m = _as_matrix(A)
    k = m.nrows
    tw = twist or right_twist(m, ctx.necklace)
    S = ctx.labels["vertices"]
    out = {}
    for w in ctx.graph.internal_whites:
        rows = [tw.columns[j - 1] for j in sorted(S[w])]
        ker = kernel(Matrix(rows, ncols=k)) if rows else None
        if ker is None or len(ker) != 1:
            raise DegenerateError("line-degenerate", f"L_{w} is not a line", vertex=w)
        out[w] = primitive(ker[0])
    return out


def circuit_relation(vectors: list, k: int) -> list:
    """The unique (up to scale) linear relation among ``vectors``, primitive."""
    if not vectors:
        raise DegenerateError("relation-degenerate", "a black vertex has no neighbors")
    ker = kernel(Matrix.from_columns(vectors, k))
    if len(ker) != 1:
        raise DegenerateError("relation-degenerate", "neighbor vectors do not carry a unique relation",
                              dimension=len(ker))
    return list(primitive(ker[0]))


def reconstruct_psi(A, g_or_ctx, check: bool = True) -> Configuration:
    """The configuration with boundary ``A`` and ``v_w`` on the line ``L_w``.

    Built on the original graph of the context.  Raises ``not-in-T_G``
    when ``A`` is outside the measurement image.

    >>> from vecrel.catalog import fig9
    >>> A = Matrix([[1, 0, -1, -2], [0, 1, 3, 5]])
    >>> c = reconstruct_psi(A, fig9())
    >>> restrict_phi(c) == GrassmannPoint(A)
    True
    """
    ctx = _context(g_or_ctx)
    m = _as_matrix(A)
    if m.ncols != ctx.n or m.nrows != ctx.k:
        raise ValidationError("size-mismatch", f"expected a {ctx.k} x {ctx.n} matrix", shape=list(m.shape))
    if check and not in_T_G(m, ctx):
        raise ValidationError("not-in-T_G", "the point is outside the boundary measurement image")
    g = ctx.original
    lines = internal_lines(m, ctx)
    vectors = {j: m.column(i) for i, j in enumerate(g.boundary)}
    for w in g.internal_whites:
        vectors[w] = lines[w]
    relations = {}
    for b in g.blacks:
        es = g.rotation[b]
        coeffs = circuit_relation([vectors[g.edges[e][1]] for e in es], ctx.k)
        relations[b] = dict(zip(es, coeffs))
    return Configuration(g, ctx.k, vectors, relations)


# ---------------------------------------------------------------- edge weights

def check_totally_positive(A, ctx: PlabicContext) -> int:
    """Common sign of the positroid minors; raises ``nonpositive-minor`` otherwise."""
    m = _as_matrix(A)
    sign = None
    for J in combinations(range(1, ctx.n + 1), ctx.k):
        d = minor(m, [j - 1 for j in J])
        if frozenset(J) in ctx.positroid:
            s = 1 if d > 0 else -1 if d < 0 else 0
            if s == 0 or (sign is not None and s != sign):
                raise ValidationError("nonpositive-minor", f"minor {list(J)} is not positive", J=list(J))
            sign = s
        elif d != 0:
            raise ValidationError("nonpositive-minor", f"minor {list(J)} should vanish", J=list(J))
    return sign


def recover_edge_weights(A, g_or_ctx) -> dict:
    """Edge weights on the expanded graph whose path measurement is ``A``.

    Internal whites are gauged so their incoming edge has weight 1 and the
    other weights at its black vertex are barycentric coordinates; at a
    boundary white the incoming edge carries the scale ``lambda`` making
    ``lambda ~v_j`` a convex combination.  Use :func:`contract_weights`
    for the original graph.
    """
    ctx = _context(g_or_ctx)
    m = _as_matrix(A)
    check_totally_positive(m, ctx)
    g = ctx.graph
    orient = ctx.orientation
    lines = internal_lines(m, ctx)
    vt = {}
    for j, v in enumerate(g.boundary, start=1):
        vt[v] = tuple(ctx.sigma(j) * x for x in m.column(j - 1))
    weights = {}
    for w in orient.topological_order():
        if g.color(w) != "white":
            continue
        inc = orient.incoming(w)
        if not inc:
            continue
        e = inc[0]
        b = g.edges[e][0]
        others = [f for f in g.rotation[b] if f != e]
        target = vt[w] if g.is_boundary(w) else lines[w]
        if not others:
            weights[e] = Fraction(1)
            continue
        ups = [vt[g.edges[f][1]] for f in others]
        x = _coordinates(ups, target, ctx.k)
        s = sum(x)
        if s == 0:
            raise DegenerateError("degenerate-barycentric", f"coefficients at {b} sum to zero", vertex=b)
        if g.is_boundary(w):
            lam = 1 / s
            weights[e] = lam
            for f, xi in zip(others, x):
                weights[f] = lam * xi
        else:
            vt[w] = tuple(t / s for t in target)
            weights[e] = Fraction(1)
            for f, xi in zip(others, x):
                weights[f] = xi / s
    for e in g.edges:
        weights.setdefault(e, Fraction(1))
    return weights


def _coordinates(ups: list, target, k: int) -> list:
    """Coefficients of ``target`` in the independent vectors ``ups``."""
    m = Matrix.from_columns(ups, k)
    if rank(m) != len(ups):
        raise DegenerateError("relation-degenerate", "upstream vectors are dependent")
    red = Matrix([list(r) + [t] for r, t in zip(m.rows, target)], ncols=len(ups) + 1)
    from .exact_linalg import rref
    R, piv = rref(red)
    if len(ups) in piv:
        raise DegenerateError("relation-degenerate", "target is outside the upstream span")
    x = [Fraction(0)] * len(ups)
    for row, p in zip(R.rows, piv):
        x[p] = row[-1]
    return x


# ---------------------------------------------------------------- sampling

def random_weights(g: SurfaceGraph, seed=None, positive: bool = False) -> dict:
    r = rng(seed)
    if positive:
        return {e: Fraction(r.randint(1, 9), r.randint(1, 9)) for e in sorted(g.edges)}
    return {e: rand_scalar(r) for e in sorted(g.edges)}


def random_T_G_point(g_or_ctx, seed=None, tries: int = 200) -> GrassmannPoint:
    """Seeded sample of the measurement image; rejects samples failing :func:`in_T_G`.

    Uniform positroids use random integer matrices, others the path
    measurement of random nonzero weights.
    """
    ctx = _context(g_or_ctx)
    r = rng(seed)
    uniform = len(ctx.positroid) == _binom(ctx.n, ctx.k)
    for _ in range(tries):
        if uniform:
            m = Matrix([[r.randint(-9, 9) for _ in range(ctx.n)] for _ in range(ctx.k)], ncols=ctx.n)
            if rank(m) != ctx.k:
                continue
        else:
            m = boundary_measurement_paths(ctx, random_weights(ctx.original, r.random())).matrix
        try:
            if in_T_G(m, ctx):
                return GrassmannPoint(m)
        except (ValidationError, DegenerateError):
            continue
    raise DegenerateError("sampling-failed", "could not sample a point of the measurement image")


def random_positive_point(g_or_ctx, seed=None) -> GrassmannPoint:
    """Totally positive point from the path measurement of random positive weights."""
    ctx = _context(g_or_ctx)
    return boundary_measurement_paths(ctx, random_weights(ctx.original, seed, positive=True))


def _binom(n: int, k: int) -> int:
    from math import comb
    return comb(n, k)


def induced_configuration(g: SurfaceGraph, weights: dict, signs: dict) -> Configuration:
    """Configuration with ``K_e = eps_e^{-1} wt(e)``."""
    return configuration_from_weights(g, weights, signs)
