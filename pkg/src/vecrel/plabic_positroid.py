"""Matchings, positroids, Grassmann necklaces, Kasteleyn signs and the
canonical perfect orientation of a reduced plabic graph.

Boundary indices are 1-based throughout; subsets of ``{1..n}`` are
frozensets and serialize as sorted lists.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations

from .errors import InternalError, ValidationError
from .exact_linalg import minor, rank
from .surface_graph import BLACK, DISK, SurfaceGraph, is_arc, plabic_form

DEFAULT_MATCHING_CAP = 10 ** 6


# ---------------------------------------------------------------- matchings

def almost_perfect_matchings(g: SurfaceGraph, cap: int = DEFAULT_MATCHING_CAP) -> list:
    """All matchings covering every black and every internal white vertex.

    Each matching is a frozenset of edge ids; parallel edges give distinct
    matchings.  Backtracks over black vertices in sorted order and raises
    ``matching-cap`` once more than ``cap`` matchings have been found.

    >>> from vecrel.catalog import single_edge
    >>> almost_perfect_matchings(single_edge())
    [frozenset({'e'})]
    """
    blacks = g.blacks
    internal = set(g.internal_whites)
    # Internal whites must all be covered, so prune when too few blacks remain.
    out = []
    used = set()
    chosen = []

    def rec(i, uncovered):
        if len(uncovered) > len(blacks) - i:
            return
        if i == len(blacks):
            out.append(frozenset(chosen))
            if len(out) > cap:
                raise ValidationError("matching-cap", f"more than {cap} almost perfect matchings", cap=cap)
            return
        b = blacks[i]
        for e in g.rotation[b]:
            w = g.edges[e][1]
            if w in used:
                continue
            used.add(w)
            chosen.append(e)
            rec(i + 1, uncovered - {w} if w in uncovered else uncovered)
            chosen.pop()
            used.discard(w)

    rec(0, frozenset(internal))
    return sorted(out, key=lambda m: sorted(m))


def unused_boundary(g: SurfaceGraph, matching) -> frozenset:
    """Boundary indices not covered by ``matching``."""
    covered = {g.edges[e][1] for e in matching}
    return frozenset(j for j, v in enumerate(g.boundary, start=1) if v not in covered)


def matchings_by_boundary(g: SurfaceGraph, cap: int = DEFAULT_MATCHING_CAP) -> dict:
    """``{J: [matchings avoiding exactly J]}``."""
    out = {}
    for m in almost_perfect_matchings(g, cap):
        out.setdefault(unused_boundary(g, m), []).append(m)
    return out


def face_flips(g: SurfaceGraph, matching) -> list:
    """Matchings obtained from ``matching`` by a flip around one internal face."""
    out = []
    for f in g.internal_faces():
        es = f.edges
        if len(set(es)) != len(es):
            continue
        half = [e for i, e in enumerate(es) if i % 2 == 0]
        other = [e for i, e in enumerate(es) if i % 2 == 1]
        for a, b in ((half, other), (other, half)):
            if all(e in matching for e in a):
                out.append(frozenset(matching - set(a) | set(b)))
    return out


def flip_connected(g: SurfaceGraph, matchings) -> bool:
    """True iff face flips connect all of ``matchings`` (all avoiding one ``J``)."""
    ms = set(matchings)
    if not ms:
        return True
    start = next(iter(ms))
    seen = {start}
    stack = [start]
    while stack:
        m = stack.pop()
        for x in face_flips(g, m):
            if x in ms and x not in seen:
                seen.add(x)
                stack.append(x)
    return seen == ms


# ---------------------------------------------------------------- positroids

def positroid(g: SurfaceGraph, cap: int = DEFAULT_MATCHING_CAP) -> set:
    """The set of boundary sets ``J`` avoided by some almost perfect matching.

    >>> from vecrel.catalog import fig9
    >>> sorted(sorted(J) for J in positroid(fig9()))
    [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]
    """
    return set(matchings_by_boundary(g, cap))


def _rank_in_order(j: int, n: int):
    return lambda x: (x - j) % n


def grassmann_necklace(pos, n: int, k: int | None = None) -> list:
    """``[I_1, ..., I_n]``: lexicographic minima under ``j < j+1 < ... < j-1``.

    >>> U = [frozenset(c) for c in combinations(range(1, 5), 2)]
    >>> [sorted(I) for I in grassmann_necklace(U, 4)]
    [[1, 2], [2, 3], [3, 4], [1, 4]]
    """
    pos = [frozenset(J) for J in pos]
    if not pos:
        raise ValidationError("empty-positroid", "the necklace needs a nonempty positroid")
    out = []
    for j in range(1, n + 1):
        r = _rank_in_order(j, n)
        out.append(min(pos, key=lambda J: sorted(r(x) for x in J)))
    return out


def reverse_necklace(pos, n: int, k: int | None = None) -> list:
    """``[~I_1, ..., ~I_n]``: lexicographic maxima under ``j+1 < ... < n < 1 < ... < j``.

    ``~I_j`` is the strand label of the boundary face between ``j`` and ``j+1``.
    """
    pos = [frozenset(J) for J in pos]
    if not pos:
        raise ValidationError("empty-positroid", "the necklace needs a nonempty positroid")
    out = []
    for j in range(1, n + 1):
        r = _rank_in_order(j + 1, n)
        out.append(max(pos, key=lambda J: sorted((r(x) for x in J), reverse=True)))
    return out


def in_positroid_variety(A, pos, n: int | None = None) -> bool:
    """True iff every Plücker minor outside ``pos`` vanishes.

    >>> from vecrel.exact_linalg import Matrix
    >>> in_positroid_variety(Matrix([[0, 0, 1, 0], [0, 0, 0, 1]]),
    ...                      [J for J in map(frozenset, combinations(range(1, 5), 2)) if J != {1, 2}])
    True
    """
    m = getattr(A, "matrix", A)
    if rank(m) != m.nrows:
        raise ValidationError("rank-deficient-A", "the representative matrix must have full row rank")
    pos = {frozenset(J) for J in pos}
    for J in combinations(range(1, m.ncols + 1), m.nrows):
        if frozenset(J) not in pos and minor(m, [j - 1 for j in J]) != 0:
            return False
    return True


# ---------------------------------------------------------------- GF(2)

def solve_gf2(rows: list, nvars: int):
    """Solve ``sum_{i in mask} x_i = rhs (mod 2)`` for ``(mask, rhs)`` rows.

    Returns one solution as a bit mask (free variables zero) or ``None``.

    >>> solve_gf2([(0b11, 1), (0b10, 1)], 2)
    2
    """
    pivots = {}  # pivot bit -> (mask, rhs)
    for mask, rhs in rows:
        for bit, (pm, pr) in pivots.items():
            if mask >> bit & 1:
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return None
            continue
        bit = mask.bit_length() - 1
        for b2, (pm, pr) in list(pivots.items()):
            if pm >> bit & 1:
                pivots[b2] = (pm ^ mask, pr ^ rhs)
        pivots[bit] = (mask, rhs)
    x = 0
    for bit, (mask, rhs) in pivots.items():
        # Other bits in a reduced row are free variables, set to zero.
        if rhs:
            x |= 1 << bit
    return x


# ---------------------------------------------------------------- Kasteleyn signs

def _face_sign_rows(g: SurfaceGraph, index: dict) -> list:
    """One ``(mask, rhs, face)`` per face carrying a Kasteleyn condition."""
    rows = []
    for f in g.faces:
        if f.kind == "infinite":
            continue
        mask = 0
        for d in f.real_darts:
            mask ^= 1 << index[d[0]]
        L = len(f.real_darts)
        a = sum(1 for d in f.darts if is_arc(d[0]))
        rhs = (L // 2 + a - 1) % 2
        rows.append((mask, rhs, f))
    return rows


def kasteleyn_signs(g: SurfaceGraph) -> dict:
    """Signs ``{edge: +1 or -1}`` meeting the face parity conditions.

    Internal ``2m``-gons get sign product ``(-1)^(m-1)``; a finite external
    face whose ``a`` boundary walks have ``2m`` edges in total gets
    ``(-1)^(m+a-1)``; the infinite face is unconstrained.  This is the
    sphere closure by one extra black vertex joined to every boundary
    vertex with positive signs on the new edges.  Torus graphs get the
    condition on every face.

    >>> from vecrel.catalog import fig9
    >>> s = kasteleyn_signs(fig9())
    >>> is_kasteleyn(fig9(), s)
    True
    """
    edges = sorted(g.edges)
    index = {e: i for i, e in enumerate(edges)}
    rows = _face_sign_rows(g, index)
    x = solve_gf2([(m, r) for m, r, _ in rows], len(edges))
    if x is None:
        raise InternalError("kasteleyn-unsolvable", "no Kasteleyn signs satisfy the face conditions")
    return {e: (-1 if x >> index[e] & 1 else 1) for e in edges}


def kasteleyn_violations(g: SurfaceGraph, signs: dict) -> list:
    """Ids of faces whose sign product breaks its condition."""
    index = {e: i for i, e in enumerate(sorted(g.edges))}
    bad = []
    for mask, rhs, f in _face_sign_rows(g, index):
        prod = 1
        for d in f.real_darts:
            prod *= signs[d[0]]
        if (prod == -1) != bool(rhs):
            bad.append(f.id)
    return bad


def is_kasteleyn(g: SurfaceGraph, signs: dict) -> bool:
    return not kasteleyn_violations(g, signs)


def sign_gauge(g: SurfaceGraph, s1: dict, s2: dict, fixed=()) -> dict | None:
    """A vertex gauge ``{v: +-1}`` carrying ``s1`` to ``s2``, or ``None``.

    Vertices in ``fixed`` are not allowed to flip.
    """
    verts = sorted(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for e, (b, w) in g.edges.items():
        rows.append(((1 << index[b]) | (1 << index[w]), int(s1[e] != s2[e])))
    for v in fixed:
        rows.append((1 << index[v], 0))
    x = solve_gf2(rows, len(verts))
    if x is None:
        return None
    return {v: (-1 if x >> index[v] & 1 else 1) for v in verts}


# ---------------------------------------------------------------- orientation

class Orientation:
    """Direction per edge (``"bw"`` black to white, ``"wb"`` white to black)."""

    def __init__(self, graph: SurfaceGraph, direction: dict):
        self.graph = graph
        self.direction = dict(direction)

    @property
    def matching(self) -> frozenset:
        """Edges directed from black to white."""
        return frozenset(e for e, d in self.direction.items() if d == "bw")

    def head(self, e):
        b, w = self.graph.edges[e]
        return w if self.direction[e] == "bw" else b

    def tail(self, e):
        b, w = self.graph.edges[e]
        return b if self.direction[e] == "bw" else w

    def incoming(self, v) -> list:
        return [e for e in self.graph.rotation[v] if self.head(e) == v]

    def outgoing(self, v) -> list:
        return [e for e in self.graph.rotation[v] if self.tail(e) == v]

    def sources(self) -> set:
        """Boundary indices with no incoming edge."""
        g = self.graph
        return {j for j, v in enumerate(g.boundary, start=1) if not self.incoming(v)}

    def topological_order(self) -> list | None:
        """Vertices in an order respecting every edge, or ``None`` on a cycle."""
        g = self.graph
        indeg = {v: len(self.incoming(v)) for v in g.vertices}
        ready = sorted(v for v, d in indeg.items() if d == 0)
        out = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for e in self.outgoing(v):
                h = self.head(e)
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
        return out if len(out) == len(g.vertices) else None

    def to_json(self) -> dict:
        return {e: self.direction[e] for e in sorted(self.direction)}


def perfect_orientation(g: SurfaceGraph) -> Orientation:
    """Orient each edge along the smaller numbered of its two zigzags.

    An edge from a boundary vertex to a degree-one black vertex is
    traversed twice by the same zigzag; it is oriented towards the
    boundary vertex.
    """
    if not g.is_reduced():
        raise ValidationError("not-reduced", "the canonical orientation needs a reduced graph")
    best = {}
    for z in g.zigzags:
        for e, x, y in z.steps:
            key = (z.start, 0 if g.color(x) == BLACK else 1)
            d = "bw" if g.color(x) == BLACK else "wb"
            if e not in best or key < best[e][0]:
                best[e] = (key, d)
    return Orientation(g, {e: best[e][1] for e in g.edges})


def check_orientation(g: SurfaceGraph, orient: Orientation, I1) -> dict:
    """Structural checks of the canonical orientation, one boolean each."""
    perfect = all(len(orient.outgoing(b)) == 1 for b in g.blacks) and \
        all(len(orient.incoming(w)) == 1 for w in g.internal_whites) and \
        all(len(orient.incoming(v)) <= 1 for v in g.boundary)
    acyclic = orient.topological_order() is not None
    pi = orient.matching
    avoids = unused_boundary(g, pi) == frozenset(I1) and \
        len({g.edges[e][1] for e in pi}) == len(pi) and len(pi) == g.M
    per_face = True
    for f in g.internal_faces():
        m = f.length // 2
        if sum(1 for e in f.edges if e in pi) != m - 1:
            per_face = False
    return {"perfect": perfect, "acyclic": acyclic, "matching_avoids_I1": avoids,
            "face_counts": per_face}


# ---------------------------------------------------------------- context

class PlabicContext:
    """Derived combinatorics of a reduced plabic graph, computed lazily.

    Boundary vertices of degree more than one are first expanded by
    :func:`plabic_form`; ``graph`` is the expanded graph and ``original``
    the input.
    """

    def __init__(self, g: SurfaceGraph, cap: int = DEFAULT_MATCHING_CAP):
        if g.surface != DISK:
            raise ValidationError("not-disk", "plabic machinery needs a disk graph")
        self.original = g
        self.graph, self.records = plabic_form(g)
        self.cap = cap
        if not self.graph.is_reduced():
            raise ValidationError("not-reduced", "the plabic graph is not reduced")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return self.graph.k

    @property
    def M(self) -> int:
        return self.graph.M

    @property
    def N(self) -> int:
        return self.graph.N

    @cached_property
    def matchings(self) -> dict:
        return matchings_by_boundary(self.graph, self.cap)

    @cached_property
    def positroid(self) -> frozenset:
        return frozenset(self.matchings)

    @cached_property
    def necklace(self) -> list:
        return grassmann_necklace(self.positroid, self.n)

    @cached_property
    def reverse_necklace(self) -> list:
        return reverse_necklace(self.positroid, self.n)

    @cached_property
    def labels(self) -> dict:
        return self.graph.strand_labels

    @cached_property
    def orientation(self) -> Orientation:
        return perfect_orientation(self.graph)

    @property
    def matching(self) -> frozenset:
        return self.orientation.matching

    @cached_property
    def signs(self) -> dict:
        return kasteleyn_signs(self.graph)

    @property
    def I1(self) -> frozenset:
        return self.necklace[0]

    def sigma(self, j: int) -> int:
        """Column sign ``(-1)^(|I_1 & {1..j}| - 1)`` of the path measurement."""
        c = sum(1 for i in self.I1 if i <= j)
        return -1 if (c - 1) % 2 else 1

    def positroid_json(self) -> list:
        return sorted(sorted(J) for J in self.positroid)

    def necklace_json(self) -> dict:
        return {"necklace": [sorted(I) for I in self.necklace],
                "reverse": [sorted(I) for I in self.reverse_necklace]}

    def labels_json(self) -> dict:
        lab = self.labels
        return {"faces": {f: sorted(s) for f, s in sorted(lab["faces"].items())},
                "vertices": {v: sorted(s) for v, s in sorted(lab["vertices"].items())}}


def strand_labels(g: SurfaceGraph) -> dict:
    """``{"faces": {fid: S_F}, "vertices": {vid: S_v}}`` for a reduced disk graph."""
    return g.strand_labels
