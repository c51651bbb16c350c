"""Vector-relation configurations, gauge, Kasteleyn matrices and face weights.

A configuration puts a vector ``v_w`` in ``Q^k`` on every white vertex and a
linear relation on every black vertex.  Relations are stored per edge, so
parallel edges keep separate coefficients; the matrix entry ``K_{bw}`` is
their sum.

Systems (forests reaching the boundary) give canonical gauge
representatives and coordinate charts on plabic configurations.
"""

from __future__ import annotations

import json
from itertools import combinations
from fractions import Fraction
from typing import Iterable

from .errors import DegenerateError, ValidationError
from .exact_linalg import (
    Matrix, Q, fmt, inverse, is_zero, join, kernel, lincomb, multi_ratio, rank,
    rand_scalar, rng, vec, vscale,
)
from .surface_graph import BLACK, DISK, WHITE, Face, SurfaceGraph

PLABIC, GENERAL = "plabic", "general"


class Configuration:
    """Immutable vector-relation configuration on a :class:`SurfaceGraph`.

    ``vectors`` maps white ids to length-``k`` vectors and ``relations``
    maps black ids to ``{edge id: coefficient}`` covering every incident
    edge.  ``mode`` is ``"plabic"`` (boundary vectors may vanish, boundary
    vectors must span and ``K`` must have full rank) or ``"general"`` (every
    vector nonzero).
    """

    __slots__ = ("graph", "k", "vectors", "relations", "mode", "__dict__")

    def __init__(self, graph: SurfaceGraph, k: int, vectors: dict, relations: dict,
                 mode: str | None = None, check: bool = True):
        self.graph = graph
        self.k = k
        self.vectors = {w: vec(vectors[w]) for w in graph.whites} if check else dict(vectors)
        self.relations = ({b: {e: Q(relations[b][e]) for e in graph.rotation[b]} for b in graph.blacks}
                          if check else relations)
        if mode is None:
            mode = PLABIC if graph.surface == DISK and graph.n > 0 else GENERAL
        self.mode = mode
        if check:
            self._validate()

    # ------------------------------------------------------------ validation
    def _validate(self):
        g = self.graph
        if self.mode not in (PLABIC, GENERAL):
            raise ValidationError("bad-mode", f"unknown mode {self.mode!r}")
        for w in g.whites:
            if len(self.vectors[w]) != self.k:
                raise ValidationError("size-mismatch", f"vector at {w} has the wrong length", vertex=w)
            if is_zero(self.vectors[w]) and (self.mode == GENERAL or not g.is_boundary(w)):
                raise ValidationError("zero-internal-vector", f"vector at {w} is zero", vertex=w)
        for b in g.blacks:
            rel = self.relations[b]
            if rel and all(x == 0 for x in rel.values()):
                raise ValidationError("trivial-relation", f"relation at {b} is identically zero", vertex=b)
            if not is_zero(self.evaluate(b)):
                raise ValidationError("relation-not-satisfied", f"relation at {b} does not vanish",
                                      vertex=b, residual=[fmt(x) for x in self.evaluate(b)])
        if self.mode == PLABIC:
            K = self.kasteleyn_matrix()
            if rank(K) != g.M:
                raise ValidationError("rank-deficient-K", "K is not of full rank", rank=rank(K), M=g.M)
            bvecs = [self.vectors[j] for j in g.boundary]
            if rank(Matrix(bvecs, ncols=self.k)) != self.k:
                raise ValidationError("boundary-span-failure", "boundary vectors do not span the ambient space")

    def evaluate(self, b) -> tuple:
        g = self.graph
        return lincomb(((c, self.vectors[g.edges[e][1]]) for e, c in self.relations[b].items()), self.k)

    # ------------------------------------------------------------ accessors
    def coefficient(self, e) -> Fraction:
        b, _ = self.graph.edges[e]
        return self.relations[b][e]

    def coefficients(self) -> dict:
        return {e: self.relations[b][e] for e, (b, _) in self.graph.edges.items()}

    def kasteleyn_matrix(self) -> Matrix:
        """``M x N`` matrix, rows in ``graph.blacks`` order, columns in ``graph.whites`` order."""
        g = self.graph
        col = {w: i for i, w in enumerate(g.whites)}
        rows = []
        for b in g.blacks:
            r = [Fraction(0)] * len(col)
            for e, c in self.relations[b].items():
                r[col[g.edges[e][1]]] += c
            rows.append(r)
        return Matrix(rows, ncols=len(col))

    def boundary_matrix(self) -> Matrix:
        """``k x n`` matrix whose columns are the boundary vectors."""
        return Matrix.from_columns([self.vectors[j] for j in self.graph.boundary], self.k)

    def point(self, w):
        from .exact_linalg import ProjectivePoint
        return ProjectivePoint(self.vectors[w])

    def replace(self, graph=None, vectors=None, relations=None, check: bool = True) -> "Configuration":
        return Configuration(graph or self.graph, self.k, vectors if vectors is not None else self.vectors,
                             relations if relations is not None else self.relations, self.mode, check)

    # ------------------------------------------------------------ serialization
    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "k": self.k,
            "mode": self.mode,
            "vectors": {w: [fmt(x) for x in self.vectors[w]] for w in sorted(self.vectors)},
            "relations": {b: {e: fmt(c) for e, c in sorted(r.items())} for b, r in sorted(self.relations.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Configuration":
        try:
            g = SurfaceGraph.from_json(data["graph"])
            return cls(g, int(data["k"]), data["vectors"], data["relations"], data.get("mode"))
        except (KeyError, TypeError) as exc:
            raise ValidationError("bad-json", f"malformed configuration document: {exc}")

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other):
        return (isinstance(other, Configuration) and self.graph == other.graph and self.k == other.k
                and self.vectors == other.vectors and self.relations == other.relations)

    def __hash__(self):
        return hash(self.dumps())

    def __repr__(self):
        return f"Configuration(k={self.k}, {self.graph!r}, mode={self.mode})"


def new_configuration(graph, vectors, relations, k: int | None = None, mode: str | None = None) -> Configuration:
    """Validated constructor; ``k`` defaults to the length of the first vector.

    >>> from vecrel.catalog import path_graph
    >>> c = new_configuration(path_graph(), {"1": [1], "w": [1]}, {"b": {"e1": 1, "e2": -1}})
    >>> c.kasteleyn_matrix()
    Matrix([['1/1', '-1/1']])
    """
    if k is None:
        k = len(next(iter(vectors.values())))
    return Configuration(graph, k, vectors, relations, mode)


# ---------------------------------------------------------------- gauge

def gauge(c: Configuration, vertex, lam) -> Configuration:
    """Gauge transformation at one vertex.

    At a black vertex the relation is multiplied by ``lam``; at a white
    vertex ``v_w`` is divided by ``lam`` and every coefficient on ``w`` is
    multiplied by ``lam``.
    """
    lam = Q(lam)
    g = c.graph
    if lam == 0:
        raise ValidationError("zero-lambda", "gauge factor must be nonzero")
    if c.mode == PLABIC and g.is_boundary(vertex):
        raise ValidationError("boundary-vertex", "plabic gauge acts at internal vertices only", vertex=vertex)
    vectors = dict(c.vectors)
    relations = {b: dict(r) for b, r in c.relations.items()}
    if g.color(vertex) == BLACK:
        relations[vertex] = {e: x * lam for e, x in relations[vertex].items()}
    else:
        vectors[vertex] = vscale(1 / lam, vectors[vertex])
        for e in g.rotation[vertex]:
            b = g.edges[e][0]
            relations[b][e] *= lam
    return Configuration(g, c.k, vectors, relations, c.mode, check=False)


def apply_linear_map(c: Configuration, m: Matrix) -> Configuration:
    """Apply an invertible ``k x k`` matrix to every vector."""
    return c.replace(vectors={w: m @ v for w, v in c.vectors.items()})


# ---------------------------------------------------------------- face weights

def face_of(c_or_g, face) -> Face:
    g = c_or_g.graph if isinstance(c_or_g, Configuration) else c_or_g
    if isinstance(face, Face):
        return face
    return g.face(face)


def face_weight(c: Configuration, face) -> Fraction:
    """Alternating product of coefficients around a face.

    With vertices ``w_1, b_1, ..., w_m, b_m`` read clockwise this is
    ``(-1)^(m-1) * prod K_{b_i w_i} / prod K_{b_i w_{i+1}}``, taken edge by
    edge so parallel edges are distinguished.
    """
    f = face_of(c, face)
    if len(f.real_darts) != len(f.darts):
        raise ValidationError("not-internal-face", "face weights are defined for internal faces", face=f.id)
    g = c.graph
    num = Fraction(1)
    den = Fraction(1)
    for e, end in f.darts:
        x = c.relations[g.edges[e][0]][e]
        # counterclockwise darts leaving a black vertex are the clockwise w_i -> b_i edges
        if end == 0:
            num *= x
        else:
            den *= x
    if den == 0:
        raise DegenerateError("zero-denominator-coefficient", "a denominator coefficient vanishes", face=f.id)
    m = len(f.darts) // 2
    return (-1) ** (m - 1) * num / den


def face_weights(c: Configuration) -> dict:
    return {f.id: face_weight(c, f) for f in c.graph.faces if f.kind == "internal"}


def face_cycle(c_or_g, face) -> list:
    """Clockwise ``[(w_1, e), (b_1, e'), ...]``: each vertex with the edge to the next one."""
    f = face_of(c_or_g, face)
    g = c_or_g.graph if isinstance(c_or_g, Configuration) else c_or_g
    darts = list(reversed(f.darts))
    out = []
    for e, end in darts:
        # reversed counterclockwise darts run clockwise from their far end
        out.append((g.edges[e][1 - end], e))
    if g.color(out[0][0]) != WHITE:
        out = out[1:] + out[:1]
    return out


def v_F_b(c: Configuration, face, b) -> tuple:
    """``v(F, b)``: the part of ``R_b`` on the two edges of ``b`` along ``F``."""
    cyc = face_cycle(c, face)
    g = c.graph
    terms = []
    for i, (x, e) in enumerate(cyc):
        if x == b:
            e_prev = cyc[i - 1][1]
            terms = [(c.relations[b][e_prev], c.vectors[g.edges[e_prev][1]]),
                     (c.relations[b][e], c.vectors[g.edges[e][1]])]
            break
    if not terms:
        raise ValidationError("not-on-face", f"{b} is not on the face", vertex=b)
    return lincomb(terms, c.k)


def face_projective_points(c: Configuration, face) -> list:
    """Clockwise list ``[v_{w_1}, v(F,b_1), v_{w_2}, ...]`` of homogeneous coordinates."""
    out = []
    for x, _ in face_cycle(c, face):
        out.append(c.vectors[x] if c.graph.color(x) == WHITE else v_F_b(c, face, x))
    return out


def face_weight_projective(points) -> Fraction:
    """Face weight from the clockwise points ``P_{w_1}, P(F,b_1), ...``.

    Equals ``(-1)^(m-1) / [P_{w_1}, P(F,b_1), ..., P_{w_m}, P(F,b_m)]``.
    """
    m = len(points) // 2
    r = multi_ratio(points)
    if r == 0:
        raise DegenerateError("degenerate-multi-ratio", "multi-ratio vanishes")
    return (-1) ** (m - 1) / r


def point_P_F_b(c: Configuration, face, b):
    """``P(F,b)`` from the points alone: the line ``<P_w, P_w'>`` meets the span of b's other neighbors."""
    cyc = face_cycle(c, face)
    g = c.graph
    for i, (x, e) in enumerate(cyc):
        if x == b:
            w1 = g.edges[cyc[i - 1][1]][1]
            w2 = g.edges[e][1]
            others = [g.edges[f][1] for f in g.rotation[b] if f not in (cyc[i - 1][1], e)]
            line = join(c.vectors[w1], c.vectors[w2])
            rest = join(*[c.vectors[w] for w in others]) if others else None
            if rest is None:
                raise DegenerateError("degenerate-intersection", "black vertex has degree 2")
            x = line.intersect(rest)
            if x.dim != 1:
                raise DegenerateError("degenerate-intersection", "P(F,b) is not a point", dim=x.dim)
            return x.basis[0]
    raise ValidationError("not-on-face", f"{b} is not on the face", vertex=b)


def is_circuit_configuration(c: Configuration) -> bool:
    """Every black neighborhood is a circuit (minimally dependent multiset)."""
    g = c.graph
    for b in g.blacks:
        vs = [c.vectors[g.edges[e][1]] for e in g.rotation[b]]
        if any(is_zero(v) for v in vs):
            return False
        m = Matrix.from_columns(vs, c.k)
        ker = kernel(m)
        if len(ker) != 1 or any(x == 0 for x in ker[0]):
            return False
    return True


# ---------------------------------------------------------------- from coefficients

def configuration_from_coefficients(g: SurfaceGraph, coeffs: dict, basis: Iterable[int] | None = None,
                                    mode: str = PLABIC) -> Configuration:
    """Rebuild the configuration determined by per-edge coefficients.

    The vectors are the columns of a matrix whose rows span ``ker K``; they
    are re-embedded so that the boundary vectors indexed by ``basis``
    (1-based; the lexicographically first basis by default) become the
    standard basis.  Raises ``validity-inequality-violated`` naming the
    failed condition when ``K`` is not full rank, the boundary vectors do
    not span, or an internal vector vanishes.
    """
    coeffs = {e: Q(x) for e, x in coeffs.items()}
    relations = {b: {e: coeffs[e] for e in g.rotation[b]} for b in g.blacks}
    tmp = Configuration(g, 0, {w: () for w in g.whites}, relations, mode, check=False)
    K = tmp.kasteleyn_matrix()
    if rank(K) != g.M:
        raise DegenerateError("validity-inequality-violated", "K is not of full rank",
                              condition="full-rank-K")
    ker = kernel(K)
    k = len(ker)
    C = Matrix(ker, ncols=g.N)
    cols = C.columns()
    n = g.n
    if basis is None:
        basis = _lex_first_basis([cols[j] for j in range(n)], k)
        if basis is None:
            raise DegenerateError("validity-inequality-violated", "boundary vectors do not span",
                                  condition="boundary-span")
        basis = [j + 1 for j in basis]
    basis = sorted(basis)
    B = Matrix.from_columns([cols[j - 1] for j in basis], k)
    try:
        Binv = inverse(B)
    except DegenerateError:
        raise DegenerateError("validity-inequality-violated", "chosen boundary vectors are not a basis",
                              condition="boundary-span", basis=basis)
    vectors = {w: Binv @ cols[i] for i, w in enumerate(g.whites)}
    for w in g.internal_whites:
        if is_zero(vectors[w]):
            raise DegenerateError("validity-inequality-violated", f"internal vector at {w} vanishes",
                                  condition="nonzero-internal-vector", vertex=w)
    return Configuration(g, k, vectors, relations, mode, check=False)


def _lex_first_basis(vectors: list, k: int):
    chosen = []
    for j, v in enumerate(vectors):
        if rank(Matrix([vectors[i] for i in chosen] + [v], ncols=k)) == len(chosen) + 1:
            chosen.append(j)
            if len(chosen) == k:
                return chosen
    return chosen if len(chosen) == k else None


def random_configuration(g: SurfaceGraph, seed=None, tries: int = 200) -> Configuration:
    """Configuration with random nonzero integer coefficients on every edge."""
    r = rng(seed)
    for _ in range(tries):
        coeffs = {e: rand_scalar(r) for e in sorted(g.edges)}
        try:
            return configuration_from_coefficients(g, coeffs)
        except DegenerateError:
            continue
    raise DegenerateError("sampling-failed", "could not sample a valid configuration")


# ---------------------------------------------------------------- systems

class System:
    """Edge subset of a plabic graph forming a system (rooted forest of rivers)."""

    def __init__(self, graph: SurfaceGraph, edges: Iterable[str]):
        self.graph = graph
        self.edges = frozenset(edges)
        self._validate()

    def _validate(self):
        g = self.graph
        for e in self.edges:
            if e not in g.edges:
                raise ValidationError("unknown-edge", f"edge {e} not in graph", edge=e)
        comps = self.components()
        for comp in comps:
            verts, edges = comp
            if len(edges) != len(verts) - 1:
                raise ValidationError("not-a-system", "system must be a forest")
            bdry = [v for v in verts if g.is_boundary(v)]
            if len(bdry) != 1:
                raise ValidationError("not-a-system", "each component needs exactly one boundary vertex",
                                      component=sorted(verts))
            if len(edges) > 1:
                for v in verts:
                    if g.color(v) == BLACK and sum(1 for e in edges if v in g.edges[e]) != 2:
                        raise ValidationError("not-a-system", "black vertices of a river must have degree 2",
                                              vertex=v)

    def components(self) -> list:
        g = self.graph
        adj = {v: [] for v in g.vertices}
        for e in self.edges:
            b, w = g.edges[e]
            adj[b].append((e, w))
            adj[w].append((e, b))
        seen, comps = set(), []
        for v in sorted(g.vertices):
            if v in seen:
                continue
            stack, verts, edges = [v], {v}, set()
            seen.add(v)
            while stack:
                x = stack.pop()
                for e, y in adj[x]:
                    edges.add(e)
                    if y not in seen:
                        seen.add(y)
                        verts.add(y)
                        stack.append(y)
            comps.append((verts, edges))
        return comps

    def basis_labels(self) -> list:
        """Boundary labels of the components that are not single edges."""
        g = self.graph
        out = []
        for verts, edges in self.components():
            if len(edges) != 1:
                out.extend(g.boundary_index[v] for v in verts if g.is_boundary(v))
        return sorted(out)

    def paths_to_boundary(self) -> list:
        """Internal vertices in order of distance to the boundary, with their first edge."""
        g = self.graph
        adj = {v: [] for v in g.vertices}
        for e in sorted(self.edges):
            b, w = g.edges[e]
            adj[b].append((e, w))
            adj[w].append((e, b))
        order = []
        seen = set(g.boundary)
        frontier = list(g.boundary)
        while frontier:
            nxt = []
            for x in frontier:
                for e, y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        order.append((y, e))
                        nxt.append(y)
            frontier = nxt
        return order

    def to_json(self) -> list:
        return sorted(self.edges)

    def __eq__(self, other):
        return isinstance(other, System) and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"System({sorted(self.edges)})"


def normalize_via_system(c: Configuration, system: System) -> Configuration:
    """Unique gauge representative with coefficient 1 on every system edge."""
    for e in system.edges:
        if c.coefficient(e) == 0:
            raise DegenerateError("zero-coefficient-on-system-edge", f"coefficient on {e} is zero", edge=e)
    out = c
    for v, e in system.paths_to_boundary():
        x = out.coefficient(e)
        out = gauge(out, v, 1 / x)
    return out


def chart_coordinates(c: Configuration, system: System) -> dict:
    """``phi_F``: coefficients off the system after normalization."""
    n = normalize_via_system(c, system)
    return {e: x for e, x in n.coefficients().items() if e not in system.edges}


def chart_from_coordinates(g: SurfaceGraph, system: System, coords: dict) -> Configuration:
    """Configuration with coefficient 1 on system edges and ``coords`` elsewhere.

    Boundary vectors of the non-single-edge components are mapped to the
    standard basis when they form one.
    """
    missing = [e for e in g.edges if e not in system.edges and e not in coords]
    if missing:
        raise ValidationError("missing-coordinates", "coordinates needed for every edge off the system",
                              edges=sorted(missing))
    coeffs = {e: Fraction(1) for e in system.edges}
    coeffs.update({e: Q(x) for e, x in coords.items()})
    basis = system.basis_labels()
    try:
        return configuration_from_coefficients(g, coeffs, basis)
    except DegenerateError as exc:
        if exc.context.get("basis") is not None:
            return configuration_from_coefficients(g, coeffs)
        raise


def _bipartite_matching(blacks: list, allowed: dict, white_order: dict):
    """Matching of every black vertex into allowed whites (greedy, then augmenting paths)."""
    match_w = {}
    match_b = {}
    for b in blacks:
        for e, w in sorted(allowed[b], key=lambda t: (white_order[t[1]], t[0])):
            if w not in match_w:
                match_w[w] = (b, e)
                match_b[b] = (w, e)
                break

    def augment(b, visited):
        for e, w in sorted(allowed[b], key=lambda t: (white_order[t[1]], t[0])):
            if w in visited:
                continue
            visited.add(w)
            if w not in match_w or augment(match_w[w][0], visited):
                match_w[w] = (b, e)
                match_b[b] = (w, e)
                return True
        return False

    for b in blacks:
        if b not in match_b and not augment(b, set()):
            return None
    return {b: e for b, (w, e) in match_b.items()}


def _nonzero_matching(c: Configuration, avoid: set):
    g = c.graph
    order = {w: i for i, w in enumerate(g.whites)}
    allowed = {b: [(e, g.edges[e][1]) for e in g.rotation[b]
                   if c.relations[b][e] != 0 and g.edges[e][1] not in avoid] for b in g.blacks}
    return _bipartite_matching(g.blacks, allowed, order)


def find_system(c: Configuration, J: Iterable[int] | None = None) -> System:
    """Build a system with nonzero coefficients from a matching avoiding a boundary basis.

    Start from a nonzero matching ``pi`` of the blacks with the whites off
    the basis ``J``.  Rivers then grow from ``J``: a black whose partner is
    an internal white not yet reached gets a nonzero edge into the reached
    part.  Every river black ends with degree 2 and every component keeps
    one boundary vertex.  Without ``J`` the bases are tried in
    lexicographic order until one succeeds.
    """
    g = c.graph
    n = len(g.boundary)
    if J is not None:
        candidates = [sorted(J)]
    else:
        vecs = [c.vectors[j] for j in g.boundary]
        candidates = (sorted(x + 1 for x in S) for S in combinations(range(n), c.k)
                      if rank(Matrix([vecs[i] for i in S], ncols=c.k)) == c.k)
    tried = []
    for Jc in candidates:
        F = _grow_rivers(c, Jc)
        if F is not None:
            return System(g, F)
        tried.append(Jc)
    raise DegenerateError("no-system", "no system with nonzero coefficients was found", bases=tried)


def _grow_rivers(c: Configuration, J: list):
    g = c.graph
    Jv = {g.boundary[j - 1] for j in J}
    pi = _nonzero_matching(c, Jv)
    if pi is None:
        return None
    F = set(pi.values())
    partner = {b: g.edges[e][1] for b, e in pi.items()}
    reached = set(Jv)
    waiting = {b for b, w in partner.items() if not g.is_boundary(w)}
    grown = True
    while waiting and grown:
        grown = False
        for b in sorted(waiting):
            e = next((e for e in g.rotation[b] if e != pi[b] and c.relations[b][e] != 0
                      and g.edges[e][1] in reached), None)
            if e is not None:
                F.add(e)
                reached.update((b, partner[b]))
                waiting.discard(b)
                grown = True
    return None if waiting else F


def gauge_equal(c1: Configuration, c2: Configuration) -> bool:
    """Whether two plabic configurations on one graph agree up to internal gauge and ``GL_k``.

    Both are normalized along a common system; the normalized coefficients
    must match and one linear map must carry every vector of ``c1`` to the
    matching vector of ``c2``.
    """
    if c1.graph != c2.graph or c1.k != c2.k:
        return False
    system = None
    for src in (c1, c2):
        try:
            s = find_system(src)
        except DegenerateError:
            continue
        if all(c1.coefficient(e) != 0 and c2.coefficient(e) != 0 for e in s.edges):
            system = s
            break
    if system is None:
        return False
    n1, n2 = normalize_via_system(c1, system), normalize_via_system(c2, system)
    if n1.coefficients() != n2.coefficients():
        return False
    g = c1.graph
    vecs1 = [n1.vectors[w] for w in g.whites]
    idx = _lex_first_basis(vecs1, c1.k)
    if idx is None:
        return False
    B1 = Matrix.from_columns([vecs1[i] for i in idx], c1.k)
    B2 = Matrix.from_columns([n2.vectors[g.whites[i]] for i in idx], c1.k)
    T = B2 @ inverse(B1)
    return all(T @ n1.vectors[w] == n2.vectors[w] for w in g.whites)


# ---------------------------------------------------------------- edge weights

def signed_weights(c: Configuration, signs: dict) -> dict:
    """``wt(e) = eps_e * K_e`` per edge."""
    return {e: signs[e] * x for e, x in c.coefficients().items()}


def configuration_from_weights(g: SurfaceGraph, weights: dict, signs: dict, basis=None) -> Configuration:
    """Configuration with coefficients ``K_e = eps_e^{-1} wt(e)``."""
    return configuration_from_coefficients(g, {e: Q(weights[e]) * signs[e] for e in g.edges}, basis)


def weights_gauge_equivalent(g: SurfaceGraph, w1: dict, w2: dict, fixed: Iterable[str] = ()) -> bool:
    """Whether ``w2(e) = lambda_b mu_w w1(e)`` for vertex scalars (1 on ``fixed`` vertices).

    Propagates the vertex factors along a spanning forest and checks every
    edge exactly.
    """
    ratio = {}
    for e in g.edges:
        a, b = Q(w1[e]), Q(w2[e])
        if (a == 0) != (b == 0):
            return False
        ratio[e] = b / a if a else None
    fixed = set(fixed)
    adj = {v: [] for v in g.vertices}
    for e, (b, w) in g.edges.items():
        if ratio[e] is not None:
            adj[b].append((e, w))
            adj[w].append((e, b))
    factor = {}
    roots = [v for v in sorted(g.vertices) if v in fixed] + [v for v in sorted(g.vertices) if v not in fixed]
    for r in roots:
        if r in factor:
            continue
        factor[r] = Fraction(1)
        stack = [r]
        while stack:
            x = stack.pop()
            for e, y in adj[x]:
                want = ratio[e] / factor[x]
                if y in factor:
                    if factor[y] != want:
                        return False
                elif y in fixed:
                    if want != 1:
                        return False
                    factor[y] = want
                    stack.append(y)
                else:
                    factor[y] = want
                    stack.append(y)
    return True
