"""Geometric dynamical systems realized as sequences of local moves.

Every system comes in two flavors: a direct construction from lines and
planes, and a ``*_via_graph`` variant that builds the corresponding
configuration, runs urban renewals and degree-2 removals, and reads the
answer off the white vertices.  The two must agree exactly.

Systems covered: the pentagram map (torus graph), Laplace-Darboux dynamics
on a finite window, one gentrification step of a Q-net, one superurban
renewal step of a discrete Darboux map, plus the resistor (Koenigs) and
Ising (conic) checks.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .config_core import (
    GENERAL, Configuration, configuration_from_coefficients, configuration_from_weights,
    face_weights,
)
from .errors import DegenerateError, ValidationError, VecrelError
from .exact_linalg import (
    Matrix, ProjectivePoint, Q, det, fmt, join, kernel, lincomb, line_meet, meet_point,
    multi_ratio, rank, rng, vec,
)
from .local_moves import (
    remove_degree2_black_move, remove_degree2_white_move, urban_renewal_move, y_mutation,
)
from .plabic_positroid import kasteleyn_signs
from .surface_graph import BLACK, TORUS, WHITE, SurfaceGraph, from_coordinates

AXES = "xyz"


# ---------------------------------------------------------------- shared helpers

def _point(p) -> ProjectivePoint:
    return p if isinstance(p, ProjectivePoint) else ProjectivePoint(p)


def _coords(p) -> tuple:
    return _point(p).coords


def homogeneous(p) -> tuple:
    """Homogeneous coordinates of a point given affinely ``(x, y)`` or projectively.

    >>> homogeneous((1, 2))
    (Fraction(1, 1), Fraction(2, 1), Fraction(1, 1))
    """
    if isinstance(p, ProjectivePoint):
        return p.coords
    v = vec(p)
    return v + (Fraction(1),) if len(v) == 2 else v


def affine(p) -> tuple:
    """Affine chart ``(x/z, y/z)`` of a point of the projective plane."""
    x, y, z = _coords(p)
    if z == 0:
        raise DegenerateError("point-at-infinity", "point lies on the line at infinity")
    return (x / z, y / z)


def _relation(vectors: list, k: int) -> tuple:
    ker = kernel(Matrix.from_columns(vectors, k))
    if len(ker) != 1:
        raise DegenerateError("degenerate-relation", "neighboring points do not satisfy a unique relation",
                              dimension=len(ker))
    return ker[0]


def _random_coefficient(r) -> Fraction:
    while True:
        x = r.randint(-40, 40)
        if x:
            return Fraction(x)


def _random_vector(r, k: int) -> tuple:
    return tuple(Fraction(r.randint(-50, 50)) for _ in range(k))


def _combination(r, vectors: Sequence, k: int) -> tuple:
    return lincomb([(_random_coefficient(r), v) for v in vectors], k)


def _distinct(points: Iterable) -> bool:
    pts = [_point(p) for p in points]
    return len(set(pts)) == len(pts)


def _nonzero_relations(c: Configuration) -> bool:
    return all(x != 0 for rel in c.relations.values() for x in rel.values())


def _generic_sample(make_points, build, step, graph_step=None, tries: int = 100):
    """Draw until points, relations and the step's output are in general position.

    With ``graph_step`` the square-move pipeline must also run without
    hitting a singular move.
    """
    for _ in range(tries):
        P = make_points()
        try:
            if not all(any(x != 0 for x in v) for v in P.values()) or not _distinct(P.values()):
                continue
            if not _nonzero_relations(build(P)):
                continue
            out = list(step(P).values())
            if graph_step is not None:
                graph_step(P)
        except VecrelError:
            continue
        if _distinct(list(P.values()) + out):
            return P
    raise DegenerateError("sampling-failed", "could not draw a generic instance")


def cleanup(c: Configuration, weights: dict | None = None):
    """Remove internal degree-2 vertices until none is left.

    Vertices are tried in sorted order so the outcome is reproducible.  When
    ``weights`` (face id -> face weight) is given, it is carried along the
    face correspondence and ``(config, weights)`` is returned.
    """
    changed = True
    while changed:
        changed = False
        g = c.graph
        for v in sorted(g.vertices):
            if g.is_boundary(v) or g.degree(v) != 2:
                continue
            move = remove_degree2_black_move if g.color(v) == BLACK else remove_degree2_white_move
            try:
                res = move(c, v)
            except VecrelError:
                continue
            c = res.config
            if weights is not None:
                weights = _carry(weights, res.face_map)
            changed = True
            break
    return c if weights is None else (c, weights)


def _carry(weights: dict, face_map: dict) -> dict:
    return {new: weights[old] for new, old in face_map.items() if old in weights}


def face_by_vertices(c_or_g, vertices: Iterable[str]):
    """The unique internal face whose vertex set is ``vertices``."""
    g = c_or_g.graph if isinstance(c_or_g, Configuration) else c_or_g
    want = set(vertices)
    hits = [f for f in g.internal_faces() if set(f.vertices) == want]
    if len(hits) != 1:
        raise ValidationError("face-not-found", "no unique face with the given vertices",
                              vertices=sorted(want), matches=len(hits))
    return hits[0]


def run_sequence(c: Configuration, sequence: Sequence[Sequence[str]], track: bool = False):
    """Urban renewal at each listed face (given by its vertex set), then cleanup.

    With ``track`` the face weights of the internal faces are propagated by
    :func:`y_mutation` instead of recomputed, and ``(config, weights)`` is
    returned.
    """
    weights = face_weights(c) if track else None
    for vs in sequence:
        f = face_by_vertices(c, vs)
        if track:
            weights = y_mutation(c.graph, weights, f.id)
        res = urban_renewal_move(c, f.id)
        c = res.config
        if track:
            weights = _carry(weights, res.face_map)
            c, weights = cleanup(c, weights)
        else:
            c = cleanup(c)
    return (c, weights) if track else c


def find_move_sequence(c: Configuration, is_target: Callable[[Configuration], bool], depth: int):
    """Shortest list of renewals (each followed by cleanup) reaching ``is_target``.

    Depth-first with iterative deepening over the internal quadrilateral
    faces; returns the list of face vertex sets or ``None``.
    """
    def search(c, d, path):
        if is_target(c):
            return path
        if d == 0:
            return None
        for f in c.graph.internal_faces():
            if f.length != 4:
                continue
            try:
                nc = cleanup(urban_renewal_move(c, f.id).config)
            except VecrelError:
                continue
            res = search(nc, d - 1, path + [sorted(f.vertices)])
            if res is not None:
                return res
        return None

    for d in range(depth + 1):
        res = search(c, d, [])
        if res is not None:
            return res
    return None


# ---------------------------------------------------------------- pentagram map

def pentagram_step(polygon: Sequence) -> list:
    """``B_i = <A_{i-1}, A_{i+1}> ∩ <A_i, A_{i+2}>`` for a closed n-gon.

    >>> pent = [(0, 0), (2, 0), (3, 2), (1, 4), (-1, 2)]
    >>> [affine(b) for b in pentagram_step(pent)][0]
    (Fraction(1, 1), Fraction(2, 3))
    """
    pts = [homogeneous(p) for p in polygon]
    n = len(pts)
    if n < 5:
        context = {"n": n}
        if n == 4:
            context["collapse"] = [fmt(x) for x in line_meet(pts[0], pts[2], pts[1], pts[3]).normalized()]
        raise DegenerateError("n-too-small", "the pentagram map needs at least five vertices", **context)
    return [line_meet(pts[(i - 1) % n], pts[(i + 1) % n], pts[i], pts[(i + 2) % n]) for i in range(n)]


def pentagram_graph(n: int) -> SurfaceGraph:
    """Square grid on the torus modulo ``(-3, 1)`` and ``(2n, 0)``.

    Vertex classes are ``c = i + 3j mod 2n``.  White ``A{m}`` is class
    ``2m``; black ``b{m}`` is class ``2m + 1`` and is joined to
    ``A{m-1}, ..., A{m+2}``.  Edge ``h{c}`` joins classes ``c, c+1`` and
    ``v{c}`` joins ``c, c+3``.
    """
    if n < 5:
        raise DegenerateError("n-too-small", "the pentagram graph needs n >= 5", n=n)
    N = 2 * n

    def name(c):
        c %= N
        return f"A{c // 2}" if c % 2 == 0 else f"b{c // 2}"

    vertices = {name(c): (WHITE if c % 2 == 0 else BLACK, False) for c in range(N)}
    edges = {}
    for c in range(N):
        for tag, step in (("h", 1), ("v", 3)):
            ends = (name(c), name(c + step))
            edges[f"{tag}{c}"] = ends[::-1] if c % 2 == 0 else ends
    rotation = {name(c): [f"h{c}", f"v{(c - 3) % N}", f"h{(c - 1) % N}", f"v{c}"] for c in range(N)}
    return SurfaceGraph(vertices, edges, rotation, surface=TORUS)


def pentagram_configuration(polygon: Sequence) -> Configuration:
    """Configuration on :func:`pentagram_graph` with ``A_m`` at white ``A{m}``."""
    pts = [homogeneous(p) for p in polygon]
    n = len(pts)
    g = pentagram_graph(n)
    N = 2 * n
    vectors = {f"A{m}": pts[m] for m in range(n)}
    relations = {}
    for m in range(n):
        c = 2 * m + 1
        es = [f"h{c}", f"v{(c - 3) % N}", f"h{(c - 1) % N}", f"v{c}"]
        ws = [g.edges[e][1] for e in es]
        coeffs = _relation([vectors[w] for w in ws], 3)
        relations[f"b{m}"] = dict(zip(es, coeffs))
    return Configuration(g, 3, vectors, relations, GENERAL)


def _pentagram_face_edges(c: int, N: int) -> set:
    return {f"h{c % N}", f"v{(c + 1) % N}", f"h{(c + 3) % N}", f"v{c % N}"}


def _face_with_edges(g: SurfaceGraph, edges: set):
    for f in g.faces:
        if {e for e, _ in f.darts} == edges:
            return f
    raise ValidationError("face-not-found", "no face with the given edges", edges=sorted(edges))


def pentagram_step_via_graph(polygon: Sequence, return_config: bool = False):
    """The pentagram map as urban renewal at every face ``c`` with ``c`` even.

    Afterwards black ``b{m}`` has degree 2 and both of its neighbors carry
    ``B_m``; removing all degree-2 vertices gives a configuration on a copy
    of the same torus graph.
    """
    c = pentagram_configuration(polygon)
    n = len(polygon)
    N = 2 * n
    for m in range(n):
        f = _face_with_edges(c.graph, _pentagram_face_edges(2 * m, N))
        c = urban_renewal_move(c, f.id).config
    out = []
    for m in range(n):
        ws = c.graph.neighbors(f"b{m}")
        if len(ws) != 2:
            raise DegenerateError("unexpected-degree", "black vertex kept more than two edges", vertex=f"b{m}")
        p, q = (ProjectivePoint(c.vectors[w]) for w in ws)
        if p != q:
            raise DegenerateError("degenerate-intersection", "merged points disagree", vertex=f"b{m}")
        out.append(p)
    if return_config:
        return out, cleanup(c)
    return out


def pentagram_face(g: SurfaceGraph, i: int):
    """Face of :func:`pentagram_graph` whose white vertices are ``A_i, A_{i+1}``."""
    return _face_with_edges(g, _pentagram_face_edges(2 * i - 1, len(g.vertices)))


def pentagram_y(polygon: Sequence, i: int) -> Fraction:
    """``-[A_i, <A_i A_{i+1}> ∩ <A_{i-2} A_{i-1}>, A_{i+1}, <A_i A_{i+1}> ∩ <A_{i+2} A_{i+3}>]^{-1}``."""
    pts = [homogeneous(p) for p in polygon]
    n = len(pts)
    a = lambda j: pts[j % n]
    p1 = line_meet(a(i), a(i + 1), a(i - 2), a(i - 1))
    p2 = line_meet(a(i), a(i + 1), a(i + 2), a(i + 3))
    return -1 / multi_ratio([a(i), p1.coords, a(i + 1), p2.coords])


def pentagram_trajectory(polygon: Sequence, steps: int) -> list:
    """Polygons ``A, T(A), ..., T^steps(A)`` as lists of projective points."""
    out = [[_point(homogeneous(p)) for p in polygon]]
    for _ in range(steps):
        out.append(pentagram_step(out[-1]))
    return out


def random_polygon(n: int, seed=None, size: int = 20) -> list:
    """Random integer polygon with no three vertices collinear and distinct ``B_i``.

    The square-move pipeline must also go through without a singular move.
    """
    r = rng(seed)
    while True:
        pts = [(r.randint(-size, size), r.randint(-size, size)) for _ in range(n)]
        hom = [homogeneous(p) for p in pts]
        if any(det(Matrix([hom[a], hom[b], hom[c]])) == 0
               for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)):
            continue
        try:
            B = pentagram_step(pts)
            pentagram_step_via_graph(pts)
        except VecrelError:
            continue
        if len(set(B)) == n and not set(B) & {ProjectivePoint(h) for h in hom}:
            return pts


# ---------------------------------------------------------------- Laplace-Darboux

def _lattice_neighbors(i: int, j: int) -> list:
    """``P_{i,j-1}, P_{i-1,j}, P_{i+1,j}, P_{i,j+1}``."""
    return [(i, j - 1), (i - 1, j), (i + 1, j), (i, j + 1)]


def _black_sites(window: dict) -> list:
    parity = next(iter(window))
    parity = (parity[0] + parity[1]) % 2
    xs = [p[0] for p in window]
    ys = [p[1] for p in window]
    out = []
    for i in range(min(xs), max(xs) + 1):
        for j in range(min(ys), max(ys) + 1):
            if (i + j) % 2 != parity and all(q in window for q in _lattice_neighbors(i, j)):
                out.append((i, j))
    return out


def check_coplanarity(window: dict) -> None:
    """Raise ``coplanarity-violated`` unless every black site sees four coplanar points."""
    for i, j in _black_sites(window):
        pts = [window[q] for q in _lattice_neighbors(i, j)]
        if rank(Matrix(pts)) > 3:
            raise ValidationError("coplanarity-violated", "neighboring points are not coplanar", site=[i, j])


def laplace_darboux_step(window: dict) -> dict:
    """``Q_{i,j} = <P_{i,j-1}, P_{i+1,j}> ∩ <P_{i-1,j}, P_{i,j+1}>`` at every black site.

    ``window`` maps lattice sites ``(i, j)`` of one parity to vectors; the
    output is keyed by the sites of the other parity whose four neighbors
    are present.
    """
    window = {k: vec(v) for k, v in window.items()}
    check_coplanarity(window)
    out = {}
    for i, j in _black_sites(window):
        out[(i, j)] = line_meet(window[(i, j - 1)], window[(i + 1, j)], window[(i - 1, j)], window[(i, j + 1)])
    return out


def random_laplace_window(size: int = 5, seed=None, k: int = 4) -> dict:
    """Points ``P_{i,j}`` (``i + j`` even) around black sites ``0 <= i, j < size``.

    Rows are filled bottom to top: each black site ``(i, j)`` fixes
    ``P_{i,j+1}`` as a random combination of its other three neighbors, so
    all coplanarity conditions hold by construction.
    """
    r = rng(seed)
    return _generic_sample(lambda: _laplace_points(r, size, k), laplace_configuration, laplace_darboux_step,
                           laplace_darboux_step_via_graph)


def _laplace_points(r, size: int, k: int) -> dict:
    P = {}
    for j in range(-1, size + 1):
        for i in range(-1, size + 1):
            if (i + j) % 2:
                continue
            below = (i, j - 1)
            inside = 0 <= below[0] < size and 0 <= below[1] < size
            if not any(0 <= a < size and 0 <= b < size for a, b in _lattice_neighbors(i, j)):
                continue
            if inside:
                P[(i, j)] = _combination(r, [P[(i, j - 2)], P[(i - 1, j - 1)], P[(i + 1, j - 1)]], k)
            else:
                P[(i, j)] = _random_vector(r, k)
    return P


def laplace_graph(window: dict) -> SurfaceGraph:
    """Square-grid disk graph: whites at the window sites, blacks at the black sites."""
    blacks = _black_sites(window)
    used = {q for b in blacks for q in _lattice_neighbors(*b)}
    name = lambda p: f"P{p[0]}_{p[1]}"
    bname = lambda p: f"K{p[0]}_{p[1]}"
    deg = {q: sum(1 for b in blacks if q in _lattice_neighbors(*b)) for q in used}
    cx = sum(b[0] for b in blacks) / len(blacks)
    cy = sum(b[1] for b in blacks) / len(blacks)
    bd = sorted((q for q in used if deg[q] < 4), key=lambda q: -math.atan2(q[1] - cy, q[0] - cx))
    vertices = {name(q): (WHITE, deg[q] < 4) for q in used}
    vertices.update({bname(b): (BLACK, False) for b in blacks})
    positions = {name(q): q for q in used}
    positions.update({bname(b): b for b in blacks})
    edges = {f"{bname(b)}_{name(q)}": (bname(b), name(q)) for b in blacks for q in _lattice_neighbors(*b)}
    return from_coordinates(vertices, edges, [name(q) for q in bd], positions)


def laplace_configuration(window: dict) -> Configuration:
    window = {k: vec(v) for k, v in window.items()}
    g = laplace_graph(window)
    k = len(next(iter(window.values())))
    vectors = {w: window[tuple(int(x) for x in w[1:].split("_"))] for w in g.whites}
    relations = {}
    for b in g.blacks:
        es = list(g.rotation[b])
        coeffs = _relation([vectors[g.edges[e][1]] for e in es], k)
        relations[b] = dict(zip(es, coeffs))
    return Configuration(g, k, vectors, relations, GENERAL)


def laplace_darboux_step_via_graph(window: dict) -> dict:
    """Urban renewal at every square whose upper left corner is black.

    A black site both of whose squares get renewed ends with degree 2 and
    its two neighbors carry ``Q_{i,j}``; those sites form the interior of
    the window and are the keys of the result.
    """
    window = {k: vec(v) for k, v in window.items()}
    check_coplanarity(window)
    c = laplace_configuration(window)
    blacks = set(_black_sites(window))
    squares = []
    for (i, j) in sorted(blacks):
        # square with lower left corner (a, b) has black corners (a+1, b) and (a, b+1)
        a, b = i, j - 1
        if (a + 1, b) in blacks and (a, b + 1) in blacks:
            squares.append((a, b))
    for a, b in squares:
        vs = [f"P{a}_{b}", f"K{a + 1}_{b}", f"P{a + 1}_{b + 1}", f"K{a}_{b + 1}"]
        c = urban_renewal_move(c, face_by_vertices(c, vs).id).config
    sq = set(squares)
    out = {}
    for (i, j) in sorted(blacks):
        if (i - 1, j) in sq and (i, j - 1) in sq:
            ws = c.graph.neighbors(f"K{i}_{j}")
            p, q = (ProjectivePoint(c.vectors[w]) for w in ws)
            if p != q:
                raise DegenerateError("degenerate-intersection", "merged points disagree", site=[i, j])
            out[(i, j)] = p
    return out


def laplace_trajectory(window: dict, steps: int) -> list:
    """Generations of the Laplace-Darboux map on a shrinking window."""
    out = [{k: ProjectivePoint(v) for k, v in window.items()}]
    cur = {k: vec(v) for k, v in window.items()}
    for _ in range(steps):
        nxt = laplace_darboux_step(cur)
        if not nxt:
            raise ValidationError("window-too-small", "window is exhausted before the last step", steps=steps)
        out.append(nxt)
        cur = {k: p.coords for k, p in nxt.items()}
    return out


# ---------------------------------------------------------------- Q-nets

def _cube(u: Sequence[int]) -> str:
    return "".join(str(x) for x in u)


def _e(d: str) -> tuple:
    return tuple(1 if a == d else 0 for a in AXES)


def _add(u, v, s: int = 1) -> tuple:
    return tuple(a + s * b for a, b in zip(u, v))


_HEX = {"x": (0, 4), "y": (-4, -2), "z": (4, -2)}


def _corner(u) -> tuple:
    x = sum(_HEX[a][0] * b for a, b in zip(AXES, u))
    y = sum(_HEX[a][1] * b for a, b in zip(AXES, u))
    return (x, y)


def qnet_graph() -> SurfaceGraph:
    """Three lozenges around the corner ``000`` of a cube.

    Whites ``Q{ijk}`` sit at the seven cube vertices other than ``111``;
    black ``L{ab}`` sits in the lozenge spanned by directions ``a, b``.
    """
    whites = ["000", "100", "010", "001", "110", "101", "011"]
    boundary = ["100", "101", "001", "011", "010", "110"]
    vertices = {f"Q{u}": (WHITE, u in boundary) for u in whites}
    positions = {f"Q{u}": _corner([int(x) for x in u]) for u in whites}
    edges = {}
    for a, b in (("x", "y"), ("y", "z"), ("z", "x")):
        name = f"L{a}{b}"
        vertices[name] = (BLACK, False)
        ea, eb = _e(a), _e(b)
        corners = [(0, 0, 0), ea, _add(ea, eb), eb]
        pos = [_corner(u) for u in corners]
        positions[name] = (sum(p[0] for p in pos) / 4, sum(p[1] for p in pos) / 4)
        for u in corners:
            w = f"Q{_cube(u)}"
            edges[f"{name}_{w}"] = (name, w)
    return from_coordinates(vertices, edges, [f"Q{u}" for u in boundary], positions)


def random_qnet_cube(seed=None, k: int = 4) -> dict:
    """Seven points of an elementary cube with coplanar lozenges at ``000``."""
    r = rng(seed)
    return _generic_sample(lambda: _qnet_points(r, k), qnet_configuration,
                           lambda P: {"111": qnet_gentrify(P)}, qnet_gentrify_via_graph)


def _qnet_points(r, k: int) -> dict:
    P = {u: _random_vector(r, k) for u in ("000", "100", "010", "001")}
    P["110"] = _combination(r, [P["000"], P["100"], P["010"]], k)
    P["101"] = _combination(r, [P["000"], P["100"], P["001"]], k)
    P["011"] = _combination(r, [P["000"], P["010"], P["001"]], k)
    return P


def _cube_points(cube: dict) -> dict:
    return {(_cube(u) if not isinstance(u, str) else u): vec(v) for u, v in cube.items()}


def qnet_gentrify(cube: dict) -> ProjectivePoint:
    """``Q_111`` as the intersection of the planes through its three neighbors' faces.

    The planes are ``<Q100, Q110, Q101>``, ``<Q010, Q110, Q011>`` and
    ``<Q001, Q101, Q011>``.
    """
    P = _cube_points(cube)
    _check_qnet(P)
    planes = [join(P["100"], P["110"], P["101"]), join(P["010"], P["110"], P["011"]),
              join(P["001"], P["101"], P["011"])]
    if any(p.dim != 3 for p in planes):
        raise DegenerateError("planes-not-in-general-position", "three points do not span a plane")
    x = planes[0].intersect(planes[1]).intersect(planes[2])
    if x.dim != 1:
        raise DegenerateError("planes-not-in-general-position", "planes do not meet in a single point",
                              dim=x.dim)
    return ProjectivePoint(x.basis[0])


def _check_qnet(P: dict) -> None:
    for a, b in (("x", "y"), ("y", "z"), ("z", "x")):
        ea, eb = _e(a), _e(b)
        quad = [P["000"], P[_cube(ea)], P[_cube(eb)], P[_cube(_add(ea, eb))]]
        if rank(Matrix(quad)) > 3:
            raise ValidationError("coplanarity-violated", "lozenge points are not coplanar", lozenge=a + b)


def qnet_configuration(cube: dict) -> Configuration:
    P = _cube_points(cube)
    _check_qnet(P)
    g = qnet_graph()
    k = len(P["000"])
    vectors = {w: P[w[1:]] for w in g.whites}
    relations = {}
    for b in g.blacks:
        es = list(g.rotation[b])
        relations[b] = dict(zip(es, _relation([vectors[g.edges[e][1]] for e in es], k)))
    return Configuration(g, k, vectors, relations, GENERAL)


def _qnet_target(c: Configuration) -> bool:
    g = c.graph
    if len(g.internal_whites) != 1 or len(g.blacks) != 3:
        return False
    d = g.internal_whites[0]
    want = sorted(sorted(s) for s in ({"Q100", "Q110", "Q101"}, {"Q010", "Q110", "Q011"},
                                      {"Q001", "Q101", "Q011"}))
    got = sorted(sorted(set(g.neighbors(b)) - {d}) for b in g.blacks)
    return got == want and all(g.degree(b) == 4 and d in g.neighbors(b) for b in g.blacks)


# Gentrification: four square moves, each followed by degree-2 removals.  Faces
# are named by their vertex sets; new vertex ids are the deterministic ones
# produced by the moves.
QNET_SEQUENCE = (
    ("Lxy", "Lzx", "Q000", "Q100"),
    ("Lxy", "Lyz", "Q010", "uw1"),
    ("Lyz", "Lzx", "Q001", "uw0"),
    ("Lyz", "ub0", "uw2", "uw3"),
)


def qnet_gentrify_via_graph(cube: dict, track: bool = False):
    """Run the gentrification square-move sequence and read off ``Q_111``.

    With ``track`` also returns the final configuration and the face weights
    propagated by :func:`y_mutation` along the sequence.
    """
    c = qnet_configuration(cube)
    res = run_sequence(c, QNET_SEQUENCE, track=track)
    c2, weights = res if track else (res, None)
    if not _qnet_target(c2):
        raise DegenerateError("sequence-failed", "gentrification did not reach the expected graph")
    d = c2.graph.internal_whites[0]
    p = ProjectivePoint(c2.vectors[d])
    return (p, c2, weights) if track else p


def qnet_y(cube: dict, d: str, u: Sequence[int] = (0, 0, 0), tilde: bool = False, top=None) -> Fraction:
    """Cross-ratio variable ``Y^d_u`` (or ``Ỹ^d_u``) of the edge from ``u`` in direction ``d``.

    ``Y^d_u = -[Q_u, Q^d_u ∩ Q^d_{u+e1}, Q_{u+e_d}, Q^d_u ∩ Q^d_{u+e2}]^{-1}`` and
    ``Ỹ^d_u = -[Q_u, Q^d_u ∩ Q^d_{u-e2}, Q_{u+e_d}, Q^d_u ∩ Q^d_{u-e1}]^{-1}``
    with ``(d, e1, e2)`` a cyclic shift of ``(x, y, z)``.  ``top`` supplies
    ``Q_111`` when the edge reaches it.
    """
    P = _cube_points(cube)
    if top is not None:
        P["111"] = _coords(top)
    i = AXES.index(d)
    d1, d2 = AXES[(i + 1) % 3], AXES[(i + 2) % 3]
    u = tuple(u)
    ed = _e(d)
    s1, s2 = (_add(u, _e(d2), -1), _add(u, _e(d1), -1)) if tilde else (_add(u, _e(d1)), _add(u, _e(d2)))
    line = join(P[_cube(u)], P[_cube(_add(u, ed))])
    p1 = meet_point(line, join(P[_cube(s1)], P[_cube(_add(s1, ed))]))
    p2 = meet_point(line, join(P[_cube(s2)], P[_cube(_add(s2, ed))]))
    return -1 / multi_ratio([P[_cube(u)], p1.coords, P[_cube(_add(u, ed))], p2.coords])


def qnet_y_tilde_formula(Yx, Yy, Yz) -> Fraction:
    """``(Y^y)^{-1} (1 + Y^x + Y^y Y^x) / (1 + Y^z + Y^z Y^x)``."""
    return (1 + Yx + Yy * Yx) / (Yy * (1 + Yz + Yz * Yx))


def qnet_edge_face(c: Configuration, w1: str, w2: str):
    """Internal face of a Q-net graph whose white vertices are ``w1`` and ``w2``."""
    hits = [f for f in c.graph.internal_faces()
            if {v for v in f.vertices if c.graph.color(v) == WHITE} == {w1, w2}]
    if len(hits) != 1:
        raise ValidationError("face-not-found", "no unique face for the edge", whites=[w1, w2])
    return hits[0]


# ---------------------------------------------------------------- discrete Darboux maps

def _fname(d: str, u) -> str:
    return f"f{d}{_cube(u)}"


def _midpoint(d: str, u) -> tuple:
    p, q = _corner(u), _corner(_add(u, _e(d)))
    return (Fraction(p[0] + q[0], 2), Fraction(p[1] + q[1], 2))


DARBOUX_INNER = [("x", (0, 0, 0)), ("y", (0, 0, 0)), ("z", (0, 0, 0))]
DARBOUX_OUTER = [("z", (1, 0, 0)), ("x", (0, 0, 1)), ("y", (0, 0, 1)),
                 ("z", (0, 1, 0)), ("x", (0, 1, 0)), ("y", (1, 0, 0))]
DARBOUX_NEXT = [("x", (0, 1, 1)), ("y", (1, 0, 1)), ("z", (1, 1, 0))]
_LOZENGES = [("x", "y"), ("y", "z"), ("z", "x")]


def _lozenge_triples(u, a: str, b: str) -> tuple:
    """Collinear triples at the two blacks of lozenge ``(u; a, b)``."""
    ua, ub = _add(u, _e(a)), _add(u, _e(b))
    return ([(a, u), (b, u), (b, ua)], [(b, ua), (b, u), (a, ub)])


def darboux_graph() -> SurfaceGraph:
    """Whites on the nine edges of a hexagon of three lozenges, two blacks per lozenge.

    In the lozenge spanned by ``a, b`` at ``u`` one black sees
    ``f^a_u, f^b_u, f^b_{u+a}`` and the other ``f^b_{u+a}, f^b_u, f^a_{u+b}``.
    """
    vertices, positions, edges = {}, {}, {}
    outer = set(DARBOUX_OUTER)
    for d, u in DARBOUX_INNER + DARBOUX_OUTER:
        n = _fname(d, u)
        vertices[n] = (WHITE, (d, u) in outer)
        positions[n] = _midpoint(d, u)
    for a, b in _LOZENGES:
        u = (0, 0, 0)
        for i, t in enumerate(_lozenge_triples(u, a, b)):
            bn = f"b{a}{b}{_cube(u)}{i}"
            vertices[bn] = (BLACK, False)
            ps = [_midpoint(*x) for x in t]
            positions[bn] = (sum(p[0] for p in ps) / 3, sum(p[1] for p in ps) / 3)
            for x in t:
                edges[f"{bn}_{_fname(*x)}"] = (bn, _fname(*x))
    return from_coordinates(vertices, edges, [_fname(*x) for x in DARBOUX_OUTER], positions)


def _darboux_points(data: dict) -> dict:
    out = {}
    for key, v in data.items():
        if isinstance(key, str):
            out[key] = vec(v)
        else:
            d, u = key
            out[_fname(d, u)] = vec(v)
    return out


def random_darboux_data(seed=None, k: int = 4) -> dict:
    """Random edge points of one hexahedron satisfying the lozenge collinearities."""
    r = rng(seed)
    return _generic_sample(lambda: _darboux_random_points(r, k), darboux_configuration, darboux_superurban,
                           darboux_superurban_via_graph)


def _darboux_random_points(r, k: int) -> dict:
    P = {_fname(d, u): _random_vector(r, k) for d, u in DARBOUX_INNER}
    o = (0, 0, 0)
    for a, b in _LOZENGES:
        line = [P[_fname(a, o)], P[_fname(b, o)]]
        P[_fname(b, _e(a))] = _combination(r, line, k)
        P[_fname(a, _e(b))] = _combination(r, line, k)
    return P


def _check_darboux(P: dict) -> None:
    o = (0, 0, 0)
    for a, b in _LOZENGES:
        pts = [P[_fname(a, o)], P[_fname(b, o)], P[_fname(b, _e(a))], P[_fname(a, _e(b))]]
        if rank(Matrix(pts)) > 2:
            raise ValidationError("collinearity-violated", "lozenge points are not collinear", lozenge=a + b)


def darboux_superurban(data: dict) -> dict:
    """Edge points ``f^x_011, f^y_101, f^z_110`` of the next generation.

    Each is the meet of two lines of the form ``<f^a_v, f^b_v>`` through the
    outer points, e.g. ``f^z_110 = <f^y_100, f^z_100> ∩ <f^x_010, f^z_010>``.
    """
    P = _darboux_points(data)
    _check_darboux(P)
    lines = {}
    for v, (a, b) in (((1, 0, 0), ("y", "z")), ((0, 1, 0), ("z", "x")), ((0, 0, 1), ("x", "y"))):
        lines[v] = (P[_fname(a, v)], P[_fname(b, v)])
    out = {}
    l100, l010, l001 = lines[(1, 0, 0)], lines[(0, 1, 0)], lines[(0, 0, 1)]
    out[("z", (1, 1, 0))] = line_meet(*l100, *l010)
    out[("x", (0, 1, 1))] = line_meet(*l010, *l001)
    out[("y", (1, 0, 1))] = line_meet(*l001, *l100)
    return out


def darboux_configuration(data: dict) -> Configuration:
    P = _darboux_points(data)
    _check_darboux(P)
    g = darboux_graph()
    k = len(next(iter(P.values())))
    vectors = {w: P[w] for w in g.whites}
    relations = {}
    for b in g.blacks:
        es = list(g.rotation[b])
        relations[b] = dict(zip(es, _relation([vectors[g.edges[e][1]] for e in es], k)))
    return Configuration(g, k, vectors, relations, GENERAL)


# Superurban renewal: six square moves, each followed by degree-2 removals.
DARBOUX_SEQUENCE = (
    ("bxy0000", "bxy0001", "fy000", "fy100"),
    ("byz0000", "bzx0000", "fx000", "fz000"),
    ("byz0000", "byz0001", "fz010", "uw1"),
    ("bzx0001", "fx000", "fx001", "ub0"),
    ("fx010", "ub0", "ub1", "uw1"),
    ("byz0001", "fx001", "ub2", "uw0"),
)

# each next-generation point shares a black with the two outer points spanning one of its lines
_DARBOUX_NEXT_LINES = {("z", (1, 1, 0)): {"fy100", "fz100"}, ("x", (0, 1, 1)): {"fz010", "fx010"},
                       ("y", (1, 0, 1)): {"fx001", "fy001"}}


def darboux_superurban_via_graph(data: dict, track: bool = False):
    """Superurban renewal as six square moves; new internal whites carry the next points."""
    c = darboux_configuration(data)
    res = run_sequence(c, DARBOUX_SEQUENCE, track=track)
    c2, weights = res if track else (res, None)
    out = {}
    g2 = c2.graph
    for key, pair in _DARBOUX_NEXT_LINES.items():
        hits = [w for w in g2.internal_whites
                if any(set(g2.neighbors(b)) - {w} == pair for b in g2.neighbors(w))]
        if len(hits) != 1:
            raise DegenerateError("sequence-failed", "superurban renewal did not reach the expected graph",
                                  edge=_fname(*key))
        out[key] = ProjectivePoint(c2.vectors[hits[0]])
    return (out, c2, weights) if track else out


def darboux_y_lozenge(data: dict, a: str, b: str, u=(0, 0, 0)) -> Fraction:
    """``Y^{ab}_u = -[f^a_u, f^b_{u+a}, f^a_{u+b}, f^b_u]^{-1}``."""
    P = _darboux_points(data)
    u = tuple(u)
    pts = [P[_fname(a, u)], P[_fname(b, _add(u, _e(a)))], P[_fname(a, _add(u, _e(b)))], P[_fname(b, u)]]
    return -1 / multi_ratio(pts)


def darboux_y_in(data: dict) -> Fraction:
    """``[f^x, f^y_{100}, f^y, f^z_{010}, f^z, f^x_{001}]^{-1}`` at the corner ``000``."""
    P = _darboux_points(data)
    names = ["fx000", "fy100", "fy000", "fz010", "fz000", "fx001"]
    return 1 / multi_ratio([P[x] for x in names])


def darboux_y_out(data: dict) -> Fraction:
    """``[f^x_{011}, f^y_{001}, f^y_{101}, f^z_{100}, f^z_{110}, f^x_{010}]^{-1}`` at the corner ``111``.

    ``data`` must include the next-generation points.
    """
    P = _darboux_points(data)
    names = ["fx011", "fy001", "fy101", "fz100", "fz110", "fx010"]
    return 1 / multi_ratio([P[x] for x in names])


def darboux_face(c: Configuration, whites: Iterable[str]):
    """Internal face of a Darboux graph with the given white vertices."""
    want = set(whites)
    hits = [f for f in c.graph.internal_faces()
            if {v for v in f.vertices if c.graph.color(v) == WHITE} == want]
    if len(hits) != 1:
        raise ValidationError("face-not-found", "no unique face with the given whites", whites=sorted(want))
    return hits[0]


# ---------------------------------------------------------------- resistor networks

def resistor_graph() -> SurfaceGraph:
    """The Q-net hexagon read as primal and dual vertices of a triangular grid patch."""
    return qnet_graph()


# black -> (u, w_i, u_i, w_{i+1}) for the three relations u + c w_i - u_i - c w_{i+1} = 0
_RESISTOR_BLACKS = {
    "Lxy": ("Q000", "Q100", "Q110", "Q010"),
    "Lyz": ("Q000", "Q010", "Q011", "Q001"),
    "Lzx": ("Q000", "Q001", "Q101", "Q100"),
}


def resistor_coefficients(c1, c2, c3) -> dict:
    """Per-edge relation coefficients ``u + c_i w_i - u_i - c_i w_{i+1} = 0``."""
    cs = [Q(c1), Q(c2), Q(c3)]
    if any(x <= 0 for x in cs):
        raise ValidationError("nonpositive-conductance", "conductances must be positive",
                              conductances=[fmt(x) for x in cs])
    out = {}
    for (b, (u, wi, ui, wj)), ci in zip(_RESISTOR_BLACKS.items(), cs):
        out[f"{b}_{u}"] = Fraction(1)
        out[f"{b}_{wi}"] = ci
        out[f"{b}_{ui}"] = Fraction(-1)
        out[f"{b}_{wj}"] = -ci
    return out


def resistor_signs() -> dict:
    """Edge signs of the periodic tiling: negative on the ``u_i`` and ``w_{i+1}`` edges."""
    return {e: (1 if x > 0 else -1) for e, x in resistor_coefficients(1, 1, 1).items()}


def resistor_to_config(c1, c2, c3) -> Configuration:
    """Configuration on :func:`resistor_graph` whose relations are the resistor relations."""
    return configuration_from_coefficients(resistor_graph(), resistor_coefficients(c1, c2, c3))


def koenigs_determinant(c: Configuration) -> Fraction:
    """``det[u, u_1, u_2, u_3]`` for the centre and the three far corners."""
    return det(Matrix([c.vectors[w] for w in ("Q000", "Q110", "Q011", "Q101")]))


def koenigs_check(c: Configuration, conductances: Sequence | None = None) -> bool:
    """Coplanarity of ``u, u_1, u_2, u_3``.

    With ``conductances`` also checks the summed relation
    ``(1/c_1 + 1/c_2 + 1/c_3) u - u_1/c_1 - u_2/c_2 - u_3/c_3 = 0``.
    """
    if koenigs_determinant(c) != 0:
        return False
    if conductances is not None:
        c1, c2, c3 = (Q(x) for x in conductances)
        v = c.vectors
        s = lincomb([(1 / c1 + 1 / c2 + 1 / c3, v["Q000"]), (-1 / c1, v["Q110"]),
                     (-1 / c2, v["Q011"]), (-1 / c3, v["Q101"])], c.k)
        if any(s):
            return False
    return True


def random_conductances(seed=None) -> tuple:
    r = rng(seed)
    return tuple(Fraction(r.randint(1, 30), r.randint(1, 30)) for _ in range(3))


# ---------------------------------------------------------------- Ising networks

# hexagon face -> c1 c2 c3; lozenge faces -> s_i^2 / c_i^2
_ISING_QUADS = {1: ("fx000", "fx001"), 2: ("fy000", "fy100"), 3: ("fz000", "fz010")}
ISING_LABELS = {"G": "fx000", "H": "fy000", "K": "fz000", "A": "fx010", "B": "fy100",
                "C": "fy001", "D": "fz010", "E": "fz100", "F": "fx001"}


def random_pythagorean(r) -> tuple:
    """``(s, c)`` with ``s^2 + c^2 = 1`` and ``0 < s, c < 1``."""
    while True:
        q = r.randint(2, 40)
        p = r.randint(1, q - 1)
        t = Fraction(p, q)
        s, c = 2 * t / (1 + t * t), (1 - t * t) / (1 + t * t)
        if s > 0 and c > 0:
            return s, c


def weights_for_face_weights(g: SurfaceGraph, targets: dict, signs: dict) -> dict:
    """Edge weights (1 except on one edge per target face) realizing the target face weights.

    For each face an edge whose other side is not an internal face is
    rescaled, so the targets do not interfere.
    """
    w = {e: Fraction(1) for e in g.edges}
    used = set()
    for fid, target in targets.items():
        f = g.face(fid)
        base = Fraction((-1) ** (len(f.darts) // 2 - 1))
        for e, end in f.darts:
            base *= signs[e]
        pick = None
        for e, end in f.darts:
            other = g.face_of_dart.get((e, 1 - end))
            if e not in used and (other is None or other.kind != "internal"):
                pick = (e, end)
                break
        if pick is None:
            raise ValidationError("no-free-edge", "face has no edge shared only with non-internal faces",
                                  face=fid)
        e, end = pick
        used.add(e)
        ratio = Q(target) / base
        w[e] = ratio if end == 0 else 1 / ratio
    return w


def ising_configuration(pairs: Sequence) -> Configuration:
    """Circuit configuration on :func:`darboux_graph` with Ising face weights.

    ``pairs`` are ``(s_i, c_i)`` with ``s_i^2 + c_i^2 = 1``; the hexagonal
    face gets ``c_1 c_2 c_3`` and quadrilateral ``i`` gets ``s_i^2 / c_i^2``.
    """
    pairs = [(Q(s), Q(c)) for s, c in pairs]
    for s, c in pairs:
        if s * s + c * c != 1 or s <= 0 or c <= 0:
            raise ValidationError("bad-ising-weights", "need positive s, c with s^2 + c^2 = 1",
                                  s=fmt(s), c=fmt(c))
    g = darboux_graph()
    signs = kasteleyn_signs(g)
    hexagon = [f for f in g.internal_faces() if f.length == 6][0]
    targets = {hexagon.id: pairs[0][1] * pairs[1][1] * pairs[2][1]}
    for i, whites in _ISING_QUADS.items():
        f = [f for f in g.internal_faces()
             if f.length == 4 and {v for v in f.vertices if g.color(v) == WHITE} == set(whites)][0]
        s, c = pairs[i - 1]
        targets[f.id] = s * s / (c * c)
    return configuration_from_weights(g, weights_for_face_weights(g, targets, signs), signs)


def ising_points(c: Configuration) -> dict:
    """Labeled points ``A..K`` of an Ising configuration."""
    return {k: c.vectors[w] for k, w in ISING_LABELS.items()}


def conic_determinant(points: Sequence) -> Fraction:
    """6x6 determinant of the monomials ``x^2, xy, y^2, xz, yz, z^2``."""
    rows = []
    for p in points:
        x, y, z = homogeneous(p)
        rows.append([x * x, x * y, y * y, x * z, y * z, z * z])
    if len(rows) != 6:
        raise ValidationError("need-six-points", "a conic test takes six points", count=len(rows))
    return det(Matrix(rows))


def ising_conic_check(points: Sequence) -> bool:
    """True iff the six points lie on a common conic.

    >>> ising_conic_check([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (3, 4, 5), (4, 3, 5)])
    True
    """
    return conic_determinant(points) == 0


def ising_multiratio_identity(c: Configuration) -> bool:
    """``[G,B,H,D,K,F] = [G,E,K,C,H,A]``."""
    P = ising_points(c)
    m = lambda s: multi_ratio([P[x] for x in s])
    return m("GBHDKF") == m("GEKCHA")


# ---------------------------------------------------------------- export

def point_json(p) -> list:
    """Primitive integer representative as strings."""
    return [fmt(x) for x in _point(p).normalized()]


def trajectory_json(system: str, generations: Sequence) -> dict:
    """``{"system": ..., "generations": [...]}`` with each generation a list or a keyed map."""
    gens = []
    for gen in generations:
        if isinstance(gen, dict):
            gens.append({_key(k): point_json(v) for k, v in sorted(gen.items())})
        else:
            gens.append([point_json(p) for p in gen])
    return {"system": system, "generations": gens}


def _key(k) -> str:
    if isinstance(k, tuple) and len(k) == 2 and isinstance(k[1], tuple):
        return _fname(*k)
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def polygon_svg(trajectory: Sequence, size: int = 400) -> str:
    """SVG drawing of a list of polygons in the projective plane (affine chart z = 1)."""
    polys = [[tuple(float(x) for x in affine(p)) for p in gen] for gen in trajectory]
    xs = [p[0] for poly in polys for p in poly]
    ys = [p[1] for poly in polys for p in poly]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    scale = (size - 20) / max(x1 - x0, y1 - y0, 1e-9)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    for i, poly in enumerate(polys):
        pts = " ".join(f"{10 + (x - x0) * scale:.3f},{size - 10 - (y - y0) * scale:.3f}" for x, y in poly)
        out.append(f'  <polygon points="{pts}" fill="none" stroke="black" stroke-width="1" '
                   f'data-generation="{i}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
