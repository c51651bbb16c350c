"""Local transformations of configurations and of edge weights.

Urban renewal at a quadrilateral face and degree-2 vertex addition and
removal act on :class:`Configuration` objects and return new ones.  Each
move also reports how faces of the new graph correspond to faces of the
old one, which is what the face-weight mutation rule needs.

New vertex and edge ids are the first unused ``prefix + integer``, so a
replayed move script always produces the same labels.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .config_core import Configuration, face_cycle, face_of
from .errors import DegenerateError, ValidationError
from .exact_linalg import Q, is_zero, lincomb
from .surface_graph import BLACK, WHITE, SurfaceGraph, split_black, split_white


class MoveResult:
    """Outcome of a move: the new configuration, a face map and the new labels.

    ``face_map`` sends each face id of the new graph to the face id of the
    old graph it continues (or ``None``).
    """

    __slots__ = ("config", "face_map", "new")

    def __init__(self, config, face_map, new):
        self.config, self.face_map, self.new = config, face_map, new

    def __iter__(self):
        return iter((self.config, self.face_map, self.new))


def _face_map(old: SurfaceGraph, new: SurfaceGraph, special: dict | None = None) -> dict:
    out = {}
    special = special or {}
    for f in new.faces:
        if f.id in special:
            out[f.id] = special[f.id]
            continue
        hit = None
        for d in f.darts:
            if d in old.face_of_dart:
                hit = old.face_of_dart[d].id
                break
        out[f.id] = hit
    return out


# ---------------------------------------------------------------- urban renewal

def quad_data(c: Configuration, face):
    """``(w1, b1, w2, b2)`` clockwise and the coefficients ``(a~, b~, c~, d~)``.

    ``a~ = K_{b1 w1}``, ``d~ = K_{b1 w2}``, ``b~ = K_{b2 w1}``, ``c~ = K_{b2 w2}``
    read off the face edges.
    """
    f = face_of(c, face)
    if f.kind != "internal" or len(f.darts) != 4:
        raise ValidationError("non-quadrilateral-face", "urban renewal needs an internal quadrilateral",
                              face=f.id)
    cyc = face_cycle(c, f)
    (w1, e11), (b1, e12), (w2, e22), (b2, e21) = cyc
    if len({w1, w2}) != 2 or len({b1, b2}) != 2:
        raise ValidationError("non-quadrilateral-face", "face vertices must be distinct", face=f.id)
    coef = c.coefficient
    return (w1, b1, w2, b2), (e11, e12, e22, e21), (coef(e11), coef(e21), coef(e22), coef(e12))


def urban_renewal_move(c: Configuration, face) -> MoveResult:
    """Urban renewal with the face correspondence and new labels.

    With clockwise face vertices ``w1, b1, w2, b2`` the new whites carry
    ``u1 = a~ v1 + d~ v2`` (next to ``b1``) and ``u2 = b~ v1 + c~ v2`` (next
    to ``b2``); the new blacks ``s1`` (next to ``w1``) and ``s2`` carry the
    relations solving for ``v1`` and ``v2``.
    """
    g = c.graph
    f = face_of(c, face)
    (w1, b1, w2, b2), (e11, e12, e22, e21), (ta, tb, tc, td) = quad_data(c, f)
    delta = ta * tc - tb * td
    if delta == 0:
        raise DegenerateError("singular-coefficient-matrix", "face coefficient matrix is singular",
                              face=f.id)
    v1, v2 = c.vectors[w1], c.vectors[w2]
    u1 = lincomb([(ta, v1), (td, v2)], c.k)
    u2 = lincomb([(tb, v1), (tc, v2)], c.k)
    taken = set()

    def fresh(prefix):
        x = g.fresh_id(prefix, taken)
        taken.add(x)
        return x

    U1, U2, S1, S2 = fresh("uw"), fresh("uw"), fresh("ub"), fresh("ub")
    sp_b1, sp_b2, sp_w1, sp_w2 = fresh("ue"), fresh("ue"), fresh("ue"), fresh("ue")
    i_s1u1, i_s1u2, i_s2u1, i_s2u2 = fresh("ue"), fresh("ue"), fresh("ue"), fresh("ue")
    p = g.parts()
    face_edges = (e11, e12, e22, e21)
    for e in face_edges:
        del p["edges"][e]
    p["vertices"].update({U1: (WHITE, False), U2: (WHITE, False), S1: (BLACK, False), S2: (BLACK, False)})
    p["edges"].update({sp_b1: (b1, U1), sp_b2: (b2, U2), sp_w1: (S1, w1), sp_w2: (S2, w2),
                       i_s1u1: (S1, U1), i_s1u2: (S1, U2), i_s2u1: (S2, U1), i_s2u2: (S2, U2)})
    p["rotation"][b1] = _replace_pair(g.rotation[b1], {e11, e12}, sp_b1, g.is_boundary(b1))
    p["rotation"][b2] = _replace_pair(g.rotation[b2], {e21, e22}, sp_b2, g.is_boundary(b2))
    p["rotation"][w1] = _replace_pair(g.rotation[w1], {e11, e21}, sp_w1, g.is_boundary(w1))
    p["rotation"][w2] = _replace_pair(g.rotation[w2], {e12, e22}, sp_w2, g.is_boundary(w2))
    p["rotation"][S1] = [sp_w1, i_s1u1, i_s1u2]
    p["rotation"][U1] = [sp_b1, i_s2u1, i_s1u1]
    p["rotation"][S2] = [sp_w2, i_s2u2, i_s2u1]
    p["rotation"][U2] = [sp_b2, i_s1u2, i_s2u2]
    ng = SurfaceGraph.from_parts(p)

    vectors = dict(c.vectors)
    vectors[U1], vectors[U2] = u1, u2
    relations = {b: dict(r) for b, r in c.relations.items()}
    for b, pair, sp in ((b1, (e11, e12), sp_b1), (b2, (e21, e22), sp_b2)):
        for e in pair:
            del relations[b][e]
        relations[b][sp] = Fraction(1)
    relations[S1] = {sp_w1: Fraction(1), i_s1u1: -tc / delta, i_s1u2: td / delta}
    relations[S2] = {sp_w2: Fraction(1), i_s2u1: tb / delta, i_s2u2: -ta / delta}
    nc = Configuration(ng, c.k, vectors, relations, c.mode)

    inner = ng.face_of_dart[(i_s1u1, 1)]
    fmap = _face_map(g, ng, {inner.id: f.id})
    labels = {"u1": U1, "u2": U2, "s1": S1, "s2": S2, "face": inner.id,
              "spokes": {"b1": sp_b1, "b2": sp_b2, "w1": sp_w1, "w2": sp_w2},
              "inner": {"s1u1": i_s1u1, "s1u2": i_s1u2, "s2u1": i_s2u1, "s2u2": i_s2u2},
              "old": {"w1": w1, "b1": b1, "w2": w2, "b2": b2,
                      "b1w1": e11, "b1w2": e12, "b2w2": e22, "b2w1": e21}}
    return MoveResult(nc, fmap, labels)


def urban_renewal(c: Configuration, face) -> Configuration:
    """Urban renewal (square move) at an internal quadrilateral face.

    >>> from vecrel.catalog import fig9
    >>> from vecrel.config_core import System, chart_from_coordinates, face_weight
    >>> g = fig9()
    >>> c = chart_from_coordinates(g, System(g, ["e_b1_2", "e_b2_4"]),
    ...                            {"e_b1_3": 1, "e_b1_4": 2, "e_b2_1": 3, "e_b2_2": 5})
    >>> f = g.internal_faces()[0]
    >>> c2 = urban_renewal(c, f)
    >>> face_weight(c2, c2.graph.internal_faces()[0]) == 1 / face_weight(c, f)
    True
    """
    return urban_renewal_move(c, face).config


def _replace_pair(rot: Sequence[str], pair: set, new: str, linear: bool) -> list:
    """Replace two cyclically adjacent edges of a rotation by one edge."""
    rot = list(rot)
    n = len(rot)
    if n == 2 and set(rot) == pair:
        return [new]
    for i in range(n):
        if rot[i] in pair and rot[(i + 1) % n] in pair:
            if linear and i == n - 1:
                break
            if i == n - 1:
                return [new] + rot[1:n - 1]
            return rot[:i] + [new] + rot[i + 2:]
    raise ValidationError("bad-rotation", "face edges are not adjacent in the rotation")


# ---------------------------------------------------------------- degree-2 moves

def add_degree2_black_move(c: Configuration, w: str, block: Sequence[str]) -> MoveResult:
    """Split white ``w``: ``block`` moves to a new white joined through a new degree-2 black.

    Both whites carry the old vector and the new black has relation
    ``1 v_w - 1 v_w2``.
    """
    g = c.graph
    try:
        ng, w2, b, e_w, e_w2 = split_white(g, w, block)
    except ValidationError as exc:
        raise ValidationError("invalid-partition", exc.message, **exc.context)
    vectors = dict(c.vectors)
    vectors[w2] = c.vectors[w]
    relations = {x: dict(r) for x, r in c.relations.items()}
    relations[b] = {e_w: Fraction(1), e_w2: Fraction(-1)}
    nc = Configuration(ng, c.k, vectors, relations, c.mode)
    return MoveResult(nc, _face_map(g, ng), {"white": w2, "black": b, "edges": (e_w, e_w2)})


def add_degree2_black(c: Configuration, w: str, block: Sequence[str]) -> Configuration:
    return add_degree2_black_move(c, w, block).config


def add_degree2_white_move(c: Configuration, b: str, block: Sequence[str]) -> MoveResult:
    """Split black ``b``: ``block`` moves to a new black joined through a new degree-2 white.

    The new white carries ``w = R_b`` restricted to ``block``; the new black
    gets ``R_b|block - 1 w`` and ``b`` keeps ``R_b|rest + 1 w``.
    """
    g = c.graph
    rel = c.relations[b]
    wvec = lincomb(((rel[e], c.vectors[g.edges[e][1]]) for e in block), c.k)
    if is_zero(wvec):
        raise DegenerateError("zero-new-vector", "partial relation evaluates to zero", vertex=b)
    try:
        ng, b2, w, e_b, e_b2 = split_black(g, b, block)
    except ValidationError as exc:
        raise ValidationError("invalid-partition", exc.message, **exc.context)
    vectors = dict(c.vectors)
    vectors[w] = wvec
    relations = {x: dict(r) for x, r in c.relations.items()}
    relations[b] = {e: x for e, x in rel.items() if e not in block}
    relations[b][e_b] = Fraction(1)
    relations[b2] = {e: rel[e] for e in block}
    relations[b2][e_b2] = Fraction(-1)
    nc = Configuration(ng, c.k, vectors, relations, c.mode)
    return MoveResult(nc, _face_map(g, ng), {"white": w, "black": b2, "edges": (e_b, e_b2)})


def add_degree2_white(c: Configuration, b: str, block: Sequence[str]) -> Configuration:
    return add_degree2_white_move(c, b, block).config


def remove_degree2_black_move(c: Configuration, b: str, keep: str | None = None) -> MoveResult:
    """Contract a degree-2 black vertex, merging its two white neighbors.

    With relation ``alpha v + beta w`` the discarded white is first gauged by
    ``-alpha/beta`` so its vector equals the kept one.  A boundary neighbor
    is always the one kept.
    """
    g = c.graph
    if g.color(b) != BLACK or g.degree(b) != 2:
        raise ValidationError("not-degree-2", f"{b} is not a degree-2 black vertex", vertex=b)
    e1, e2 = g.rotation[b]
    v, w = g.edges[e1][1], g.edges[e2][1]
    if v == w:
        raise ValidationError("parallel-edges", "degree-2 vertex with a doubled edge", vertex=b)
    if keep is None:
        keep = w if g.is_boundary(w) and not g.is_boundary(v) else v
    if keep == w:
        v, w, e1, e2 = w, v, e2, e1
    if g.is_boundary(w):
        raise ValidationError("boundary-vertex", "cannot merge away a boundary vertex", vertex=w)
    alpha, beta = c.relations[b][e1], c.relations[b][e2]
    if alpha == 0 or beta == 0:
        raise DegenerateError("zero-coefficient", "degree-2 relation has a zero coefficient", vertex=b)
    lam = -alpha / beta
    p = g.parts()
    for e in (e1, e2):
        del p["edges"][e]
    del p["vertices"][b], p["rotation"][b]
    del p["vertices"][w], p["rotation"][w]
    moved = _after(g.rotation[w], e2)
    for e in moved:
        p["edges"][e] = (p["edges"][e][0], v)
    p["rotation"][v] = _splice(g.rotation[v], e1, moved)
    ng = SurfaceGraph.from_parts(p)
    vectors = {x: y for x, y in c.vectors.items() if x != w}
    relations = {x: dict(r) for x, r in c.relations.items() if x != b}
    for e in moved:
        bb = g.edges[e][0]
        relations[bb][e] = relations[bb][e] * lam
    nc = Configuration(ng, c.k, vectors, relations, c.mode)
    return MoveResult(nc, _face_map(g, ng), {"kept": v, "removed": (b, w)})


def remove_degree2_black(c: Configuration, b: str, keep: str | None = None) -> Configuration:
    return remove_degree2_black_move(c, b, keep).config


def remove_degree2_white_move(c: Configuration, w: str, keep: str | None = None) -> MoveResult:
    """Contract an internal degree-2 white vertex, merging its black neighbors.

    With coefficients ``alpha`` (at ``b1``) and ``beta`` (at ``b2``) on ``w``
    the merged relation is ``R_1/alpha - R_2/beta``.
    """
    g = c.graph
    if g.color(w) != WHITE or g.degree(w) != 2 or g.is_boundary(w):
        raise ValidationError("not-degree-2", f"{w} is not an internal degree-2 white vertex", vertex=w)
    e1, e2 = g.rotation[w]
    b1, b2 = g.edges[e1][0], g.edges[e2][0]
    if b1 == b2:
        raise ValidationError("parallel-edges", "degree-2 vertex with a doubled edge", vertex=w)
    if keep == b2:
        b1, b2, e1, e2 = b2, b1, e2, e1
    alpha, beta = c.relations[b1][e1], c.relations[b2][e2]
    if alpha == 0 or beta == 0:
        raise DegenerateError("zero-coefficient", "degree-2 vertex has a zero coefficient", vertex=w)
    p = g.parts()
    for e in (e1, e2):
        del p["edges"][e]
    del p["vertices"][w], p["rotation"][w]
    del p["vertices"][b2], p["rotation"][b2]
    moved = _after(g.rotation[b2], e2)
    for e in moved:
        p["edges"][e] = (b1, p["edges"][e][1])
    p["rotation"][b1] = _splice(g.rotation[b1], e1, moved)
    ng = SurfaceGraph.from_parts(p)
    vectors = {x: y for x, y in c.vectors.items() if x != w}
    relations = {x: dict(r) for x, r in c.relations.items() if x not in (b1, b2)}
    merged = {e: x / alpha for e, x in c.relations[b1].items() if e != e1}
    for e in moved:
        merged[e] = -c.relations[b2][e] / beta
    relations[b1] = merged
    nc = Configuration(ng, c.k, vectors, relations, c.mode)
    return MoveResult(nc, _face_map(g, ng), {"kept": b1, "removed": (w, b2)})


def remove_degree2_white(c: Configuration, w: str, keep: str | None = None) -> Configuration:
    return remove_degree2_white_move(c, w, keep).config


def _after(rot: Sequence[str], e: str) -> list:
    i = list(rot).index(e)
    return list(rot[i + 1:]) + list(rot[:i])


def _splice(rot: Sequence[str], e: str, seq: list) -> list:
    i = list(rot).index(e)
    return list(rot[:i]) + seq + list(rot[i + 1:])


# ---------------------------------------------------------------- weights and face weights

def urban_renewal_weights(a, b, c, d) -> tuple:
    """Square-move weight update ``(a, b, c, d) -> (a, b, c, d) / (ac + bd)``.

    >>> urban_renewal_weights(1, 2, 3, 4)
    (Fraction(1, 11), Fraction(2, 11), Fraction(3, 11), Fraction(4, 11))
    """
    a, b, c, d = (Q(x) for x in (a, b, c, d))
    den = a * c + b * d
    if den == 0:
        raise DegenerateError("vanishing-denominator", "ac + bd = 0")
    return (a / den, b / den, c / den, d / den)


def urban_renewal_graph_weights(old: SurfaceGraph, weights: dict, labels: dict) -> dict:
    """Apply the weight update to a whole weighting, using the labels of an urban renewal.

    ``a, b, c, d`` are the weights on ``b1w1, b2w1, b2w2, b1w2``; the new
    inner edges ``s2u2, s2u1, s1u1, s1u2`` receive ``a', b', c', d'``, the
    four spokes weight 1, and all other edges keep their weights.
    """
    o = labels["old"]
    a, b, c, d = (weights[o[k]] for k in ("b1w1", "b2w1", "b2w2", "b1w2"))
    a2, b2, c2, d2 = urban_renewal_weights(a, b, c, d)
    out = {e: Q(x) for e, x in weights.items() if e not in {o["b1w1"], o["b2w1"], o["b2w2"], o["b1w2"]}}
    inner = labels["inner"]
    out[inner["s2u2"]] = a2
    out[inner["s2u1"]] = b2
    out[inner["s1u1"]] = c2
    out[inner["s1u2"]] = d2
    for e in labels["spokes"].values():
        out[e] = Fraction(1)
    return out


def y_mutation(g: SurfaceGraph, weights: dict, face) -> dict:
    """Face-weight mutation at a quadrilateral face.

    ``Y_F`` becomes ``1/Y_F``; a face sharing edges with ``F`` is multiplied
    by ``Y_F^[m]_+ (1 + Y_F)^(-m)`` where ``m`` counts shared edges running
    white to black in the clockwise order around ``F`` minus those running
    black to white.  Keys are face ids of ``g``; faces without weights are
    skipped.
    """
    f = face_of(g, face)
    if len(f.darts) != 4:
        raise ValidationError("non-quadrilateral-face", "mutation needs a quadrilateral face", face=f.id)
    y = Q(weights[f.id])
    if y == 0 or y == -1:
        raise DegenerateError("vanishing-denominator", "mutation needs Y_F not in {0, -1}", face=f.id)
    out = {k: Q(x) for k, x in weights.items()}
    out[f.id] = 1 / y
    arrows = {}
    for e, end in f.darts:
        other = g.face_of_dart.get((e, 1 - end))
        if other is None or other.id == f.id or other.id not in weights:
            continue
        # counterclockwise dart leaving black = clockwise edge from white to black
        arrows[other.id] = arrows.get(other.id, 0) + (1 if end == 0 else -1)
    for fid, m in arrows.items():
        if m == 0:
            continue
        factor = (y ** m if m > 0 else Fraction(1)) / (1 + y) ** m
        out[fid] = out[fid] * factor
    return out
