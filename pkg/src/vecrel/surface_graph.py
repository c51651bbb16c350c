"""Bipartite multigraphs embedded in the disk or the torus.

An embedding is a rotation system: for each vertex, the clockwise cyclic
list of incident edge ids.  Every edge joins one black and one white vertex,
so a half-edge is determined by an edge id together with an end, and a
*dart* ``(edge, end)`` means "leave the vertex at ``end`` along ``edge``".
End ``0`` is the black end and end ``1`` the white end.

For disk graphs the boundary white vertices ``1..n`` are listed clockwise.
Face tracing closes the disk with pseudo arcs ``j -> j+1`` along the
boundary circle; faces are the orbits of "arrive, then take the next
half-edge clockwise", which keeps the face on the left.

>>> g = square_disk()
>>> sorted(f.kind for f in g.faces)
['infinite', 'internal']
"""

from __future__ import annotations

import json
import math
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ValidationError

BLACK, WHITE = "black", "white"
DISK, TORUS = "disk", "torus"
ARC = "@arc"  # prefix of pseudo boundary arcs; user ids may not start with "@"


class Vertex:
    __slots__ = ("id", "color", "boundary")

    def __init__(self, vid: str, color: str, boundary: bool = False):
        self.id, self.color, self.boundary = vid, color, boundary

    def __repr__(self):
        return f"Vertex({self.id!r}, {self.color}{', boundary' if self.boundary else ''})"


class Face:
    """A face as its counterclockwise dart cycle (face on the left)."""

    __slots__ = ("id", "darts", "kind", "_graph")

    def __init__(self, fid: str, darts: tuple, kind: str, graph: "SurfaceGraph"):
        self.id, self.darts, self.kind, self._graph = fid, darts, kind, graph

    @property
    def real_darts(self) -> tuple:
        return tuple(d for d in self.darts if not is_arc(d[0]))

    @property
    def vertices(self) -> list[str]:
        """Vertices in counterclockwise order (with repetition for cut vertices)."""
        return [self._graph.dart_origin(d) for d in self.darts]

    def clockwise_vertices(self) -> list[str]:
        vs = self.vertices
        return [vs[0]] + vs[:0:-1]

    @property
    def edges(self) -> list[str]:
        return [d[0] for d in self.real_darts]

    @property
    def length(self) -> int:
        return len(self.darts)

    def is_internal(self) -> bool:
        return self.kind == "internal"

    def __repr__(self):
        return f"Face({self.id}, {self.kind}, {self.vertices})"


def is_arc(eid) -> bool:
    return isinstance(eid, str) and eid.startswith(ARC)


def arc_id(j: int) -> str:
    return f"{ARC}{j}"


class SurfaceGraph:
    """Immutable embedded bipartite multigraph.

    ``vertices`` maps id -> (color, boundary flag); ``edges`` maps id ->
    (black id, white id); ``rotation`` maps vertex id -> clockwise list of
    incident edge ids.  For disk graphs ``boundary`` lists the boundary
    vertex ids clockwise; for boundary vertices the rotation is linear,
    starting just clockwise of the outside of the disk.  ``outer`` names a
    dart on the infinite face and is only consulted when ``n = 0``.
    """

    def __init__(self, vertices: dict, edges: dict, rotation: dict, surface: str = DISK,
                 boundary: Sequence[str] = (), outer: tuple | None = None):
        self.vertices = {v: Vertex(v, *vertices[v]) if not isinstance(vertices[v], Vertex)
                         else vertices[v] for v in vertices}
        self.edges = {e: tuple(edges[e]) for e in edges}
        self.surface = surface
        self.boundary = tuple(boundary)
        bset = set(self.boundary)
        self.rotation = {v: _canonical_rotation(tuple(rotation.get(v, ())), v in bset) for v in self.vertices}
        self.outer = tuple(outer) if outer is not None else None
        self._validate()
        self.faces  # trace and check the Euler characteristic eagerly

    # ------------------------------------------------------------ validation
    def _validate(self):
        if self.surface not in (DISK, TORUS):
            raise ValidationError("bad-surface", f"unknown surface {self.surface!r}")
        for v in self.vertices.values():
            if v.color not in (BLACK, WHITE):
                raise ValidationError("bad-color", f"vertex {v.id} has color {v.color!r}", vertex=v.id)
            if str(v.id).startswith("@"):
                raise ValidationError("reserved-id", "ids starting with '@' are reserved", vertex=v.id)
        for e, (b, w) in self.edges.items():
            if str(e).startswith("@"):
                raise ValidationError("reserved-id", "ids starting with '@' are reserved", edge=e)
            if b not in self.vertices or w not in self.vertices:
                raise ValidationError("unknown-vertex", f"edge {e} has an unknown endpoint", edge=e)
            if self.vertices[b].color != BLACK or self.vertices[w].color != WHITE:
                raise ValidationError("not-bipartite", f"edge {e} must join black to white", edge=e)
        seen = {}
        for v, rot in self.rotation.items():
            if len(set(rot)) != len(rot):
                raise ValidationError("bad-rotation", f"edge repeated in rotation at {v}", vertex=v)
            for e in rot:
                if e not in self.edges or v not in self.edges[e]:
                    raise ValidationError("bad-rotation", f"edge {e} is not incident to {v}", vertex=v, edge=e)
                seen[(e, v)] = True
        for e, (b, w) in self.edges.items():
            if (e, b) not in seen or (e, w) not in seen:
                raise ValidationError("bad-rotation", f"edge {e} missing from a rotation", edge=e)
        if self.surface == TORUS:
            if self.boundary or any(v.boundary for v in self.vertices.values()):
                raise ValidationError("bad-boundary", "torus graphs have no boundary")
        else:
            flagged = {v.id for v in self.vertices.values() if v.boundary}
            if set(self.boundary) != flagged or len(self.boundary) != len(flagged):
                raise ValidationError("bad-boundary", "boundary list must enumerate the boundary vertices once",
                                      boundary=list(self.boundary))
            for v in self.boundary:
                if self.vertices[v].color != WHITE:
                    raise ValidationError("bad-boundary", f"boundary vertex {v} must be white", vertex=v)

    # ------------------------------------------------------------ basics
    @property
    def n(self) -> int:
        return len(self.boundary)

    @cached_property
    def boundary_index(self) -> dict:
        return {v: j + 1 for j, v in enumerate(self.boundary)}

    def is_boundary(self, v) -> bool:
        return self.vertices[v].boundary

    def color(self, v) -> str:
        return self.vertices[v].color

    @cached_property
    def blacks(self) -> list:
        return sorted(v for v, x in self.vertices.items() if x.color == BLACK)

    @cached_property
    def internal_whites(self) -> list:
        return sorted(v for v, x in self.vertices.items() if x.color == WHITE and not x.boundary)

    @cached_property
    def whites(self) -> list:
        """Boundary vertices in order ``1..n``, then internal whites sorted by id."""
        return list(self.boundary) + self.internal_whites

    @property
    def M(self) -> int:
        return len(self.blacks)

    @property
    def N(self) -> int:
        return len(self.whites)

    @property
    def k(self) -> int:
        return self.N - self.M

    def degree(self, v) -> int:
        return len(self.rotation[v])

    def other_end(self, e, v):
        b, w = self.edges[e]
        return w if v == b else b

    def neighbors(self, v) -> list:
        """Neighbors in clockwise order, repeated for parallel edges."""
        return [self.other_end(e, v) for e in self.rotation[v]]

    def edges_between(self, b, w) -> list:
        return [e for e in self.rotation[b] if self.edges[e][1] == w]

    # ------------------------------------------------------------ darts
    def dart_origin(self, d) -> str:
        e, end = d
        if is_arc(e):
            j = int(e[len(ARC):])
            return self.boundary[(j - 1 + end) % self.n]
        return self.edges[e][end]

    @staticmethod
    def twin(d) -> tuple:
        return (d[0], 1 - d[1])

    @cached_property
    def _full_rotation(self) -> dict:
        """Rotation by darts, including pseudo arcs at boundary vertices."""
        rot = {}
        for v, edges in self.rotation.items():
            end = 0 if self.vertices[v].color == BLACK else 1
            rot[v] = [(e, end) for e in edges]
        if self.surface == DISK and self.n:
            for j, v in enumerate(self.boundary, start=1):
                prev = (j - 2) % self.n + 1
                rot[v] = [(arc_id(j), 0)] + rot[v] + [(arc_id(prev), 1)]
        return rot

    @cached_property
    def _next_cw(self) -> dict:
        nxt = {}
        for v, darts in self._full_rotation.items():
            for i, d in enumerate(darts):
                nxt[d] = darts[(i + 1) % len(darts)]
        return nxt

    def _face_successor(self, d):
        return self._next_cw[self.twin(d)]

    def all_darts(self) -> list:
        return [d for darts in self._full_rotation.values() for d in darts]

    # ------------------------------------------------------------ faces
    @cached_property
    def _orbits(self) -> list:
        orbits, seen = [], set()
        for d in sorted(self.all_darts(), key=_dart_key):
            if d in seen:
                continue
            orbit = []
            x = d
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = self._face_successor(x)
            if x != d:
                raise ValidationError("bad-rotation", "face tracing did not close up")
            orbits.append(tuple(orbit))
        return orbits

    @cached_property
    def faces(self) -> list:
        """Faces of the embedding (the region outside the disk is dropped)."""
        orbits = list(self._orbits)
        outside = None
        if self.surface == DISK:
            if self.n:
                outside = next(o for o in orbits if all(is_arc(d[0]) and d[1] == 0 for d in o))
            elif self.outer is not None:
                outside_dart = (self.outer[0], self.outer[1])
                outside = next((o for o in orbits if outside_dart in o), None)
                if outside is None:
                    raise ValidationError("bad-outer", "outer dart not found", outer=list(self.outer))
            elif orbits:
                outside = max(orbits, key=lambda o: (len(o), [_dart_key(x) for x in o]))
        self._check_euler(len(orbits))
        faces = []
        inner = [o for o in orbits if o is not outside]
        if self.surface == DISK and self.n == 0 and outside is not None:
            # the outer orbit is the infinite face itself when there is no boundary
            inner.append(outside)
        for i, o in enumerate(inner):
            darts = _canonical_cycle(o)
            if self.surface == TORUS:
                kind = "internal"
            elif self.n == 0:
                kind = "infinite" if o is outside else "internal"
            elif any(is_arc(d[0]) for d in o):
                kind = "infinite" if (arc_id(self.n), 1) in o else "external"
            else:
                kind = "internal"
            faces.append(Face("", darts, kind, self))
        faces.sort(key=lambda f: [_dart_key(d) for d in f.darts])
        for i, f in enumerate(faces):
            f.id = f"F{i}"
        return faces

    def _check_euler(self, nfaces: int):
        V = len(self.vertices)
        E = len(self.edges) + (self.n if self.surface == DISK else 0)
        comps = self._components()
        if self.surface == TORUS:
            if comps != 1 or V - E + nfaces != 0:
                raise ValidationError("euler-mismatch", "rotation system is not a connected torus map",
                                      V=V, E=E, F=nfaces)
        else:
            if comps > 1:
                raise ValidationError("disconnected", "disk graph has a component away from the boundary")
            if V and V - E + nfaces != 2:
                raise ValidationError("euler-mismatch", "rotation system is not planar",
                                      V=V, E=E, F=nfaces)

    def _components(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for b, w in self.edges.values():
            parent[find(b)] = find(w)
        if self.surface == DISK:
            for a, c in zip(self.boundary, self.boundary[1:]):
                parent[find(a)] = find(c)
        return len({find(v) for v in self.vertices})

    @cached_property
    def face_of_dart(self) -> dict:
        return {d: f for f in self.faces for d in f.darts}

    def face(self, fid) -> Face:
        return next(f for f in self.faces if f.id == fid)

    def internal_faces(self) -> list:
        return [f for f in self.faces if f.kind == "internal"]

    def face_by_vertices(self, vs: Iterable[str]) -> Face:
        """The unique face whose vertex set is ``vs``."""
        target = set(vs)
        hits = [f for f in self.faces if set(f.vertices) == target]
        if len(hits) != 1:
            raise ValidationError("face-not-found", "no unique face with these vertices", vertices=sorted(target))
        return hits[0]

    def faces_at(self, v) -> list:
        """Faces incident to ``v`` (each once, clockwise from the first dart)."""
        out = []
        for d in self._full_rotation[v]:
            f = self.face_of_dart.get(d)
            if f is not None and f not in out:
                out.append(f)
        return out

    def boundary_face(self, j: int) -> Face:
        """External face between boundary vertices ``j`` and ``j+1``."""
        return self.face_of_dart[(arc_id(j), 1)]

    def rotation_from_faces(self) -> dict:
        """Rebuild the cyclic rotation from the traced face cycles.

        Each face step ``d -> d'`` says that ``d'`` follows ``twin(d)``
        clockwise; the result is returned as clockwise lists of real edges,
        starting from the same edge as the stored rotation.
        """
        nxt = {}
        for orbit in self._orbits:
            for i, d in enumerate(orbit):
                nxt[self.twin(d)] = orbit[(i + 1) % len(orbit)]
        out = {}
        for v, darts in self._full_rotation.items():
            if not darts:
                out[v] = ()
                continue
            cyc = [darts[0]]
            while True:
                x = nxt[cyc[-1]]
                if x == darts[0]:
                    break
                cyc.append(x)
            out[v] = tuple(d[0] for d in cyc if not is_arc(d[0]))
        return out

    # ------------------------------------------------------------ zigzags
    def _zig_next(self, e, v):
        """Directed edge following arrival at ``v`` along ``e``."""
        rot = self.rotation[v]
        i = rot.index(e)
        step = 1 if self.color(v) == WHITE else -1
        f = rot[(i + step) % len(rot)]
        return f, self.other_end(f, v)

    @cached_property
    def zigzags(self) -> list:
        """Zigzag paths: one per boundary vertex (in order), then internal cycles.

        Each zigzag is a :class:`Zigzag` whose ``steps`` are directed edges
        ``(edge, from_vertex, to_vertex)``.
        """
        used = set()
        out = []
        for j, v in enumerate(self.boundary, start=1):
            steps = []
            if self.degree(v):
                e = self.rotation[v][0] if self.degree(v) == 1 else None
                if e is None:
                    raise ValidationError("boundary-degree", "zigzags need boundary vertices of degree at most 1",
                                          vertex=v)
                x, y = v, self.other_end(e, v)
                while True:
                    steps.append((e, x, y))
                    used.add((e, x))
                    if self.is_boundary(y):
                        break
                    e, nxt = self._zig_next(e, y)
                    x, y = y, nxt
            end = self.boundary_index[steps[-1][2]] if steps else j
            out.append(Zigzag(j, end, tuple(steps)))
        for e in sorted(self.edges):
            for x in self.edges[e]:
                if (e, x) in used:
                    continue
                steps = []
                cur_e, cx = e, x
                while (cur_e, cx) not in used:
                    cy = self.other_end(cur_e, cx)
                    used.add((cur_e, cx))
                    steps.append((cur_e, cx, cy))
                    cur_e, ny = self._zig_next(cur_e, cy)
                    cx = cy
                out.append(Zigzag(None, None, tuple(steps)))
        return out

    def trip_permutation(self) -> dict:
        """``f(i)`` = end of zigzag ``i``."""
        return {z.start: z.end for z in self.zigzags if z.start is not None}

    def is_reduced(self) -> bool:
        zs = self.zigzags
        if any(z.start is None for z in zs):
            return False
        for z in zs:
            if len(z.steps) > 2 and z.self_intersects():
                return False
        for a in range(len(zs)):
            for b in range(a + 1, len(zs)):
                if _parallel_double_crossing(zs[a], zs[b]):
                    return False
        return True

    # ------------------------------------------------------------ strand labels
    @cached_property
    def strand_labels(self) -> dict:
        """``{"faces": {fid: S_F}, "vertices": {vid: S_v}}`` of left-of strand sets."""
        if self.surface != DISK:
            raise ValidationError("not-disk", "strand labels need a disk graph")
        if not self.is_reduced():
            raise ValidationError("not-reduced", "strand labels need a reduced graph")
        S_F = {f.id: set() for f in self.faces}
        S_V = {v: set() for v in self.vertices}
        for z in self.zigzags:
            j = z.start
            if not z.steps:
                left_faces = {f.id for f in self.faces}
                left_vertices = set(self.vertices)
            elif len(z.steps) == 2 and z.steps[0][0] == z.steps[1][0]:
                left_faces = set()
                left_vertices = {z.steps[0][2]}
            else:
                left_faces = self._left_faces(z)
                on = {x for s in z.steps for x in s[1:]}
                left_vertices = {v for v in on if self.color(v) == BLACK}
                for v in self.vertices:
                    if v in on:
                        continue
                    fs = self.faces_at(v)
                    if fs and fs[0].id in left_faces:
                        left_vertices.add(v)
            for f in left_faces:
                S_F[f].add(j)
            for v in left_vertices:
                S_V[v].add(j)
        return {"faces": {f: frozenset(s) for f, s in S_F.items()},
                "vertices": {v: frozenset(s) for v, s in S_V.items()}}

    def _left_faces(self, z: "Zigzag") -> set:
        zedges = {s[0] for s in z.steps}
        end_of = {}
        for e, (b, w) in self.edges.items():
            end_of[e] = (b, w)
        left = set()
        stack = []
        for e, x, y in z.steps:
            end = 0 if self.color(x) == BLACK else 1
            f = self.face_of_dart[(e, end)]
            if f.id not in left:
                left.add(f.id)
                stack.append(f)
        while stack:
            f = stack.pop()
            for d in f.real_darts:
                if d[0] in zedges:
                    continue
                g = self.face_of_dart.get(self.twin(d))
                if g is not None and g.id not in left:
                    left.add(g.id)
                    stack.append(g)
        return left

    # ------------------------------------------------------------ serialization
    def to_json(self) -> dict:
        data = {
            "surface": self.surface,
            "vertices": [{"id": v, "color": x.color, "boundary": x.boundary}
                         for v, x in sorted(self.vertices.items())],
            "edges": [{"id": e, "black": b, "white": w} for e, (b, w) in sorted(self.edges.items())],
            "rotation": {v: list(r) for v, r in sorted(self.rotation.items())},
            "boundary": list(self.boundary),
        }
        if self.outer is not None:
            data["outer"] = list(self.outer)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceGraph":
        try:
            vertices = {x["id"]: (x["color"], bool(x.get("boundary", False))) for x in data["vertices"]}
            edges = {x["id"]: (x["black"], x["white"]) for x in data["edges"]}
            return cls(vertices, edges, data["rotation"], data.get("surface", DISK),
                       data.get("boundary", []), data.get("outer"))
        except (KeyError, TypeError) as exc:
            raise ValidationError("bad-json", f"malformed graph document: {exc}")

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_dot(self) -> str:
        lines = ["graph G {"]
        for v, x in sorted(self.vertices.items()):
            shape = "doublecircle" if x.boundary else "circle"
            fill = "black" if x.color == BLACK else "white"
            font = "white" if x.color == BLACK else "black"
            lines.append(f'  "{v}" [shape={shape}, style=filled, fillcolor={fill}, fontcolor={font}];')
        for e, (b, w) in sorted(self.edges.items()):
            lines.append(f'  "{b}" -- "{w}" [label="{e}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    # ------------------------------------------------------------ editing
    def parts(self) -> dict:
        """Mutable copies of the defining data, for building modified graphs."""
        return {
            "vertices": {v: (x.color, x.boundary) for v, x in self.vertices.items()},
            "edges": dict(self.edges),
            "rotation": {v: list(r) for v, r in self.rotation.items()},
            "surface": self.surface,
            "boundary": list(self.boundary),
            "outer": self.outer,
        }

    @classmethod
    def from_parts(cls, parts: dict) -> "SurfaceGraph":
        return cls(parts["vertices"], parts["edges"], parts["rotation"], parts["surface"],
                   parts["boundary"], parts.get("outer"))

    def fresh_id(self, prefix: str, taken: Iterable = ()) -> str:
        taken = set(taken) | set(self.vertices) | set(self.edges)
        i = 0
        while f"{prefix}{i}" in taken:
            i += 1
        return f"{prefix}{i}"

    def __eq__(self, other):
        return isinstance(other, SurfaceGraph) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.dumps())

    def __repr__(self):
        return (f"SurfaceGraph({self.surface}, V={len(self.vertices)}, E={len(self.edges)}, "
                f"n={self.n})")


class Zigzag:
    __slots__ = ("start", "end", "steps")

    def __init__(self, start, end, steps):
        self.start, self.end, self.steps = start, end, steps

    @property
    def is_cycle(self) -> bool:
        return self.start is None

    def self_intersects(self) -> bool:
        edges = [s[0] for s in self.steps]
        return len(set(edges)) != len(edges)

    def __repr__(self):
        return f"Zigzag({self.start}->{self.end}, {[s[0] for s in self.steps]})"


def _parallel_double_crossing(z1: Zigzag, z2: Zigzag) -> bool:
    """Two intersections (oppositely traversed shared edges) met in the same order."""
    dir1 = {}
    for i, (e, x, y) in enumerate(z1.steps):
        dir1.setdefault((e, x, y), i)
    hits = []
    for i, (e, x, y) in enumerate(z2.steps):
        if (e, y, x) in dir1:
            hits.append((dir1[(e, y, x)], i))
    for a in range(len(hits)):
        for b in range(a + 1, len(hits)):
            if (hits[a][0] - hits[b][0]) * (hits[a][1] - hits[b][1]) > 0:
                return True
    return False


def _canonical_rotation(rot: tuple, linear: bool) -> tuple:
    """Cyclic rotations start at their smallest edge id; boundary rotations stay linear."""
    if linear or not rot:
        return rot
    i = min(range(len(rot)), key=lambda t: str(rot[t]))
    return rot[i:] + rot[:i]


def _dart_key(d):
    return (str(d[0]), d[1])


def _canonical_cycle(orbit: tuple) -> tuple:
    i = min(range(len(orbit)), key=lambda t: _dart_key(orbit[t]))
    return orbit[i:] + orbit[:i]


# ---------------------------------------------------------------- builders

def _cw_key(dx, dy, ox, oy):
    """Clockwise angle of direction (dx, dy) measured from direction (ox, oy)."""
    a = math.atan2(float(oy), float(ox)) - math.atan2(float(dy), float(dx))
    return a % (2 * math.pi)


def from_coordinates(vertices: dict, edges: dict, boundary: Sequence[str] = (),
                     positions: dict | None = None, outer: tuple | None = None) -> SurfaceGraph:
    """Build a disk graph whose rotation comes from planar straight-line positions.

    ``vertices`` maps id -> (color, boundary flag), ``edges`` maps id ->
    (black, white) and ``positions`` maps id -> (x, y) with y pointing up.
    Boundary vertices must be in convex position around the interior;
    their edges are ordered clockwise starting from the outward direction.
    """
    positions = positions or {}
    inc = {v: [] for v in vertices}
    for e, (b, w) in edges.items():
        inc[b].append(e)
        inc[w].append(e)
    if boundary:
        cx = sum(positions[v][0] for v in boundary) / len(boundary)
        cy = sum(positions[v][1] for v in boundary) / len(boundary)
    rotation = {}
    for v, es in inc.items():
        px, py = positions[v]
        if vertices[v][1]:
            ox, oy = px - cx, py - cy
        else:
            ox, oy = 1, 0

        def key(e, v=v, px=px, py=py, ox=ox, oy=oy):
            b, w = edges[e]
            u = w if v == b else b
            qx, qy = positions[u]
            k = _cw_key(qx - px, qy - py, ox, oy)
            return k if k > 0 else 2 * math.pi
        rotation[v] = sorted(es, key=key)
    return SurfaceGraph(vertices, edges, rotation, DISK, boundary, outer)


def square_disk() -> SurfaceGraph:
    """A single 4-cycle with no boundary vertices."""
    verts = {"b1": (BLACK, False), "b2": (BLACK, False), "w1": (WHITE, False), "w2": (WHITE, False)}
    edges = {"e1": ("b1", "w1"), "e2": ("b1", "w2"), "e3": ("b2", "w2"), "e4": ("b2", "w1")}
    pos = {"w1": (0, 1), "b1": (1, 1), "w2": (1, 0), "b2": (0, 0)}
    # the dart from w1 to b1 runs along the top with the outside on its left
    return from_coordinates(verts, edges, positions=pos, outer=("e1", 1))


# ---------------------------------------------------------------- structural edits

def split_white(g: SurfaceGraph, w: str, block: Sequence[str], ids: dict | None = None):
    """Split white ``w`` through a new degree-2 black vertex.

    The edges in ``block`` (a contiguous run of ``w``'s rotation, linear
    for boundary vertices) move to a new internal white ``w2``; ``w`` keeps
    the rest.  Returns ``(graph, w2, c, e_w, e_w2)`` where ``c`` is the new
    black vertex and ``e_w``, ``e_w2`` join it to ``w`` and ``w2``.
    """
    if g.color(w) != WHITE:
        raise ValidationError("invalid-partition", "split_white needs a white vertex", vertex=w)
    rot = list(g.rotation[w])
    block = list(block)
    start = _contiguous_start(rot, block, cyclic=not g.is_boundary(w))
    if start is None:
        raise ValidationError("invalid-partition", "block is not a contiguous run of the rotation",
                              vertex=w, block=block)
    ids = ids or {}
    taken = set()
    w2 = ids.get("white") or g.fresh_id(f"{w}.w", taken)
    taken.add(w2)
    c = ids.get("black") or g.fresh_id(f"{w}.b", taken)
    taken.add(c)
    e_w = ids.get("edge_old") or g.fresh_id(f"{w}.e", taken)
    taken.add(e_w)
    e_w2 = ids.get("edge_new") or g.fresh_id(f"{w}.e", taken)
    p = g.parts()
    if block:
        if g.is_boundary(w):
            ordered = block
            new_rot = rot[:start] + [e_w] + rot[start + len(block):]
        else:
            rolled = rot[start:] + rot[:start]
            ordered = rolled[:len(block)]
            new_rot = [e_w] + rolled[len(block):]
    else:
        ordered = []
        new_rot = ([e_w] + rot) if g.is_boundary(w) else (rot + [e_w])
    p["vertices"][w2] = (WHITE, False)
    p["vertices"][c] = (BLACK, False)
    p["edges"][e_w] = (c, w)
    p["edges"][e_w2] = (c, w2)
    for e in ordered:
        b, _ = p["edges"][e]
        p["edges"][e] = (b, w2)
    p["rotation"][w] = new_rot
    p["rotation"][w2] = [e_w2] + ordered
    p["rotation"][c] = [e_w, e_w2]
    return SurfaceGraph.from_parts(p), w2, c, e_w, e_w2


def split_black(g: SurfaceGraph, b: str, block: Sequence[str], ids: dict | None = None):
    """Split black ``b`` through a new degree-2 white vertex (mirror of :func:`split_white`).

    Returns ``(graph, b2, w, e_b, e_b2)``.
    """
    if g.color(b) != BLACK:
        raise ValidationError("invalid-partition", "split_black needs a black vertex", vertex=b)
    rot = list(g.rotation[b])
    block = list(block)
    start = _contiguous_start(rot, block, cyclic=True)
    if start is None or not block or len(block) == len(rot):
        raise ValidationError("invalid-partition", "block must be a proper contiguous run",
                              vertex=b, block=block)
    ids = ids or {}
    taken = set()
    b2 = ids.get("black") or g.fresh_id(f"{b}.b", taken)
    taken.add(b2)
    w = ids.get("white") or g.fresh_id(f"{b}.w", taken)
    taken.add(w)
    e_b = ids.get("edge_old") or g.fresh_id(f"{b}.e", taken)
    taken.add(e_b)
    e_b2 = ids.get("edge_new") or g.fresh_id(f"{b}.e", taken)
    p = g.parts()
    rolled = rot[start:] + rot[:start]
    ordered = rolled[:len(block)]
    p["vertices"][b2] = (BLACK, False)
    p["vertices"][w] = (WHITE, False)
    p["edges"][e_b] = (b, w)
    p["edges"][e_b2] = (b2, w)
    for e in ordered:
        _, x = p["edges"][e]
        p["edges"][e] = (b2, x)
    p["rotation"][b] = [e_b] + rolled[len(block):]
    p["rotation"][b2] = [e_b2] + ordered
    p["rotation"][w] = [e_b, e_b2]
    return SurfaceGraph.from_parts(p), b2, w, e_b, e_b2


def _contiguous_start(rot: list, block: list, cyclic: bool):
    """Index where ``block`` starts as a run of ``rot`` (any internal order), or None."""
    if not block:
        return 0
    if len(set(block)) != len(block) or any(e not in rot for e in block):
        return None
    n, m = len(rot), len(block)
    want = set(block)
    starts = range(n) if cyclic else range(n - m + 1)
    for s in starts:
        window = [rot[(s + t) % n] for t in range(m)]
        if set(window) == want:
            return s
    return None


def plabic_form(g: SurfaceGraph):
    """Give every boundary vertex degree at most one.

    A boundary vertex ``j`` of degree ``d > 1`` is replaced by the path
    ``j - c - w`` with a new degree-2 black ``c`` and a new internal white
    ``w`` that takes over all ``d`` old edges.  Returns the new graph and a
    list of ``(j, w, c, e_j, e_w)`` records, one per expanded vertex.
    """
    records = []
    for v in g.boundary:
        if g.degree(v) > 1:
            g, w2, c, e_w, e_w2 = split_white(g, v, list(g.rotation[v]))
            records.append((v, w2, c, e_w, e_w2))
    return g, records
