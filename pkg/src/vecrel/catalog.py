"""Named example graphs used throughout the tests and the CLI.

Each builder returns a fresh :class:`SurfaceGraph`.  Planar ones are laid
out with integer coordinates and ordered by :func:`from_coordinates`.
"""

from __future__ import annotations

from .surface_graph import BLACK, WHITE, SurfaceGraph, from_coordinates


def _build(boundary_pos: dict, internal: dict, edge_list: list, order: list) -> SurfaceGraph:
    vertices, positions = {}, {}
    for v, p in boundary_pos.items():
        vertices[v] = (WHITE, True)
        positions[v] = p
    for v, (color, p) in internal.items():
        vertices[v] = (color, False)
        positions[v] = p
    edges = {f"e{i}": be for i, be in enumerate(edge_list)}
    return from_coordinates(vertices, edges, order, positions)


def fig4() -> SurfaceGraph:
    """Reduced plabic graph for the top cell of Gr(3,6).

    One internal white ``u`` at the center, four black vertices and six
    boundary vertices on a hexagon (1 bottom right, then clockwise).
    Boundary vertices 1, 2, 4, 5 have degree two.
    """
    bpos = {"1": (1, -2), "2": (-1, -2), "3": (-2, 0), "4": (-1, 2), "5": (1, 2), "6": (2, 0)}
    internal = {
        "u": (WHITE, (0, 0)),
        "bU": (BLACK, (0, 1)),
        "bD": (BLACK, (0, -1)),
        "bL": (BLACK, (-1, 0)),
        "bR": (BLACK, (1, 0)),
    }
    edges = [("bU", "u"), ("bU", "4"), ("bU", "5"),
             ("bD", "u"), ("bD", "1"), ("bD", "2"),
             ("bL", "u"), ("bL", "2"), ("bL", "3"), ("bL", "4"),
             ("bR", "u"), ("bR", "5"), ("bR", "6"), ("bR", "1")]
    return _build(bpos, internal, edges, ["1", "2", "3", "4", "5", "6"])


def fig9() -> SurfaceGraph:
    """Gr(2,4) top-cell graph with two black vertices and one internal face.

    Edge ids are chosen so that the Kasteleyn matrix reads
    ``[[0, 1, a, b], [c, d, 0, 1]]`` with ``a = e_b1_3``, ``b = e_b1_4``,
    ``c = e_b2_1``, ``d = e_b2_2``.
    """
    vertices = {"1": (WHITE, True), "2": (WHITE, True), "3": (WHITE, True), "4": (WHITE, True),
                "b1": (BLACK, False), "b2": (BLACK, False)}
    positions = {"1": (-2, 0), "2": (0, 2), "3": (2, 0), "4": (0, -2), "b1": (1, 0), "b2": (-1, 0)}
    edges = {"e_b1_2": ("b1", "2"), "e_b1_3": ("b1", "3"), "e_b1_4": ("b1", "4"),
             "e_b2_1": ("b2", "1"), "e_b2_2": ("b2", "2"), "e_b2_4": ("b2", "4")}
    return from_coordinates(vertices, edges, ["1", "2", "3", "4"], positions)


def fig10() -> SurfaceGraph:
    """Tree-shaped Gr(2,4) graph whose positroid misses exactly ``{1, 2}``."""
    bpos = {"1": (-2, 2), "2": (2, 2), "3": (2, -2), "4": (-2, -2)}
    internal = {
        "u": (WHITE, (0, 0)),
        "ba": (BLACK, (-1, 1)),
        "bb": (BLACK, (1, 1)),
        "bc": (BLACK, (0, -1)),
    }
    edges = [("ba", "1"), ("ba", "u"), ("bb", "2"), ("bb", "u"),
             ("bc", "3"), ("bc", "u"), ("bc", "4")]
    return _build(bpos, internal, edges, ["1", "2", "3", "4"])


def single_edge() -> SurfaceGraph:
    """Boundary vertex 1 joined to a degree-one black vertex, plus isolated boundary 2."""
    vertices = {"1": (WHITE, True), "2": (WHITE, True), "b": (BLACK, False)}
    edges = {"e": ("b", "1")}
    return SurfaceGraph(vertices, edges, {"1": ["e"], "b": ["e"], "2": []}, "disk", ["1", "2"])


def path_graph() -> SurfaceGraph:
    """Boundary vertex 1, black ``b``, internal white ``w``: the path 1 - b - w."""
    vertices = {"1": (WHITE, True), "b": (BLACK, False), "w": (WHITE, False)}
    edges = {"e1": ("b", "1"), "e2": ("b", "w")}
    return SurfaceGraph(vertices, edges, {"1": ["e1"], "b": ["e1", "e2"], "w": ["e2"]}, "disk", ["1"])


def double_edge() -> SurfaceGraph:
    """Boundary 1 - black - white with a doubled edge, then boundary 2 (not reduced)."""
    vertices = {"1": (WHITE, True), "2": (WHITE, True), "b": (BLACK, False), "w": (WHITE, False),
                "c": (BLACK, False)}
    edges = {"a": ("b", "1"), "p": ("b", "w"), "q": ("b", "w"), "r": ("c", "w"), "s": ("c", "2")}
    rotation = {"1": ["a"], "b": ["a", "p", "q"], "w": ["r", "q", "p"], "c": ["r", "s"], "2": ["s"]}
    return SurfaceGraph(vertices, edges, rotation, "disk", ["1", "2"])


PLABIC_GRAPHS = {"fig4": fig4, "fig9": fig9, "fig10": fig10}
