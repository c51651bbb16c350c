from itertools import combinations
from random import Random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vecrel.catalog import PLABIC_GRAPHS, fig4, fig9, fig10, single_edge
from vecrel.errors import ValidationError
from vecrel.exact_linalg import Matrix
from vecrel.plabic_positroid import (PlabicContext, check_orientation, face_flips, flip_connected,
                                     grassmann_necklace, in_positroid_variety, is_kasteleyn, kasteleyn_signs,
                                     kasteleyn_violations, positroid, reverse_necklace, sign_gauge, solve_gf2)
from vecrel.surface_graph import BLACK, WHITE


def subsets(n, k):
    return {frozenset(J) for J in combinations(range(1, n + 1), k)}


def face_vertices(g, f):
    return {v for e, _ in f.real_darts for v in g.edges[e]}


# ---------------------------------------------------------------- positroids and necklaces

def test_fig4_positroid_is_uniform():
    assert positroid(fig4()) == subsets(6, 3)


def test_fig9_positroid_all_pairs():
    assert positroid(fig9()) == subsets(4, 2)


def test_fig10_positroid_misses_12():
    assert positroid(fig10()) == subsets(4, 2) - {frozenset({1, 2})}


def test_single_edge_positroid():
    pos = positroid(single_edge())
    assert all(2 in J for J in pos)


def test_uniform_necklace():
    N = grassmann_necklace(subsets(6, 3), 6)
    assert N == [frozenset(((j + i - 1) % 6) + 1 for i in range(3)) for j in range(1, 7)]


def test_single_basis_necklace():
    assert grassmann_necklace([{2, 4}], 4) == [frozenset({2, 4})] * 4
    assert reverse_necklace([{2, 4}], 4) == [frozenset({2, 4})] * 4


def test_empty_positroid_rejected():
    with pytest.raises(ValidationError):
        grassmann_necklace([], 3)


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_necklace_members_and_entries(name):
    ctx = PlabicContext(PLABIC_GRAPHS[name]())
    for j, I in enumerate(ctx.necklace, start=1):
        assert I in ctx.positroid
        nxt = ctx.necklace[j % ctx.n]
        assert len(I - {j}) == len(I) - (j in I)
        assert I - {j} <= nxt


def test_j_in_I_j_for_loopless_fig4():
    ctx = PlabicContext(fig4())
    assert all(j in I for j, I in enumerate(ctx.necklace, start=1))


# ---------------------------------------------------------------- positroid varieties

def test_positroid_variety_singular_example():
    pos = subsets(4, 2) - {frozenset({1, 2})}
    assert in_positroid_variety(Matrix([[0, 0, 1, 0], [0, 0, 0, 1]]), pos)
    assert not in_positroid_variety(Matrix([[1, 0, 1, 2], [0, 1, 3, 5]]), pos)


def test_generic_matrix_in_uniform_variety():
    assert in_positroid_variety(Matrix([[1, 0, -1, 2], [0, 1, 3, 5]]), subsets(4, 2))


def test_rank_deficient_matrix_rejected():
    with pytest.raises(ValidationError):
        in_positroid_variety(Matrix([[1, 2], [2, 4]]), subsets(2, 2))


# ---------------------------------------------------------------- Kasteleyn signs

@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_kasteleyn_signs_internal_faces(name):
    ctx = PlabicContext(PLABIC_GRAPHS[name]())
    g, s = ctx.graph, ctx.signs
    assert is_kasteleyn(g, s)
    for f in g.internal_faces():
        p = 1
        for e in f.edges:
            p *= s[e]
        m = len(f.edges) // 2
        assert p == (-1) ** (m - 1)


def test_quadrilateral_face_is_odd():
    g = fig9()
    s = kasteleyn_signs(g)
    p = 1
    for e in g.internal_faces()[0].edges:
        p *= s[e]
    assert p == -1


def test_flipped_edge_is_detected():
    g = fig9()
    s = kasteleyn_signs(g)
    e = g.internal_faces()[0].edges[0]
    s[e] = -s[e]
    assert kasteleyn_violations(g, s)


@given(st.integers(0, 10 ** 6))
def test_sign_choices_differ_by_gauge(seed):
    ctx = PlabicContext(fig4())
    g, s = ctx.graph, ctx.signs
    r = Random(seed)
    flips = {v: 1 if g.is_boundary(v) else r.choice((1, -1)) for v in g.vertices}
    s2 = {e: s[e] * flips[b] * flips[w] for e, (b, w) in g.edges.items()}
    assert is_kasteleyn(g, s2)
    gauge = sign_gauge(g, s, s2, fixed=g.boundary)
    assert gauge is not None
    assert all(s[e] * gauge[b] * gauge[w] == s2[e] for e, (b, w) in g.edges.items())


def test_solve_gf2():
    assert solve_gf2([(0b11, 1), (0b01, 1)], 2) == 0b01
    assert solve_gf2([(0b1, 1), (0b1, 0)], 1) is None


# ---------------------------------------------------------------- strand labels

def test_fig4_label_of_u():
    assert PlabicContext(fig4()).labels["vertices"]["u"] == {3, 6}


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_label_sizes_and_containments(name):
    ctx = PlabicContext(PLABIC_GRAPHS[name]())
    g, k = ctx.graph, ctx.k
    faces, verts = ctx.labels["faces"], ctx.labels["vertices"]
    assert all(len(S) == k for S in faces.values())
    for f in g.faces:
        for v in face_vertices(g, f):
            if g.color(v) == WHITE and not g.is_boundary(v):
                assert verts[v] <= faces[f.id]
            if g.color(v) == BLACK:
                assert faces[f.id] <= verts[v]
    for v, S in verts.items():
        if g.is_boundary(v):
            continue
        assert len(S) == (k - 1 if g.color(v) == WHITE else k + 1)


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_face_labels_in_positroid(name):
    ctx = PlabicContext(PLABIC_GRAPHS[name]())
    assert set(ctx.labels["faces"].values()) <= ctx.positroid


# ---------------------------------------------------------------- orientation and matchings

@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_orientation_structure(name):
    ctx = PlabicContext(PLABIC_GRAPHS[name]())
    assert all(check_orientation(ctx.graph, ctx.orientation, ctx.I1).values())


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_extremal_matching_is_unique(name):
    ctx = PlabicContext(PLABIC_GRAPHS[name]())
    assert ctx.matchings[ctx.I1] == [ctx.matching] or set(ctx.matchings[ctx.I1]) == {ctx.matching}


@pytest.mark.parametrize("name", sorted(PLABIC_GRAPHS))
def test_matchings_flip_connected(name):
    ctx = PlabicContext(PLABIC_GRAPHS[name]())
    for J, ms in ctx.matchings.items():
        assert flip_connected(ctx.graph, ms)


def test_face_flip_changes_matching():
    ctx = PlabicContext(fig4())
    J = max(ctx.matchings, key=lambda J: len(ctx.matchings[J]))
    m = ctx.matchings[J][0]
    assert all(x != m for x in face_flips(ctx.graph, m))


def test_sigma_signs_fig4():
    ctx = PlabicContext(fig4())
    assert ctx.I1 == {1, 2, 3}
    assert [ctx.sigma(j) for j in range(1, 7)] == [1, -1, 1, 1, 1, 1]
