from fractions import Fraction
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vecrel import dynamics_drivers as dyn
from vecrel.boundary_maps import restrict_phi
from vecrel.catalog import fig4, fig9, fig10
from vecrel.checks import _renewable, _urban_faces
from vecrel.config_core import (configuration_from_coefficients, face_cycle, face_weights, gauge, gauge_equal,
                                random_configuration)
from vecrel.errors import DegenerateError, ValidationError
from vecrel.exact_linalg import ProjectivePoint, lincomb
from vecrel.local_moves import (add_degree2_black_move, add_degree2_white_move, quad_data, remove_degree2_black_move,
                                remove_degree2_white_move, urban_renewal, urban_renewal_move, urban_renewal_weights,
                                y_mutation)

seeds = st.integers(0, 10 ** 5)
nonzero = st.integers(-9, 9).filter(bool)


def fig9_quad(k11, k12, k22, k21):
    g = fig9()
    f = g.internal_faces()[0]
    (w1, e1), (b1, e2), (w2, e3), (b2, e4) = face_cycle(g, f)
    coeffs = {e: Fraction(7) for e in g.edges}
    coeffs.update({e1: k11, e2: k12, e3: k22, e4: k21})
    return configuration_from_coefficients(g, coeffs), f


def points(c):
    """Sorted projective points at the whites, for comparing graphs with renamed vertices."""
    return sorted(repr(ProjectivePoint(v)) for v in c.vectors.values())


# ---------------------------------------------------------------- weights

def test_urban_renewal_weights_example():
    assert urban_renewal_weights(1, 1, 1, 1) == (Fraction(1, 2),) * 4


def test_urban_renewal_weights_vanishing():
    with pytest.raises(DegenerateError) as err:
        urban_renewal_weights(1, 1, -1, 1)
    assert err.value.code == "vanishing-denominator"


@given(*[st.integers(1, 20)] * 4)
def test_urban_renewal_weights_involution_up_to_scale(a, b, c, d):
    once = urban_renewal_weights(a, b, c, d)
    twice = urban_renewal_weights(*once)
    assert twice == tuple(Fraction(x) for x in (a, b, c, d))


# ---------------------------------------------------------------- urban renewal on configurations

def test_new_vectors_are_coefficient_combinations():
    c, f = fig9_quad(1, 1, 2, 1)
    r = urban_renewal_move(c, f)
    o = r.new["old"]
    v1, v2 = c.vectors[o["w1"]], c.vectors[o["w2"]]
    u1, u2 = r.config.vectors[r.new["u1"]], r.config.vectors[r.new["u2"]]
    assert ProjectivePoint(u1) == ProjectivePoint(lincomb([(1, v1), (1, v2)], 2))
    assert ProjectivePoint(u2) == ProjectivePoint(lincomb([(1, v1), (2, v2)], 2))


def test_singular_quad_rejected():
    c, f = fig9_quad(1, 1, 1, 1)
    with pytest.raises(DegenerateError) as err:
        urban_renewal_move(c, f)
    assert err.value.code == "singular-coefficient-matrix"


def test_non_quadrilateral_rejected():
    c = random_configuration(fig10(), 0)
    for f in c.graph.internal_faces():
        with pytest.raises(ValidationError) as err:
            quad_data(c, f)
        assert err.value.code == "non-quadrilateral-face"


def test_renewed_face_weight_inverts():
    c, f = fig9_quad(1, 2, 3, 4)
    r = urban_renewal_move(c, f)
    assert face_weights(r.config)[r.new["face"]] == 1 / face_weights(c)[f.id]


@pytest.mark.parametrize("make", [fig9, fig4, fig10])
def test_double_renewal_returns_to_original(make):
    g = make()
    for f in _urban_faces(g):
        c, r = _renewable(g, f, 1)
        back = dyn.cleanup(urban_renewal(r.config, r.new["face"]))
        assert len(back.graph.vertices) == len(g.vertices)
        assert len(back.graph.edges) == len(g.edges)
        assert restrict_phi(back) == restrict_phi(c)
        assert sorted(face_weights(back).values()) == sorted(face_weights(c).values())
        assert points(back) == points(c)


@given(seeds)
def test_renewal_preserves_boundary_measurement(seed):
    g = fig4()
    for f in _urban_faces(g):
        c, r = _renewable(g, f, seed)
        assert restrict_phi(r.config) == restrict_phi(c)


@given(seeds, nonzero)
def test_renewal_commutes_with_gauge(seed, lam):
    g = fig4()
    f = _urban_faces(g)[0]
    c, r = _renewable(g, f, seed)
    internal = [v for v in sorted(g.vertices) if not g.is_boundary(v)]
    v = internal[seed % len(internal)]
    assert gauge_equal(urban_renewal(gauge(c, v, lam), f), r.config)


# ---------------------------------------------------------------- Y-mutation

@given(seeds)
def test_y_mutation_matches_renewal(seed):
    g = fig4()
    for f in _urban_faces(g):
        c, r = _renewable(g, f, seed)
        Y = face_weights(c)
        mutated = y_mutation(g, Y, f)
        after = face_weights(r.config)
        assert all(after[nf] == mutated[of] for nf, of in r.face_map.items() if nf in after)


def test_y_mutation_twice_is_identity():
    g = fig9()
    f = g.internal_faces()[0]
    c, r = _renewable(g, f, 2)
    Y = face_weights(c)
    once = {nf: y_mutation(g, Y, f)[of] for nf, of in r.face_map.items() if of in Y}
    twice = y_mutation(r.config.graph, once, r.new["face"])
    assert {r.face_map[nf]: x for nf, x in twice.items()} == Y


def test_y_mutation_rejects_minus_one():
    c, f = fig9_quad(1, 1, 1, 1)
    with pytest.raises(DegenerateError):
        y_mutation(c.graph, face_weights(c), f)


@given(seeds)
def test_torus_face_weight_product_invariant(seed):
    c = dyn.pentagram_configuration(dyn.random_polygon(6, seed))
    Y = face_weights(c)
    assert prod(Y.values()) == 1
    f = c.graph.internal_faces()[seed % len(Y)]
    if Y[f.id] in (0, -1):
        return
    assert prod(y_mutation(c.graph, Y, f).values()) == 1


# ---------------------------------------------------------------- degree-2 moves

def test_split_black_carries_partial_relation():
    c = random_configuration(fig4(), 1)
    b = "bD"
    block = c.graph.rotation[b][:2]
    r = add_degree2_white_move(c, b, block)
    rel = c.relations[b]
    expected = lincomb([(rel[e], c.vectors[c.graph.edges[e][1]]) for e in block], c.k)
    assert r.config.vectors[r.new["white"]] == expected
    back = remove_degree2_white_move(r.config, r.new["white"]).config
    assert back == c


@given(seeds)
def test_split_white_and_contract(seed):
    c = random_configuration(fig4(), seed)
    w = "u"
    r = add_degree2_black_move(c, w, c.graph.rotation[w][:2])
    assert r.config.vectors[r.new["white"]] == c.vectors[w]
    assert restrict_phi(r.config) == restrict_phi(c)
    back = remove_degree2_black_move(r.config, r.new["black"], keep=w).config
    assert gauge_equal(back, c)


def test_contract_requires_degree_two():
    c = random_configuration(fig4(), 1)
    with pytest.raises(ValidationError) as err:
        remove_degree2_black_move(c, "bD")
    assert err.value.code == "not-degree-2"


def test_split_rejects_bad_block():
    c = random_configuration(fig4(), 1)
    with pytest.raises(ValidationError):
        add_degree2_black_move(c, "u", ["nope"])
