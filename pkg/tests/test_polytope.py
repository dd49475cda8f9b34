import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hull_facets, is_unimodular_affine, lattice_points
from polykit import corpus
from polykit.intlin import content
from polykit.polytope import (
    PolytopeError,
    build_polytope,
    fans_equal,
    find_isomorphism,
    height,
    lattice_symmetries,
    normal_fan,
    product_polytope,
    rebuild_from_inequalities,
)


def forms(p):
    return {(f.normal, f.offset) for f in p.facets}


class TestBuild:
    def test_pc(self):
        p = corpus.get("pc")
        assert forms(p) == {((0, 1), 0), ((1, 0), 0), ((-1, -1), -3), ((1, -1), -1)}
        assert len(p.lattice_points) == 8

    def test_unit_segment(self):
        p = build_polytope([(0,), (1,)])
        assert forms(p) == {((1,), 0), ((-1,), -1)}
        assert len(p.lattice_points) == 2

    def test_pyramid(self):
        p = corpus.get("pyramid")
        assert len(p.facets) == 5
        assert len(p.lattice_points) == 5

    @pytest.mark.parametrize("name", corpus.names())
    def test_matches_brute_force(self, name):
        p = corpus.get(name)
        verts = corpus.VERTICES[name]
        assert forms(p) == hull_facets(verts)
        assert sorted(p.lattice_points) == lattice_points(verts)

    @pytest.mark.parametrize("name", corpus.names())
    def test_facet_invariants(self, name):
        p = corpus.get(name)
        for f in p.facets:
            assert content(f.normal) == 1
            hs = [f.height(x) for x in p.lattice_points]
            assert min(hs) == 0
            on = [x for x in p.lattice_points if f.height(x) == 0]
            assert set(on) == {x for x in p.lattice_points if f.id in p.facets_through(x)}
        for v in p.vertices:
            assert sum(f.height(v) == 0 for f in p.facets) >= p.dim

    @pytest.mark.parametrize("name", corpus.names())
    def test_rebuild_round_trip(self, name):
        p = corpus.get(name)
        q = rebuild_from_inequalities(p)
        assert set(q.vertices) == set(p.vertices)
        assert forms(q) == forms(p)

    def test_duplicates_warn(self):
        with pytest.warns(UserWarning):
            p = build_polytope([(0, 0), (1, 0), (0, 1), (1, 0)])
        assert len(p.vertices) == 3

    def test_non_vertex_inputs_dropped(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            p = build_polytope([(0, 0), (2, 0), (1, 0), (0, 2)])
        assert set(p.vertices) == {(0, 0), (2, 0), (0, 2)}

    def test_lower_dimensional_input(self):
        p = build_polytope([(0, 0, 0), (2, 2, 0)])
        assert p.dim == 1
        assert len(p.lattice_points) == 3
        assert sorted(p.to_ambient(x) for x in p.lattice_points) == [(0, 0, 0), (1, 1, 0), (2, 2, 0)]

    def test_sublattice_renormalized(self):
        # Reeve tetrahedron: its four lattice points generate an index 2 sublattice
        verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)]
        assert len(lattice_points(verts)) == 4
        p = build_polytope(verts)
        assert not p.chart.is_identity
        assert sorted(p.to_ambient(x) for x in p.lattice_points) == sorted(verts)
        assert find_isomorphism(p, corpus.get("tetrahedron")) is not None

    def test_high_dimension_needs_facets(self):
        with pytest.raises(PolytopeError):
            build_polytope(corpus.simplex(4))

    def test_supplied_facets_verified(self):
        verts = corpus.simplex(4)
        good = [((1, 0, 0, 0), 0), ((0, 1, 0, 0), 0), ((0, 0, 1, 0), 0), ((0, 0, 0, 1), 0),
                ((-1, -1, -1, -1), -1)]
        p = build_polytope(verts, good)
        assert len(p.lattice_points) == 5
        assert [f.normal for f in p.facets] == [a for a, _ in good]
        bad = good[:-1] + [((-1, -1, -1, -1), -2)]
        with pytest.raises(PolytopeError):
            build_polytope(verts, bad)

    def test_single_point(self):
        p = build_polytope([(3, 4)])
        assert p.dim == 0 and len(p.lattice_points) == 1


class TestHeight:
    def test_pc_examples(self):
        p = corpus.get("pc")
        bottom = next(f for f in p.facets if f.normal == (0, 1))
        right = next(f for f in p.facets if f.normal == (-1, -1))
        assert height(p, bottom, (1, 2)) == 2
        assert height(p, right, (0, 0)) == 3
        for f in p.facets:
            assert all(height(p, f, x) == 0 for x in p.lattice_points if f.height(x) == 0)


class TestFans:
    def test_square_scaled(self):
        assert fans_equal(normal_fan(corpus.get("square")), normal_fan(corpus.get("square2")))

    def test_square_vs_triangle(self):
        assert not fans_equal(normal_fan(corpus.get("square")), normal_fan(corpus.get("triangle")))

    def test_trapezoid_enlargement(self):
        assert fans_equal(normal_fan(corpus.get("trapezoid")),
                          normal_fan(corpus.get("trapezoid_wide")))

    @pytest.mark.parametrize("name", corpus.names())
    def test_complete(self, name):
        assert normal_fan(corpus.get(name)).is_complete()


class TestSymmetries:
    @pytest.mark.parametrize("name, order", [("square", 8), ("triangle", 6), ("pc", 1),
                                             ("segment2", 2), ("tetrahedron", 24)])
    def test_orders(self, name, order):
        assert len(lattice_symmetries(corpus.get(name))) == order

    def test_maps_are_lattice_automorphisms(self):
        p = corpus.get("square2")
        pts = sorted(p.lattice_points)
        for g in lattice_symmetries(p):
            img = [g(x) for x in pts]
            assert sorted(img) == pts
            assert is_unimodular_affine(pts, img)

    def test_isomorphism_between_translates(self):
        p = build_polytope([(0, 0), (3, 0), (1, 2), (0, 1)])
        q = build_polytope([(5, 5), (8, 5), (6, 7), (5, 6)])
        g = find_isomorphism(p, q)
        assert g is not None
        assert sorted(g(x) for x in p.lattice_points) == sorted(q.lattice_points)

    def test_no_isomorphism(self):
        assert find_isomorphism(corpus.get("triangle2"), corpus.get("square")) is None


def test_product_polytope():
    sq = product_polytope(corpus.get("segment"), corpus.get("segment"))
    assert sq.dim == 2
    assert sorted(sq.lattice_points) == sorted(corpus.get("square").lattice_points)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=6))
def test_random_polygons_match_oracle(pts):
    pts = sorted(set(pts))
    if len(pts) < 3:
        return
    x0 = pts[0]
    if all((p[0] - x0[0]) * (pts[1][1] - x0[1]) == (p[1] - x0[1]) * (pts[1][0] - x0[0]) for p in pts):
        return
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = build_polytope(pts)
    if p.chart.is_identity:
        assert forms(p) == hull_facets(pts)
        assert sorted(p.lattice_points) == lattice_points(pts)
    else:
        assert len(p.lattice_points) == len(lattice_points(pts))
