import itertools

import pytest

from oracles import geometric_columns, is_unimodular_affine, lattice_points
from polykit import corpus
from polykit.classify import is_balanced
from polykit.columns import column_vectors
from polykit.doubling import (
    DoublingError,
    column_key,
    double,
    doubling_equation_violations,
    extra_columns,
    facetize,
    lift_columns,
    reorder_iso,
    spectrum,
)
from polykit.intlin import vadd, vscale
from polykit.polytope import lattice_isomorphisms

ALL = corpus.names()
BALANCED = [n for n in ALL
            if len(column_vectors(corpus.get(n))) and is_balanced(corpus.get(n))]


def all_doublings(names):
    for n in names:
        p = corpus.get(n)
        for f in p.facets:
            yield n, p, f.id


def geometric_of(poly):
    return set(geometric_columns(list(poly.vertices)))


class TestDouble:
    def test_segment_gives_triangle(self):
        p = corpus.get("segment2")
        d = double(p, 0)
        assert set(d.result.vertices) == {(0, 0), (2, 0), (0, 2)}
        assert d.delta_plus.v == (-1, 1)
        assert d.pivot == (1,)
        minus = d.result.facet(d.minus_facet)
        bar = d.result.facet(d.bar_facet)
        assert (minus.normal, minus.offset) == ((0, 1), 0)  # bottom edge
        assert (bar.normal, bar.offset) == ((1, 0), 0)  # left edge
        pts = sorted(d.result.lattice_points)
        target = corpus.get("triangle2")
        g = lattice_isomorphisms(d.result, target, first_only=True)[0]
        assert sorted(g(x) for x in pts) == sorted(target.lattice_points)
        assert is_unimodular_affine(pts, [g(x) for x in pts])

    @pytest.mark.parametrize("name, p, fid", list(all_doublings(ALL)))
    def test_shape_and_equations(self, name, p, fid):
        d = double(p, fid)
        assert d.result.dim == p.dim + 1
        assert len(d.result.facets) == len(p.facets) + 1
        assert doubling_equation_violations(d) == []
        assert d.delta_minus.v == tuple(-x for x in d.delta_plus.v)
        # embeddings land on the two copies
        for x in p.lattice_points:
            assert d.result.facet(d.minus_facet).height(d.embed_minus(x)) == 0
            assert d.result.facet(d.bar_facet).height(d.embed_bar(x)) == 0

    @pytest.mark.parametrize("name", [n for n in ALL if len(corpus.VERTICES[n][0]) <= 2])
    def test_points_match_hull_oracle(self, name):
        p = corpus.get(name)
        for f in p.facets:
            d = double(p, f.id)
            assert sorted(d.result.lattice_points) == lattice_points(list(d.result.vertices))

    def test_rejects_unknown_facet(self):
        with pytest.raises(DoublingError):
            double(corpus.get("pc"), 7)

    def test_rejects_bad_pivot(self):
        with pytest.raises(DoublingError):
            double(corpus.get("pc"), 0, pivot=(2, 0))

    @pytest.mark.parametrize("name", ["pc", "trapezoid", "segment2", "pyramid"])
    def test_pivot_independence(self, name):
        p = corpus.get(name)
        for f in p.facets:
            d1 = double(p, f.id)
            # another solution of <a_F, p> = 1
            kernel = next(e for e in itertools.product(range(-1, 2), repeat=p.dim)
                          if any(e) and f.pairing(e) == 0) if p.dim > 1 else None
            if kernel is None:
                continue
            d2 = double(p, f.id, pivot=vadd(d1.pivot, kernel))
            assert d2.pivot != d1.pivot
            maps = lattice_isomorphisms(d1.result, d2.result)
            fixing = [g for g in maps
                      if all(g(d1.embed_minus(x)) == d2.embed_minus(x) for x in p.lattice_points)]
            assert fixing


class TestLiftedColumns:
    def test_segment(self):
        d = double(corpus.get("segment2"), 0)
        lifted = lift_columns(d)
        expected = {(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)}
        assert set(lifted.table.vectors()) == expected
        assert geometric_of(d.result) == expected

    @pytest.mark.parametrize("name", BALANCED)
    def test_balanced_base_facet_doublings_exact(self, name):
        p = corpus.get(name)
        t = column_vectors(p)
        for fid in t.base_facets():
            d = double(p, fid)
            lifted = lift_columns(d, t)
            assert lifted.complete
            actual = set(column_vectors(d.result).vectors())
            assert actual == set(lifted.table.vectors())
            if d.result.dim <= 3:
                assert actual == geometric_of(d.result)
            for c in lifted.table:
                assert column_vectors(d.result).get(c.v).base == c.base

    def test_non_base_facet_can_add_columns(self):
        # doubling P_c along its top facet, which carries no column
        p = corpus.get("pc")
        top = next(f.id for f in p.facets if f.normal == (1, -1))
        assert top not in column_vectors(p).base_facets()
        d = double(p, top)
        lifted = lift_columns(d)
        assert not lifted.complete
        assert extra_columns(d, lifted) == [(1, 0, 1)]
        assert geometric_of(d.result) - set(lifted.table.vectors()) == {(1, 0, 1)}

    def test_newcol_triangle(self):
        p = corpus.get("newcol")
        t = column_vectors(p)
        assert not is_balanced(p, t)
        d = double(p, t.get((1, 0)).base)
        lifted = lift_columns(d, t)
        assert not lifted.complete
        extra = extra_columns(d, lifted)
        assert extra == [(-1, -1, 1)]
        assert set(extra) <= geometric_of(d.result)

    @pytest.mark.parametrize("name", BALANCED)
    def test_overlap_of_copies(self, name):
        p = corpus.get(name)
        t = column_vectors(p)
        for f in p.facets:
            d = double(p, f.id)
            minus = {d.lift_minus(c).v for c in t}
            bar = {d.lift_bar(c).v for c in t}
            flat = {column_key(c.v) for c in t if f.pairing(c.v) == 0}
            assert {column_key(v) for v in minus & bar} == flat

    @pytest.mark.parametrize("name", BALANCED)
    def test_decomposition_and_product_rules(self, name):
        p = corpus.get(name)
        t = column_vectors(p)
        for fid in t.base_facets():
            d = double(p, fid)
            q = column_vectors(d.result)
            dp, dm = q.get(d.delta_plus.v), q.get(d.delta_minus.v)
            expected = set()
            for (i, j), k in t.products.items():
                u, v, w = t.columns[i], t.columns[j], t.columns[k]
                expected.add((d.lift_minus(u).v, d.lift_minus(v).v, d.lift_minus(w).v))
                expected.add((d.lift_bar(u).v, d.lift_bar(v).v, d.lift_bar(w).v))
            for v in t.with_base(fid):
                vm, vb = d.lift_minus(v).v, d.lift_bar(v).v
                assert q.product(dp, q.get(vb)).v == vm
                assert q.product(dm, q.get(vm)).v == vb
                expected.add((dp.v, vb, vm))
                expected.add((dm.v, vm, vb))
                neg = t.get(tuple(-x for x in v.v))
                if neg is not None:
                    nb, nm = d.lift_bar(neg).v, d.lift_minus(neg).v
                    assert q.product(q.get(vm), q.get(nb)).v == dp.v
                    assert q.product(q.get(vb), q.get(nm)).v == dm.v
                    expected.add((vm, nb, dp.v))
                    expected.add((vb, nm, dm.v))
            # products through the deltas for columns pointing away from F; they
            # follow from the product criterion since <P^-, u^|> = <P^|, u^-> = <F, u>
            f = p.facet(fid)
            for u in t:
                if f.pairing(u.v) == 1:
                    um, ub = d.lift_minus(u).v, d.lift_bar(u).v
                    assert q.product(q.get(ub), dm).v == um
                    assert q.product(q.get(um), dp).v == ub
                    expected.add((ub, dm.v, um))
                    expected.add((um, dp.v, ub))
            actual = {(q.columns[i].v, q.columns[j].v, q.columns[k].v)
                      for (i, j), k in q.products.items()}
            assert actual == expected


class TestSpectrum:
    def test_segment_depth_three(self):
        sp = spectrum(corpus.get("segment2"), 3)
        assert [n.polytope.dim for n in sp] == [1, 2, 3, 4]
        for node in sp:
            assert set(node.table.vectors()) == set(column_vectors(node.polytope).vectors())

    def test_pc_decomposition(self):
        sp = spectrum(corpus.get("pc"), 4)
        for node in sp.nodes[1:]:
            d = node.doubling
            key = node.decomposed
            prev = sp[node.index - 1]
            v = prev.column(key)
            vm = d.lift_minus(v)
            vb = d.lift_bar(v)
            prod = node.table.product(node.table.get(d.delta_plus.v), node.table.get(vb.v))
            assert prod is not None and prod.v == vm.v

    @pytest.mark.parametrize("name", ["pc", "segment2", "square", "trapezoid", "pd1"])
    def test_balance_persists(self, name):
        sp = spectrum(corpus.get(name), 5)
        for node in sp:
            assert is_balanced(node.polytope, node.table)
            assert set(node.table.vectors()) == set(column_vectors(node.polytope).vectors())
            if node.doubling is not None:
                assert doubling_equation_violations(node.doubling) == []

    def test_pc_ledger(self):
        sp = spectrum(corpus.get("pc"), 12)
        assert sp.ledger[(0, -1)] == [1, 2, 4, 8, 9]
        assert len(sp.ledger[(0, -1)]) >= 2
        assert [len(n.table) for n in sp][:5] == [3, 7, 13, 19, 28]
        assert len(sp[12].table) == 172

    def test_rejects_non_balanced(self):
        with pytest.raises(DoublingError):
            spectrum(corpus.get("esstri"), 2)

    def test_rejects_empty(self):
        from polykit.polytope import build_polytope

        hexagon = build_polytope([(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)])
        with pytest.raises(DoublingError):
            spectrum(hexagon, 1)


def check_iso(r):
    src = sorted(r.mapping)
    dst = [r.mapping[x] for x in src]
    b_top = r.target[-1].result if r.target else None
    if b_top is not None:
        assert sorted(dst) == sorted(b_top.lattice_points)
    assert is_unimodular_affine(src, dst)


class TestReorder:
    def test_single_facet_is_identity(self):
        r = reorder_iso(corpus.get("pc"), [2], [0])
        assert all(x == y for x, y in r.mapping.items())

    @pytest.mark.parametrize("name", ["segment2", "trapezoid"])
    def test_two_facets_swapped(self, name):
        p = corpus.get(name)
        r = reorder_iso(p, [0, 1], [1, 0])
        check_iso(r)

    def test_inverse_composition(self):
        p = corpus.get("trapezoid")
        fwd = reorder_iso(p, [0, 2, 3], [1, 2, 0])
        back = reorder_iso(p, [fwd.target[i].facet_used for i in range(3)], [2, 0, 1])
        for x, y in fwd.mapping.items():
            assert back.mapping[y] == x

    @pytest.mark.parametrize("name", corpus.polygons())
    def test_all_orderings(self, name):
        p = corpus.get(name)
        ids = [f.id for f in p.facets]
        for m in (2, 3):
            for fs in itertools.combinations(ids, m):
                for sigma in itertools.permutations(range(m)):
                    r = reorder_iso(p, list(fs), list(sigma))
                    if m == 2:
                        check_iso(r)

    def test_rejects_bad_permutation(self):
        with pytest.raises(DoublingError):
            reorder_iso(corpus.get("pc"), [0, 1], [0, 0])


class TestFacetize:
    def test_already_on_facet(self):
        p = corpus.get("pc")
        u = column_vectors(p).get((0, -1))
        ch = facetize(p, (1, 0), [u])
        assert ch.points == [(1, 0), (1, 0, 0)]

    def test_one_column(self):
        p = corpus.get("pc")
        u = column_vectors(p).get((0, -1))
        ch = facetize(p, (1, 2), [u])
        d = ch.doublings[0]
        assert ch.points[1] == vadd((1, 2, 0), vscale(2, d.delta_plus.v))
        assert ch.points == [(1, 2), (1, 0, 2)]
        assert ch.polytope.facet(ch.bases[0]).height(ch.points[-1]) == 0

    def test_two_columns(self):
        p = corpus.get("pc")
        t = column_vectors(p)
        ch = facetize(p, (1, 2), [t.get((0, -1)), t.get((1, 0))])
        y = ch.points[-1]
        assert all(ch.polytope.facet(b).height(y) == 0 for b in ch.bases)

    def test_rejects_outside_point(self):
        p = corpus.get("pc")
        with pytest.raises(DoublingError):
            facetize(p, (5, 5), [])
