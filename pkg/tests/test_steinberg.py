import itertools

import numpy as np
import pytest

from polykit import corpus
from polykit.columns import column_vectors
from polykit.doubling import spectrum
from polykit.rings import RingSpec
from polykit.steinberg import (
    SteinbergError,
    calibrate_placement,
    index_model,
    index_set,
    pi_check,
    presentation,
    specquad_zones,
    steinberg_relations,
    uv_subgroup_checks,
    verify_model,
)

TRUNCATIONS = [(c, j, t) for c in "bcd" for j in (1, 2, 3) for t in ((1, 2) if c == "d" else (1,))]


class TestPresentation:
    def test_pc_counts(self):
        p = corpus.get("pc")
        pres = presentation(p, column_vectors(p))
        assert pres.counts() == {"additivity": 3, "trivial": 4, "uv": 1, "vu": 1}
        assert len(pres.generators) == 3

    def test_pc_relation_shape(self):
        p = corpus.get("pc")
        pres = presentation(p, column_vectors(p))
        (rel,) = [r for r in pres.relations if r.kind == "uv"]
        assert (rel.u, rel.v, rel.n) == ((0, -1), (1, 0), 1)
        assert [c for c, _ in rel.rhs] == [(1, -1)]

    @pytest.mark.parametrize("name, depth", [("pc", 3), ("segment2", 3)])
    def test_pi_check_on_spectrum(self, name, depth):
        for node in spectrum(corpus.get(name), depth).nodes:
            pres = presentation(node.polytope, node.table)
            report = pi_check(pres)
            assert report.passed, report.failures[:1]

    def test_pi_check_modular(self):
        p = corpus.get("esstri")
        ring = RingSpec("poly", 3, ("lambda", "mu"))
        assert pi_check(presentation(p, column_vectors(p), ring), ring).passed


class TestIndexSets:
    def test_sizes(self):
        # b: A x A, B x A, B x B without the diagonal
        assert len(index_set("b", 2)) == 2 + 4 + 2
        assert len(index_set("c", 2)) == 2 + 4 + 2 + 2 + 2
        assert len(index_set("d", 2, 2)) == 2 + 4

    def test_closed_under_composition(self):
        for c, j, t in TRUNCATIONS:
            pairs = set(index_set(c, j, t))
            for (i, k), (k2, l) in itertools.product(pairs, pairs):
                if k == k2 and i != l:
                    assert (i, l) in pairs

    def test_relation_signs(self):
        a1, a2, a3 = ("A", 1), ("A", 2), ("A", 3)
        rels = {(g, h): r for g, h, r in steinberg_relations(index_set("b", 3))}
        assert rels[((a1, a2), (a2, a3))] == ((a1, a3), 1)
        assert rels[((a2, a3), (a1, a2))] == ((a1, a3), -1)
        assert rels[((a1, a2), (a1, a3))] is None

    @pytest.mark.parametrize("args", [("b", 0), ("x", 2), ("d", 2, 0)])
    def test_rejects(self, args):
        with pytest.raises(SteinbergError):
            index_set(*args)


class TestMatrixModels:
    def test_calibration(self):
        cal = calibrate_placement()
        assert (cal.transpose, cal.anti) == (True, True)
        assert dict(cal.block_order) == {"b": ("A", "B"), "c": ("A", "B", "O"), "d": ("A", "T")}

    @pytest.mark.parametrize("cls, j, t", TRUNCATIONS)
    def test_relations(self, cls, j, t):
        m = index_model(cls, j, t)
        assert m.in_shape()
        r = verify_model(m, (2, 3, 4))
        assert r.symbolic and all(r.modular.values())

    @pytest.mark.parametrize("cls, j, t", TRUNCATIONS)
    def test_generators_are_unipotent(self, cls, j, t):
        m = index_model(cls, j, t)
        for pair in m.pairs:
            e = m.matrix(pair, 1, 0, 1) - np.eye(m.size, dtype=np.int64)
            assert not e.dot(e).any()

    @pytest.mark.parametrize("cls, j, t", TRUNCATIONS)
    def test_uv_subgroups(self, cls, j, t):
        r = uv_subgroup_checks(cls, j, t, modulus=4)
        assert r.commute and r.injective

    @pytest.mark.parametrize("cls, j, t", [x for x in TRUNCATIONS if x[1] >= 2])
    def test_centrality(self, cls, j, t):
        r = uv_subgroup_checks(cls, j, t, modulus=4)
        assert r.central_trivial_rational and r.central_trivial_modular

    @pytest.mark.parametrize("cls, t", [("b", 1), ("c", 1), ("d", 1), ("d", 2)])
    def test_centrality_fails_at_j_one(self, cls, t):
        # one-element diagonal blocks carry no generators, so nothing constrains N
        r = uv_subgroup_checks(cls, 1, t)
        assert not r.central_trivial_rational

    @pytest.mark.parametrize("cls, j, t", [("b", 1, 1), ("b", 2, 1), ("c", 2, 1), ("d", 2, 2)])
    def test_centrality_brute_force(self, cls, j, t):
        """Enumerate every upper-block matrix mod 2 and count those commuting
        with all diagonal-block generators."""
        m = index_model(cls, j, t)
        blocks = [lab[0] for lab in m.labels]
        order = m.placement.block_order
        slots = [(r, c) for r in range(m.size) for c in range(m.size)
                 if order.index(blocks[r]) < order.index(blocks[c])]
        gens = [m.matrix(p, 1, 0, 1) for p in m.pairs
                if m.labels[m.position(p)[0]][0] == m.labels[m.position(p)[1]][0]]
        central = 0
        for vals in itertools.product(range(2), repeat=len(slots)):
            n = np.eye(m.size, dtype=np.int64)
            for (r, c), x in zip(slots, vals):
                n[r, c] = x
            if all(np.array_equal(n.dot(g) % 2, g.dot(n) % 2) for g in gens):
                central += 1
        assert (central == 1) == uv_subgroup_checks(cls, j, t, modulus=2).central_trivial_modular


def zones_oracle(m, j0):
    adm = set()
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            if a == b:
                continue
            z1 = a < j0 and b < j0
            z2 = a >= j0 and b < j0
            z3 = j0 <= a < m and j0 <= b < m
            z4 = a == m and b < m
            if z1 or z2 or z3 or z4:
                adm.add((a, b))
    return adm


class TestSpecquad:
    def test_membership(self):
        z = specquad_zones(5, 3)
        assert z.admissible(1, 2)
        assert not z.admissible(2, 5)
        assert z.admissible(5, 1)

    @pytest.mark.parametrize("m", range(3, 9))
    def test_zones_match_definition(self, m):
        for j0 in range(2, m):
            assert specquad_zones(m, j0).admissible_pairs() == zones_oracle(m, j0)

    @pytest.mark.parametrize("m, j0, failures", [
        (5, 3, [(1, 2), (2, 1), (3, 4), (4, 3)]),
        (6, 3, [(1, 2), (2, 1)]),
        (7, 4, []),
        (8, 4, []),
        (8, 5, []),
    ])
    def test_composability(self, m, j0, failures):
        assert specquad_zones(m, j0).composability_failures() == failures

    def test_composability_with_large_zones(self):
        # needs both j0 - 1 >= 3 and m - j0 >= 3; m, j0, m - j0 >= 3 alone is not enough
        for m in range(3, 11):
            for j0 in range(2, m):
                if j0 - 1 >= 3 and m - j0 >= 3:
                    assert specquad_zones(m, j0).composability_failures() == []

    @pytest.mark.parametrize("m, j0", [(5, 1), (5, 5), (3, 0)])
    def test_rejects(self, m, j0):
        with pytest.raises(SteinbergError):
            specquad_zones(m, j0)
