"""Lattice polytopes given by vertices and facet support forms."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .intlin import (
    AffineChart,
    content,
    det,
    dot,
    identity,
    kernel_form,
    normalize_affine_lattice,
    rank,
    saturation,
    vsub,
)


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    """Support form ``<normal, x> >= offset`` of a facet."""

    normal: tuple
    offset: int
    id: int

    def height(self, x) -> int:
        return dot(self.normal, x) - self.offset

    def pairing(self, v) -> int:
        """Value of the linear form on a vector (no offset)."""
        return dot(self.normal, v)


@dataclass(eq=False)
class Polytope:
    """A lattice polytope in normalized coordinates.

    The lattice points affinely generate ``Z^dim``; ``chart`` maps these
    coordinates back to the caller's ambient space.
    """

    dim: int
    vertices: tuple
    facets: tuple
    chart: AffineChart
    _points: Optional[tuple] = field(default=None, repr=False)
    _point_source: Optional[Callable[[], Iterable[tuple]]] = field(default=None, repr=False)

    @property
    def lattice_points(self) -> tuple:
        if self._points is None:
            if self._point_source is not None:
                pts = self._point_source()
            else:
                pts = _enumerate_points(self.vertices, self.facets, self.dim)
            self._points = tuple(sorted(set(pts)))
        return self._points

    def contains(self, x) -> bool:
        return all(f.height(x) >= 0 for f in self.facets)

    def contains_scaled(self, x, d: int) -> bool:
        """Membership of ``x`` in the dilation ``d * P``."""
        return all(f.pairing(x) - d * f.offset >= 0 for f in self.facets)

    def facet(self, fid: int) -> Facet:
        f = self.facets[fid]
        assert f.id == fid
        return f

    def facets_through(self, x) -> frozenset:
        return frozenset(f.id for f in self.facets if f.height(x) == 0)

    def to_ambient(self, x):
        return self.chart.to_ambient(x)

    def describe(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"a": list(f.normal), "b": f.offset} for f in self.facets],
        }

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, vertices={list(self.vertices)})"


def height(p: Polytope, f: Facet, x) -> int:
    return f.height(x)


def _enumerate_points(vertices, facets, dim):
    if dim == 0:
        return [()]
    lo = [min(v[i] for v in vertices) for i in range(dim)]
    hi = [max(v[i] for v in vertices) for i in range(dim)]
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [x for x in itertools.product(*ranges)
            if all(dot(f.normal, x) >= f.offset for f in facets)]


def _hull_forms(points, d) -> list[tuple[tuple, int]]:
    """Facet inequalities of a full-dimensional point set in ``Z^d``.

    Every affinely independent ``d``-subset spans a candidate hyperplane;
    it is kept when all points lie weakly on one side. Fine for the small
    vertex counts used here.
    """
    if d == 0:
        return []
    forms = set()
    for subset in itertools.combinations(points, d):
        if rank([vsub(q, subset[0]) for q in subset[1:]]) != d - 1:
            continue
        a = kernel_form(subset)
        b = dot(a, subset[0])
        vals = [dot(a, x) - b for x in points]
        if all(v >= 0 for v in vals):
            forms.add((a, b))
        elif all(v <= 0 for v in vals):
            forms.add((tuple(-x for x in a), -b))
    return list(forms)


def _order_facets(forms) -> tuple:
    forms = sorted(forms, key=lambda ab: (ab[0], ab[1]), reverse=True)
    return tuple(Facet(tuple(a), b, i) for i, (a, b) in enumerate(forms))


def _keep_order(forms) -> tuple:
    return tuple(Facet(tuple(a), b, i) for i, (a, b) in enumerate(forms))


def _true_vertices(points, facets, d) -> tuple:
    verts = []
    for x in points:
        tight = [f.normal for f in facets if f.height(x) == 0]
        if rank(tight) == d:
            verts.append(tuple(x))
    return tuple(sorted(set(verts)))


def _transform_forms(forms, chart: AffineChart):
    """Pull back inequalities ``<a,y> >= b`` along ``y = chart.to_ambient(c)``."""
    out = []
    for a, b in forms:
        a2 = tuple(dot(a, row) for row in chart.basis)
        b2 = b - dot(a, chart.origin)
        g = content(a2)
        if g == 0:
            continue
        # b2 is attained on a lattice point, hence divisible by g
        out.append((tuple(x // g for x in a2), -((-b2) // g)))
    return out


def build_polytope(vertices, facets=None) -> Polytope:
    """Build a normalized lattice polytope from its vertices.

    ``facets`` (pairs ``(a, b)`` meaning ``<a, x> >= b``) are required when
    the affine dimension exceeds 3 and are verified before being accepted.
    Repeated or non-vertex input points are dropped with a warning.
    """
    pts = [tuple(int(c) for c in v) for v in vertices]
    if not pts:
        raise PolytopeError("empty vertex list")
    n = len(pts[0])
    if any(len(v) != n for v in pts):
        raise PolytopeError("vertices of mixed length")
    uniq = sorted(set(pts))
    if len(uniq) < len(pts):
        warnings.warn("repeated vertices removed", stacklevel=2)

    base = saturation([vsub(v, uniq[0]) for v in uniq[1:]])
    d = len(base)
    full = d == n
    if full:
        # keep ambient coordinates when full dimensional
        chart0 = AffineChart((0,) * n, tuple(tuple(r) for r in identity(n)))
    else:
        chart0 = AffineChart(uniq[0], tuple(base))
    local = [chart0.to_local(v) for v in uniq]

    if facets is not None:
        forms = [(tuple(int(c) for c in a), int(b)) for a, b in facets]
        if not full:
            forms = _transform_forms(forms, chart0)
        _verify_supplied_forms(local, forms, d)
    elif d > 3:
        raise PolytopeError(f"dimension {d} > 3 requires supplied facets")
    else:
        forms = _hull_forms(local, d)

    # supplied facets keep their order (and hence their ids)
    order = _order_facets if facets is None else _keep_order
    proto = order(forms)
    points = _enumerate_points(local, proto, d)
    chart1, _ = normalize_affine_lattice(points)
    if not chart1.is_identity:
        local = [chart1.to_local(v) for v in local]
        points = [chart1.to_local(x) for x in points]
        forms = _hull_forms(local, d) if facets is None else _transform_forms(forms, chart1)
        proto = order(forms)
        chart0 = chart0.compose(chart1)
    verts = _true_vertices(local, proto, d)
    if len(verts) < len(local):
        warnings.warn("non-vertex input points removed", stacklevel=2)
    return Polytope(d, verts, proto, chart0, tuple(sorted(points)))


def _verify_supplied_forms(local, forms, d):
    for a, b in forms:
        if len(a) != d:
            raise PolytopeError(f"facet form {a} has wrong length")
        if content(a) != 1:
            raise PolytopeError(f"facet form {a} is not primitive")
        vals = [dot(a, x) - b for x in local]
        if min(vals) != 0:
            raise PolytopeError(f"inequality {a} >= {b} is not a supporting hyperplane")
        tight = [x for x, v in zip(local, vals) if v == 0]
        if rank([vsub(x, tight[0]) for x in tight[1:]]) != d - 1:
            raise PolytopeError(f"inequality {a} >= {b} does not cut out a facet")
    for x in local:
        tight = [a for a, b in forms if dot(a, x) == b]
        if rank(tight) != d:
            raise PolytopeError(f"supplied facets do not describe the hull at {x}")


def polytope_from_forms(dim, vertices, forms, chart=None, point_source=None) -> Polytope:
    """Assemble a polytope from analytically known data (no hull computation)."""
    facets = tuple(Facet(tuple(a), b, i) for i, (a, b) in enumerate(forms))
    if chart is None:
        chart = AffineChart((0,) * dim, tuple(tuple(r) for r in identity(dim)))
    return Polytope(dim, tuple(sorted(set(map(tuple, vertices)))), facets, chart,
                    None, point_source)


def rebuild_from_inequalities(p: Polytope) -> Polytope:
    """Recompute the vertex set from the facet inequalities alone."""
    pts = _enumerate_points(p.vertices, p.facets, p.dim)
    verts = _true_vertices(pts, p.facets, p.dim)
    return Polytope(p.dim, verts, p.facets, p.chart, tuple(sorted(pts)))


# normal fans

@dataclass(frozen=True)
class NormalFan:
    """Maximal cones given by the facet normals tight at each vertex."""

    normals: frozenset
    cones: frozenset  # frozensets of normals

    def is_complete(self) -> bool:
        if set().union(*self.cones) != set(self.normals):
            return False
        # every ridge of the fan (edge of the polytope) lies in exactly two cones
        d = len(next(iter(self.normals))) if self.normals else 0
        cones = list(self.cones)
        for c1, c2 in itertools.combinations(cones, 2):
            common = c1 & c2
            if common and rank(list(common)) == d - 1:
                if sum(1 for c in cones if common <= c) != 2:
                    return False
        return True


def normal_fan(p: Polytope) -> NormalFan:
    cones = []
    for v in p.vertices:
        cones.append(frozenset(f.normal for f in p.facets if f.height(v) == 0))
    return NormalFan(frozenset(f.normal for f in p.facets), frozenset(cones))


def fans_equal(f1: NormalFan, f2: NormalFan) -> bool:
    return f1.normals == f2.normals and f1.cones == f2.cones


# symmetries

@dataclass(frozen=True)
class AffineMap:
    """``x -> linear @ x + translation`` with integer entries."""

    linear: tuple
    translation: tuple

    def __call__(self, x):
        return tuple(dot(row, x) + t for row, t in zip(self.linear, self.translation))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self ∘ other``."""
        n = len(other.linear[0]) if other.linear else 0
        lin = tuple(tuple(sum(self.linear[i][k] * other.linear[k][j]
                              for k in range(len(other.linear)))
                          for j in range(n)) for i in range(len(self.linear)))
        return AffineMap(lin, self(other.translation))

    @property
    def is_identity(self) -> bool:
        n = len(self.translation)
        return (not any(self.translation)
                and all(self.linear[i][j] == int(i == j) for i in range(n) for j in range(n)))


def _affine_basis(points):
    chosen = [points[0]]
    n = len(points[0])
    for x in points[1:]:
        if len(chosen) == n + 1:
            break
        cand = chosen + [x]
        if rank([vsub(q, cand[0]) for q in cand[1:]]) == len(cand) - 1:
            chosen = cand
    return chosen


def _solve_affine(src, dst) -> Optional[AffineMap]:
    """Integer affine map sending ``src[i]`` to ``dst[i]`` (src an affine basis)."""
    d = len(src) - 1
    x = [[Fraction(c) for c in vsub(s, src[0])] for s in src[1:]]
    y = [vsub(t, dst[0]) for t in dst[1:]]
    # solve M x_k = y_k for all k, i.e. X M^T = Y with X rows x_k
    inv = _rational_inverse(x)
    m_t = [[sum(inv[i][k] * y[k][j] for k in range(d)) for j in range(len(y[0]))]
           for i in range(d)]
    m = [[m_t[i][j] for i in range(d)] for j in range(len(y[0]))]
    if any(c.denominator != 1 for row in m for c in row):
        return None
    lin = tuple(tuple(int(c) for c in row) for row in m)
    t = tuple(b - dot(row, src[0]) for row, b in zip(lin, dst[0]))
    return AffineMap(lin, t)


def _rational_inverse(m):
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _det_abs_one(lin) -> bool:
    return abs(det([list(r) for r in lin])) == 1


def lattice_isomorphisms(p: Polytope, q: Polytope, first_only: bool = False) -> list[AffineMap]:
    """All affine unimodular maps carrying ``p`` onto ``q``."""
    if p.dim != q.dim or len(p.vertices) != len(q.vertices):
        return []
    if p.dim == 0:
        return [AffineMap((), ())]
    src = _affine_basis(list(p.vertices))
    targets = set(q.vertices)
    found = []
    for img in itertools.permutations(q.vertices, len(src)):
        m = _solve_affine(src, list(img))
        if m is None or not _det_abs_one(m.linear):
            continue
        if {m(v) for v in p.vertices} != targets:
            continue
        found.append(m)
        if first_only:
            break
    return found


def find_isomorphism(p: Polytope, q: Polytope) -> Optional[AffineMap]:
    maps = lattice_isomorphisms(p, q, first_only=True)
    return maps[0] if maps else None


def lattice_symmetries(p: Polytope) -> list[AffineMap]:
    return lattice_isomorphisms(p, p)


def product_polytope(p: Polytope, q: Polytope) -> Polytope:
    """Cartesian product with facets ``F x Q`` then ``P x G``."""
    dp, dq = p.dim, q.dim
    verts = [tuple(a) + tuple(b) for a in p.vertices for b in q.vertices]
    forms = [(f.normal + (0,) * dq, f.offset) for f in p.facets]
    forms += [((0,) * dp + g.normal, g.offset) for g in q.facets]

    def points():
        return [a + b for a in p.lattice_points for b in q.lattice_points]

    return polytope_from_forms(dp + dq, verts, forms, point_source=points)
