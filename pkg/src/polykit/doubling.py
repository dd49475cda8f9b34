"""Doubling a polytope along a facet, doubling spectra, and the maps
relating different doubling orders.

Model used throughout: for a facet ``F`` of ``P`` with form ``a_F`` fix a
pivot ``p'`` with ``<a_F, p'> = 1``. Then

    P^□_F = {(z - t p', t) : z in P, 0 <= t <= ht_F(z)}  in  R^(n+1).

The bottom copy ``t = 0`` is ``P`` itself and the copy of ``P`` rotated
about ``F`` consists of the points ``(x - ht_F(x) p', ht_F(x))``. Every facet
form of the result is known in closed form, so no hull is ever computed in
high dimension.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .columns import ColumnError, ColumnTable, ColumnVector, column_criterion, column_vectors
from .intlin import det, dot, rank, solve_unit_value, vadd, vscale, vsub
from .polytope import AffineMap, Facet, Polytope, polytope_from_forms, _solve_affine, _affine_basis


class DoublingError(ValueError):
    pass


def pad(x, k: int = 1) -> tuple:
    return tuple(x) + (0,) * k


def column_key(v) -> tuple:
    """Identity of a column across a spectrum: the vector without trailing zeros."""
    v = list(v)
    while v and v[-1] == 0:
        v.pop()
    return tuple(v)


@dataclass
class DoubledPolytope:
    parent: Polytope
    facet_used: int
    result: Polytope
    pivot: tuple
    psi: dict  # parent facet id -> result facet id, for G != F
    minus_facet: int
    bar_facet: int
    delta_plus: ColumnVector
    delta_minus: ColumnVector

    def embed_minus(self, x) -> tuple:
        return pad(x)

    def embed_bar(self, x) -> tuple:
        h = self.parent.facet(self.facet_used).height(x)
        return vsub(x, vscale(h, self.pivot)) + (h,)

    def lift_minus(self, c: ColumnVector) -> ColumnVector:
        base = self.bar_facet if c.base == self.facet_used else self.psi[c.base]
        return ColumnVector(pad(c.v), base)

    def lift_bar(self, c: ColumnVector) -> ColumnVector:
        s = self.parent.facet(self.facet_used).pairing(c.v)
        base = self.minus_facet if c.base == self.facet_used else self.psi[c.base]
        return ColumnVector(vsub(c.v, vscale(s, self.pivot)) + (s,), base)


def double(p: Polytope, f, pivot=None, verify: bool = True) -> DoubledPolytope:
    """Double ``p`` along facet ``f`` (a :class:`Facet` or a facet id)."""
    fid = f.id if isinstance(f, Facet) else int(f)
    if not 0 <= fid < len(p.facets):
        raise DoublingError(f"{f!r} is not a facet of the polytope")
    F = p.facet(fid)
    if isinstance(f, Facet) and (f.normal, f.offset) != (F.normal, F.offset):
        raise DoublingError(f"{f!r} is not a facet of the polytope")
    piv = tuple(pivot) if pivot is not None else solve_unit_value(F.normal)
    if dot(F.normal, piv) != 1:
        raise DoublingError(f"pivot {piv} does not take value 1 on the facet form")

    forms = []
    for g in p.facets:
        if g.id == fid:
            forms.append((F.normal + (0,), F.offset))
        else:
            forms.append((g.normal + (dot(g.normal, piv),), g.offset))
    forms.append(((0,) * p.dim + (1,), 0))

    verts = set()
    for v in p.vertices:
        h = F.height(v)
        verts.add(pad(v))
        verts.add(vsub(v, vscale(h, piv)) + (h,))

    def points():
        out = []
        for x in p.lattice_points:
            for t in range(F.height(x) + 1):
                out.append(vsub(x, vscale(t, piv)) + (t,))
        return out

    result = polytope_from_forms(p.dim + 1, verts, forms, point_source=points)
    if verify:
        _verify_vertex_forms(result)
    minus_id = len(p.facets)
    dplus = ColumnVector(tuple(-c for c in piv) + (1,), fid)
    dminus = ColumnVector(piv + (-1,), minus_id)
    psi = {g.id: g.id for g in p.facets if g.id != fid}
    return DoubledPolytope(p, fid, result, piv, psi, minus_id, fid, dplus, dminus)


def _verify_vertex_forms(p: Polytope):
    """Each form is a supporting hyperplane cutting out a facet of the hull
    of the vertices, and every vertex is cut out by its tight forms."""
    verts = p.vertices
    for f in p.facets:
        vals = [f.height(v) for v in verts]
        if min(vals) != 0:
            raise DoublingError(f"form {f} does not support the doubled polytope")
        tight = [v for v, h in zip(verts, vals) if h == 0]
        if rank([vsub(v, tight[0]) for v in tight[1:]]) != p.dim - 1:
            raise DoublingError(f"form {f} does not cut out a facet")


def doubling_equation_violations(d: DoubledPolytope) -> list[str]:
    """Check the pairing identities of a doubling; returns the failures."""
    bad = []
    res = d.result
    dp, dm = d.delta_plus.v, d.delta_minus.v
    if vadd(dp, dm) != (0,) * res.dim:
        bad.append("delta_minus != -delta_plus")
    for g, rg in d.psi.items():
        G = res.facet(rg)
        if G.pairing(dp) != 0 or G.pairing(dm) != 0:
            bad.append(f"Psi({g}) does not vanish on delta")
        for x in d.parent.lattice_points:
            if d.parent.facet(g).pairing(x) != G.pairing(pad(x)):
                bad.append(f"Psi({g}) does not extend facet {g} at {x}")
                break
    if res.facet(d.minus_facet).pairing(dp) != 1:
        bad.append("<P^-, delta+> != 1")
    if res.facet(d.bar_facet).pairing(dm) != 1:
        bad.append("<P^|, delta-> != 1")
    if res.facet(d.bar_facet).pairing(dp) != -1 or res.facet(d.minus_facet).pairing(dm) != -1:
        bad.append("delta vectors have the wrong base facets")
    return bad


@dataclass
class LiftedColumns:
    table: ColumnTable
    provenance: dict  # vector -> sorted tuple of tags
    complete: bool  # parent balanced and the doubled facet is a base facet


def lift_columns(d: DoubledPolytope, parent_table: Optional[ColumnTable] = None,
                 balanced: Optional[bool] = None) -> LiftedColumns:
    """``Col(P)^- ∪ Col(P)^| ∪ {δ+, δ-}`` as a column table of the result.

    This is all of ``Col`` of the result when the parent is balanced and
    the doubled facet is the base facet of some column. Doubling a balanced
    polytope along any other facet can create further columns (the top
    facet of ``P_c`` gives ``(1, 0, 1)``), so ``complete`` is False there.
    Pass ``balanced`` to skip recomputing the parent flag.
    """
    from .classify import is_balanced

    parent_table = parent_table if parent_table is not None else column_vectors(d.parent)
    cols: dict = {}
    tags: dict = {}

    def add(c: ColumnVector, tag: str):
        old = cols.get(c.v)
        if old is not None and old.base != c.base:
            raise ColumnError(f"{c.v} lifted with two different base facets")
        cols[c.v] = c
        tags.setdefault(c.v, set()).add(tag)

    for c in parent_table:
        add(d.lift_minus(c), "minus")
        add(d.lift_bar(c), "bar")
    add(d.delta_plus, "delta+")
    add(d.delta_minus, "delta-")
    table = ColumnTable(d.result, tuple(cols.values()))
    prov = {v: tuple(sorted(t)) for v, t in tags.items()}
    if balanced is None:
        balanced = is_balanced(d.parent, parent_table)
    complete = balanced and d.facet_used in parent_table.base_facets()
    return LiftedColumns(table, prov, complete)


def extra_columns(d: DoubledPolytope, lifted: Optional[LiftedColumns] = None) -> list[tuple]:
    """Columns of the doubled polytope not predicted by :func:`lift_columns`."""
    lifted = lifted or lift_columns(d)
    actual = column_vectors(d.result)
    return [v for v in actual.vectors() if v not in lifted.table]


# spectra

@dataclass
class SpectrumNode:
    index: int
    polytope: Polytope
    table: ColumnTable
    provenance: dict = field(default_factory=dict)
    facet_used: Optional[int] = None  # facet of the previous node
    pivot: Optional[tuple] = None
    decomposed: Optional[tuple] = None  # key of the column whose base was doubled
    doubling: Optional[DoubledPolytope] = None

    def column(self, key) -> ColumnVector:
        v = tuple(key) + (0,) * (self.polytope.dim - len(key))
        c = self.table.get(v)
        if c is None:
            raise KeyError(key)
        return c


@dataclass
class Spectrum:
    nodes: list
    ledger: dict  # column key -> steps at which its base facet was doubled

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]


def spectrum(p: Polytope, depth: int, verify: bool = True) -> Spectrum:
    """First ``depth`` steps of a doubling spectrum of a balanced polytope.

    Columns are scheduled on a FIFO queue: the popped column's base facet
    is doubled, newly created columns are queued in lexicographic order and
    the popped column goes to the back, so every column keeps coming back.
    Node 0 is ``p`` itself.
    """
    from .classify import is_balanced

    table = column_vectors(p)
    if not len(table):
        raise DoublingError("polytope has no column vectors")
    if not is_balanced(p, table):
        raise DoublingError("spectra are only built for balanced polytopes")
    nodes = [SpectrumNode(0, p, table, {c.v: ("seed",) for c in table})]
    queue = deque(column_key(c.v) for c in table)
    known = set(queue)
    ledger = {k: [] for k in queue}
    for step in range(1, depth + 1):
        cur = nodes[-1]
        key = queue.popleft()
        fid = cur.column(key).base
        for c in cur.table.with_base(fid):
            ledger.setdefault(column_key(c.v), []).append(step)
        d = double(cur.polytope, fid, verify=verify)
        # balanced parents stay balanced under doubling
        lifted = lift_columns(d, cur.table, balanced=True)
        for c in lifted.table:
            k = column_key(c.v)
            if k not in known:
                known.add(k)
                queue.append(k)
                ledger.setdefault(k, [])
        queue.append(key)
        nodes.append(SpectrumNode(step, d.result, lifted.table, lifted.provenance,
                                  fid, d.pivot, key, d))
    return Spectrum(nodes, ledger)


def double_chain(p: Polytope, facet_ids) -> list[DoubledPolytope]:
    """Double successively along the given ids (later ids refer to the
    Ψ-images, which keep their ids)."""
    chain = []
    cur = p
    for fid in facet_ids:
        d = double(cur, fid)
        chain.append(d)
        cur = d.result
    return chain


# reordering

@dataclass
class ReorderIso:
    source: list  # chain of doublings in the given order
    target: list  # chain in the permuted order
    mapping: dict  # lattice point -> lattice point
    affine: AffineMap
    facet_map: dict  # source facet id -> target facet id


def reorder_iso(p: Polytope, facets, sigma) -> ReorderIso:
    """Lattice isomorphism between doublings of ``p`` along ``facets`` in the
    given order and in the order ``facets[sigma[0]], facets[sigma[1]], ...``.

    The heights over the doubled facets are read off by descending along
    ``δ-`` and then re-applied along ``δ+`` of the permuted chain.
    """
    facets = [f.id if isinstance(f, Facet) else int(f) for f in facets]
    m = len(facets)
    sigma = list(sigma)
    if sorted(sigma) != list(range(m)):
        raise DoublingError(f"{sigma} is not a permutation of {m} elements")
    if len(set(facets)) != m:
        raise DoublingError("facets must be distinct")
    src = double_chain(p, facets)
    dst = double_chain(p, [facets[s] for s in sigma])
    a_top = src[-1].result if src else p
    b_top = dst[-1].result if dst else p

    mapping = {}
    for x in a_top.lattice_points:
        heights = [0] * m
        y = x
        for i in range(m - 1, -1, -1):
            h = y[-1]
            heights[i] = h
            y = vadd(y, vscale(h, src[i].delta_minus.v))[:-1]
        z = y
        for k in range(m):
            z = vadd(pad(z), vscale(heights[sigma[k]], dst[k].delta_plus.v))
            if not dst[k].result.contains(z):
                raise DoublingError(f"reordering left the polytope at step {k} from {x}")
        mapping[x] = z

    if set(mapping.values()) != set(b_top.lattice_points) or len(set(mapping.values())) != len(mapping):
        raise DoublingError("reordering is not a bijection of lattice points")
    n0 = len(p.facets)
    facet_map = {i: i for i in range(n0)}
    for k in range(m):
        facet_map[n0 + sigma[k]] = n0 + k
    pts = list(mapping)
    basis = _affine_basis(pts)
    aff = _solve_affine(basis, [mapping[b] for b in basis])
    if aff is None or any(aff(x) != mapping[x] for x in pts):
        raise DoublingError("reordering is not an affine lattice map")
    if abs(det([list(r) for r in aff.linear])) != 1:
        raise DoublingError("reordering is not unimodular")
    for x, z in mapping.items():
        for g in a_top.facets:
            if g.height(x) != b_top.facet(facet_map[g.id]).height(z):
                raise DoublingError("reordering does not preserve facet heights")
    return ReorderIso(src, dst, mapping, aff, facet_map)


# facetize

@dataclass
class FacetizeChain:
    points: list
    polytope: Polytope
    doublings: list
    bases: list  # facet ids (stable along the chain) of the requested columns


def facetize(p: Polytope, x, vs) -> FacetizeChain:
    """Move ``x`` onto the extended base facets of the columns ``vs`` by
    doubling along each base in turn and climbing ``ht`` times along ``δ+``."""
    x = tuple(x)
    if not p.contains(x):
        raise DoublingError(f"{x} is not a lattice point of the polytope")
    cur = p
    chain = [x]
    doublings = []
    bases = []
    for c in vs:
        v = pad(c.v, cur.dim - len(c.v))
        g = column_criterion(cur, v)
        if g is None:
            raise DoublingError(f"{c.v} is not a column vector along the chain")
        d = double(cur, g.id)
        h = cur.facet(g.id).height(chain[-1])
        chain.append(vadd(pad(chain[-1]), vscale(h, d.delta_plus.v)))
        doublings.append(d)
        bases.append(g.id)
        cur = d.result
    y = chain[-1]
    if not cur.contains(y):
        raise DoublingError("facetize left the polytope")
    for fid in bases:
        if cur.facet(fid).height(y) != 0:
            raise DoublingError(f"final point not on facet {fid}")
    # each step moves along a multiple of δ+, itself a column of the final polytope
    for d, a, b in zip(doublings, chain, chain[1:]):
        delta = pad(d.delta_plus.v, cur.dim - d.result.dim)
        if column_criterion(cur, delta) is None:
            raise DoublingError("δ+ is not a column of the final polytope")
        diff = vsub(b, pad(a))
        diff = pad(diff, cur.dim - len(diff))
        k = next((diff[i] // delta[i] for i in range(len(delta)) if delta[i]), 0)
        if diff != vscale(k, delta) or k < 0:
            raise DoublingError("facetize step is not a nonnegative multiple of δ+")
    return FacetizeChain(chain, cur, doublings, bases)
