"""Column vectors of a lattice polytope and their partial product."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .intlin import vadd, vsub
from .polytope import Facet, Polytope


class ColumnError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ColumnVector:
    v: tuple
    base: int  # facet id


def column_criterion(p: Polytope, v) -> Optional[Facet]:
    """Facet ``F`` with ``<F,v> = -1`` and ``<G,v> >= 0`` for all other ``G``."""
    base = None
    for f in p.facets:
        s = f.pairing(v)
        if s == -1 and base is None:
            base = f
        elif s < 0:
            return None
    return base


def is_column_geometric(p: Polytope, v) -> Optional[Facet]:
    """Facet ``F`` such that ``x + v`` lies in ``P`` for every lattice point
    ``x`` of ``P`` off ``F``; ``None`` if there is no such facet."""
    v = tuple(v)
    if not any(v):
        raise ColumnError("the zero vector is never a column vector")
    points = p.lattice_points
    inside = set(points)
    for f in p.facets:
        off = [x for x in points if f.height(x) > 0]
        if off and all(vadd(x, v) in inside for x in off):
            # x + v must leave P for points on F, otherwise v is a translation
            # preserving L_P, which is impossible for v != 0
            return f
    return None


@dataclass
class ColumnTable:
    """``Col(P)`` in lexicographic order with its partial product."""

    polytope: Polytope
    columns: tuple
    _index: dict = field(default_factory=dict, repr=False)
    _products: Optional[dict] = field(default=None, repr=False)

    def __post_init__(self):
        self.columns = tuple(sorted(self.columns))
        self._index = {c.v: i for i, c in enumerate(self.columns)}

    def __len__(self):
        return len(self.columns)

    def __iter__(self):
        return iter(self.columns)

    def __contains__(self, v) -> bool:
        if isinstance(v, ColumnVector):
            v = v.v
        return tuple(v) in self._index

    def vectors(self) -> list:
        return [c.v for c in self.columns]

    def get(self, v) -> Optional[ColumnVector]:
        i = self._index.get(tuple(v))
        return None if i is None else self.columns[i]

    def index(self, v) -> int:
        return self._index[tuple(v.v if isinstance(v, ColumnVector) else v)]

    def product(self, u: ColumnVector, v: ColumnVector) -> Optional[ColumnVector]:
        s = vadd(u.v, v.v)
        if not any(s):
            return None
        if self.polytope.facet(v.base).pairing(u.v) <= 0:
            return None
        w = self.get(s)
        if w is None or w.base != u.base:
            raise ColumnError(f"product {u.v}*{v.v} violates the product criterion")
        return w

    @property
    def products(self) -> dict:
        """``(i, j) -> k`` whenever ``columns[i] * columns[j] = columns[k]``."""
        if self._products is None:
            out = {}
            for i, u in enumerate(self.columns):
                for j, v in enumerate(self.columns):
                    w = self.product(u, v)
                    if w is not None:
                        out[(i, j)] = self._index[w.v]
            self._products = out
        return self._products

    def heights(self) -> list[list[int]]:
        """``<F, v>`` for every column ``v`` (rows) and facet ``F`` (cols)."""
        return [[f.pairing(c.v) for f in self.polytope.facets] for c in self.columns]

    def base_facets(self) -> list[int]:
        return sorted({c.base for c in self.columns})

    def with_base(self, fid: int) -> list[ColumnVector]:
        return [c for c in self.columns if c.base == fid]


def column_vectors(p: Polytope) -> ColumnTable:
    """All column vectors of ``p``.

    For a column with base ``F`` and any lattice point ``x0`` off ``F`` the
    point ``x0 + v`` is again a lattice point, so the candidates
    ``x' - x0`` (with ``x0`` fixed per facet) are complete.
    """
    points = p.lattice_points
    found = {}
    for f in p.facets:
        x0 = next((x for x in points if f.height(x) > 0), None)
        if x0 is None:
            continue
        h0 = f.height(x0)
        for x in points:
            if f.height(x) != h0 - 1:
                continue
            v = vsub(x, x0)
            g = column_criterion(p, v)
            if g is not None and g.id == f.id:
                found[v] = ColumnVector(v, f.id)
    return ColumnTable(p, tuple(found.values()))


def product(p: Polytope, u: ColumnVector, v: ColumnVector, table: Optional[ColumnTable] = None):
    """``uv`` if it exists: requires ``u + v != 0`` and ``<base(v), u> > 0``."""
    s = vadd(u.v, v.v)
    if not any(s) or p.facet(v.base).pairing(u.v) <= 0:
        return None
    if table is not None:
        return table.product(u, v)
    g = column_criterion(p, s)
    if g is None or g.id != u.base:
        raise ColumnError(f"product {u.v}*{v.v} violates the product criterion")
    return ColumnVector(s, u.base)


def is_invertible(p: Polytope, v: ColumnVector) -> bool:
    """Whether ``-v`` is a column, cross-checked against the facet pattern
    (one facet at ``-1``, one at ``+1``, all others ``0``)."""
    neg = tuple(-x for x in v.v)
    direct = column_criterion(p, neg) is not None
    vals = sorted(f.pairing(v.v) for f in p.facets)
    pattern = vals.count(-1) == 1 and vals.count(1) == 1 and vals.count(0) == len(vals) - 2
    if direct != pattern:
        raise ColumnError(f"invertibility criteria disagree for {v.v}")
    return direct


@dataclass(frozen=True)
class CBMatrix:
    rows: tuple  # column vectors
    cols: tuple  # base facet ids
    entries: tuple

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def row(self, v) -> tuple:
        return self.entries[self.rows.index(tuple(v))]


def cb_matrix(p: Polytope, table: Optional[ColumnTable] = None) -> CBMatrix:
    table = table if table is not None else column_vectors(p)
    if not len(table):
        raise ColumnError("polytope has no column vectors")
    bases = table.base_facets()
    rows = tuple(c.v for c in table.columns)
    entries = tuple(tuple(p.facet(b).pairing(v) for b in bases) for v in rows)
    return CBMatrix(rows, tuple(bases), entries)
