"""Balanced polytopes, the polygon classifier, and equivalence tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .columns import ColumnTable, column_vectors, is_invertible
from .polytope import Polytope, fans_equal, normal_fan


class ClassifyError(ValueError):
    pass


def is_balanced(p: Polytope, table: Optional[ColumnTable] = None) -> bool:
    """``<base(u), v> <= 1`` for all columns ``u, v``.

    Since every column pairs to ``-1`` with its own base facet and to
    ``>= 0`` with all others, this agrees with ``|<base(u), v>| <= 1``;
    both forms are evaluated and compared.
    """
    table = table if table is not None else column_vectors(p)
    upper = True
    absolute = True
    for fid in table.base_facets():
        f = p.facet(fid)
        for c in table:
            s = f.pairing(c.v)
            upper &= s <= 1
            absolute &= abs(s) <= 1
    if upper != absolute:
        raise ClassifyError("balancedness criteria disagree")
    return upper


@dataclass(frozen=True)
class PolygonClass:
    tag: str
    count: int = 0
    witness: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def key(self) -> tuple:
        return (self.tag, self.count) if self.tag == "d" else (self.tag,)

    def __str__(self):
        return f"{self.tag} (count {self.count})" if self.tag == "d" else self.tag


def _signature_matches(p: Polytope, table: ColumnTable) -> list[PolygonClass]:
    cols = list(table)
    vecs = {c.v for c in cols}
    n = len(cols)
    prods = [(cols[i], cols[j], cols[k]) for (i, j), k in table.products.items()]
    pairs = [c for c in cols if tuple(-x for x in c.v) in vecs]
    bases = {c.base for c in cols}
    out = []

    if n == 6 and all(is_invertible(p, c) for c in cols):
        out.append(PolygonClass("a", n, {"columns": [c.v for c in cols]}))

    if n == 4 and len(pairs) == 2 and len(prods) == 2:
        rest = [c for c in cols if c not in pairs]
        for v in pairs:
            mv = table.get(tuple(-x for x in v.v))
            for u, w in (rest, rest[::-1]):
                if table.product(u, v) == w and table.product(w, mv) == u:
                    out.append(PolygonClass("b", n, {"u": u.v, "v": v.v, "w": w.v}))
                    break
            else:
                continue
            break

    if n == 3 and not pairs and len(prods) == 1:
        u, v, w = prods[0]
        out.append(PolygonClass("c", n, {"u": u.v, "v": v.v, "w": w.v}))

    if n >= 1 and len(bases) == 1 and not prods:
        out.append(PolygonClass("d", n, {"base": next(iter(bases)),
                                         "columns": [c.v for c in cols]}))

    if n == 4 and len(pairs) == 4 and not prods and len(bases) == 4:
        out.append(PolygonClass("e", n, {"columns": [c.v for c in cols]}))

    if n == 2 and not pairs and not prods and len(bases) == 2:
        out.append(PolygonClass("f", n, {"columns": [c.v for c in cols]}))
    return out


def classify_polygon(p: Polytope, table: Optional[ColumnTable] = None) -> PolygonClass:
    """Class of a lattice polygon determined by its columns and products."""
    if p.dim != 2:
        raise ClassifyError(f"classification needs a polygon, got dimension {p.dim}")
    table = table if table is not None else column_vectors(p)
    if not len(table):
        return PolygonClass("no_columns")
    if not is_balanced(p, table):
        return PolygonClass("not_balanced", len(table))
    matches = _signature_matches(p, table)
    if len(matches) != 1:
        raise ClassifyError(
            f"balanced polygon matched {len(matches)} classes: {[m.tag for m in matches]}")
    return matches[0]


def e_equivalent(p: Polytope, q: Polytope, tp: Optional[ColumnTable] = None,
                 tq: Optional[ColumnTable] = None) -> Optional[dict]:
    """First bijection ``Col(P) -> Col(Q)`` (in canonical order) preserving
    base-facet heights and products, or ``None``."""
    tp = tp if tp is not None else column_vectors(p)
    tq = tq if tq is not None else column_vectors(q)
    for poly, t in ((p, tp), (q, tq)):
        if not len(t):
            raise ClassifyError("E-equivalence needs nonempty column sets")
        if not is_balanced(poly, t):
            raise ClassifyError("E-equivalence is only defined for balanced polytopes")
    if len(tp) != len(tq):
        return None
    cp, cq = list(tp), list(tq)
    n = len(cp)
    hp = [[p.facet(w.base).pairing(v.v) for v in cp] for w in cp]
    hq = [[q.facet(w.base).pairing(v.v) for v in cq] for w in cq]
    pp = {(i, j): k for (i, j), k in tp.products.items()}
    pq = {(i, j): k for (i, j), k in tq.products.items()}

    assign = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        a = assign[i]
        for j in range(i + 1):
            b = assign[j]
            if hp[i][j] != hq[a][b] or hp[j][i] != hq[b][a]:
                return False
            for x, y in ((i, j), (j, i)):
                kp = pp.get((x, y))
                kq = pq.get((assign[x], assign[y]))
                if (kp is None) != (kq is None):
                    return False
                if kp is not None and kp <= i and assign[kp] != kq:
                    return False
        # products landing on i from earlier pairs
        for (x, y), k in pp.items():
            if k == i and x <= i and y <= i and pq.get((assign[x], assign[y])) != a:
                return False
        return True

    def search(i: int) -> bool:
        if i == n:
            return True
        for a in range(n):
            if used[a]:
                continue
            assign[i] = a
            used[a] = True
            if consistent(i) and search(i + 1):
                return True
            used[a] = False
        assign[i] = -1
        return False

    if not search(0):
        return None
    return {cp[i].v: cq[assign[i]].v for i in range(n)}


def projectively_equivalent(p: Polytope, q: Polytope) -> bool:
    if p.dim != q.dim:
        raise ClassifyError("projective equivalence compares polytopes of equal dimension")
    return fans_equal(normal_fan(p), normal_fan(q))


def products_of(table: ColumnTable) -> list[tuple]:
    """Readable list of ``(u, v, uv)`` triples."""
    cols = table.columns
    return [(cols[i].v, cols[j].v, cols[k].v) for (i, j), k in sorted(table.products.items())]
