"""Steinberg presentations of polytopes and block-matrix index models."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, gcd
from functools import lru_cache
from typing import Optional

import numpy as np

from .algebra import (
    AutoWord,
    Elementary,
    calibrate_convention,
    comrel_case,
    first_difference,
)
from .columns import ColumnTable
from .intlin import hermite_normal_form, vadd, vscale
from .polytope import Polytope
from .rings import SYMBOLIC, Poly, RingSpec


class SteinbergError(ValueError):
    pass


# presentations of a column table

@dataclass(frozen=True)
class Generator:
    """``x_v^s`` for a column ``v`` and a formal scalar ``s``."""

    column: tuple
    scalar: str


@dataclass(frozen=True)
class Relation:
    """``lhs = rhs``; words are tuples of ``(column vector, scalar)`` read as
    products of generators."""

    kind: str  # additivity | uv | vu | trivial
    u: tuple
    v: Optional[tuple]
    lhs: tuple
    rhs: tuple
    n: int = 0


@dataclass
class SteinbergPresentation:
    polytope: Polytope
    table: ColumnTable
    generators: list
    relations: list

    def counts(self) -> dict:
        out: dict = {}
        for r in self.relations:
            out[r.kind] = out.get(r.kind, 0) + 1
        return out


def _inv(word):
    return tuple((c, -s) for c, s in reversed(word))


def presentation(p: Polytope, table: ColumnTable, ring: RingSpec = SYMBOLIC) -> SteinbergPresentation:
    """Additivity for every column and one commutator relation per ordered
    pair ``(u, v)`` with ``u + v != 0``.

    ``[x_u^l, x_v^m]`` equals ``prod x_{u+iv}^{-C(n,i) l m^i}`` with
    ``n = <base v, u>`` when ``uv`` exists, the inverse of the mirrored
    product with ``n = <base u, v>`` when ``vu`` exists, and 1 otherwise.
    """
    lam, mu = ring.var("lambda"), ring.var("mu")
    gens = [Generator(c.v, "lambda") for c in table]
    rels = []
    for c in table:
        rels.append(Relation("additivity", c.v, None,
                             ((c.v, lam), (c.v, mu)), ((c.v, lam + mu),)))
    for u in table:
        for v in table:
            if u is v or not any(vadd(u.v, v.v)):
                continue
            case = comrel_case(p, table, u, v)
            lhs = ((u.v, lam), (v.v, mu), (u.v, -lam), (v.v, -mu))
            rhs: tuple = ()
            if case.kind == "uv":
                rhs = tuple((vadd(u.v, vscale(i, v.v)), -(lam * mu ** i) * comb(case.n, i))
                            for i in range(1, case.n + 1))
            elif case.kind == "vu":
                mirrored = tuple((vadd(v.v, vscale(i, u.v)), -(mu * lam ** i) * comb(case.n, i))
                                 for i in range(1, case.n + 1))
                rhs = _inv(mirrored)
            rels.append(Relation(case.kind, u.v, v.v, lhs, rhs, case.n))
    return SteinbergPresentation(p, table, gens, rels)


def word_to_auto(table: ColumnTable, word) -> AutoWord:
    letters = []
    for v, s in word:
        c = table.get(v)
        if c is None:
            raise SteinbergError(f"{v} is not a column of the node")
        letters.append(Elementary(c, s))
    return AutoWord(tuple(letters))


@dataclass
class RelationResult:
    relation: Relation
    passed: bool
    detail: Optional[tuple] = None


@dataclass
class PiReport:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]


def pi_check(pres: SteinbergPresentation, ring: RingSpec = SYMBOLIC) -> PiReport:
    """Map every relation to elementary automorphisms and compare both sides."""
    order, _ = calibrate_convention()
    p, table = pres.polytope, pres.table
    results = []
    for rel in pres.relations:
        lhs = word_to_auto(table, rel.lhs)
        rhs = word_to_auto(table, rel.rhs)
        if order == "ltr":
            lhs, rhs = lhs.reversed(), rhs.reversed()
        diff = first_difference(p, lhs, rhs, ring)
        results.append(RelationResult(rel, diff is None, diff))
    return PiReport(results)


# index models

BLOCK_KINDS = {
    "b": ("A", "B"),
    "c": ("A", "B", "O"),
    "d": ("A", "T"),
}


def index_labels(cls: str, j: int, t: int = 1) -> dict:
    """Index blocks: ``A = {1',..,j'}``, ``B = {1'',..,j''}``, the origin
    ``0`` and the rows ``0..t-1`` of ``R^t``."""
    if j < 1:
        raise SteinbergError("truncation j must be at least 1")
    blocks = {"A": [("A", i) for i in range(1, j + 1)]}
    if cls in ("b", "c"):
        blocks["B"] = [("B", i) for i in range(1, j + 1)]
    if cls == "c":
        blocks["O"] = [("O", 0)]
    if cls == "d":
        if t < 1:
            raise SteinbergError("class d needs t >= 1")
        blocks["T"] = [("T", i) for i in range(t)]
    if cls not in BLOCK_KINDS:
        raise SteinbergError(f"unknown class {cls!r}")
    return blocks


def index_set(cls: str, j: int, t: int = 1) -> list[tuple]:
    """Pairs ``(i, k)``, ``i != k``, for which a generator ``x_ik`` exists."""
    bl = index_labels(cls, j, t)
    A = bl["A"]
    pairs = list(itertools.product(A, A))
    if cls in ("b", "c"):
        B = bl["B"]
        pairs += list(itertools.product(B, A)) + list(itertools.product(B, B))
    if cls == "c":
        pairs += list(itertools.product(bl["O"], A)) + list(itertools.product(bl["O"], bl["B"]))
    if cls == "d":
        pairs += list(itertools.product(bl["T"], A))
    return [(i, k) for i, k in pairs if i != k]


def steinberg_relations(pairs) -> list[tuple]:
    """Commutator relations ``(g, h, rhs)`` between generators: ``rhs`` is
    ``None`` for the identity, else ``(pair, sign)`` meaning
    ``[x_g^lam, x_h^mu] = x_pair^{sign * lam * mu}``."""
    pset = set(pairs)
    out = []
    for g in pairs:
        for h in pairs:
            (i, jj), (k, l) = g, h
            if g == h:
                continue
            if jj == k and i == l:
                continue  # no relation between x_ij and x_ji
            if jj == k:
                target = (i, l)
                if target not in pset:
                    raise SteinbergError(f"index set not closed: {target}")
                out.append((g, h, (target, 1)))
            elif i == l:
                target = (k, jj)
                if target not in pset:
                    raise SteinbergError(f"index set not closed: {target}")
                out.append((g, h, (target, -1)))
            else:
                out.append((g, h, None))
    return out


@dataclass(frozen=True)
class Placement:
    transpose: bool  # x_ik sits at (k, i) instead of (i, k)
    anti: bool  # words map to products in reversed order
    block_order: tuple


@dataclass
class IndexModel:
    cls: str
    j: int
    t: int
    labels: list  # matrix row/column order
    pairs: list
    placement: Placement

    @property
    def size(self) -> int:
        return len(self.labels)

    def position(self, pair) -> tuple:
        i, k = pair
        if self.placement.transpose:
            i, k = k, i
        return self.labels.index(i), self.labels.index(k)

    def matrix(self, pair, lam, zero, one):
        """``I + lam * E`` at the placed position, as a numpy object or int array."""
        n = self.size
        if isinstance(lam, Poly):
            m = np.empty((n, n), dtype=object)
            for r in range(n):
                for c in range(n):
                    m[r, c] = one if r == c else zero
        else:
            m = np.eye(n, dtype=np.int64)
        r, c = self.position(pair)
        m[r, c] = lam
        return m

    def word_matrix(self, mats):
        """Product of generator matrices of a word under the placement."""
        seq = list(reversed(mats)) if self.placement.anti else list(mats)
        out = seq[0]
        for m in seq[1:]:
            out = out.dot(m)
        return out

    def block_of(self, label) -> str:
        return label[0]

    def in_shape(self) -> bool:
        """All generator entries are in diagonal blocks of kind E or above the
        block diagonal; the ``O``/``T`` block is the last one and carries no
        generators (the ``1`` and ``Id_t`` corners)."""
        order = self.placement.block_order
        if any(b in ("O", "T") for b in order[:-1]):
            return False
        rank = {b: i for i, b in enumerate(order)}
        for pair in self.pairs:
            r, c = self.position(pair)
            br, bc = self.labels[r][0], self.labels[c][0]
            if rank[br] > rank[bc]:
                return False
            if br == bc and br in ("O", "T"):
                return False
        return True


def _model(cls, j, t, placement) -> IndexModel:
    bl = index_labels(cls, j, t)
    labels = [lab for b in placement.block_order for lab in bl[b]]
    return IndexModel(cls, j, t, labels, index_set(cls, j, t), placement)


def _relations_hold_symbolic(model: IndexModel) -> bool:
    ring = SYMBOLIC
    lam, mu = ring.var("lambda"), ring.var("mu")
    zero, one = ring.zero(), ring.one()
    mats = {}

    def gm(pair, s):
        key = (pair, s)
        if key not in mats:
            mats[key] = model.matrix(pair, s, zero, one)
        return mats[key]

    for g in model.pairs:
        lhs = model.word_matrix([gm(g, lam), gm(g, mu)])
        if not _eq(lhs, gm(g, lam + mu)):
            return False
    for g, h, rhs in steinberg_relations(model.pairs):
        lhs = model.word_matrix([gm(g, lam), gm(h, mu), gm(g, -lam), gm(h, -mu)])
        if rhs is None:
            target = model.matrix(g, zero, zero, one)
        else:
            pair, sign = rhs
            target = gm(pair, lam * mu * sign)
        if not _eq(lhs, target):
            return False
    return True


def _eq(a, b) -> bool:
    return all(x == y for x, y in zip(a.flat, b.flat))


def _relations_hold_mod(model: IndexModel, m: int) -> bool:
    """Exhaustive check over all scalar pairs in ``Z/m``."""
    def gm(pair, s):
        return model.matrix(pair, s % m, 0, 1)

    for lam in range(m):
        for mu in range(m):
            for g in model.pairs:
                lhs = model.word_matrix([gm(g, lam), gm(g, mu)]) % m
                if not np.array_equal(lhs, gm(g, lam + mu)):
                    return False
            for g, h, rhs in steinberg_relations(model.pairs):
                lhs = model.word_matrix([gm(g, lam), gm(h, mu), gm(g, -lam), gm(h, -mu)]) % m
                if rhs is None:
                    target = np.eye(model.size, dtype=np.int64)
                else:
                    pair, sign = rhs
                    target = gm(pair, lam * mu * sign)
                if not np.array_equal(lhs, target):
                    return False
    return True


@lru_cache(maxsize=None)
def calibrate_placement() -> Placement:
    """The placement making every class ``b, c, d`` model satisfy the
    Steinberg relations and the displayed block shape.

    The choices are the position of ``x_ik`` (``(i,k)`` or ``(k,i)``),
    whether words act as products or reversed products, and the order of
    the index blocks. The small models ``j = 2, t = 1`` decide; exactly one
    (position, product order) combination must work for all three classes.
    """
    working: dict = {}
    for transpose in (False, True):
        for anti in (False, True):
            orders = {}
            for cls, kinds in BLOCK_KINDS.items():
                found = None
                for order in itertools.permutations(kinds):
                    m = _model(cls, 2, 1, Placement(transpose, anti, order))
                    if m.in_shape() and _relations_hold_symbolic(m):
                        found = order
                        break
                if found is None:
                    break
                orders[cls] = found
            else:
                working[(transpose, anti)] = orders
    if len(working) != 1:
        raise SteinbergError(f"no unique consistent placement: {sorted(working)}")
    (transpose, anti), orders = next(iter(working.items()))
    return Placement(transpose, anti, tuple(sorted(orders.items())))


def index_model(cls: str, j: int, t: int = 1) -> IndexModel:
    cal = calibrate_placement()
    order = dict(cal.block_order)[cls]
    model = _model(cls, j, t, Placement(cal.transpose, cal.anti, order))
    if not model.in_shape():
        raise SteinbergError("calibrated placement leaves the block shape")
    return model


@dataclass
class ModelReport:
    cls: str
    j: int
    t: int
    size: int
    symbolic: bool
    modular: dict


def verify_model(model: IndexModel, moduli=(2, 3, 4)) -> ModelReport:
    sym = _relations_hold_symbolic(model)
    mod = {m: _relations_hold_mod(model, m) for m in moduli}
    return ModelReport(model.cls, model.j, model.t, model.size, sym, mod)


# U / V subgroups and the centrality lemma

@dataclass
class SubgroupReport:
    cls: str
    j: int
    t: int
    commute: bool
    injective: bool
    central_trivial_rational: bool
    central_trivial_modular: bool

    @property
    def passed(self) -> bool:
        return (self.commute and self.injective and self.central_trivial_rational
                and self.central_trivial_modular)


def _column_groups(model: IndexModel):
    """Generators sharing a matrix column (U) and sharing a matrix row (V)."""
    us, vs = {}, {}
    for pair in model.pairs:
        r, c = model.position(pair)
        us.setdefault(c, []).append(pair)
        vs.setdefault(r, []).append(pair)
    return list(us.values()), list(vs.values())


def _subgroup_checks(model: IndexModel, m: int) -> tuple[bool, bool]:
    us, vs = _column_groups(model)
    commute = True
    injective = True
    for group in us + vs:
        for g, h in itertools.combinations(group, 2):
            for a in range(1, m):
                for b in range(1, m):
                    x, y = model.matrix(g, a, 0, 1), model.matrix(h, b, 0, 1)
                    if not np.array_equal(x.dot(y) % m, y.dot(x) % m):
                        commute = False
        seen = set()
        for tup in itertools.product(range(m), repeat=len(group)):
            mats = [model.matrix(g, s, 0, 1) for g, s in zip(group, tup)]
            key = (model.word_matrix(mats) % m).tobytes()
            if key in seen:
                injective = False
                break
            seen.add(key)
    return commute, injective


def _upper_unknowns(model: IndexModel) -> list[tuple]:
    """Matrix positions of the off-diagonal blocks above the diagonal."""
    blocks = [lab[0] for lab in model.labels]
    out = []
    for r in range(model.size):
        for c in range(model.size):
            if blocks[r] != blocks[c] and model.placement.block_order.index(blocks[r]) < \
                    model.placement.block_order.index(blocks[c]):
                out.append((r, c))
    return out


def centrality_constraints(model: IndexModel) -> list[list[int]]:
    """Linear equations on the upper-block entries of ``N`` expressing
    ``N E = E N`` for every generator inside a diagonal block."""
    unknowns = _upper_unknowns(model)
    idx = {pos: k for k, pos in enumerate(unknowns)}
    n = model.size
    rows = []
    for pair in model.pairs:
        r0, c0 = model.position(pair)
        if model.labels[r0][0] != model.labels[c0][0]:
            continue
        # (N E)_{rc} = N_{r r0} [c == c0];  (E N)_{rc} = [r == r0] N_{c0 c}
        for r in range(n):
            for c in range(n):
                eq = [0] * len(unknowns)
                if c == c0 and (r, r0) in idx:
                    eq[idx[(r, r0)]] += 1
                if r == r0 and (c0, c) in idx:
                    eq[idx[(c0, c)]] -= 1
                if any(eq):
                    rows.append(eq)
    return rows


def kernel_is_trivial(rows, ncols: int, modulus: Optional[int] = None) -> bool:
    """Whether ``rows * x = 0`` forces ``x = 0`` over Q or over ``Z/modulus``."""
    if ncols == 0:
        return True
    if not rows:
        return False
    h, _ = hermite_normal_form(rows)
    pivots = []
    for row in h:
        nz = [x for x in row if x]
        if nz:
            pivots.append(nz[0])
    if len(pivots) < ncols:
        return False
    if modulus is None:
        return True
    # full column rank: the square echelon part is triangular with these pivots
    prod = 1
    for pv in pivots:
        prod *= pv
    return gcd(prod, modulus) == 1


def uv_subgroup_checks(cls: str, j: int, t: int = 1, modulus: int = 4) -> SubgroupReport:
    """Commutation and injectivity for the U/V generator families, and the
    lemma that only the identity in the unipotent upper block commutes with
    all block-diagonal elementary generators (needs ``j >= 2``)."""
    model = index_model(cls, j, t)
    commute, injective = _subgroup_checks(model, modulus)
    rows = centrality_constraints(model)
    k = len(_upper_unknowns(model))
    return SubgroupReport(cls, j, t, commute, injective,
                          kernel_is_trivial(rows, k), kernel_is_trivial(rows, k, modulus))


# the quadrangle's column model

@dataclass(frozen=True)
class SpecquadModel:
    m: int
    j0: int

    def zones(self) -> dict:
        m, j0 = self.m, self.j0
        r = lambda a, b: range(a, b + 1)  # noqa: E731
        return {
            "Z1": {(a, b) for a in r(1, j0 - 1) for b in r(1, j0 - 1)},
            "Z2": {(a, b) for a in r(j0, m) for b in r(1, j0 - 1)},
            "Z3": {(a, b) for a in r(j0, m - 1) for b in r(j0, m - 1)},
            "Z4": {(m, b) for b in r(1, m - 1)},
        }

    def admissible_pairs(self) -> set:
        out = set().union(*self.zones().values())
        return {(a, b) for a, b in out if a != b}

    def admissible(self, a: int, b: int) -> bool:
        return (a, b) in self.admissible_pairs()

    def composability_failures(self) -> list[tuple]:
        """Admissible pairs ``(i, k)`` with no ``j`` such that ``(i, j)`` and
        ``(j, k)`` are both admissible."""
        adm = self.admissible_pairs()
        bad = []
        for i, k in sorted(adm):
            if not any((i, j) in adm and (j, k) in adm for j in range(1, self.m + 1)):
                bad.append((i, k))
        return bad


def specquad_zones(m: int, j0: int) -> SpecquadModel:
    if not 1 < j0 < m:
        raise SteinbergError(f"need 1 < j0 < m, got m={m}, j0={j0}")
    return SpecquadModel(m, j0)
