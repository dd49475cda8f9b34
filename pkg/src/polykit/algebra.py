"""The polytopal algebra R[P], elementary and toric automorphisms.

An element of R[P] is a finite map from monomials ``(z, d)`` (``z`` in
``d * P``, ``d`` the degree) to ring coefficients. Automorphisms are words
of letters; two words are equal when they agree on every degree-one
monomial ``(x, 1)``, ``x`` a lattice point, since those generate R[P].
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Optional, Union

from .columns import ColumnTable, ColumnVector, column_vectors
from .intlin import vadd, vscale
from .polytope import Polytope
from .rings import SYMBOLIC, Poly, RingSpec


class AlgebraError(ValueError):
    pass


def monomial(x, degree: int = 1) -> tuple:
    return tuple(x) + (degree,)


class AlgebraElement:
    """Finite linear combination of monomials; zero coefficients are dropped."""

    __slots__ = ("terms", "modulus")

    def __init__(self, terms: dict, modulus: Optional[int] = None):
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        self.modulus = modulus

    @classmethod
    def basis(cls, mono: tuple, ring: RingSpec) -> "AlgebraElement":
        return cls({tuple(mono): ring.one()}, ring.modulus)

    def degrees(self) -> set:
        return {m[-1] for m in self.terms}

    def coefficient(self, mono) -> Poly:
        return self.terms.get(tuple(mono), Poly({}, self.modulus))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return AlgebraElement(out, self.modulus)

    def __repr__(self):
        return " + ".join(f"({c})*{m}" for m, c in sorted(self.terms.items())) or "0"


@dataclass(frozen=True)
class Elementary:
    """The automorphism ``x -> (1 + lam v)^ht_v(x) x``."""

    column: ColumnVector
    lam: Poly

    def inverse(self) -> "Elementary":
        return Elementary(self.column, -self.lam)


@dataclass(frozen=True)
class Toric:
    """Monomial scaling by a unit-valued character of ``Z^(dim+1)``,
    given by its values on the standard basis (degree coordinate last)."""

    values: tuple

    def inverse(self) -> "Toric":
        return Toric(tuple(a.inverse() for a in self.values))

    def character(self, mono) -> Poly:
        out = None
        for a, e in zip(self.values, mono):
            if e:
                term = a ** e
                out = term if out is None else out * term
        return out if out is not None else Poly.const(1, self.values[0].modulus)


Letter = Union[Elementary, Toric]


@dataclass(frozen=True)
class AutoWord:
    """A word of letters, read as a composition: the rightmost letter acts first."""

    letters: tuple = ()

    def __mul__(self, other: "AutoWord") -> "AutoWord":
        return AutoWord(self.letters + other.letters)

    def inverse(self) -> "AutoWord":
        return AutoWord(tuple(l.inverse() for l in reversed(self.letters)))

    def reversed(self) -> "AutoWord":
        return AutoWord(tuple(reversed(self.letters)))

    def __len__(self):
        return len(self.letters)


def elementary(column: ColumnVector, lam) -> AutoWord:
    return AutoWord((Elementary(column, lam),))


def toric(values) -> AutoWord:
    return AutoWord((Toric(tuple(values)),))


def apply_elementary(p: Polytope, v: ColumnVector, lam: Poly, e: AlgebraElement) -> AlgebraElement:
    base = p.facet(v.base)
    out: dict = {}
    powers = [Poly.const(1, lam.modulus)]
    for mono, c in e.terms.items():
        z, d = mono[:-1], mono[-1]
        h = base.pairing(z) - d * base.offset
        if h < 0:
            raise AlgebraError(f"monomial {mono} lies below the base facet")
        while len(powers) <= h:
            powers.append(powers[-1] * lam)
        for i in range(h + 1):
            coef = powers[i] * c
            if i:
                coef = coef * comb(h, i)
            if coef.is_zero():
                continue
            z2 = vadd(z, vscale(i, v.v)) if i else z
            if i and not p.contains_scaled(z2, d):
                raise AlgebraError(f"{z2} left {d}P under e_{v.v}")
            m2 = z2 + (d,)
            out[m2] = out[m2] + coef if m2 in out else coef
    return AlgebraElement(out, e.modulus)


def apply_toric(t: Toric, e: AlgebraElement) -> AlgebraElement:
    return AlgebraElement({m: c * t.character(m) for m, c in e.terms.items()}, e.modulus)


def apply_word(p: Polytope, w: AutoWord, e: AlgebraElement) -> AlgebraElement:
    """Apply ``w`` to ``e``; letters act right to left."""
    for letter in reversed(w.letters):
        if isinstance(letter, Elementary):
            e = apply_elementary(p, letter.column, letter.lam, e)
        else:
            e = apply_toric(letter, e)
    return e


def _word_modulus(*words) -> Optional[int]:
    for w in words:
        for l in w.letters:
            return l.lam.modulus if isinstance(l, Elementary) else l.values[0].modulus
    return None


def words_equal(p: Polytope, w1: AutoWord, w2: AutoWord, ring: Optional[RingSpec] = None) -> bool:
    """Equality of automorphisms, decided on all degree-one monomials."""
    if ring is None:
        m = _word_modulus(w1, w2)
        ring = RingSpec("mod", m) if m is not None else RingSpec("int")
    return not first_difference(p, w1, w2, ring)


def first_difference(p: Polytope, w1: AutoWord, w2: AutoWord, ring: RingSpec):
    """First lattice point on which the two words differ, with both images."""
    for x in p.lattice_points:
        e = AlgebraElement.basis(monomial(x), ring)
        a, b = apply_word(p, w1, e), apply_word(p, w2, e)
        if a != b:
            return x, a, b
    return None


# commutators

BRACKETS = {
    "aba^-1b^-1": lambda a, b: a * b * a.inverse() * b.inverse(),
    "a^-1b^-1ab": lambda a, b: a.inverse() * b.inverse() * a * b,
}
ORDERS = ("rtl", "ltr")


def commutator(a: AutoWord, b: AutoWord, bracket: str = "aba^-1b^-1") -> AutoWord:
    return BRACKETS[bracket](a, b)


@dataclass(frozen=True)
class ComrelCase:
    kind: str  # "uv", "vu" or "trivial"
    n: int  # exponent bound: <base(v), u> or <base(u), v>


def comrel_case(p: Polytope, table: ColumnTable, u: ColumnVector, v: ColumnVector) -> ComrelCase:
    if not any(vadd(u.v, v.v)):
        raise AlgebraError("u + v = 0 is excluded from the commutator formula")
    if table.product(u, v) is not None:
        return ComrelCase("uv", p.facet(v.base).pairing(u.v))
    if table.product(v, u) is not None:
        return ComrelCase("vu", p.facet(u.base).pairing(v.v))
    return ComrelCase("trivial", 0)


def commutator_rhs(p: Polytope, u: ColumnVector, v: ColumnVector, lam=None, mu=None,
                   table: Optional[ColumnTable] = None) -> AutoWord:
    """Right-hand side of ``[e_u^lam, e_v^mu]``.

    ``prod_{i=1..n} e_{u+iv}^{-C(n,i) lam mu^i}`` when ``uv`` exists, the
    inverse of the mirrored product when ``vu`` exists, empty otherwise.
    """
    table = table if table is not None else column_vectors(p)
    lam = lam if lam is not None else SYMBOLIC.var("lambda")
    mu = mu if mu is not None else SYMBOLIC.var("mu")
    case = comrel_case(p, table, u, v)
    letters = []
    if case.kind == "uv":
        for i in range(1, case.n + 1):
            col = table.get(vadd(u.v, vscale(i, v.v)))
            letters.append(Elementary(col, -(lam * mu ** i) * comb(case.n, i)))
    elif case.kind == "vu":
        for i in range(1, case.n + 1):
            col = table.get(vadd(v.v, vscale(i, u.v)))
            letters.append(Elementary(col, (mu * lam ** i) * comb(case.n, i)))
    if any(l.column is None for l in letters):
        raise AlgebraError("commutator formula leaves the column set")
    return AutoWord(tuple(letters))


def _holds(p, table, u, v, order, bracket, ring) -> bool:
    lam, mu = ring.var("lambda"), ring.var("mu")
    lhs = commutator(elementary(u, lam), elementary(v, mu), bracket)
    rhs = commutator_rhs(p, u, v, lam, mu, table)
    if order == "ltr":
        lhs, rhs = lhs.reversed(), rhs.reversed()
    return words_equal(p, lhs, rhs, ring)


@lru_cache(maxsize=None)
def calibrate_convention() -> tuple[str, str]:
    """The unique (application order, bracket) for which the commutator
    formula holds on two reference polytopes.

    On the quadrangle with a single product ``n = 1`` and on the triangle
    ``conv((0,0),(2,0),(0,1))`` ``n = 2``; only one of the four combinations
    fits both. Raises if that is not the case.
    """
    from .polytope import build_polytope

    refs = [
        (build_polytope([(0, 0), (3, 0), (1, 2), (0, 1)]), (0, -1), (1, 0)),
        (build_polytope([(0, 0), (2, 0), (0, 1)]), (0, -1), (1, 0)),
    ]
    ok = []
    for order in ORDERS:
        for bracket in BRACKETS:
            good = True
            for p, u, v in refs:
                t = column_vectors(p)
                if not _holds(p, t, t.get(u), t.get(v), order, bracket, SYMBOLIC):
                    good = False
                    break
            if good:
                ok.append((order, bracket))
    if len(ok) != 1:
        raise AlgebraError(f"commutator convention is not unique: {ok}")
    return ok[0]


@dataclass
class ComrelReport:
    u: tuple
    v: tuple
    case: str
    n: int
    passed: bool
    detail: Optional[tuple] = None


def verify_comrel(p: Polytope, u: ColumnVector, v: ColumnVector, ring: RingSpec = SYMBOLIC,
                  table: Optional[ColumnTable] = None) -> ComrelReport:
    """Compare ``[e_u^lam, e_v^mu]`` with :func:`commutator_rhs`."""
    table = table if table is not None else column_vectors(p)
    order, bracket = calibrate_convention()
    case = comrel_case(p, table, u, v)
    lam, mu = ring.var("lambda"), ring.var("mu")
    lhs = commutator(elementary(u, lam), elementary(v, mu), bracket)
    rhs = commutator_rhs(p, u, v, lam, mu, table)
    if order == "ltr":
        lhs, rhs = lhs.reversed(), rhs.reversed()
    diff = first_difference(p, lhs, rhs, ring)
    return ComrelReport(u.v, v.v, case.kind, case.n, diff is None, diff)


# toric conjugation

def character_ratio(p: Polytope, t: Toric, w: ColumnVector) -> Poly:
    """``alpha(z + w) / alpha(z)``, checked to be independent of ``z``."""
    base = p.facet(w.base)
    ratios = set()
    for z in p.lattice_points:
        if base.height(z) > 0:
            ratios.add(t.character(monomial(vadd(z, w.v))) / t.character(monomial(z)))
    if len(ratios) != 1:
        raise AlgebraError(f"character ratio for {w.v} depends on the point: {ratios}")
    return ratios.pop()


def symbolic_character(dim: int, prefix: str = "a") -> Toric:
    return Toric(tuple(Poly.var(f"{prefix}{i}") for i in range(dim + 1)))


def toric_conjugation_holds(p: Polytope, t: Toric, w: ColumnVector) -> bool:
    """``alpha e_w^1 alpha^-1 == e_w^{alpha(w)}``."""
    one = Poly.const(1, t.values[0].modulus)
    lhs = AutoWord((t, Elementary(w, one), t.inverse()))
    rhs = elementary(w, character_ratio(p, t, w))
    return words_equal(p, lhs, rhs)


# sign switching on the doubled segment

def epsilon_word(table: ColumnTable, v, ring: RingSpec) -> AutoWord:
    """``(e_v^1 e_{-v}^{-1} e_v^1)^2`` for an invertible column ``v``."""
    cv = table.get(v)
    cm = table.get(tuple(-x for x in v))
    if cv is None or cm is None:
        raise AlgebraError(f"{v} is not an invertible column")
    one = ring.one()
    half = AutoWord((Elementary(cv, one), Elementary(cm, -one), Elementary(cv, one)))
    return half * half


def signs_on_points(p: Polytope, w: AutoWord, ring: RingSpec) -> dict:
    """For each lattice point the sign ``s`` with ``w(x) = s x``, or None."""
    out = {}
    for x in p.lattice_points:
        mono = monomial(x)
        img = apply_word(p, w, AlgebraElement.basis(mono, ring))
        if list(img.terms) == [mono]:
            c = img.terms[mono]
            out[x] = 1 if c == ring.one() else (-1 if c == -ring.one() else None)
        else:
            out[x] = None
    return out


# same-base subgroups

@dataclass
class EmbeddingReport:
    facet: int
    columns: list
    commute: bool
    homomorphism: bool
    inverse: bool
    injective_symbolic: bool
    injective_samples: bool

    @property
    def passed(self) -> bool:
        return (self.commute and self.homomorphism and self.inverse
                and self.injective_symbolic and self.injective_samples)


def _phi(cols, scalars) -> AutoWord:
    return AutoWord(tuple(Elementary(c, s) for c, s in zip(cols, scalars)))


def same_base_embedding_check(p: Polytope, fid: int, ring: RingSpec = RingSpec("int"),
                              samples: int = 6, seed: int = 0,
                              table: Optional[ColumnTable] = None) -> EmbeddingReport:
    """``(l_1..l_k) -> prod e_{v_i}^{l_i}`` over the columns with base ``fid``
    is an injective homomorphism from ``R^k``."""
    table = table if table is not None else column_vectors(p)
    cols = table.with_base(fid)
    if not cols:
        raise AlgebraError(f"no column has base facet {fid}")
    k = len(cols)
    ls = [Poly.var(f"l{i}") for i in range(k)]
    ms = [Poly.var(f"m{i}") for i in range(k)]

    commute = all(
        words_equal(p, _phi([cols[i], cols[j]], [ls[i], ls[j]]),
                    _phi([cols[j], cols[i]], [ls[j], ls[i]]))
        for i in range(k) for j in range(i + 1, k))
    hom = words_equal(p, _phi(cols, ls) * _phi(cols, ms),
                      _phi(cols, [a + b for a, b in zip(ls, ms)]))
    inv = words_equal(p, _phi(cols, ls) * _phi(cols, [-a for a in ls]), AutoWord())

    # at height one over the base every letter contributes one separate term
    sym = SYMBOLIC
    base = p.facet(fid)
    inj_sym = True
    level_one = [x for x in p.lattice_points if base.height(x) == 1]
    for i, c in enumerate(cols):
        x = level_one[0] if level_one else None
        if x is None:
            inj_sym = False
            break
        img = apply_word(p, _phi(cols, ls), AlgebraElement.basis(monomial(x), sym))
        if img.coefficient(monomial(vadd(x, c.v))) != ls[i]:
            inj_sym = False

    rng = random.Random(seed)
    tuples = set()
    while len(tuples) < samples:
        tuples.add(tuple(rng.randint(-3, 3) for _ in range(k)))
        if ring.is_finite and len(tuples) >= ring.modulus ** k:
            break
    tuples = sorted(tuples)
    if ring.is_finite:
        tuples = sorted({tuple(c % ring.modulus for c in t) for t in tuples})
    words = [_phi(cols, [ring(c) for c in t]) for t in tuples]
    inj_samples = all(not words_equal(p, words[i], words[j], ring)
                      for i in range(len(words)) for j in range(i + 1, len(words)))
    return EmbeddingReport(fid, [c.v for c in cols], commute, hom, inv, inj_sym, inj_samples)
