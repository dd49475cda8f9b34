"""Coefficient rings: integers, integers modulo m, and Laurent polynomials.

All ring elements are :class:`Poly` values. A constant polynomial stands in
for an integer; a modulus reduces every coefficient. Negative exponents are
allowed so that monomials with coefficient ``±1`` (or a unit mod ``m``) can
be inverted, which is what toric characters need.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional


def _mono_mul(a: tuple, b: tuple) -> tuple:
    exps = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted((v, e) for v, e in exps.items() if e))


class Poly:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("terms", "modulus", "_hash")

    def __init__(self, terms=None, modulus: Optional[int] = None):
        if modulus is None:
            clean = {m: c for m, c in (terms or {}).items() if c}
        else:
            clean = {m: c % modulus for m, c in (terms or {}).items() if c % modulus}
        self.terms = clean
        self.modulus = modulus
        self._hash = None

    @classmethod
    def const(cls, c: int, modulus: Optional[int] = None) -> "Poly":
        return cls({(): c}, modulus)

    @classmethod
    def var(cls, name: str, modulus: Optional[int] = None) -> "Poly":
        return cls({((name, 1),): 1}, modulus)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.modulus != self.modulus:
                raise ValueError("mixing elements of different rings")
            return other
        if isinstance(other, int):
            return Poly.const(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.modulus)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Poly.const(1, self.modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_unit(self) -> bool:
        if len(self.terms) != 1:
            return False
        (c,) = self.terms.values()
        if self.modulus is None:
            return c in (1, -1)
        return gcd(c, self.modulus) == 1

    def inverse(self) -> "Poly":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        ((mono, c),) = self.terms.items()
        inv_c = c if self.modulus is None else pow(c, -1, self.modulus)
        return Poly({tuple((v, -e) for v, e in mono): inv_c}, self.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.modulus)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.modulus))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Optional[int]:
        if not self.terms:
            return 0
        if list(self.terms) == [()]:
            return self.terms[()]
        return None

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            m = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        s = " + ".join(parts).replace("+ -", "- ")
        return s if self.modulus is None else f"({s} mod {self.modulus})"

    __str__ = __repr__


@dataclass(frozen=True)
class RingSpec:
    """A commutative coefficient ring: ``int``, ``mod:<m>`` or ``poly:<vars>``."""

    kind: str
    modulus: Optional[int] = None
    variables: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        text = text.strip()
        if text == "int":
            return cls("int")
        if text.startswith("mod:"):
            try:
                m = int(text[4:])
            except ValueError:
                raise ValueError(f"bad modulus in ring descriptor {text!r}") from None
            if m < 2:
                raise ValueError("modulus must be at least 2")
            return cls("mod", m)
        if text.startswith("poly:"):
            names = tuple(v.strip() for v in text[5:].split(",") if v.strip())
            if not names or len(set(names)) != len(names) or any(not n.isidentifier() for n in names):
                raise ValueError(f"bad variable list in ring descriptor {text!r}")
            return cls("poly", None, names)
        raise ValueError(f"unknown ring descriptor {text!r}")

    def __str__(self):
        if self.kind == "mod":
            return f"mod:{self.modulus}"
        if self.kind == "poly":
            return "poly:" + ",".join(self.variables)
        return "int"

    @property
    def is_finite(self) -> bool:
        return self.kind == "mod"

    def __call__(self, c) -> Poly:
        if isinstance(c, Poly):
            if c.modulus == self.modulus:
                return c
            return Poly(c.terms, self.modulus)
        return Poly.const(int(c), self.modulus)

    def zero(self) -> Poly:
        return Poly({}, self.modulus)

    def one(self) -> Poly:
        return Poly.const(1, self.modulus)

    def var(self, name: str) -> Poly:
        if self.kind != "poly":
            raise ValueError(f"ring {self} has no indeterminates")
        return Poly.var(name, self.modulus)

    def elements(self):
        """All elements of a finite ring."""
        if not self.is_finite:
            raise ValueError(f"ring {self} is infinite")
        return [self(c) for c in range(self.modulus)]


INT = RingSpec("int")
SYMBOLIC = RingSpec("poly", None, ("lambda", "mu"))
