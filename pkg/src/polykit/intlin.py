"""Exact integer linear algebra.

Everything here works on plain Python ints (tuples of ints for vectors,
lists of lists for matrices). Nothing is ever converted to floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

Vector = tuple  # tuple[int, ...]


def dot(a: Sequence[int], x: Sequence[int]) -> int:
    return sum(ai * xi for ai, xi in zip(a, x))


def vadd(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vsub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x):
    return tuple(c * a for a in x)


def content(v: Sequence[int]) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def det(m) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class LatticeBasisChange:
    """A unimodular change of basis ``x -> forward @ x + translation``."""

    forward: tuple
    inverse: tuple
    translation: tuple

    @classmethod
    def identity(cls, n: int) -> "LatticeBasisChange":
        eye = tuple(tuple(r) for r in identity(n))
        return cls(eye, eye, (0,) * n)

    def apply(self, x):
        return tuple(dot(row, x) + t for row, t in zip(self.forward, self.translation))

    def apply_inverse(self, y):
        z = vsub(y, self.translation)
        return tuple(dot(row, z) for row in self.inverse)


def _hnf(m, track: bool):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [list(r) for r in m]
    u = identity(rows) if track else None
    inv = identity(rows) if track else None  # kept equal to u^-1 by column operations
    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        # gcd-reduce column c below pr into row pr
        for r in range(pr + 1, rows):
            if h[r][c] == 0:
                continue
            g, s, t = ext_gcd(h[pr][c], h[r][c])
            a, b = h[pr][c] // g, h[r][c] // g
            h[pr], h[r] = ([s * x + t * y for x, y in zip(h[pr], h[r])],
                           [-b * x + a * y for x, y in zip(h[pr], h[r])])
            if track:
                u[pr], u[r] = ([s * x + t * y for x, y in zip(u[pr], u[r])],
                               [-b * x + a * y for x, y in zip(u[pr], u[r])])
                for row in inv:
                    row[pr], row[r] = a * row[pr] + b * row[r], -t * row[pr] + s * row[r]
        if h[pr][c] == 0:
            continue
        if h[pr][c] < 0:
            h[pr] = [-x for x in h[pr]]
            if track:
                u[pr] = [-x for x in u[pr]]
                for row in inv:
                    row[pr] = -row[pr]
        p = h[pr][c]
        for r in range(pr):
            q = h[r][c] // p
            if q:
                h[r] = [x - q * y for x, y in zip(h[r], h[pr])]
                if track:
                    u[r] = [x - q * y for x, y in zip(u[r], u[pr])]
                    for row in inv:
                        row[pr] += q * row[r]
        pr += 1
    return h, u, inv


def hermite_normal_form(m) -> tuple[list[list[int]], LatticeBasisChange]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``h == u.forward @ m``: ``h`` is in row echelon
    form, every pivot is positive, and entries above a pivot are reduced into
    ``[0, pivot)``. Zero rows sit at the bottom.
    """
    h, u, inv = _hnf(m, track=True)
    return h, LatticeBasisChange(tuple(map(tuple, u)), tuple(map(tuple, inv)), (0,) * len(m))


def row_basis(vectors) -> list[tuple]:
    """HNF basis (nonzero rows) of the lattice spanned by ``vectors``."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    h, _, _ = _hnf(vectors, track=False)
    return [tuple(r) for r in h if any(r)]


def rank(vectors) -> int:
    return len(row_basis(vectors))


def solve_in_basis(basis, y):
    """Integer coefficients ``c`` with ``sum c_i basis_i == y``, or None.

    ``basis`` must be in row echelon form (as returned by :func:`row_basis`).
    """
    c = []
    resid = list(y)
    for row in basis:
        p = next(i for i, x in enumerate(row) if x)
        q, r = divmod(resid[p], row[p])
        if r:
            return None
        c.append(q)
        resid = [a - q * b for a, b in zip(resid, row)]
    if any(resid):
        return None
    return tuple(c)


@dataclass(frozen=True)
class AffineChart:
    """Identifies the affine lattice ``origin + Z basis`` with ``Z^d``.

    ``to_local`` and ``to_ambient`` are mutually inverse on that lattice.
    When the lattice is all of ``Z^n`` the chart is the identity.
    """

    origin: tuple
    basis: tuple  # d rows of length n

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.origin)

    @property
    def is_identity(self) -> bool:
        n = len(self.origin)
        return (not any(self.origin) and len(self.basis) == n
                and all(self.basis[i][j] == int(i == j) for i in range(n) for j in range(n)))

    def to_local(self, x):
        c = solve_in_basis(self.basis, vsub(x, self.origin))
        if c is None:
            raise ValueError(f"{x} is not in the affine lattice")
        return c

    def to_ambient(self, c):
        out = list(self.origin)
        for ci, row in zip(c, self.basis):
            if ci:
                out = [a + ci * b for a, b in zip(out, row)]
        return tuple(out)

    def compose(self, inner: "AffineChart") -> "AffineChart":
        """Chart whose local coordinates are ``inner``'s local coordinates."""
        origin = self.to_ambient(inner.origin)
        basis = tuple(vsub(self.to_ambient(row), self.to_ambient((0,) * self.dim))
                      for row in inner.basis)
        return AffineChart(origin, basis)


def normalize_affine_lattice(points) -> tuple[AffineChart, int]:
    """Chart onto the affine lattice generated by ``points``.

    If the points generate all of ``Z^n`` the identity chart is returned, so
    full-dimensional inputs keep their coordinates. Otherwise the first point
    becomes the origin and the basis is the HNF basis of the differences.
    """
    points = [tuple(p) for p in points]
    if not points:
        raise ValueError("need at least one point")
    n = len(points[0])
    z0 = points[0]
    basis = row_basis([vsub(p, z0) for p in points[1:]])
    d = len(basis)
    if d == n and all(basis[i][i] == 1 for i in range(n)):
        return AffineChart((0,) * n, tuple(tuple(r) for r in identity(n))), n
    return AffineChart(z0, tuple(basis)), d


def saturation(vectors) -> list[tuple]:
    """Basis of ``span_R(vectors) & Z^n``."""
    basis = row_basis(vectors)
    if not basis:
        return []
    n = len(basis[0])
    # column-reduce: basis @ V = [L | 0] with V unimodular, then the first
    # d rows of V^-1 span the saturated lattice.
    ht, u = hermite_normal_form([list(col) for col in zip(*basis)])
    vinv = [list(col) for col in zip(*u.inverse)]  # (V^-1) where V = u.forward^T
    d = len(basis)
    sat = [tuple(vinv[i]) for i in range(d)]
    return row_basis(sat) if n else []


def kernel_form(points) -> tuple:
    """Primitive integer covector vanishing on the differences of ``points``.

    The differences must span a hyperplane (rank ``n - 1``).
    """
    points = [tuple(p) for p in points]
    n = len(points[0])
    basis = row_basis([vsub(p, points[0]) for p in points[1:]])
    if len(basis) != n - 1:
        raise ValueError(f"points span rank {len(basis)}, expected {n - 1}")
    a = []
    for i in range(n):
        minor = [[row[j] for j in range(n) if j != i] for row in basis]
        a.append((-1) ** i * det(minor))
    g = content(a)
    return tuple(x // g for x in a)


def primitive_form(hyperplane_points, inside_point) -> tuple[tuple, int]:
    """Primitive covector ``a`` and level ``b`` of the hyperplane through
    ``hyperplane_points``, signed so that ``<a, inside_point> > b``."""
    pts = [tuple(p) for p in hyperplane_points]
    a = kernel_form(pts)
    b = dot(a, pts[0])
    side = dot(a, inside_point) - b
    if side == 0:
        raise ValueError("inside point lies on the hyperplane")
    if side < 0:
        a, b = tuple(-x for x in a), -b
    return a, b


def solve_unit_value(a) -> tuple:
    """Deterministic integer ``p`` with ``<a, p> == 1``.

    Extended Euclid run over the coordinates from left to right.
    """
    g, p = 0, []
    for ak in a:
        g, s, t = ext_gcd(g, ak)
        p = [s * x for x in p] + [t]
    if g != 1:
        raise ValueError(f"entries of {tuple(a)} have gcd {g}, not 1")
    return tuple(p)
