"""Named lattice polytopes used in tests, demos and the CLI."""
from __future__ import annotations

from functools import lru_cache

from .polytope import Polytope, build_polytope


def simplex(dim: int, k: int = 1) -> list[tuple]:
    pts = [(0,) * dim]
    for i in range(dim):
        pts.append(tuple(k if j == i else 0 for j in range(dim)))
    return pts


def d_class(t: int) -> list[tuple]:
    """Quadrangle whose columns ``(s, -1)``, ``0 <= s <= t``, share the bottom edge."""
    return [(-1, 0), (3 * t, 0), (2 * t, 1), (0, 2)]


VERTICES = {
    "segment": [(0,), (1,)],
    "segment2": simplex(1, 2),
    "square": [(0, 0), (1, 0), (0, 1), (1, 1)],
    "square2": [(0, 0), (2, 0), (0, 2), (2, 2)],
    "rectangle35": [(0, 0), (3, 0), (0, 5), (3, 5)],
    "triangle": simplex(2),
    "triangle2": simplex(2, 2),
    "triangle3": simplex(2, 3),
    "pc": [(0, 0), (3, 0), (1, 2), (0, 1)],
    "trapezoid": [(0, 0), (3, 0), (3, 2), (2, 2)],
    "trapezoid_wide": [(0, 0), (4, 0), (4, 2), (2, 2)],
    "pd1": d_class(1),
    "pd2": d_class(2),
    "pd3": d_class(3),
    "pentagon": [(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)],
    "esstri": [(0, 0), (2, 0), (0, 1)],
    "isosceles": [(0, 0), (2, 0), (1, 2)],
    "newcol": [(-2, 0), (0, 0), (0, 1)],
    "pyramid": [(0, 0, 0), (0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 0)],
    "tetrahedron": simplex(3),
    "prism": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)],
}

# class representatives for the polygon classification
REPRESENTATIVES = {
    "a": "triangle3",
    "b": "trapezoid",
    "c": "pc",
    "d": "pd2",
    "e": "square",
    "f": "pentagon",
}


@lru_cache(maxsize=None)
def get(name: str) -> Polytope:
    return build_polytope(VERTICES[name])


def names(max_dim: int = 3) -> list[str]:
    return [n for n in VERTICES if len(VERTICES[n][0]) <= max_dim]


def polygons() -> list[str]:
    return [n for n in VERTICES if len(VERTICES[n][0]) == 2]
