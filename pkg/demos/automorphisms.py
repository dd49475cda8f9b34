"""Elementary automorphisms, commutator relations and the sign element."""
from polykit import corpus
from polykit.algebra import (
    commutator_rhs,
    epsilon_word,
    signs_on_points,
    symbolic_character,
    toric_conjugation_holds,
    verify_comrel,
)
from polykit.columns import column_vectors
from polykit.rings import INT, RingSpec


def main():
    for name in ("pc", "esstri"):
        p = corpus.get(name)
        t = column_vectors(p)
        u, v = t.get((0, -1)), t.get((1, 0))
        r = verify_comrel(p, u, v)
        rhs = ", ".join(f"e_{l.column.v}^({l.lam})" for l in commutator_rhs(p, u, v).letters)
        print(f"{name}: [e_u, e_v] = {rhs}  case={r.case} n={r.n} verified={r.passed}")

    p = corpus.get("triangle2")
    t = column_vectors(p)
    for ring in (INT, RingSpec.parse("mod:2")):
        signs = signs_on_points(p, epsilon_word(t, (1, 0), ring), ring)
        layers = {}
        for x, s in sorted(signs.items()):
            layers.setdefault(x[1], set()).add(s)
        print(f"epsilon on 2*simplex over {ring}: signs by layer y", {k: sorted(s) for k, s in layers.items()})

    for name in ("pc", "square"):
        p = corpus.get(name)
        alpha = symbolic_character(p.dim)
        ok = all(toric_conjugation_holds(p, alpha, c) for c in column_vectors(p))
        print(f"{name}: toric conjugation holds for every column: {ok}")


if __name__ == "__main__":
    main()
