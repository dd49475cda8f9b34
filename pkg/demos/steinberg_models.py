"""Steinberg presentations on a spectrum and the block-matrix models."""
from polykit import corpus
from polykit.doubling import spectrum
from polykit.steinberg import (
    calibrate_placement,
    index_model,
    pi_check,
    presentation,
    specquad_zones,
    uv_subgroup_checks,
    verify_model,
)


def main():
    for node in spectrum(corpus.get("pc"), 3):
        pres = presentation(node.polytope, node.table)
        rep = pi_check(pres)
        print(f"pc node {node.index}: {pres.counts()} all relations hold: {rep.passed}")

    print("placement:", calibrate_placement())
    for cls, j, t in (("b", 2, 1), ("c", 3, 1), ("d", 2, 2), ("b", 1, 1)):
        r = verify_model(index_model(cls, j, t), (2, 4))
        s = uv_subgroup_checks(cls, j, t)
        print(f"class {cls} j={j} t={t}: size {r.size}, relations {r.symbolic} {r.modular}, "
              f"U/V injective {s.injective}, centrality {s.central_trivial_rational}")

    for m, j0 in ((5, 3), (6, 3), (7, 4)):
        print(f"zones m={m} j0={j0}: pairs without a midpoint",
              specquad_zones(m, j0).composability_failures())


if __name__ == "__main__":
    main()
