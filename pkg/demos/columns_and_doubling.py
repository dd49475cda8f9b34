"""Columns, products and doubling on a few small polygons."""
from polykit import corpus
from polykit.classify import is_balanced
from polykit.columns import cb_matrix, column_vectors
from polykit.doubling import double, extra_columns, lift_columns, spectrum


def show_columns(name):
    p = corpus.get(name)
    t = column_vectors(p)
    print(f"{name}: {len(t)} columns, balanced={is_balanced(p, t)}")
    for c in t:
        f = p.facet(c.base)
        print(f"  {c.v} base {f.normal} >= {f.offset}")
    for (i, j), k in sorted(t.products.items()):
        print(f"  product {t.columns[i].v} * {t.columns[j].v} = {t.columns[k].v}")


def main():
    for name in ("pc", "pentagon", "pyramid"):
        show_columns(name)

    m = cb_matrix(corpus.get("pc"))
    print("CB matrix of pc, base facets", list(m.cols))
    for r, e in zip(m.rows, m.entries):
        print(" ", r, list(e))

    d = double(corpus.get("segment2"), 0)
    print("doubling the segment [0,2] at 0 gives vertices", sorted(d.result.vertices))
    print("  delta+ =", d.delta_plus.v, " delta- =", d.delta_minus.v)

    p = corpus.get("pc")
    t = column_vectors(p)
    for f in p.facets:
        d = double(p, f.id)
        extra = extra_columns(d, lift_columns(d, t))
        kind = "base facet" if f.id in t.base_facets() else "not a base facet"
        print(f"pc doubled along F{f.id} ({kind}): extra columns {extra}")

    sp = spectrum(p, 6)
    print("spectrum of pc: column counts", [len(n.table) for n in sp])


if __name__ == "__main__":
    main()
