"""Command line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error,
3 the input does not satisfy a precondition of the requested analysis.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .algebra import (
    AlgebraError,
    epsilon_word,
    same_base_embedding_check,
    signs_on_points,
    symbolic_character,
    toric_conjugation_holds,
    verify_comrel,
)
from .classify import (
    ClassifyError,
    classify_polygon,
    e_equivalent,
    is_balanced,
    products_of,
    projectively_equivalent,
)
from .columns import cb_matrix, column_vectors
from .doubling import (
    DoublingError,
    double,
    doubling_equation_violations,
    extra_columns,
    lift_columns,
    reorder_iso,
    spectrum,
)
from .polytope import Polytope, PolytopeError, build_polytope
from .rings import RingSpec
from .steinberg import index_model, pi_check, presentation, uv_subgroup_checks, verify_model

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class PreconditionError(Exception):
    pass


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)  # name -> sha256
    results: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)
    status: int = EXIT_OK
    notes: list = field(default_factory=list)

    def fail(self, line: str):
        self.status = EXIT_FAIL
        self.lines.append("FAIL " + line)

    def ok(self, line: str):
        self.lines.append("ok   " + line)

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "results": self.results,
                "notes": self.notes, "status": self.status}

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.as_dict(), indent=2, sort_keys=True)
        out = [f"# {self.command}"]
        out += [f"# input {k} sha256:{v[:16]}" for k, v in sorted(self.inputs.items())]
        out += self.lines
        out += [f"note: {n}" for n in self.notes]
        return "\n".join(out)


# input parsing

def _int_list(value, what: str) -> list[int]:
    if not isinstance(value, list) or not all(type(x) is int for x in value):
        raise UsageError(f"{what} must be an array of integers, got {value!r}")
    return value


def parse_polytope_document(doc) -> Polytope:
    if not isinstance(doc, dict):
        raise UsageError("polytope document must be an object")
    dim = doc.get("dim")
    if type(dim) is not int or dim < 0:
        raise UsageError("field 'dim' must be a nonnegative integer")
    verts = doc.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise UsageError("field 'vertices' must be a nonempty array")
    verts = [_int_list(v, "vertex") for v in verts]
    if any(len(v) != dim for v in verts):
        raise UsageError(f"every vertex must have {dim} coordinates")
    facets = None
    if "facets" in doc:
        facets = []
        for f in doc["facets"]:
            if not isinstance(f, dict) or "a" not in f or "b" not in f:
                raise UsageError("facets must be objects with fields 'a' and 'b'")
            a = _int_list(f["a"], "facet form")
            if type(f["b"]) is not int or len(a) != dim:
                raise UsageError("facet offset must be an integer and forms must have length dim")
            facets.append((a, f["b"]))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return build_polytope(verts, facets)
    except PolytopeError as exc:
        raise UsageError(str(exc)) from exc


def load_polytope(path: str, report: Report, name: str = "polytope") -> Polytope:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    report.inputs[name] = hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    return parse_polytope_document(doc)


def polytope_document(p: Polytope, provenance: Optional[dict] = None) -> dict:
    doc = p.describe()
    if provenance:
        doc["provenance"] = provenance
    return doc


def parse_ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def resolve_seed(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("POLYKIT_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"POLYKIT_SEED must be an integer, got {env!r}") from None


# commands

def _facet_label(p: Polytope, fid: int) -> str:
    f = p.facet(fid)
    return f"F{fid}{list(f.normal)}>={f.offset}"


def cmd_cols(args, report: Report):
    p = load_polytope(args.file, report)
    t = column_vectors(p)
    report.results["columns"] = [{"v": list(c.v), "base": c.base} for c in t]
    report.results["facets"] = [{"id": f.id, "a": list(f.normal), "b": f.offset} for f in p.facets]
    report.lines.append(f"{len(t)} column vectors")
    for c in t:
        report.lines.append(f"  {str(list(c.v)):<16} base {_facet_label(p, c.base)}")
    if not len(t):
        report.notes.append("Col(P) is empty")


def cmd_products(args, report: Report):
    p = load_polytope(args.file, report)
    t = column_vectors(p)
    prods = products_of(t)
    report.results["products"] = [{"u": list(u), "v": list(v), "uv": list(w)} for u, v, w in prods]
    report.lines.append(f"{len(t)} column vectors, {len(prods)} products")
    for u, v, w in prods:
        report.lines.append(f"  {list(u)} * {list(v)} = {list(w)}")
    if not len(t):
        report.notes.append("Col(P) is empty")


def cmd_cb(args, report: Report):
    p = load_polytope(args.file, report)
    t = column_vectors(p)
    if not len(t):
        report.notes.append("Col(P) is empty; no CB matrix")
        report.results["cb"] = None
        return
    m = cb_matrix(p, t)
    report.results["cb"] = {"rows": [list(r) for r in m.rows], "cols": list(m.cols),
                            "entries": m.as_lists()}
    report.lines.append("rows: columns, cols: base facets " + " ".join(f"F{c}" for c in m.cols))
    for r, e in zip(m.rows, m.entries):
        report.lines.append(f"  {str(list(r)):<16} " + " ".join(f"{x:>3}" for x in e))


def _check_doubling(d, report: Report, parent_table=None):
    bad = doubling_equation_violations(d)
    for b in bad:
        report.fail(b)
    lifted = lift_columns(d, parent_table)
    extra = extra_columns(d, lifted)
    if lifted.complete and extra:
        report.fail(f"balanced parent but {len(extra)} unpredicted columns")
    elif extra:
        why = "doubled facet is not a base facet" if is_balanced(d.parent) else "parent not balanced"
        report.notes.append(f"extra columns ({why}): {[list(v) for v in extra]}")
    return lifted, extra, bad


def cmd_double(args, report: Report):
    p = load_polytope(args.file, report)
    if not 0 <= args.facet < len(p.facets):
        raise UsageError(f"facet id {args.facet} out of range 0..{len(p.facets) - 1}")
    d = double(p, args.facet)
    lifted, extra, bad = _check_doubling(d, report)
    prov = {"facet": args.facet, "pivot": list(d.pivot), "parent": report.inputs["polytope"],
            "delta_plus": list(d.delta_plus.v), "delta_minus": list(d.delta_minus.v)}
    doc = polytope_document(d.result, prov)
    report.results["polytope"] = doc
    report.results["extra_columns"] = [list(v) for v in extra]
    if not bad:
        report.ok("doubling identities")
    report.lines.append(f"doubled along {_facet_label(p, args.facet)}: dim {d.result.dim}, "
                        f"{len(d.result.facets)} facets, {len(lifted.table)} lifted columns")
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
        report.lines.append(f"wrote {args.out}")
    elif not args.json:
        report.lines.append(json.dumps(doc))


def cmd_spectrum(args, report: Report):
    p = load_polytope(args.file, report)
    t = column_vectors(p)
    if not len(t):
        raise PreconditionError("polytope has no column vectors")
    if not is_balanced(p, t):
        raise PreconditionError("spectra need a balanced polytope")
    sp = spectrum(p, args.depth)
    nodes = []
    for node in sp.nodes[1:]:
        d = node.doubling
        bad = doubling_equation_violations(d)
        for b in bad:
            report.fail(f"node {node.index}: {b}")
        prov = {"step": node.index, "facet": node.facet_used, "pivot": list(node.pivot),
                "decomposed": list(node.decomposed)}
        nodes.append(polytope_document(node.polytope, prov))
        report.lines.append(f"node {node.index}: dim {node.polytope.dim}, doubled F{node.facet_used}, "
                            f"{len(node.table)} columns")
    ledger = {json.dumps(list(k)): steps for k, steps in sorted(sp.ledger.items())}
    report.results["nodes"] = nodes
    report.results["ledger"] = ledger
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for doc in nodes:
            path = out / f"node_{doc['provenance']['step']:02d}.json"
            path.write_text(json.dumps(doc, indent=2) + "\n")
        (out / "ledger.json").write_text(json.dumps(ledger, indent=2, sort_keys=True) + "\n")
        report.lines.append(f"wrote {len(nodes)} node files and ledger.json to {out}")


def _verify_comrel(p, args, report):
    ring = parse_ring(args.ring or "poly:lambda,mu")
    if ring.kind != "poly" or not {"lambda", "mu"} <= set(ring.variables):
        raise UsageError("comrel needs a polynomial ring in lambda and mu")
    t = column_vectors(p)
    if not len(t):
        raise PreconditionError("polytope has no column vectors")
    rows = []
    for u in t:
        for v in t:
            if u is v or not any(a + b for a, b in zip(u.v, v.v)):
                continue
            r = verify_comrel(p, u, v, ring, t)
            rows.append({"u": list(u.v), "v": list(v.v), "case": r.case, "n": r.n, "pass": r.passed})
            line = f"[e_{list(u.v)}, e_{list(v.v)}] case {r.case} n={r.n}"
            report.ok(line) if r.passed else report.fail(line)
    report.results["pairs"] = rows


def _verify_pi(p, args, report):
    ring = parse_ring(args.ring or "poly:lambda,mu")
    t = column_vectors(p)
    if not len(t):
        raise PreconditionError("polytope has no column vectors")
    if not is_balanced(p, t):
        raise PreconditionError("pi check runs on spectra of balanced polytopes")
    sp = spectrum(p, args.depth)
    out = []
    for node in sp:
        res = pi_check(presentation(node.polytope, node.table, ring), ring)
        out.append({"node": node.index, "relations": len(res.results),
                    "failures": len(res.failures)})
        line = f"node {node.index}: {len(res.results)} relations"
        report.ok(line) if res.passed else report.fail(line + f", {len(res.failures)} failing")
        for f in res.failures:
            report.lines.append(f"     {f.relation.kind} {f.relation.u} {f.relation.v}: {f.detail}")
    report.results["nodes"] = out


def _verify_afemb(p, args, report):
    ring = parse_ring(args.ring or "int")
    t = column_vectors(p)
    if not len(t):
        raise PreconditionError("polytope has no column vectors")
    out = []
    for fid in t.base_facets():
        r = same_base_embedding_check(p, fid, ring, seed=args.seed, table=t)
        out.append({"facet": fid, "columns": [list(v) for v in r.columns], "pass": r.passed})
        line = f"base F{fid}: {len(r.columns)} columns"
        report.ok(line) if r.passed else report.fail(line)
    report.results["facets"] = out


def _verify_trivcen(p, args, report):
    t = column_vectors(p)
    alpha = symbolic_character(p.dim)
    out = []
    for c in t:
        ok = toric_conjugation_holds(p, alpha, c)
        out.append({"w": list(c.v), "pass": ok})
        line = f"alpha e_{list(c.v)} alpha^-1 = e_{list(c.v)}^alpha(w)"
        report.ok(line) if ok else report.fail(line)
    report.results["columns"] = out


def _verify_welldef(p, args, report):
    out = []
    ids = [f.id for f in p.facets]
    for i in ids:
        for j in ids:
            if i >= j:
                continue
            try:
                r = reorder_iso(p, [i, j], [1, 0])
                ok = True
            except DoublingError as exc:
                ok, r = False, exc
            out.append({"facets": [i, j], "pass": ok})
            line = f"F{i},F{j} vs F{j},F{i}"
            report.ok(line) if ok else report.fail(f"{line}: {r}")
    report.results["pairs"] = out


def _verify_colbal(p, args, report):
    t = column_vectors(p)
    bal = is_balanced(p, t)
    out = []
    for f in p.facets:
        d = double(p, f.id)
        lifted = lift_columns(d, t, bal)
        extra = extra_columns(d, lifted)
        bad = doubling_equation_violations(d)
        for b in bad:
            report.fail(f"F{f.id}: {b}")
        out.append({"facet": f.id, "lifted_is_complete": lifted.complete,
                    "extra": [list(v) for v in extra]})
        if lifted.complete and extra:
            report.fail(f"F{f.id}: balanced parent but extra columns {extra}")
        elif extra:
            why = "not a base facet" if bal else "parent not balanced"
            report.ok(f"F{f.id}: {len(extra)} extra columns ({why})")
        else:
            report.ok(f"F{f.id}: Col of the doubling is exactly the lifted set")
    report.results["balanced"] = bal
    report.results["facets"] = out


def _verify_nfiltun(p, args, report):
    if p.dim != 1:
        raise PreconditionError("nfiltun expects a lattice segment")
    ring = parse_ring(args.ring or "int")
    if ring.kind == "poly":
        raise UsageError("nfiltun evaluates over int or mod:<m>")
    t = column_vectors(p)
    d = double(p, 0)
    lifted = lift_columns(d, t)
    v = next(c for c in t if c.base != 0)
    eps = epsilon_word(lifted.table, d.lift_minus(v).v, ring)
    signs = signs_on_points(d.result, eps, ring)
    expected = {x: (-1) ** x[-1] for x in signs}
    one = ring.one()
    as_elems = {x: (None if s is None else ring(s)) for x, s in signs.items()}
    ok = all(as_elems[x] is not None and as_elems[x] == one * expected[x] for x in signs)
    layers: dict = {}
    for x, s in sorted(signs.items()):
        layers.setdefault(x[-1], set()).add(s)
    identity = all(s == 1 for s in signs.values())
    report.results["layers"] = {str(k): sorted(v) for k, v in layers.items()}
    report.results["identity"] = identity
    desc = "identity" if identity else "not the identity"
    line = f"epsilon over {ring} is {desc}; layer signs " + \
        ", ".join(f"t={k}: {sorted(v)}" for k, v in layers.items())
    report.ok(line) if ok else report.fail(line)


def _verify_matrix_model(args, report):
    cls = args.target
    if cls not in ("b", "c", "d"):
        raise UsageError("matrix-model expects class b, c or d")
    ring = parse_ring(args.ring or "mod:4")
    if ring.kind != "mod":
        raise UsageError("matrix-model checks run over mod:<m>")
    model = index_model(cls, args.j, args.t)
    r = verify_model(model, moduli=(ring.modulus,))
    line = f"class {cls} j={args.j} t={args.t}: {model.size}x{model.size} relations"
    ok = r.symbolic and all(r.modular.values())
    report.ok(line) if ok else report.fail(line)
    sub = uv_subgroup_checks(cls, args.j, args.t, ring.modulus)
    for name, val in (("U/V commute", sub.commute), ("U/V injective", sub.injective),
                      ("centrality over Q", sub.central_trivial_rational),
                      (f"centrality over {ring}", sub.central_trivial_modular)):
        if args.j == 1 and name.startswith("centrality"):
            report.notes.append(f"{name}: not applicable for j = 1 (no diagonal generators)")
            continue
        report.ok(name) if val else report.fail(name)
    report.results.update({"size": model.size, "relations": ok, "commute": sub.commute,
                           "injective": sub.injective,
                           "centrality": [sub.central_trivial_rational, sub.central_trivial_modular]})


CHECKS = {
    "comrel": _verify_comrel,
    "pi": _verify_pi,
    "afemb": _verify_afemb,
    "trivcen-star": _verify_trivcen,
    "welldef": _verify_welldef,
    "colbal": _verify_colbal,
    "nfiltun": _verify_nfiltun,
}


def cmd_verify(args, report: Report):
    report.command = f"verify {args.check}"
    if args.check == "matrix-model":
        _verify_matrix_model(args, report)
        return
    if args.check not in CHECKS:
        raise UsageError(f"unknown check {args.check!r}")
    if args.target is None:
        raise UsageError(f"check {args.check} needs a polytope file")
    p = load_polytope(args.target, report)
    CHECKS[args.check](p, args, report)


def cmd_classify(args, report: Report):
    p = load_polytope(args.file, report)
    if p.dim != 2:
        raise UsageError(f"classify needs a polygon, got dimension {p.dim}")
    c = classify_polygon(p)
    witness = {k: (list(v) if isinstance(v, tuple) else v) for k, v in c.witness.items()}
    if "columns" in witness:
        witness["columns"] = [list(v) for v in witness["columns"]]
    report.results.update({"class": c.tag, "count": c.count, "witness": witness})
    report.lines.append(f"class {c}")


def cmd_equiv(args, report: Report):
    p = load_polytope(args.file_p, report, "P")
    q = load_polytope(args.file_q, report, "Q")
    if args.mode == "proj":
        if p.dim != q.dim:
            raise UsageError("projective equivalence needs equal dimensions")
        eq = projectively_equivalent(p, q)
        report.results["equivalent"] = eq
        report.lines.append("projectively equivalent" if eq else "not projectively equivalent")
        return
    try:
        mu = e_equivalent(p, q)
    except ClassifyError as exc:
        raise PreconditionError(str(exc)) from exc
    report.results["equivalent"] = mu is not None
    report.results["bijection"] = None if mu is None else [[list(a), list(b)] for a, b in mu.items()]
    report.lines.append("E-equivalent" if mu else "not E-equivalent")
    for a, b in (mu or {}).items():
        report.lines.append(f"  {list(a)} -> {list(b)}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a structured JSON report")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for sampled checks (default: $POLYKIT_SEED or 0)")

    ap = argparse.ArgumentParser(prog="polykit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, hlp in (("cols", cmd_cols, "list column vectors with base facets"),
                          ("products", cmd_products, "list the partial products"),
                          ("cb", cmd_cb, "print the CB matrix")):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("file")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("double", parents=[common], help="double along a facet")
    sp.add_argument("file")
    sp.add_argument("--facet", type=int, required=True)
    sp.add_argument("--out", help="write the doubled polytope here")
    sp.set_defaults(func=cmd_double)

    sp = sub.add_parser("spectrum", parents=[common], help="first steps of a doubling spectrum")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--out-dir", help="write node files and the ledger here")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    sp.add_argument("check", help="comrel, pi, afemb, trivcen-star, welldef, colbal, "
                                  "nfiltun or matrix-model")
    sp.add_argument("target", nargs="?", help="polytope file, or class b|c|d for matrix-model")
    sp.add_argument("--ring", help="int, mod:<m> or poly:<vars>")
    sp.add_argument("--depth", type=int, default=2, help="spectrum depth for the pi check")
    sp.add_argument("--j", type=int, default=2, help="truncation for matrix-model")
    sp.add_argument("--t", type=int, default=1, help="parameter t for class d")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("classify", parents=[common], help="classify a balanced polygon")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("equiv", parents=[common], help="compare two polytopes")
    sp.add_argument("file_p")
    sp.add_argument("file_q")
    sp.add_argument("--mode", choices=("e", "proj"), default="e")
    sp.set_defaults(func=cmd_equiv)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    report = Report(args.command)
    try:
        args.seed = resolve_seed(args.seed)
        args.func(args, report)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, DoublingError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (AlgebraError, ClassifyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(report.render(args.json))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
