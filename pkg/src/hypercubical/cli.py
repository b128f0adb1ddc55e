"""Command-line entry point.

Exit codes: 0 ok, 1 a verification failed, 2 usage error or malformed
input, 3 a resource budget was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import cellcx, cover, groups, homology, resolution
from .errors import BudgetExceeded, HypercubicalError, MalformedError, UncertifiedDegreeError

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SCHEMA = 1

BUILTIN_PRESENTATIONS = (
    ("quaternion-unit", "<e, i, j, k | i^2=e, j^2=e, k^2=e, ijk=e, e^2=1>"),
    ("quaternion-two-generator", "<i, j | i^4=1, i^2=j^2, iji=j>"),
    ("quaternion-symmetric", "<i, j | i=jij, j=iji>"),
)


@dataclass
class Outcome:
    code: int = EXIT_OK
    text: list[str] = field(default_factory=list)
    doc: dict = field(default_factory=dict)
    dot: str | None = None


class UsageError(MalformedError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


def _read_presentations(path: str) -> list[tuple[str, str]]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise MalformedError(f"cannot read {path}: {exc.strerror}") from exc
    out = []
    for n, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(":")
        if sep and not name.strip().startswith("<"):
            out.append((name.strip(), body.strip()))
        else:
            out.append((f"line {n}", line))
    if not out:
        raise MalformedError(f"{path}: no presentations found")
    return out


def _verify_one(name: str, P: groups.Presentation, G: groups.FiniteGroup) -> dict:
    order, _ = groups.todd_coxeter(P)
    entry = {"name": name, "presentation": str(P), "order": order, "expected_order": G.order}
    assign = groups.presentation_isomorphic_to(P, G) if order == G.order else None
    entry["ok"] = assign is not None
    if assign is not None:
        entry["assignment"] = {P.generators[g]: G.elements[x] for g, x in assign.items()}
    else:
        best, bad = groups.best_assignment(P, G)
        entry["offending_relations"] = [P.format_relation(P.relations[k]) for k in bad]
        if best is not None:
            entry["closest_assignment"] = {P.generators[g]: G.elements[x] for g, x in best.items()}
    return entry


def cmd_presentations(args) -> Outcome:
    Q = groups.quaternion_group()
    items = []
    if args.file:
        for name, text in _read_presentations(args.file):
            items.append((name, groups.parse_presentation(text)))
    else:
        items = [(name, groups.parse_presentation(text)) for name, text in BUILTIN_PRESENTATIONS]
        items.append(("pi1-hm (tree {w})", cover.pi1_presentation(cellcx.hm_skeleton(2), {"w"})))
    results = [_verify_one(name, P, Q) for name, P in items]
    out = Outcome(doc={"group": "Q", "results": results})
    for r in results:
        status = "ok" if r["ok"] else "FAILED"
        out.text.append(f"{r['name']}: {r['presentation']}")
        out.text.append(f"  order: {r['order']} (expected {r['expected_order']}) {status}")
        if r["ok"]:
            out.text.append("  assignment: " + ", ".join(f"{g}->{x}" for g, x in r["assignment"].items()))
        else:
            for rel in r["offending_relations"]:
                out.text.append(f"  offending relation: {rel}")
    if not all(r["ok"] for r in results):
        out.code = EXIT_FAILED
    return out


# ---------------------------------------------------------------------------
# complexes and covers
# ---------------------------------------------------------------------------


def _counts_text(C: cellcx.CubicalComplex) -> str:
    return "counts: " + ", ".join(str(c) for c in C.counts())


def cmd_complex(args) -> Outcome:
    C = cellcx.tesseract_boundary() if args.tesseract else cellcx.hm_skeleton(args.hm_skeleton)
    out = Outcome(doc=C.to_json(), dot=C.to_dot("tesseract" if args.tesseract else "hm"))
    out.text.append(_counts_text(C))
    out.text.append(f"euler characteristic: {cellcx.euler_characteristic(C)}")
    for k, (s, t) in enumerate(C.edges):
        out.text.append(f"edge {C.edge_names[k]}: {C.vertices[s]} -> {C.vertices[t]}")
    for k, q in enumerate(C.squares):
        out.text.append(
            f"square {C.square_names[k]}: {cellcx.path_text(C, q.left)} = "
            f"{cellcx.path_text(C, q.right)} at {C.vertices[q.base]}"
        )
    for k, c in enumerate(C.cubes):
        faces = ", ".join(C.square_names[f.square] for f in c.faces)
        out.text.append(f"cube {C.cube_names[k]}: base {C.vertices[c.base]}, faces {faces}")
    return out


def cmd_cover(args) -> Outcome:
    base = cellcx.hm_skeleton(args.hm_skeleton)
    cov = cover.cover_complex(base, cover.standard_labeling())
    T = cov.total
    problems = cover.check_covering(cov)
    doc = {"counts": list(T.counts()), "deck_action_ok": not problems, "complex": T.to_json()}
    out = Outcome(doc=doc, dot=T.to_dot("cover"))
    out.text.append(_counts_text(T))
    out.text.append(f"deck action free and regular: {str(not problems).lower()}")
    out.text.extend(f"  problem: {p}" for p in problems)
    if args.check_tesseract:
        iso = cellcx.complex_isomorphic(T, cellcx.tesseract_boundary()) is not None
        doc["isomorphic"] = iso
        out.text.append(f"isomorphic: {str(iso).lower()}")
        if not iso:
            out.code = EXIT_FAILED
    if problems:
        out.code = EXIT_FAILED
    return out


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def _load_chain_complex(path: str) -> homology.ChainComplex:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MalformedError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedError(f"{path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(doc, dict):
        raise MalformedError(f"{path}: expected a JSON object")
    if "vertices" in doc:
        return cellcx.chain_complex(cellcx.CubicalComplex.from_json(doc))
    if "ranks" in doc:
        try:
            return homology.ChainComplex.from_json(doc)
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            if isinstance(exc, MalformedError):
                raise
            raise MalformedError(f"{path}: bad chain complex ({exc!r})") from exc
    raise MalformedError(f"{path}: neither a cubical complex nor a chain complex")


def cmd_homology(args) -> Outcome:
    if args.input:
        C, source = _load_chain_complex(args.input), args.input
    elif args.hm:
        C, source = cellcx.chain_complex(cellcx.hm_skeleton(3)), "hm"
    elif args.cover_hm:
        cov = cover.cover_complex(cellcx.hm_skeleton(3), cover.standard_labeling())
        C, source = cellcx.chain_complex(cov.total), "cover-hm"
    else:
        C, source = cellcx.chain_complex(cellcx.tesseract_boundary()), "tesseract"
    hs = homology.homology(C)
    out = Outcome(doc={"source": source, "ranks": list(C.ranks), "homology": [h.to_json() for h in hs]})
    out.text.append(homology.format_homology(hs))
    return out


# ---------------------------------------------------------------------------
# cayley
# ---------------------------------------------------------------------------


def cayley_subquotient() -> groups.LabeledGraph:
    """Cover 1-skeleton with (w, q) edges contracted and (z, q) edges deleted."""
    cov = cover.cover_complex(cellcx.hm_skeleton(1), cover.standard_labeling())
    g = cellcx.one_skeleton(cov.total)
    g = cellcx.contract_edges(g, lambda e: e.label.startswith("w."))
    return cellcx.delete_edges(g, lambda e: e.label.startswith("z."))


def cmd_cayley(args) -> Outcome:
    Q = groups.quaternion_group()
    target = groups.cayley_graph(Q, [Q.index("i"), Q.index("j")])
    sub = cayley_subquotient()
    shape = groups.graph_isomorphic(sub, target, respect_labels=False) is not None
    rename = {"x": "i", "y": "j"}
    labelled = groups.relabel(sub, lambda l: rename.get(l.split(".")[0], l))
    labels = groups.graph_isomorphic(labelled, target, respect_labels=True) is not None
    out = Outcome(
        doc={
            "vertices": len(sub.vertices),
            "edges": len(sub.edges),
            "isomorphic": shape,
            "isomorphic_with_labels": labels,
            "graph": sub.to_json(),
        },
        dot=sub.to_dot("subquotient"),
    )
    out.text.append(f"subquotient: {len(sub.vertices)} vertices, {len(sub.edges)} edges")
    out.text.append(f"isomorphic: {str(shape).lower()}")
    out.text.append(f"isomorphic with labels x->i, y->j: {str(labels).lower()}")
    if not (shape and labels):
        out.code = EXIT_FAILED
    return out


# ---------------------------------------------------------------------------
# resolution
# ---------------------------------------------------------------------------

MAX_EXACTNESS_N = 2


def cmd_resolution(args) -> Outcome:
    n = args.n
    R = resolution.hm_resolution(n)
    Z = homology.restrict_to_z(R)
    doc = {"n": n, "zg_ranks": list(R.ranks), "z_ranks": list(Z.ranks), "euler": Z.euler_characteristic()}
    out = Outcome(doc=doc)
    out.text.append("ZQ ranks: " + " ".join(map(str, R.ranks)))
    out.text.append("Z ranks: " + " ".join(map(str, Z.ranks)))
    out.text.append(f"euler characteristic: {doc['euler']}")
    if n <= MAX_EXACTNESS_N:
        hs = homology.homology(Z)
        rng = 0
        for h in hs[1:]:
            if not h.is_zero():
                break
            rng += 1
        doc["restriction_homology"] = [h.to_json() for h in hs]
        doc["exactness_range"] = rng
        out.text.append(f"exactness range: {rng} (expected {resolution.certified_degree(n)})")
        if rng != resolution.certified_degree(n):
            out.code = EXIT_FAILED
    else:
        out.text.append(f"exactness range: skipped for n > {MAX_EXACTNESS_N}")
    if args.group_homology is not None:
        gh = resolution.group_homology(n, args.group_homology)
        doc["group_homology"] = [h.to_json() for h in gh]
        out.text.append("group homology of Q:")
        out.text.append(homology.format_homology(gh))
    if args.emit_matrices:
        doc["complex"] = R.to_json()
    return out


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = _Parser(prog="hypercubical", description="Hypercubical manifold computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pres = sub.add_parser("presentations", parents=[common], help="verify presentations of Q")
    pres.add_argument("action", choices=("verify",))
    pres.add_argument("--file", help="one presentation per line, optionally 'name: <...>'")
    pres.set_defaults(func=cmd_presentations, dot_ok=False)

    cx = sub.add_parser("complex", parents=[common], help="emit a cubical complex")
    cx.add_argument("action", choices=("build",))
    g = cx.add_mutually_exclusive_group(required=True)
    g.add_argument("--hm-skeleton", type=int, choices=range(4), metavar="K")
    g.add_argument("--tesseract", action="store_true")
    cx.set_defaults(func=cmd_complex, dot_ok=True)

    cv = sub.add_parser("cover", parents=[common], help="cover of an HM skeleton")
    cv.add_argument("--hm-skeleton", type=int, choices=range(4), metavar="K", required=True)
    cv.add_argument("--check-tesseract", action="store_true")
    cv.set_defaults(func=cmd_cover, dot_ok=True)

    hm = sub.add_parser("homology", parents=[common], help="integral homology")
    g = hm.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", metavar="FILE")
    g.add_argument("--hm", action="store_true")
    g.add_argument("--cover-hm", action="store_true")
    g.add_argument("--tesseract", action="store_true")
    hm.set_defaults(func=cmd_homology, dot_ok=False)

    cy = sub.add_parser("cayley", parents=[common], help="Cayley graph subquotient check")
    cy.add_argument("--check-subquotient", action="store_true", required=True)
    cy.set_defaults(func=cmd_cayley, dot_ok=True)

    rs = sub.add_parser("resolution", parents=[common], help="iterated join resolution")
    rs.add_argument("--n", type=int, choices=range(1, 4), metavar="N", required=True)
    rs.add_argument("--group-homology", type=_nonneg, metavar="D")
    rs.add_argument("--emit-matrices", action="store_true")
    rs.set_defaults(func=cmd_resolution, dot_ok=False)
    return p


def _render(out: Outcome, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, **out.doc}, indent=2, sort_keys=True) + "\n"
    if fmt == "dot":
        return out.dot or ""
    return "\n".join(out.text) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{parser.prog}: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.format == "dot" and not args.dot_ok:
        stderr.write(f"{parser.prog}: error: --format dot is not available for {args.command}\n")
        return EXIT_USAGE
    try:
        out = args.func(args)
    except BudgetExceeded as exc:
        stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (MalformedError, UncertifiedDegreeError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except HypercubicalError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_FAILED
    text = _render(out, args.format)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            stderr.write(f"error: cannot write {args.output}: {exc.strerror}\n")
            return EXIT_USAGE
    else:
        stdout.write(text)
    return out.code


def main(argv=None) -> None:
    sys.exit(run(argv))
