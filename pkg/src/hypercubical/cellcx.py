"""Combinatorial cubical complexes of dimension <= 3.

A square is a pair of parallel edge paths from a common base vertex (its
two boundary halves); a cube is a base vertex plus six faces, each a square
together with an offset path from the cube's base to the square's base.
Chain-level orientations of cube faces are not stored but solved for.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from . import _iso
from .errors import MalformedComplexError, MalformedError
from .groups import LabeledGraph
from .homology import ChainComplex, IntegerMatrix

Step = tuple[int, int]  # (edge id, +1 forward | -1 backward)


@dataclass(frozen=True)
class EdgePath:
    start: int
    steps: tuple[Step, ...] = ()

    def end(self, C: "CubicalComplex") -> int:
        return C.walk(self.start, self.steps)


@dataclass(frozen=True)
class Square:
    base: int
    left: tuple[Step, ...]
    right: tuple[Step, ...]

    def edge_multiset(self) -> list[int]:
        return sorted(e for e, _ in self.left + self.right)


@dataclass(frozen=True)
class Face:
    square: int
    offset: tuple[Step, ...] = ()
    hint: int | None = None


@dataclass(frozen=True)
class Cube:
    base: int
    faces: tuple[Face, ...]


class CellId(NamedTuple):
    dim: int
    index: int


def _steps(raw: Iterable) -> tuple[Step, ...]:
    out = []
    for e, d in raw:
        if d not in (1, -1):
            raise MalformedComplexError(f"step direction must be +1 or -1, got {d!r}")
        out.append((int(e), int(d)))
    return tuple(out)


@dataclass(frozen=True)
class CubicalComplex:
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int], ...] = ()
    squares: tuple[Square, ...] = ()
    cubes: tuple[Cube, ...] = ()
    edge_names: tuple[str, ...] | None = None
    square_names: tuple[str, ...] | None = None
    cube_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((int(s), int(t)) for s, t in self.edges))
        object.__setattr__(
            self,
            "squares",
            tuple(Square(int(q.base), _steps(q.left), _steps(q.right)) for q in self.squares),
        )
        object.__setattr__(
            self,
            "cubes",
            tuple(
                Cube(int(c.base), tuple(Face(int(f.square), _steps(f.offset), f.hint) for f in c.faces))
                for c in self.cubes
            ),
        )
        for attr, n, prefix in (
            ("edge_names", len(self.edges), "e"),
            ("square_names", len(self.squares), "s"),
            ("cube_names", len(self.cubes), "c"),
        ):
            names = getattr(self, attr)
            names = tuple(f"{prefix}{k}" for k in range(n)) if names is None else tuple(names)
            if len(names) != n:
                raise MalformedComplexError(f"{attr} has {len(names)} entries, expected {n}")
            object.__setattr__(self, attr, names)
        self.validate()

    # -- structure -----------------------------------------------------------

    def counts(self) -> tuple[int, int, int, int]:
        return len(self.vertices), len(self.edges), len(self.squares), len(self.cubes)

    @property
    def dimension(self) -> int:
        return max((d for d, c in enumerate(self.counts()) if c), default=-1)

    def walk(self, start: int, steps: Sequence[Step]) -> int:
        """Follow ``steps`` from ``start``; raises if consecutive steps do not connect."""
        v = start
        for e, d in steps:
            if not 0 <= e < len(self.edges):
                raise MalformedComplexError(f"edge {e} out of range")
            s, t = self.edges[e]
            if d > 0:
                if v != s:
                    raise MalformedComplexError(f"step {(e, d)} does not leave vertex {v}")
                v = t
            else:
                if v != t:
                    raise MalformedComplexError(f"step {(e, d)} does not leave vertex {v}")
                v = s
        return v

    def validate(self) -> None:
        nv = len(self.vertices)
        for k, (s, t) in enumerate(self.edges):
            if not (0 <= s < nv and 0 <= t < nv):
                raise MalformedComplexError(f"edge {self.edge_names[k]} has an endpoint out of range")
        for k, q in enumerate(self.squares):
            if not 0 <= q.base < nv:
                raise MalformedComplexError(f"square {self.square_names[k]} base out of range")
            if self.walk(q.base, q.left) != self.walk(q.base, q.right):
                raise MalformedComplexError(
                    f"square {self.square_names[k]}: boundary paths end at different vertices"
                )
        for k, c in enumerate(self.cubes):
            if not 0 <= c.base < nv:
                raise MalformedComplexError(f"cube {self.cube_names[k]} base out of range")
            for f in c.faces:
                if not 0 <= f.square < len(self.squares):
                    raise MalformedComplexError(f"cube {self.cube_names[k]}: face square out of range")
                if self.walk(c.base, f.offset) != self.squares[f.square].base:
                    raise MalformedComplexError(
                        f"cube {self.cube_names[k]}: offset of face "
                        f"{self.square_names[f.square]} does not reach its base vertex"
                    )

    def skeleton(self, k: int) -> "CubicalComplex":
        if k < 0:
            raise MalformedError("skeleton dimension must be >= 0")
        return CubicalComplex(
            self.vertices,
            self.edges if k >= 1 else (),
            self.squares if k >= 2 else (),
            self.cubes if k >= 3 else (),
            self.edge_names if k >= 1 else (),
            self.square_names if k >= 2 else (),
            self.cube_names if k >= 3 else (),
        )

    def cell_name(self, cell: CellId) -> str:
        names = (self.vertices, self.edge_names, self.square_names, self.cube_names)
        return names[cell.dim][cell.index]

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "edge_names": list(self.edge_names),
            "squares": [
                {"base": q.base, "left": [list(s) for s in q.left], "right": [list(s) for s in q.right]}
                for q in self.squares
            ],
            "square_names": list(self.square_names),
            "cubes": [
                {
                    "base": c.base,
                    "faces": [
                        {"square": f.square, "offset": [list(s) for s in f.offset]}
                        | ({"hint": f.hint} if f.hint is not None else {})
                        for f in c.faces
                    ],
                }
                for c in self.cubes
            ],
            "cube_names": list(self.cube_names),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CubicalComplex":
        if not isinstance(doc, dict):
            raise MalformedError("complex document must be a JSON object")
        schema = doc.get("schema", 1)
        if schema != 1:
            raise MalformedError(f"unsupported schema {schema!r}")
        try:
            return cls(
                vertices=tuple(doc["vertices"]),
                edges=tuple(tuple(e) for e in doc.get("edges", [])),
                squares=tuple(
                    Square(q["base"], tuple(map(tuple, q["left"])), tuple(map(tuple, q["right"])))
                    for q in doc.get("squares", [])
                ),
                cubes=tuple(
                    Cube(
                        c["base"],
                        tuple(
                            Face(f["square"], tuple(map(tuple, f.get("offset", []))), f.get("hint"))
                            for f in c["faces"]
                        ),
                    )
                    for c in doc.get("cubes", [])
                ),
                edge_names=doc.get("edge_names"),
                square_names=doc.get("square_names"),
                cube_names=doc.get("cube_names"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedError):
                raise
            raise MalformedError(f"bad complex document: {exc!r}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_dot(self, name: str = "complex") -> str:
        notes = [
            f"square {self.square_names[k]}: "
            f"{path_text(self, q.left)} = {path_text(self, q.right)} at {self.vertices[q.base]}"
            for k, q in enumerate(self.squares)
        ]
        return one_skeleton(self).to_dot(name, comments=notes)


def path_text(C: CubicalComplex, steps: Sequence[Step]) -> str:
    return " ".join(C.edge_names[e] + ("" if d > 0 else "~") for e, d in steps) or "refl"


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

_X, _Y, _Z, _W = range(4)


def hm_complex() -> CubicalComplex:
    """The hypercubical manifold: 2 vertices, 4 edges, 3 squares, 1 cube.

    Square boundaries (left path = right path):
    alpha: y.z~ = x.w~,  beta: y.w~ = z.x~,  gamma: z.w~ = x.y~.

    The cube has base ``a`` at corner (---) of the unit cube; its faces are
    alpha (front, back), beta (left, right), gamma (bottom, top).
    """
    F, B = 1, -1
    squares = (
        Square(0, ((_Y, F), (_Z, B)), ((_X, F), (_W, B))),
        Square(0, ((_Y, F), (_W, B)), ((_Z, F), (_X, B))),
        Square(0, ((_Z, F), (_W, B)), ((_X, F), (_Y, B))),
    )
    faces = (
        Face(0, ()),                      # front, corner (---)
        Face(0, ((_Y, F), (_W, B))),      # back, corner (-++)
        Face(1, ()),                      # left, corner (---)
        Face(1, ((_X, F), (_Y, B))),      # right, corner (+-+)
        Face(2, ()),                      # bottom, corner (---)
        Face(2, ((_X, F), (_W, B))),      # top, corner (++-)
    )
    return CubicalComplex(
        vertices=("a", "b"),
        edges=((0, 1),) * 4,
        squares=squares,
        cubes=(Cube(0, faces),),
        edge_names=("x", "y", "z", "w"),
        square_names=("alpha", "beta", "gamma"),
        cube_names=("A",),
    )


def hm_skeleton(k: int) -> CubicalComplex:
    if k not in (0, 1, 2, 3):
        raise MalformedError(f"skeleton dimension must be 0..3, got {k!r}")
    return hm_complex().skeleton(k)


def tesseract_boundary() -> CubicalComplex:
    """Boundary of the 4-cube from words over {-, +, .} ('.' marks a free coordinate)."""
    dims = 4
    verts = ["".join(w) for w in itertools.product("-+", repeat=dims)]
    vindex = {v: k for k, v in enumerate(verts)}

    def cells(nfree):
        out = []
        for free in itertools.combinations(range(dims), nfree):
            fixed = [c for c in range(dims) if c not in free]
            for signs in itertools.product("-+", repeat=len(fixed)):
                w = ["."] * dims
                for c, s in zip(fixed, signs):
                    w[c] = s
                out.append(("".join(w), free))
        return out

    def fill(word, **at):
        w = list(word)
        for c, s in at.items():
            w[int(c[1:])] = s
        return "".join(w)

    def corner(word):
        return word.replace(".", "-")

    edge_cells = cells(1)
    eindex = {w: k for k, (w, _) in enumerate(edge_cells)}
    edges = []
    for w, (c,) in edge_cells:
        edges.append((vindex[fill(w, **{f"c{c}": "-"})], vindex[fill(w, **{f"c{c}": "+"})]))

    def edge_from(vertex_word, c):
        """Edge along coordinate c leaving the vertex with a '-' there."""
        return eindex[fill(vertex_word, **{f"c{c}": "."})]

    square_cells = cells(2)
    sindex = {w: k for k, (w, _) in enumerate(square_cells)}
    squares = []
    for w, (c1, c2) in square_cells:
        base = corner(w)
        left = ((edge_from(base, c1), 1), (edge_from(fill(base, **{f"c{c1}": "+"}), c2), 1))
        right = ((edge_from(base, c2), 1), (edge_from(fill(base, **{f"c{c2}": "+"}), c1), 1))
        squares.append(Square(vindex[base], left, right))

    cubes = []
    cube_cells = cells(3)
    for w, free in cube_cells:
        base = corner(w)
        faces = []
        for c in free:
            for side in "-+":
                fw = fill(w, **{f"c{c}": side})
                offset = () if side == "-" else ((edge_from(base, c), 1),)
                faces.append(Face(sindex[fw], offset))
        cubes.append(Cube(vindex[base], tuple(faces)))

    return CubicalComplex(
        vertices=tuple(verts),
        edges=tuple(edges),
        squares=tuple(squares),
        cubes=tuple(cubes),
        edge_names=tuple(w for w, _ in edge_cells),
        square_names=tuple(w for w, _ in square_cells),
        cube_names=tuple(w for w, _ in cube_cells),
    )


# ---------------------------------------------------------------------------
# Chain complex
# ---------------------------------------------------------------------------


def path_chain(steps: Iterable[Step]) -> dict[int, int]:
    chain: dict[int, int] = {}
    for e, d in steps:
        chain[e] = chain.get(e, 0) + d
    return {e: c for e, c in chain.items() if c}


def square_boundary(C: CubicalComplex, k: int) -> dict[int, int]:
    """Left path chain minus right path chain."""
    q = C.squares[k]
    chain = path_chain(q.left)
    for e, c in path_chain(q.right).items():
        chain[e] = chain.get(e, 0) - c
    return {e: c for e, c in chain.items() if c}


def solve_cube_signs(C: CubicalComplex, k: int) -> tuple[int, ...]:
    """Face signs making ``d2(d3(cube)) = 0``.

    The first listed face is fixed to +1; when several sign vectors work
    (faces repeated in a quotient) the lexicographically first with + before
    - is taken.  Hints, when all present and valid, are used verbatim.
    """
    cube = C.cubes[k]
    boundaries = [square_boundary(C, f.square) for f in cube.faces]

    def ok(signs):
        total: dict[int, int] = {}
        for s, b in zip(signs, boundaries):
            for e, c in b.items():
                total[e] = total.get(e, 0) + s * c
        return not any(total.values())

    hints = tuple(f.hint for f in cube.faces)
    if cube.faces and all(h in (1, -1) for h in hints) and ok(hints):
        return hints
    if not cube.faces:
        return ()
    for rest in itertools.product((1, -1), repeat=len(cube.faces) - 1):
        signs = (1,) + rest
        if ok(signs):
            return signs
    raise MalformedComplexError(f"cube {C.cube_names[k]}: no face signs give d2 d3 = 0")


def chain_complex(C: CubicalComplex) -> ChainComplex:
    """Cellular chain complex in degrees 0..3."""
    nv, ne, nsq, nc = C.counts()
    d1 = IntegerMatrix(nv, ne)
    for k, (s, t) in enumerate(C.edges):
        d1.add(t, k, 1)
        d1.add(s, k, -1)
    d2 = IntegerMatrix(ne, nsq)
    for k in range(nsq):
        for e, c in square_boundary(C, k).items():
            d2.add(e, k, c)
    d3 = IntegerMatrix(nsq, nc)
    for k, cube in enumerate(C.cubes):
        for f, s in zip(cube.faces, solve_cube_signs(C, k)):
            d3.add(f.square, k, s)
    return ChainComplex((nv, ne, nsq, nc), (d1, d2, d3))


def euler_characteristic(C: CubicalComplex) -> int:
    return sum((-1) ** d * n for d, n in enumerate(C.counts()))


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------


def _incidence(C: CubicalComplex):
    """Incidence diagram: one node per cell, arcs cell -> face with multiplicity."""
    counts = C.counts()
    offsets = [sum(counts[:d]) for d in range(4)]
    colors = [d for d in range(4) for _ in range(counts[d])]
    arcs: dict[tuple[int, int], int] = {}

    def add(src, dst):
        arcs[src, dst] = arcs.get((src, dst), 0) + 1

    for k, (s, t) in enumerate(C.edges):
        add(offsets[1] + k, offsets[0] + s)
        add(offsets[1] + k, offsets[0] + t)
    for k, q in enumerate(C.squares):
        for e in q.edge_multiset():
            add(offsets[2] + k, offsets[1] + e)
    for k, c in enumerate(C.cubes):
        for f in c.faces:
            add(offsets[3] + k, offsets[2] + f.square)
    return colors, arcs, offsets


def complex_isomorphic(C1: CubicalComplex, C2: CubicalComplex) -> list[list[int]] | None:
    """Dimension-preserving cell bijection respecting incidence (orientations ignored).

    Returns ``maps[d][k]``, the image of the k-th d-cell of ``C1``, or None.
    """
    if C1.counts() != C2.counts():
        return None
    col1, arcs1, off = _incidence(C1)
    col2, arcs2, _ = _incidence(C2)
    m = _iso.find_isomorphism(col1, col2, arcs1, arcs2)
    if m is None:
        return None
    counts = C1.counts()
    return [[m[off[d] + k] - off[d] for k in range(counts[d])] for d in range(4)]


# ---------------------------------------------------------------------------
# 1-skeleta as graphs
# ---------------------------------------------------------------------------


class GraphEdge(NamedTuple):
    index: int
    source: int
    target: int
    label: str


EdgePredicate = Callable[[GraphEdge], bool]


def one_skeleton(C: CubicalComplex) -> LabeledGraph:
    return LabeledGraph(C.vertices, tuple((s, t, C.edge_names[k]) for k, (s, t) in enumerate(C.edges)))


def _graph_edges(g: LabeledGraph) -> list[GraphEdge]:
    return [GraphEdge(k, s, t, l) for k, (s, t, l) in enumerate(g.edges)]


def contract_edges(g: LabeledGraph, predicate: EdgePredicate) -> LabeledGraph:
    """Quotient by the selected edges; they disappear, other edges are kept (even as loops).

    Each merged vertex is named by its members joined with ``~`` in index order.
    """
    parent = list(range(len(g.vertices)))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    kept = []
    for e in _graph_edges(g):
        if predicate(e):
            a, b = find(e.source), find(e.target)
            if a != b:
                parent[max(a, b)] = min(a, b)
        else:
            kept.append(e)
    roots = sorted({find(v) for v in range(len(g.vertices))})
    new_index = {r: k for k, r in enumerate(roots)}
    members: dict[int, list[str]] = {r: [] for r in roots}
    for v, name in enumerate(g.vertices):
        members[find(v)].append(name)
    vertices = tuple("~".join(members[r]) for r in roots)
    edges = tuple((new_index[find(e.source)], new_index[find(e.target)], e.label) for e in kept)
    return LabeledGraph(vertices, edges)


def delete_edges(g: LabeledGraph, predicate: EdgePredicate) -> LabeledGraph:
    return LabeledGraph(
        g.vertices, tuple((e.source, e.target, e.label) for e in _graph_edges(g) if not predicate(e))
    )
