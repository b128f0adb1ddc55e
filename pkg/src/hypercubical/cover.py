"""Group labelings of cubical complexes and the covers they induce."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .cellcx import Cube, CubicalComplex, Face, Square, Step
from .errors import MalformedError, MissingLabelError
from .groups import FiniteGroup, Presentation, quaternion_group


@dataclass(frozen=True)
class EdgeLabeling:
    """Edge id -> group element index."""

    group: FiniteGroup
    labels: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "labels", dict(self.labels))
        for e, g in self.labels.items():
            if not 0 <= g < self.group.order:
                raise MalformedError(f"label of edge {e} is not a group element")

    @classmethod
    def from_names(cls, C: CubicalComplex, G: FiniteGroup, names: Mapping[str, str]) -> "EdgeLabeling":
        idx = {n: k for k, n in enumerate(C.edge_names)}
        labels = {}
        for edge, elem in names.items():
            if edge not in idx:
                raise MalformedError(f"no edge named {edge!r}")
            labels[idx[edge]] = G.index(elem)
        return cls(G, labels)

    def label(self, e: int) -> int:
        try:
            return self.labels[e]
        except KeyError:
            raise MissingLabelError(f"edge {e} has no label") from None

    def path(self, steps: Iterable[Step]) -> int:
        """phi of a path: product of labels, inverted on backward steps."""
        G = self.group
        g = G.identity
        for e, d in steps:
            x = self.label(e)
            g = G.mul(g, x if d > 0 else G.inv(x))
        return g


def standard_labeling() -> EdgeLabeling:
    """x -> i, y -> j, z -> -k, w -> 1 on the edges of ``hm_complex``."""
    Q = quaternion_group()
    return EdgeLabeling(Q, {0: Q.index("i"), 1: Q.index("j"), 2: Q.index("-k"), 3: Q.index("1")})


def trivial_labeling(C: CubicalComplex, G: FiniteGroup) -> EdgeLabeling:
    return EdgeLabeling(G, {e: G.identity for e in range(len(C.edges))})


class Violation(NamedTuple):
    square: int
    name: str
    left: str
    right: str


@dataclass(frozen=True)
class LabelingReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{v.name}: left {v.left} != right {v.right}" for v in self.violations)


class LabelingError(MalformedError):
    def __init__(self, report: LabelingReport):
        super().__init__(f"labeling does not balance squares: {report}")
        self.report = report


def check_labeling(C: CubicalComplex, phi: EdgeLabeling) -> LabelingReport:
    for e in range(len(C.edges)):
        if e not in phi.labels:
            raise MissingLabelError(f"edge {C.edge_names[e]!r} has no label")
    G = phi.group
    bad = []
    for k, q in enumerate(C.squares):
        l, r = phi.path(q.left), phi.path(q.right)
        if l != r:
            bad.append(Violation(k, C.square_names[k], G.elements[l], G.elements[r]))
    return LabelingReport(tuple(bad))


# ---------------------------------------------------------------------------
# The cover
# ---------------------------------------------------------------------------


def element_tag(name: str) -> str:
    """Suffix form used in cover cell names: ``-i`` -> ``i-``."""
    return name[1:] + "-" if name.startswith("-") else name


@dataclass(frozen=True)
class CoveringData:
    """Total space of the cover with its projection and deck action.

    Cell ``(c, q)`` of dimension d has index ``c * |G| + q`` in ``total``, so
    ``projection[d][i] == i // |G|``; ``action[h][d]`` is the permutation of
    d-cells induced by ``(c, q) -> (c, h q)``.
    """

    base: CubicalComplex
    labeling: EdgeLabeling
    total: CubicalComplex
    projection: tuple[tuple[int, ...], ...]
    action: tuple[tuple[tuple[int, ...], ...], ...] = field(repr=False)

    @property
    def group(self) -> FiniteGroup:
        return self.labeling.group

    def cell(self, dim: int, base_index: int, q: int) -> int:
        return base_index * self.group.order + q

    def split(self, dim: int, index: int) -> tuple[int, int]:
        return divmod(index, self.group.order)


def lift_path(phi: EdgeLabeling, q: int, steps: Sequence[Step]) -> tuple[int, tuple[Step, ...]]:
    """Lift a path starting at group coordinate ``q``.

    Returns the end coordinate and the lifted steps as cover edge indices.
    Forward along p from ``(v, g)`` uses edge ``(p, g)``; backward along p into
    ``(v, g)`` uses ``(p, g phi(p)^-1)``.
    """
    G = phi.group
    n = G.order
    g = q
    out = []
    for e, d in steps:
        if d > 0:
            out.append((e * n + g, 1))
            g = G.mul(g, phi.label(e))
        else:
            g = G.mul(g, G.inv(phi.label(e)))
            out.append((e * n + g, -1))
    return g, tuple(out)


def cover_complex(C: CubicalComplex, phi: EdgeLabeling) -> CoveringData:
    report = check_labeling(C, phi)
    if not report.ok:
        raise LabelingError(report)
    G = phi.group
    n = G.order
    tags = [element_tag(x) for x in G.elements]

    def names(base_names):
        return tuple(f"{b}.{t}" for b in base_names for t in tags)

    vertices = names(C.vertices)
    edges = tuple(
        (s * n + q, t * n + G.mul(q, phi.label(e)))
        for e, (s, t) in enumerate(C.edges)
        for q in range(n)
    )
    squares = []
    for sq in C.squares:
        for q in range(n):
            _, left = lift_path(phi, q, sq.left)
            _, right = lift_path(phi, q, sq.right)
            squares.append(Square(sq.base * n + q, left, right))
    cubes = []
    for cube in C.cubes:
        for q in range(n):
            faces = []
            for f in cube.faces:
                g, offset = lift_path(phi, q, f.offset)
                faces.append(Face(f.square * n + g, offset, f.hint))
            cubes.append(Cube(cube.base * n + q, tuple(faces)))
    total = CubicalComplex(
        vertices,
        edges,
        tuple(squares),
        tuple(cubes),
        names(C.edge_names),
        names(C.square_names),
        names(C.cube_names),
    )
    counts = C.counts()
    projection = tuple(tuple(i // n for i in range(c * n)) for c in counts)
    action = tuple(
        tuple(tuple(c * n + G.mul(h, q) for c in range(cnt) for q in range(n)) for cnt in counts)
        for h in range(n)
    )
    return CoveringData(C, phi, total, projection, action)


def check_covering(cov: CoveringData) -> list[str]:
    """Problems with the deck action and projection; empty when all checks pass.

    Checks that the action is a homomorphism, is free, has regular fibers,
    commutes with projection, and carries cells to cells with matching
    incidence; and that projection maps incidence to incidence.
    """
    G = cov.group
    n = G.order
    T, B = cov.total, cov.base
    problems = []
    counts = T.counts()
    for h1 in range(n):
        for h2 in range(n):
            h = G.mul(h1, h2)
            for d in range(4):
                a1, a2, a = cov.action[h1][d], cov.action[h2][d], cov.action[h][d]
                if any(a1[a2[i]] != a[i] for i in range(counts[d])):
                    problems.append(f"action not a homomorphism at ({G.elements[h1]}, {G.elements[h2]}) dim {d}")
    for d in range(4):
        fibers: dict[int, list[int]] = {}
        for i in range(counts[d]):
            fibers.setdefault(cov.projection[d][i], []).append(i)
            for h in range(n):
                j = cov.action[h][d][i]
                if h != G.identity and j == i:
                    problems.append(f"{G.elements[h]} fixes {d}-cell {i}")
                if cov.projection[d][j] != cov.projection[d][i]:
                    problems.append(f"action does not commute with projection at {d}-cell {i}")
        base_count = B.counts()[d]
        if sorted(fibers) != list(range(base_count)):
            problems.append(f"projection misses some base {d}-cells")
        for c, fib in fibers.items():
            orbit = {cov.action[h][d][fib[0]] for h in range(n)}
            if len(fib) != n or orbit != set(fib):
                problems.append(f"fiber over {d}-cell {c} is not a regular orbit")

    pv, pe, ps, pc = cov.projection
    for h in range(n):
        av, ae, asq, acu = cov.action[h]
        for i, (s, t) in enumerate(T.edges):
            if T.edges[ae[i]] != (av[s], av[t]):
                problems.append(f"action breaks edge incidence at edge {i}")
            if B.edges[pe[i]] != (pv[s], pv[t]):
                problems.append(f"projection breaks edge incidence at edge {i}")
        for i, sq in enumerate(T.squares):
            img = T.squares[asq[i]]
            if img.base != av[sq.base] or img.left != tuple((ae[e], d) for e, d in sq.left) or img.right != tuple((ae[e], d) for e, d in sq.right):
                problems.append(f"action breaks square incidence at square {i}")
        for i, cu in enumerate(T.cubes):
            img = T.cubes[acu[i]]
            if tuple(asq[f.square] for f in cu.faces) != tuple(f.square for f in img.faces):
                problems.append(f"action breaks cube incidence at cube {i}")
    for i, sq in enumerate(T.squares):
        bsq = B.squares[ps[i]]
        if pv[sq.base] != bsq.base or [(pe[e], d) for e, d in sq.left] != list(bsq.left) or [(pe[e], d) for e, d in sq.right] != list(bsq.right):
            problems.append(f"projection breaks square incidence at square {i}")
    for i, cu in enumerate(T.cubes):
        bcu = B.cubes[pc[i]]
        if [ps[f.square] for f in cu.faces] != [f.square for f in bcu.faces]:
            problems.append(f"projection breaks cube incidence at cube {i}")
    return problems


# ---------------------------------------------------------------------------
# Fundamental group
# ---------------------------------------------------------------------------


def _check_spanning_tree(C: CubicalComplex, tree: set[int]) -> None:
    nv = len(C.vertices)
    parent = list(range(nv))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in sorted(tree):
        if not 0 <= e < len(C.edges):
            raise MalformedError(f"tree edge {e} out of range")
        s, t = C.edges[e]
        a, b = find(s), find(t)
        if a == b:
            raise MalformedError(f"tree contains a cycle through edge {C.edge_names[e]!r}")
        parent[a] = b
    if len({find(v) for v in range(nv)}) > 1:
        raise MalformedError("tree does not span the 1-skeleton (or the complex is disconnected)")


def pi1_presentation(C: CubicalComplex, tree: Iterable[int] | Iterable[str]) -> Presentation:
    """Presentation of pi_1: one generator per non-tree edge, one relation per square.

    ``tree`` may list edge ids or edge names.
    """
    ids = set()
    for e in tree:
        if isinstance(e, str):
            if e not in C.edge_names:
                raise MalformedError(f"no edge named {e!r}")
            ids.add(C.edge_names.index(e))
        else:
            ids.add(int(e))
    _check_spanning_tree(C, ids)
    free = [e for e in range(len(C.edges)) if e not in ids]
    gen = {e: k for k, e in enumerate(free)}

    def word(steps):
        return tuple((gen[e], d) for e, d in steps if e in gen)

    rels = tuple((word(sq.left), word(sq.right)) for sq in C.squares)
    return Presentation(tuple(C.edge_names[e] for e in free), rels)
