"""Finite groups, words and presentations, coset enumeration, Cayley graphs."""
from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from . import _iso
from .errors import InconclusiveError, MalformedError, UnassignedGeneratorError
from .homology import HomologySignature, IntegerMatrix, smith_normal_form

DEFAULT_MAX_COSETS = 10_000


def default_max_cosets() -> int:
    return int(os.environ.get("HYPERCUBICAL_MAX_COSETS", DEFAULT_MAX_COSETS))


# ---------------------------------------------------------------------------
# Finite groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table on indices ``0..order-1``."""

    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int = field(init=False)
    inverses: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise MalformedError("a group has at least one element")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise MalformedError("multiplication table must be order x order")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise MalformedError("table entries out of range")
        ident = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if len(ident) != 1:
            raise MalformedError("table has no two-sided identity")
        e = ident[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if self.table[x][y] == e == self.table[y][x]]
            if not ys:
                raise MalformedError(f"element {self.elements[x]!r} has no inverse")
            inv.append(ys[0])
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverses", tuple(inv))

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(name) from None

    def product(self, items: Iterable[int]) -> int:
        acc = self.identity
        for x in items:
            acc = self.table[acc][x]
        return acc

    def is_associative(self) -> bool:
        t = self.table
        r = range(self.order)
        return all(t[t[a][b]][c] == t[a][t[b][c]] for a in r for b in r for c in r)

    def generated_subgroup(self, gens: Iterable[int]) -> frozenset[int]:
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.table[x][s]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)


_QUATERNION_NAMES = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
# unit products: (sign, unit) for u*v with units 0=1, 1=i, 2=j, 3=k
_UNIT_PRODUCT = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion_group() -> FiniteGroup:
    """The quaternion group with elements ``1, -1, i, -i, j, -j, k, -k`` in that order."""

    def decode(x):
        return (1 if x % 2 == 0 else -1), x // 2

    def encode(sign, unit):
        return 2 * unit + (0 if sign > 0 else 1)

    table = []
    for a in range(8):
        sa, ua = decode(a)
        row = []
        for b in range(8):
            sb, ub = decode(b)
            s, u = _UNIT_PRODUCT[ua, ub]
            row.append(encode(sa * sb * s, u))
        table.append(tuple(row))
    return FiniteGroup(_QUATERNION_NAMES, tuple(table))


def cyclic_group(n: int) -> FiniteGroup:
    names = tuple("1" if k == 0 else f"a^{k}" for k in range(n))
    return FiniteGroup(names, tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


# ---------------------------------------------------------------------------
# Words and presentations
# ---------------------------------------------------------------------------

Word = tuple[tuple[int, int], ...]
"""A word: sequence of ``(generator index, +1 | -1)`` letters."""


def invert_word(w: Word) -> Word:
    return tuple((g, -s) for g, s in reversed(w))


def reduce_word(w: Iterable[tuple[int, int]]) -> Word:
    out: list[tuple[int, int]] = []
    for g, s in w:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[Word, Word], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(
            self, "relations", tuple((tuple(l), tuple(r)) for l, r in self.relations)
        )
        if len(set(self.generators)) != len(self.generators):
            raise MalformedError("duplicate generator names")
        n = len(self.generators)
        for lhs, rhs in self.relations:
            for g, s in lhs + rhs:
                if not 0 <= g < n or s not in (1, -1):
                    raise MalformedError(f"bad letter {(g, s)!r} in relation")

    def relators(self) -> list[Word]:
        """Relations as freely reduced relators ``lhs * rhs^-1``."""
        return [reduce_word(lhs + invert_word(rhs)) for lhs, rhs in self.relations]

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        parts = []
        for (g, s), run in itertools.groupby(w):
            k = len(list(run)) * s
            parts.append(self.generators[g] + ("" if k == 1 else f"^{k}"))
        sep = "" if all(len(x) == 1 for x in self.generators) else " "
        return sep.join(parts)

    def format_relation(self, rel: tuple[Word, Word]) -> str:
        return f"{self.format_word(rel[0])}={self.format_word(rel[1])}"

    def __str__(self) -> str:
        rels = ", ".join(self.format_relation(r) for r in self.relations)
        return f"<{', '.join(self.generators)} | {rels}>"


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\^\s*-?\d+)|(\*)|([A-Za-z_][A-Za-z_0-9']*|1))")


def _parse_word(text: str, gens: Sequence[str]) -> Word:
    """Parse ``iji``, ``i^-1 j``, ``(ij)^2``, ``x*y^3`` or ``1``.

    Generator names are matched longest-first, so with generators ``a, ab``
    the text ``abab`` reads as ``ab ab``.
    """
    by_length = sorted(gens, key=len, reverse=True)
    index = {g: n for n, g in enumerate(gens)}
    stack: list[list[Word]] = [[]]
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedError(f"cannot parse word {text!r} at {pos}")
        pos = m.end()
        lpar, rpar, power, _star, name = m.groups()
        if lpar:
            stack.append([])
        elif rpar:
            if len(stack) == 1:
                raise MalformedError(f"unbalanced ')' in {text!r}")
            inner = tuple(itertools.chain.from_iterable(stack.pop()))
            stack[-1].append(inner)
        elif power:
            if not stack[-1]:
                raise MalformedError(f"exponent without base in {text!r}")
            k = int(power[1:].replace(" ", ""))
            base = stack[-1].pop()
            if k < 0:
                base, k = invert_word(base), -k
            stack[-1].append(base * k)
        elif name:
            if name == "1":
                stack[-1].append(())
                continue
            rest = name
            while rest:
                g = next((g for g in by_length if rest.startswith(g)), None)
                if g is None:
                    raise MalformedError(f"unknown generator in {name!r}")
                stack[-1].append(((index[g], 1),))
                rest = rest[len(g):]
    if len(stack) != 1:
        raise MalformedError(f"unbalanced '(' in {text!r}")
    return tuple(itertools.chain.from_iterable(stack[0]))


def parse_presentation(text: str) -> Presentation:
    """Parse ``<g1, g2 | w1=w1', w2=w2'>``; a bare relator ``w`` means ``w=1``."""
    m = re.fullmatch(r"\s*<([^|>]*)(?:\|([^>]*))?>\s*", text)
    if not m:
        raise MalformedError(f"not a presentation: {text!r}")
    gens = tuple(g.strip() for g in m.group(1).split(",") if g.strip())
    for g in gens:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9']*", g):
            raise MalformedError(f"bad generator name {g!r}")
    relations = []
    body = (m.group(2) or "").strip()
    for part in filter(None, (p.strip() for p in body.split(","))):
        sides = part.split("=")
        if len(sides) == 1:
            sides.append("1")
        # chains like i^2=j^2=k^2 expand to consecutive equalities
        words = [_parse_word(s, gens) for s in sides]
        relations.extend(zip(words, words[1:]))
    return Presentation(gens, tuple(relations))


def eval_word(G: FiniteGroup, assign: Mapping[int, int], w: Word) -> int:
    """Left-to-right product of the assigned elements, inverting on ``-1`` letters."""
    acc = G.identity
    for g, s in w:
        try:
            x = assign[g]
        except KeyError:
            raise UnassignedGeneratorError(g) from None
        acc = G.mul(acc, x if s > 0 else G.inv(x))
    return acc


# ---------------------------------------------------------------------------
# Coset enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosetTable:
    """Complete coset table; columns are ``g0, g0^-1, g1, g1^-1, ...``.

    Row 0 is the trivial coset.
    """

    rows: tuple[tuple[int, ...], ...]

    @property
    def n_cosets(self) -> int:
        return len(self.rows)

    def act(self, coset: int, w: Word) -> int:
        for g, s in w:
            coset = self.rows[coset][2 * g + (0 if s > 0 else 1)]
        return coset

    def is_complete(self) -> bool:
        n = len(self.rows)
        return all(x is not None and 0 <= x < n for row in self.rows for x in row)


def todd_coxeter(P: Presentation, max_cosets: int | None = None) -> tuple[int, CosetTable]:
    """Enumerate cosets of the trivial subgroup (HLT strategy).

    Returns ``(order, table)``.  Raises :class:`InconclusiveError` when more
    than ``max_cosets`` cosets would be defined.
    """
    if max_cosets is None:
        max_cosets = default_max_cosets()
    if max_cosets < 1:
        raise MalformedError("max_cosets must be >= 1")
    ncols = 2 * len(P.generators)
    relators = [[2 * g + (0 if s > 0 else 1) for g, s in r] for r in P.relators() if r]

    table: list[list[int | None]] = [[None] * ncols]
    parent = [0]

    def define(alpha: int, c: int) -> None:
        if len(table) >= max_cosets:
            raise InconclusiveError(
                f"coset enumeration exceeded {max_cosets} cosets for {P}"
            )
        beta = len(table)
        table.append([None] * ncols)
        parent.append(beta)
        table[alpha][c] = beta
        table[beta][c ^ 1] = alpha

    def rep(k: int) -> int:
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def merge(k: int, l: int, queue: list[int]) -> None:
        a, b = rep(k), rep(l)
        if a != b:
            a, b = min(a, b), max(a, b)
            parent[b] = a
            queue.append(b)

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            gamma = queue[i]
            i += 1
            for c in range(ncols):
                delta = table[gamma][c]
                if delta is None:
                    continue
                table[delta][c ^ 1] = None
                mu, nu = rep(gamma), rep(delta)
                if table[mu][c] is not None:
                    merge(nu, table[mu][c], queue)
                elif table[nu][c ^ 1] is not None:
                    merge(mu, table[nu][c ^ 1], queue)
                else:
                    table[mu][c] = nu
                    table[nu][c ^ 1] = mu

    def scan_and_fill(alpha: int, word: list[int]) -> None:
        f, b = alpha, alpha
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    alpha = 0
    while alpha < len(table):
        for r in relators:
            if parent[alpha] != alpha:
                break
            scan_and_fill(alpha, r)
        if parent[alpha] == alpha:
            for c in range(ncols):
                if table[alpha][c] is None:
                    define(alpha, c)
        alpha += 1

    live = [k for k in range(len(table)) if parent[k] == k]
    renum = {k: n for n, k in enumerate(live)}
    rows = tuple(tuple(renum[rep(table[k][c])] for c in range(ncols)) for k in live)
    result = CosetTable(rows)
    # certification: complete, permutation columns, closed under relators
    if not result.is_complete():
        raise RuntimeError("coset enumeration finished with an incomplete table")
    for c in range(ncols):
        if any(rows[rows[k][c]][c ^ 1] != k for k in range(len(rows))):
            raise RuntimeError("coset table columns are not mutually inverse")
    for w in P.relators():
        if any(result.act(k, w) != k for k in range(len(rows))):
            raise RuntimeError("coset table is not closed under a relator")
    return len(rows), result


# ---------------------------------------------------------------------------
# Presentations vs. concrete groups
# ---------------------------------------------------------------------------


def _assignments(P: Presentation, G: FiniteGroup):
    """Yield assignments satisfying every relation, in lexicographic order.

    A relation is checked as soon as its largest generator is assigned.
    """
    n = len(P.generators)
    due: list[list[tuple[Word, Word]]] = [[] for _ in range(n)]
    for lhs, rhs in P.relations:
        letters = lhs + rhs
        if letters:
            due[max(g for g, _ in letters)].append((lhs, rhs))
    assign: dict[int, int] = {}

    def rec(k: int):
        if k == n:
            yield dict(assign)
            return
        for x in range(G.order):
            assign[k] = x
            if all(eval_word(G, assign, l) == eval_word(G, assign, r) for l, r in due[k]):
                yield from rec(k + 1)
        del assign[k]

    yield from rec(0)


def presentation_isomorphic_to(
    P: Presentation, G: FiniteGroup, max_cosets: int | None = None
) -> dict[int, int] | None:
    """Find generator images in ``G`` realising an isomorphism from the presented group.

    The assignment respects every relation and generates ``G``; together with
    a coset enumeration giving order ``|G|`` this certifies the isomorphism.
    """
    order, _ = todd_coxeter(P, max_cosets)
    if order != G.order:
        return None
    for assign in _assignments(P, G):
        if len(G.generated_subgroup(assign.values())) == G.order:
            return assign
    return None


def best_assignment(P: Presentation, G: FiniteGroup) -> tuple[dict[int, int] | None, list[int]]:
    """Generating assignment violating the fewest relations, and the violated ones.

    Used to point at offending relations when a presentation fails to present ``G``.
    """
    n = len(P.generators)
    best: tuple[dict[int, int] | None, list[int]] = (None, list(range(len(P.relations))))
    for images in itertools.product(range(G.order), repeat=n):
        if len(G.generated_subgroup(images)) != G.order:
            continue
        assign = dict(enumerate(images))
        bad = [
            k
            for k, (l, r) in enumerate(P.relations)
            if eval_word(G, assign, l) != eval_word(G, assign, r)
        ]
        if best[0] is None or len(bad) < len(best[1]):
            best = (assign, bad)
            if not bad:
                break
    return best


def abelianization(P: Presentation) -> HomologySignature:
    """Abelian invariants of the presented group (exponent-sum matrix + SNF)."""
    rels = [r for r in P.relators() if r]
    n = len(P.generators)
    rows = []
    for r in rels:
        row = [0] * n
        for g, s in r:
            row[g] += s
        rows.append(row)
    diag = smith_normal_form(IntegerMatrix.from_rows(rows, ncols=n)).diagonal
    rank = sum(1 for d in diag if d != 0)
    return HomologySignature(n - rank, tuple(d for d in diag if d > 1))


# ---------------------------------------------------------------------------
# Labeled graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((int(s), int(t), str(l)) for s, t, l in self.edges))
        n = len(self.vertices)
        for s, t, _ in self.edges:
            if not (0 <= s < n and 0 <= t < n):
                raise MalformedError(f"edge endpoint out of range: {(s, t)}")

    def to_dot(self, name: str = "G", comments: Sequence[str] = ()) -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  // {c}" for c in comments]
        for k, v in enumerate(self.vertices):
            lines.append(f'  v{k} [label="{v}"];')
        for s, t, lab in self.edges:
            lines.append(f'  v{s} -> v{t} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def cayley_graph(G: FiniteGroup, gens: Sequence[int]) -> LabeledGraph:
    """Right Cayley graph: an edge ``g -> g*s`` labeled ``s`` for each generator ``s``."""
    if not gens:
        raise MalformedError("at least one generator is required")
    edges = [(g, G.mul(g, s), G.elements[s]) for g in range(G.order) for s in gens]
    return LabeledGraph(G.elements, tuple(edges))


def _arcs(g: LabeledGraph, respect_labels: bool) -> dict[tuple[int, int], tuple]:
    arcs: dict[tuple[int, int], list] = {}
    for s, t, lab in g.edges:
        arcs.setdefault((s, t), []).append(lab if respect_labels else "")
    return {k: tuple(sorted(v)) for k, v in arcs.items()}


def graph_isomorphic(
    g1: LabeledGraph, g2: LabeledGraph, respect_labels: bool = True
) -> list[int] | None:
    """Vertex bijection ``m`` carrying directed edges (and labels, if asked) of g1 onto g2."""
    return _iso.find_isomorphism(
        [0] * len(g1.vertices),
        [0] * len(g2.vertices),
        _arcs(g1, respect_labels),
        _arcs(g2, respect_labels),
    )


def relabel(g: LabeledGraph, fn: Callable[[str], str]) -> LabeledGraph:
    return LabeledGraph(g.vertices, tuple((s, t, fn(l)) for s, t, l in g.edges))
