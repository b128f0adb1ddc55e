"""Backtracking isomorphism search for small vertex-colored directed multigraphs.

Both graph isomorphism (``groups.graph_isomorphic``) and cell-complex
isomorphism (``cellcx.complex_isomorphic``, run on the incidence diagram)
reduce to this.  Arcs carry a hashable label (a multiplicity or a sorted
tuple of edge labels); an isomorphism must carry the label of every ordered
pair ``(u, v)`` to the label of ``(m[u], m[v])``.
"""
from __future__ import annotations

import sys
from collections import Counter, defaultdict
from typing import Hashable, Mapping, Sequence

Arcs = Mapping[tuple[int, int], Hashable]


def _refine(colors1, colors2, arcs1, arcs2, n):
    """Joint 1-WL color refinement; returns stable integer colorings."""
    out1, in1 = defaultdict(list), defaultdict(list)
    out2, in2 = defaultdict(list), defaultdict(list)
    for (u, v), lab in arcs1.items():
        out1[u].append((v, lab))
        in1[v].append((u, lab))
    for (u, v), lab in arcs2.items():
        out2[u].append((v, lab))
        in2[v].append((u, lab))

    palette: dict = {}
    c1 = [palette.setdefault(("init", colors1[v]), len(palette)) for v in range(n)]
    c2 = [palette.setdefault(("init", colors2[v]), len(palette)) for v in range(n)]
    while True:
        palette = {}

        def signature(v, cols, out, inn):
            return (
                cols[v],
                tuple(sorted((repr(lab), cols[w]) for w, lab in out[v])),
                tuple(sorted((repr(lab), cols[w]) for w, lab in inn[v])),
            )

        sig1 = [signature(v, c1, out1, in1) for v in range(n)]
        sig2 = [signature(v, c2, out2, in2) for v in range(n)]
        for s in sorted(set(sig1) | set(sig2), key=repr):
            palette[s] = len(palette)
        n1 = [palette[s] for s in sig1]
        n2 = [palette[s] for s in sig2]
        if len(set(n1)) == len(set(c1)) and len(set(n2)) == len(set(c2)):
            return n1, n2
        c1, c2 = n1, n2


def find_isomorphism(
    colors1: Sequence[Hashable],
    colors2: Sequence[Hashable],
    arcs1: Arcs,
    arcs2: Arcs,
) -> list[int] | None:
    """Return ``m`` with ``m[u]`` the image of vertex ``u``, or None."""
    n = len(colors1)
    if n != len(colors2):
        return None
    if Counter(colors1) != Counter(colors2):
        return None
    if Counter(arcs1.values()) != Counter(arcs2.values()):
        return None
    if n == 0:
        return []
    c1, c2 = _refine(colors1, colors2, arcs1, arcs2, n)
    if Counter(c1) != Counter(c2):
        return None

    nbrs1: dict[int, set[int]] = defaultdict(set)
    nbrs2: dict[int, set[int]] = defaultdict(set)
    for u, v in arcs1:
        nbrs1[u].add(v)
        nbrs1[v].add(u)
    for u, v in arcs2:
        nbrs2[u].add(v)
        nbrs2[v].add(u)
    by_color2: dict[int, list[int]] = defaultdict(list)
    for v in range(n):
        by_color2[c2[v]].append(v)

    # Matching order: greedy, most already-placed neighbours first, rarest
    # color as tie-break, lowest index last.
    class_size = Counter(c1)
    order: list[int] = []
    placed = [False] * n
    touch = [0] * n
    for _ in range(n):
        best = min(
            (v for v in range(n) if not placed[v]),
            key=lambda v: (-touch[v], class_size[c1[v]], v),
        )
        order.append(best)
        placed[best] = True
        for w in nbrs1[best]:
            touch[w] += 1

    mapping = [-1] * n
    used = [False] * n

    def consistent(u: int, v: int) -> bool:
        if arcs1.get((u, u)) != arcs2.get((v, v)):
            return False
        if len(nbrs1[u]) != len(nbrs2[v]):
            return False
        for w in nbrs1[u]:
            mw = mapping[w]
            if mw < 0 or w == u:
                continue
            if arcs1.get((u, w)) != arcs2.get((v, mw)):
                return False
            if arcs1.get((w, u)) != arcs2.get((mw, v)):
                return False
        # images of unmapped-to-u neighbours must not be adjacent to v
        mapped_nbrs = sum(1 for w in nbrs1[u] if mapping[w] >= 0 and w != u)
        image_nbrs = sum(1 for x in nbrs2[v] if used[x] and x != v)
        return mapped_nbrs == image_nbrs

    def candidates(u: int):
        anchor = min((w for w in nbrs1[u] if mapping[w] >= 0 and w != u), default=None)
        if anchor is None:
            pool = by_color2[c1[u]]
        else:
            pool = sorted(x for x in nbrs2[mapping[anchor]] if c2[x] == c1[u])
        return [v for v in pool if not used[v]]

    def extend(depth: int) -> bool:
        if depth == n:
            return True
        u = order[depth]
        for v in candidates(u):
            if consistent(u, v):
                mapping[u] = v
                used[v] = True
                if extend(depth + 1):
                    return True
                mapping[u] = -1
                used[v] = False
        return False

    limit = sys.getrecursionlimit()
    if limit < n + 100:
        sys.setrecursionlimit(n + 100)
    try:
        found = extend(0)
    finally:
        sys.setrecursionlimit(limit)
    return list(mapping) if found else None
