"""Free ZQ-resolutions: the cover of HM, iterated joins, group homology.

The join of two augmented complexes A and B has degree m equal to the sum
of A_i (x) B_j over i + j = m - 1, where i, j >= -1 and degree -1 is the
augmentation Z.  Mixed summands A_i (x) B_j with i, j >= 0 carry the
diagonal action; they are re-based as free modules on ``e_a (x) h e_b``
for every group element h.  The differential is

    d(x (x) y) = dx (x) y + (-1)^(i+1) x (x) dy,    i = deg x,

which makes the complex concentrated in degree -1 a two-sided unit.
"""
from __future__ import annotations

import functools
import itertools
import os
from typing import Sequence

from .cellcx import chain_complex, hm_skeleton
from .cover import CoveringData, check_covering, cover_complex, standard_labeling
from .errors import BudgetExceeded, MalformedError, UncertifiedDegreeError
from .groups import FiniteGroup
from .homology import (
    ChainComplex,
    HomologySignature,
    IntegerMatrix,
    coinvariants,
    homology,
)
from .zg import GroupRingElement, ZGComplex

DEFAULT_MAX_BAR_DEGREE = 4


def default_max_bar_degree() -> int:
    return int(os.environ.get("HYPERCUBICAL_MAX_BAR_DEGREE", DEFAULT_MAX_BAR_DEGREE))


def zg_complex_from_cover(cov: CoveringData, augmented: bool = True) -> ZGComplex:
    """One free generator per base cell, represented by its fiber cell over the identity."""
    problems = [p for p in check_covering(cov) if "fixes" in p or "regular" in p]
    if problems:
        raise MalformedError(f"deck action is not free: {problems[0]}")
    G = cov.group
    n = G.order
    Z = chain_complex(cov.total)
    ranks = list(cov.base.counts())
    while len(ranks) > 1 and ranks[-1] == 0:
        ranks.pop()
    columns = []
    for k in range(1, len(ranks)):
        d = Z.boundary(k)
        cols = [dict() for _ in range(ranks[k])]
        for (r, c), v in d.items():
            s, g = divmod(c, n)
            if g != G.identity:
                continue
            p, h = divmod(r, n)
            vec = list(cols[s].get(p, GroupRingElement.zero(n)))
            vec[h] += v
            cols[s][p] = GroupRingElement(vec)
        columns.append(tuple(cols))
    return ZGComplex(G, tuple(ranks), tuple(columns), augmented)


def change_representatives(R: ZGComplex, reps: Sequence[Sequence[int]]) -> ZGComplex:
    """Re-base on ``g_c e_c`` where ``reps[k][c] = g_c`` in degree k.

    The new matrix entries are ``g_s M[p][s] g_p^-1``.
    """
    G = R.group
    n = G.order
    columns = []
    for k, cols in enumerate(R.columns, start=1):
        new_cols = []
        for s, col in enumerate(cols):
            gs = GroupRingElement.monomial(n, reps[k][s])
            new_cols.append(
                {
                    p: gs.mul(m, G).mul(GroupRingElement.monomial(n, G.inv(reps[k - 1][p])), G)
                    for p, m in col.items()
                }
            )
        columns.append(tuple(new_cols))
    return ZGComplex(G, R.ranks, tuple(columns), R.augmented)


def trivial_augmented(G: FiniteGroup) -> ZGComplex:
    """The complex with only the augmentation degree: unit for the join."""
    return ZGComplex(G, (), (), True)


def join_ranks(A: ZGComplex, B: ZGComplex) -> tuple[int, ...]:
    """ZG-ranks of ``algebraic_join(A, B)`` in degrees 0, 1, ..."""
    n = A.group.order
    ra, rb = A.ranks, B.ranks
    top = A.top_degree + B.top_degree + 1
    out = []
    for m in range(top + 1):
        mixed = sum(ra[i] * rb[m - 1 - i] for i in range(m) if i < len(ra) and 0 <= m - 1 - i < len(rb))
        out.append((ra[m] if m < len(ra) else 0) + (rb[m] if m < len(rb) else 0) + n * mixed)
    return tuple(out)


def algebraic_join(A: ZGComplex, B: ZGComplex) -> ZGComplex:
    if A.group is not B.group and A.group != B.group:
        raise MalformedError("join needs complexes over the same group")
    if not (A.augmented and B.augmented):
        raise MalformedError("join needs augmented complexes")
    G = A.group
    n = G.order
    ra, rb = A.ranks, B.ranks
    top = A.top_degree + B.top_degree + 1
    if top < 0:
        return trivial_augmented(G)

    # basis layout in degree m: A-part, B-part, then mixed blocks by i
    a_off, b_off, mix_off, ranks = [], [], [], []
    for m in range(top + 1):
        pos = 0
        a_off.append(pos)
        pos += ra[m] if m < len(ra) else 0
        b_off.append(pos)
        pos += rb[m] if m < len(rb) else 0
        blocks = {}
        for i in range(m):
            j = m - 1 - i
            if i < len(ra) and j < len(rb):
                blocks[i] = pos
                pos += ra[i] * n * rb[j]
        mix_off.append(blocks)
        ranks.append(pos)

    def mixed(m, i, a, h, b):
        j = m - 1 - i
        return mix_off[m][i] + (a * n + h) * rb[j] + b

    def add(col, row, g, c):
        vec = col.get(row)
        vec = list(vec) if vec is not None else [0] * n
        vec[g] += c
        col[row] = vec

    one = G.identity
    columns = []
    for m in range(1, top + 1):
        cols: list[dict] = [dict() for _ in range(ranks[m])]
        if m < len(ra):
            for a in range(ra[m]):
                col = cols[a_off[m] + a]
                for p, v in A.columns[m - 1][a].items():
                    col[a_off[m - 1] + p] = list(v)
        if m < len(rb):
            for b in range(rb[m]):
                col = cols[b_off[m] + b]
                for p, v in B.columns[m - 1][b].items():
                    col[b_off[m - 1] + p] = list(v)
        for i, _ in mix_off[m].items():
            j = m - 1 - i
            sign = -1 if i % 2 == 0 else 1  # (-1)^(i+1)
            for a in range(ra[i]):
                for h in range(n):
                    for b in range(rb[j]):
                        col = cols[mixed(m, i, a, h, b)]
                        # d(e_a) (x) h e_b
                        if i == 0:
                            add(col, b_off[m - 1] + b, h, 1)
                        else:
                            for p, v in A.columns[i - 1][a].items():
                                for g, c in enumerate(v):
                                    if c:
                                        add(col, mixed(m - 1, i - 1, p, G.mul(G.inv(g), h), b), g, c)
                        # sign * e_a (x) h d(e_b)
                        if j == 0:
                            add(col, a_off[m - 1] + a, one, sign)
                        else:
                            for p, v in B.columns[j - 1][b].items():
                                for g, c in enumerate(v):
                                    if c:
                                        add(col, mixed(m - 1, i, a, G.mul(h, g), p), one, sign * c)
        columns.append(
            tuple({p: GroupRingElement(v) for p, v in col.items() if any(v)} for col in cols)
        )
    return ZGComplex(G, tuple(ranks), tuple(columns), True)


@functools.lru_cache(maxsize=None)
def hm_resolution(n: int) -> ZGComplex:
    """Chain-level HM^n: the cover of HM as a ZQ-complex, joined with itself n times."""
    if not isinstance(n, int) or n < 1:
        raise MalformedError(f"n must be a positive integer, got {n!r}")
    if n == 1:
        return zg_complex_from_cover(cover_complex(hm_skeleton(3), standard_labeling()))
    return algebraic_join(hm_resolution(n - 1), hm_resolution(1))


def certified_degree(n: int) -> int:
    return 4 * n - 2


def group_homology(n: int, max_degree: int) -> list[HomologySignature]:
    """H_0 .. H_max_degree of Q from the coinvariants of ``hm_resolution(n)``."""
    if max_degree < 0:
        raise MalformedError("max_degree must be >= 0")
    if max_degree > certified_degree(n):
        raise UncertifiedDegreeError(
            f"hm_resolution({n}) is only a resolution through degree {certified_degree(n)}"
        )
    C = coinvariants(hm_resolution(n))
    top = max_degree + 1
    C = ChainComplex(C.ranks[: top + 1], C.boundaries[:top])
    return homology(C)[: max_degree + 1]


def bar_complex_coinvariants(G: FiniteGroup, top: int) -> ChainComplex:
    """Z (x)_ZG of the normalized bar resolution, degrees 0..top."""
    nonid = [g for g in range(G.order) if g != G.identity]
    bases = [list(itertools.product(nonid, repeat=k)) for k in range(top + 1)]
    index = [{t: i for i, t in enumerate(b)} for b in bases]
    mats = []
    for k in range(1, top + 1):
        M = IntegerMatrix(len(bases[k - 1]), len(bases[k]))
        lower = index[k - 1]
        for c, t in enumerate(bases[k]):
            faces = [(t[1:], 1)]
            for i in range(k - 1):
                g = G.mul(t[i], t[i + 1])
                if g != G.identity:
                    faces.append((t[:i] + (g,) + t[i + 2 :], (-1) ** (i + 1)))
            faces.append((t[:-1], (-1) ** k))
            for f, s in faces:
                M.add(lower[f], c, s)
        mats.append(M)
    return ChainComplex(tuple(len(b) for b in bases), tuple(mats))


def bar_resolution_oracle(G: FiniteGroup, max_degree: int) -> list[HomologySignature]:
    """Group homology H_0 .. H_max_degree via the normalized bar resolution."""
    budget = default_max_bar_degree()
    if max_degree + 1 > budget:
        raise BudgetExceeded(
            f"bar degree {max_degree + 1} exceeds budget {budget} (HYPERCUBICAL_MAX_BAR_DEGREE)"
        )
    return homology(bar_complex_coinvariants(G, max_degree + 1))[: max_degree + 1]
