"""Exact integer linear algebra: Smith normal form and homology of chain complexes.

Matrices are stored sparsely (row -> {col: value}) with Python integers, so
entries never overflow.  Two reduction routes exist:

* :func:`smith_normal_form` is the dense textbook algorithm and can return
  the unimodular transforms.
* :func:`invariant_factors` first eliminates unit pivots on the sparse
  representation (each such pivot contributes an invariant factor 1) and
  hands the small remainder to the dense algorithm.  Homology uses this route.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidComplexError, MalformedError


class IntegerMatrix:
    """Sparse integer matrix with exact (arbitrary precision) entries."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, entries: dict | None = None):
        if nrows < 0 or ncols < 0:
            raise MalformedError("matrix dimensions must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        self._rows: dict[int, dict[int, int]] = {}
        for (i, j), v in (entries or {}).items():
            self.add(i, j, v)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntegerMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        m = cls(len(rows), ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise MalformedError("ragged matrix rows")
            for j, v in enumerate(row):
                if v:
                    m._rows.setdefault(i, {})[j] = int(v)
        return m

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def add(self, i: int, j: int, v: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError((i, j))
        if not v:
            return
        row = self._rows.setdefault(i, {})
        nv = row.get(j, 0) + v
        if nv:
            row[j] = nv
        else:
            del row[j]
            if not row:
                del self._rows[i]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows.get(i, {}).get(j, 0)

    def items(self):
        for i in sorted(self._rows):
            row = self._rows[i]
            for j in sorted(row):
                yield (i, j), row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def to_rows(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self._rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def transpose(self) -> "IntegerMatrix":
        t = IntegerMatrix(self.ncols, self.nrows)
        for i, row in self._rows.items():
            for j, v in row.items():
                t._rows.setdefault(j, {})[i] = v
        return t

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise MalformedError(f"shape mismatch {self.shape} @ {other.shape}")
        out = IntegerMatrix(self.nrows, other.ncols)
        for i, row in self._rows.items():
            acc: dict[int, int] = {}
            for k, a in row.items():
                for j, b in other._rows.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out._rows[i] = acc
        return out

    def is_zero(self) -> bool:
        return not self._rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "IntegerMatrix":
        """Entry ``(i, j)`` moves to ``(row_perm[i], col_perm[j])``."""
        out = IntegerMatrix(self.nrows, self.ncols)
        for i, row in self._rows.items():
            out._rows[row_perm[i]] = {col_perm[j]: v for j, v in row.items()}
        return out


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SNFResult:
    """``diagonal`` has ``min(rows, cols)`` entries; ``U @ A @ V == D`` when transforms are kept."""

    diagonal: tuple[int, ...]
    U: IntegerMatrix | None = None
    V: IntegerMatrix | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _dense_snf(a: list[list[int]], m: int, n: int, U=None, V=None) -> list[int]:
    """In-place Smith reduction of dense ``a`` (``m x n``); optional row/col transforms."""

    def row_axpy(dst, src, q):  # row_dst -= q * row_src
        rd, rs = a[dst], a[src]
        for c in range(n):
            if rs[c]:
                rd[c] -= q * rs[c]
        if U is not None:
            ud, us = U[dst], U[src]
            for c in range(m):
                if us[c]:
                    ud[c] -= q * us[c]

    def col_axpy(dst, src, q):  # col_dst -= q * col_src
        for r in range(m):
            if a[r][src]:
                a[r][dst] -= q * a[r][src]
        if V is not None:
            for r in range(n):
                if V[r][src]:
                    V[r][dst] -= q * V[r][src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    diag: list[int] = []
    for t in range(min(m, n)):
        while True:
            # minimal |entry| pivot, row-major tie-break
            best = None
            for r in range(t, m):
                row = a[r]
                for c in range(t, n):
                    v = row[c]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), r, c)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                diag.extend([0] * (min(m, n) - t))
                return diag
            _, r, c = best
            if r != t:
                swap_rows(t, r)
            if c != t:
                swap_cols(t, c)
            p = a[t][t]
            dirty = False
            for r in range(t + 1, m):
                if a[r][t]:
                    row_axpy(r, t, a[r][t] // p)
                    dirty = dirty or a[r][t] != 0
            for c in range(t + 1, n):
                if a[t][c]:
                    col_axpy(c, t, a[t][c] // p)
                    dirty = dirty or a[t][c] != 0
            if dirty:
                continue
            # divisibility: fold a non-multiple into the pivot row
            bad = next(
                (r for r in range(t + 1, m) if any(a[r][c] % p for c in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            row_axpy(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(a[t][t])
    return diag


def smith_normal_form(A: IntegerMatrix, want_transforms: bool = False) -> SNFResult:
    """Smith normal form with divisibility chain ``d1 | d2 | ...`` (trailing zeros allowed)."""
    m, n = A.shape
    a = A.to_rows()
    if not want_transforms:
        return SNFResult(tuple(_dense_snf(a, m, n)))
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    diag = _dense_snf(a, m, n, U, V)
    return SNFResult(tuple(diag), IntegerMatrix.from_rows(U, m), IntegerMatrix.from_rows(V, n))


def invariant_factors(A: IntegerMatrix) -> list[int]:
    """Nonzero invariant factors of ``A`` in divisibility order.

    Unit pivots are removed on the sparse representation, sparsest column
    first, to limit fill-in; the remainder goes through the dense reduction.
    """
    rows = {i: dict(r) for i, r in A._rows.items()}
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0

    def eliminate(pi: int, pj: int) -> None:
        prow = rows.pop(pi)
        pv = prow[pj]
        for i in sorted(cols[pj]):
            if i == pi:
                continue
            row = rows[i]
            q = row[pj] * pv  # pv is a unit, so this is row[pj] / pv
            for j, v in prow.items():
                nv = row.get(j, 0) - q * v
                if nv:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            if not row:
                del rows[i]
        # column pj now meets only the pivot row: clearing the pivot row by
        # column operations touches nothing else, so drop both
        for j in prow:
            cols[j].discard(pi)
            if not cols[j]:
                del cols[j]

    progress = True
    while progress:
        progress = False
        heap = [(len(c), j) for j, c in cols.items()]
        heapq.heapify(heap)
        while heap:
            count, j = heapq.heappop(heap)
            cj = cols.get(j)
            if cj is None:
                continue
            if len(cj) != count:
                heapq.heappush(heap, (len(cj), j))
                continue
            pi = min(
                (i for i in cj if abs(rows[i][j]) == 1),
                key=lambda i: (len(rows[i]), i),
                default=None,
            )
            if pi is None:
                continue
            eliminate(pi, j)
            units += 1
            progress = True

    live_rows = sorted(rows)
    live_cols = sorted(cols)
    ri = {i: k for k, i in enumerate(live_rows)}
    ci = {j: k for k, j in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for i, row in rows.items():
        for j, v in row.items():
            dense[ri[i]][ci[j]] = v
    rest = _dense_snf(dense, len(live_rows), len(live_cols))
    return [1] * units + [d for d in rest if d]


# ---------------------------------------------------------------------------
# Chain complexes and homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologySignature:
    """Finitely generated abelian group ``Z^free_rank + sum Z/d``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise MalformedError("free rank must be non-negative")
        if any(d <= 1 for d in self.torsion):
            raise MalformedError("torsion coefficients must exceed 1")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise MalformedError("torsion must form a divisibility chain")

    @classmethod
    def from_factors(cls, free_rank: int, factors: Iterable[int]) -> "HomologySignature":
        """Normalise arbitrary cyclic orders into invariant-factor form."""
        primes: dict[int, list[int]] = {}
        for d in factors:
            d = abs(d)
            if d == 0:
                free_rank += 1
                continue
            p = 2
            while d > 1:
                if p * p > d:
                    p = d
                e = 1
                while d % p == 0:
                    d //= p
                    e *= p
                if e > 1:
                    primes.setdefault(p, []).append(e)
                p += 1
        length = max((len(v) for v in primes.values()), default=0)
        inv = [1] * length
        for powers in primes.values():
            powers.sort()
            for k, q in enumerate(powers):
                inv[length - len(powers) + k] *= q
        return cls(free_rank, tuple(d for d in inv if d > 1))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class ChainComplex:
    """``ranks[k]`` is the rank in degree k; ``boundaries[k-1]`` is d_k of shape ``r_{k-1} x r_k``."""

    ranks: tuple[int, ...]
    boundaries: tuple[IntegerMatrix, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if len(self.boundaries) != max(len(self.ranks) - 1, 0):
            raise MalformedError("need one boundary matrix per positive degree")
        for k, d in enumerate(self.boundaries, start=1):
            if d.shape != (self.ranks[k - 1], self.ranks[k]):
                raise MalformedError(f"d_{k} has shape {d.shape}, expected {(self.ranks[k-1], self.ranks[k])}")

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, k: int) -> IntegerMatrix:
        """d_k, with zero maps outside ``1..top_degree``."""
        if 1 <= k <= self.top_degree:
            return self.boundaries[k - 1]
        lo = self.ranks[k - 1] if 0 <= k - 1 <= self.top_degree else 0
        hi = self.ranks[k] if 0 <= k <= self.top_degree else 0
        return IntegerMatrix(lo, hi)

    def check(self) -> None:
        for k in range(2, self.top_degree + 1):
            if not (self.boundaries[k - 2] @ self.boundaries[k - 1]).is_zero():
                raise InvalidComplexError(f"d_{k - 1} d_{k} != 0")

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "boundaries": [d.to_rows() for d in self.boundaries],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ChainComplex":
        ranks = doc["ranks"]
        mats = [
            IntegerMatrix.from_rows(rows, ncols=ranks[k + 1])
            for k, rows in enumerate(doc["boundaries"])
        ]
        return cls(tuple(ranks), tuple(mats))


def homology(C: ChainComplex, check: bool = True) -> list[HomologySignature]:
    """H_0 .. H_top of ``C``."""
    if check:
        C.check()
    factors = [invariant_factors(d) for d in C.boundaries]
    ranks_d = [0] + [len(f) for f in factors] + [0]
    out = []
    for k, r in enumerate(C.ranks):
        free = r - ranks_d[k] - ranks_d[k + 1]
        tors = tuple(d for d in (factors[k] if k < len(factors) else []) if d > 1)
        out.append(HomologySignature(free, tors))
    return out


def exactness_range(C: ChainComplex) -> int:
    """Largest d with H_k = 0 for all 1 <= k <= d."""
    d = 0
    for h in homology(C)[1:]:
        if not h.is_zero():
            break
        d += 1
    return d


def format_homology(hs: Sequence[HomologySignature]) -> str:
    return "\n".join(f"H_{k} = {h}" for k, h in enumerate(hs))


# ---------------------------------------------------------------------------
# From group-ring complexes to integer complexes
# ---------------------------------------------------------------------------


def restrict_to_z(R) -> ChainComplex:
    """View a free ZG-complex as a Z-complex via the regular representation.

    Basis element ``g * e_c`` gets index ``c * |G| + g`` (the group's element
    order), so ``d(g e_s) = sum_p sum_h m_h (g h) e_p``.  The augmentation
    degree, if any, is dropped.
    """
    G = R.group
    n = G.order
    table = G.table
    ranks = tuple(n * r for r in R.ranks)
    mats = []
    for k, cols in enumerate(R.columns, start=1):
        M = IntegerMatrix(ranks[k - 1], ranks[k])
        rows = M._rows
        for s, col in enumerate(cols):
            for p, coeffs in col.items():
                for h, m in enumerate(coeffs):
                    if not m:
                        continue
                    for g in range(n):
                        rows.setdefault(p * n + table[g][h], {})[s * n + g] = m
        mats.append(M)
    return ChainComplex(ranks, tuple(mats))


def coinvariants(R) -> ChainComplex:
    """Z (x)_ZG R: each group-ring entry collapses to its coefficient sum."""
    mats = []
    for k, cols in enumerate(R.columns, start=1):
        M = IntegerMatrix(R.ranks[k - 1], R.ranks[k])
        for s, col in enumerate(cols):
            for p, coeffs in col.items():
                M.add(p, s, sum(coeffs))
        mats.append(M)
    return ChainComplex(tuple(R.ranks), tuple(mats))

