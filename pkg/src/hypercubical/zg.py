"""Group-ring elements and free ZG chain complexes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Sequence

from .errors import InvalidComplexError, MalformedError

if TYPE_CHECKING:
    from .groups import FiniteGroup


class GroupRingElement(tuple):
    """Dense coefficient vector ``(a_g)`` indexed by the group's element order."""

    __slots__ = ()

    @classmethod
    def zero(cls, n: int) -> "GroupRingElement":
        return cls((0,) * n)

    @classmethod
    def monomial(cls, n: int, g: int, coeff: int = 1) -> "GroupRingElement":
        v = [0] * n
        v[g] = coeff
        return cls(v)

    def __add__(self, other):
        return GroupRingElement(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return GroupRingElement(a - b for a, b in zip(self, other))

    def __neg__(self):
        return GroupRingElement(-a for a in self)

    def scale(self, c: int) -> "GroupRingElement":
        return GroupRingElement(c * a for a in self)

    def mul(self, other: Sequence[int], G: "FiniteGroup") -> "GroupRingElement":
        out = [0] * len(self)
        t = G.table
        for g, a in enumerate(self):
            if a:
                row = t[g]
                for h, b in enumerate(other):
                    if b:
                        out[row[h]] += a * b
        return GroupRingElement(out)

    def augmentation(self) -> int:
        return sum(self)

    def is_zero(self) -> bool:
        return not any(self)

    def support(self) -> list[tuple[int, int]]:
        return [(g, a) for g, a in enumerate(self) if a]

    def format(self, G: "FiniteGroup") -> str:
        terms = []
        for g, a in enumerate(self):
            if a:
                name = G.elements[g]
                terms.append(name if a == 1 else f"-{name}" if a == -1 else f"{a}*{name}")
        return " + ".join(terms) if terms else "0"


Column = Mapping[int, GroupRingElement]


@dataclass(frozen=True)
class ZGComplex:
    """Free left ZG-module chain complex.

    ``ranks[k]`` is the ZG-rank in degree ``k >= 0``.  ``columns[k-1][s]``
    maps row indices ``p`` to the coefficient of ``e_p`` in ``d_k(e_s)``, so
    ``d(r e_s) = sum_p r * M[p][s] e_p``.  When ``augmented`` there is an extra
    degree -1 holding Z with trivial action and ``d_0(e_v) = 1`` for every
    degree-0 generator.
    """

    group: "FiniteGroup"
    ranks: tuple[int, ...]
    columns: tuple[tuple[Column, ...], ...]
    augmented: bool = True

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(
            self, "columns", tuple(tuple(dict(c) for c in cols) for cols in self.columns)
        )
        if len(self.columns) != max(len(self.ranks) - 1, 0):
            raise MalformedError("need one boundary per positive degree")
        n = self.group.order
        for k, cols in enumerate(self.columns, start=1):
            if len(cols) != self.ranks[k]:
                raise MalformedError(f"d_{k} has {len(cols)} columns, expected {self.ranks[k]}")
            for col in cols:
                for p, coeff in col.items():
                    if not 0 <= p < self.ranks[k - 1] or len(coeff) != n:
                        raise MalformedError(f"bad entry in d_{k}")

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def all_ranks(self) -> tuple[int, ...]:
        """Ranks from degree -1 (if augmented) upward."""
        return ((1,) if self.augmented else ()) + self.ranks

    def entry(self, k: int, p: int, s: int) -> GroupRingElement:
        return self.columns[k - 1][s].get(p, GroupRingElement.zero(self.group.order))

    def check(self) -> None:
        """Verify d d = 0 over the group ring (and d_0 d_1 = 0 through the augmentation)."""
        G = self.group
        if self.augmented and self.top_degree >= 1:
            for s, col in enumerate(self.columns[0]):
                if sum(c.augmentation() for c in col.values()):
                    raise InvalidComplexError(f"augmentation does not kill d_1(e_{s})")
        table = G.table
        for k in range(2, self.top_degree + 1):
            # sparse supports: [(g, coeff), ...] per entry
            lower = [{v: b.support() for v, b in col.items()} for col in self.columns[k - 2]]
            for s, col in enumerate(self.columns[k - 1]):
                acc: dict[tuple[int, int], int] = {}
                for p, a in col.items():
                    sa = a.support()
                    for v, sb in lower[p].items():
                        # d(a e_p) = a * d(e_p): coefficient a * b on e_v
                        for g, x in sa:
                            row = table[g]
                            for h, y in sb:
                                key = (v, row[h])
                                acc[key] = acc.get(key, 0) + x * y
                bad = [v for (v, _), c in acc.items() if c]
                if bad:
                    raise InvalidComplexError(f"d_{k - 1} d_{k}(e_{s}) != 0 at e_{bad[0]}")

    def to_json(self) -> dict:
        """Dense nested arrays: ``boundaries[k-1][p][s]`` is a length-|G| coefficient vector."""
        n = self.group.order
        mats = []
        for k, cols in enumerate(self.columns, start=1):
            rows = [[[0] * n for _ in range(self.ranks[k])] for _ in range(self.ranks[k - 1])]
            for s, col in enumerate(cols):
                for p, coeff in col.items():
                    rows[p][s] = list(coeff)
            mats.append(rows)
        return {
            "group": list(self.group.elements),
            "augmented": self.augmented,
            "ranks": list(self.ranks),
            "boundaries": mats,
        }

    @classmethod
    def from_json(cls, doc: dict, group: "FiniteGroup") -> "ZGComplex":
        if list(doc["group"]) != list(group.elements):
            raise MalformedError("group element order does not match")
        ranks = doc["ranks"]
        columns = []
        for k, rows in enumerate(doc["boundaries"], start=1):
            cols = [dict() for _ in range(ranks[k])]
            for p, row in enumerate(rows):
                for s, coeff in enumerate(row):
                    if any(coeff):
                        cols[s][p] = GroupRingElement(coeff)
            columns.append(tuple(cols))
        return cls(group, tuple(ranks), tuple(columns), bool(doc.get("augmented", True)))
