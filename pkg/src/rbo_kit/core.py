"""Rankings with ties and the per-item contribution machinery.

A ranking is an ordered sequence of tie groups.  A group of size g
starting after r better items occupies ranks r+1 .. r+g; every item e in
that group has top rank t_e = r+1 and bottom rank b_e = r+g.  An untied
ranking is the special case where every group is a singleton and
t_e == b_e.

The central quantity is the *contribution* of an item at an evaluation
depth d: the fraction of the item that should be counted as ranked at or
above d.  Under the tie-aware treatments an item contributes

    0                          if d < t_e        (group entirely below d)
    1                          if b_e <= d       (group entirely at/above d)
    (d - t_e + 1) / (b_e - t_e + 1)   otherwise  (group crosses depth d)

which is the probability that the item falls at or above d when its
group is permuted uniformly at random.  The W treatment instead counts
an item fully as soon as its group starts at or above d (contribution
1 if t_e <= d else 0): ties are read as genuinely shared ranks.

Contributions are exact rationals; callers convert to float when they
accumulate.  Items absent from a ranking contribute 0 at every depth.
"""

from __future__ import annotations

import sys
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence


class RboKitError(Exception):
    """Base class for every error raised by this package."""


class DuplicateItem(RboKitError):
    def __init__(self, item: str):
        super().__init__(f"item {item!r} appears more than once")
        self.item = item


class EmptyRanking(RboKitError):
    def __init__(self, detail: str = "ranking has no items"):
        super().__init__(detail)


class Variant(Enum):
    """Tie treatment used when computing agreement and RBO.

    W     ties are true shared ranks (sports-style membership)
    A     expected overlap under uniform random tie breaking
    B     overlap normalized by the measurable information
    BASE  tie-unaware reference; only valid on untied rankings
    """

    W = "w"
    A = "a"
    B = "b"
    BASE = "base"


class TieBounds(NamedTuple):
    top: int
    bottom: int


class Ranking:
    """Immutable ranking over tie groups of opaque string items.

    ``groups`` keeps the group contents in input order; membership and
    tie bounds are indexed once at construction so lookups are O(1).
    The order of items inside a group has no ranking meaning, but it is
    preserved because the random tie breaker starts from it.
    """

    __slots__ = ("groups", "length", "_bounds")

    def __init__(self, groups: Sequence[Iterable[str]]):
        built: list[tuple[str, ...]] = []
        bounds: dict[str, TieBounds] = {}
        rank = 0
        for group in groups:
            members = tuple(sys.intern(str(e)) for e in group)
            if not members:
                raise EmptyRanking("empty tie group")
            top = rank + 1
            bottom = rank + len(members)
            for e in members:
                if e in bounds:
                    raise DuplicateItem(e)
                bounds[e] = TieBounds(top, bottom)
            built.append(members)
            rank = bottom
        if rank == 0:
            raise EmptyRanking()
        self.groups = tuple(built)
        self.length = rank
        self._bounds = bounds

    def __len__(self) -> int:
        return self.length

    def __contains__(self, e: str) -> bool:
        return e in self._bounds

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ranking):
            return NotImplemented
        return self.groups == other.groups

    def __hash__(self):
        return hash(self.groups)

    def __repr__(self) -> str:
        inner = " ".join("[" + " ".join(g) + "]" for g in self.groups)
        return f"Ranking({inner})"

    def items(self):
        """All item ids, in rank order (group by group)."""
        return self._bounds.keys()

    def bounds(self, e: str) -> Optional[TieBounds]:
        return self._bounds.get(e)

    @property
    def has_ties(self) -> bool:
        return any(len(g) > 1 for g in self.groups)

    def tied_item_fraction(self) -> float:
        """Fraction of items that sit in a group of size >= 2."""
        tied = sum(len(g) for g in self.groups if len(g) > 1)
        return tied / self.length


def ranking_from_groups(groups: Sequence[Iterable[str]]) -> Ranking:
    """Build a ranking from an ordered sequence of tie groups."""
    return Ranking(groups)


def ranking_from_items(items: Iterable[str]) -> Ranking:
    """Build an untied ranking from an ordered item sequence."""
    return Ranking([[e] for e in items])


def tie_bounds(r: Ranking, e: str) -> Optional[TieBounds]:
    """(top, bottom) ranks of e's tie group, or None if e is absent."""
    return r.bounds(e)


def contribution(r: Ranking, e: str, d: int, variant: Variant) -> Fraction:
    """Contribution of item e to ranking r's prefix at depth d.

    Returns an exact rational in [0, 1]; absent items contribute 0.
    """
    if d < 1:
        raise ValueError(f"depth must be >= 1, got {d}")
    tb = r.bounds(e)
    if tb is None:
        return Fraction(0)
    top, bottom = tb
    if variant is Variant.W:
        return Fraction(1) if top <= d else Fraction(0)
    if d < top:
        return Fraction(0)
    if bottom <= d:
        return Fraction(1)
    return Fraction(d - top + 1, bottom - top + 1)


def overlap(s: Ranking, l: Ranking, d: int) -> int:
    """Size of the strict prefix intersection |s_{:d} & l_{:d}|.

    Membership is strict: an item belongs to the depth-d prefix only if
    its whole group fits, i.e. b_e <= d.  Groups crossing d are not
    counted at all, so this is the right primitive for untied rankings
    and for the full-length intersection X_l, while agreement on tied
    prefixes goes through the contribution-based variants instead.
    """
    if d < 1:
        raise ValueError(f"depth must be >= 1, got {d}")
    small, big = (s, l) if s.length <= l.length else (l, s)
    count = 0
    rank = 0
    for group in small.groups:
        rank += len(group)
        if rank > d:
            break
        for e in group:
            tb = big.bounds(e)
            if tb is not None and tb.bottom <= d:
                count += 1
    return count


def universe(s: Ranking, l: Ranking) -> frozenset[str]:
    """The union item set of the two rankings."""
    return frozenset(s.items()) | frozenset(l.items())


# ---------------------------------------------------------------------------
# plain-ranking text format: one tie group per line, items whitespace
# separated, '#' starts a comment line, UTF-8.


def parse_ranking_text(text: str) -> Ranking:
    groups = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        groups.append(stripped.split())
    if not groups:
        raise EmptyRanking("no tie groups in ranking text")
    return Ranking(groups)


def read_ranking(path) -> Ranking:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ranking_text(fh.read())


def format_ranking_text(r: Ranking) -> str:
    return "\n".join(" ".join(g) for g in r.groups) + "\n"
