"""Synthetic ranking pairs with controlled correlation, ties, truncation.

Each pair is produced in four steps, all driven by the deterministic
generator in ``rng`` so that a pair is a pure function of
``(master seed, pair index)``:

1. ranking 1 is a uniformly random permutation of the item universe;
2. ranking 2 starts as a copy and random adjacent transpositions are
   applied — swapping only pairs still in ranking-1 order, so each
   accepted swap creates exactly one new discordant pair — until the
   exact untied Kendall tau first reaches or crosses a target drawn
   uniformly from ``tau_range``;
3. independently per ranking, uniformly chosen adjacent group
   boundaries are merged until the tied-item fraction (items in groups
   of size >= 2) reaches a target drawn from ``tie_fraction_range``;
4. each ranking is truncated independently to a length drawn from
   ``truncation_range``, shrinking to the nearest group boundary at or
   below the drawn length so no tie group is ever split.  If even the
   first group is longer than the drawn length, that first group is
   kept whole: an empty ranking is not a ranking, and cutting inside
   the group would break the boundary rule.

Metadata records realized values — the walk's exact tau and the
post-truncation tied fractions and lengths — so downstream analysis
never needs to trust the targets.

The transposition walk consumes random indices in bulk.  Indices are
taken as ``((word >> 32) * n) >> 32``, whose bias (< 2**-22 for
n <= 1000) is irrelevant for swap-site selection but lets the generator
emit vectorized blocks; everything observable stays exactly
reproducible from the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .core import Ranking, RboKitError, ranking_from_groups
from .oracle import NotConjoint, UndefinedCorrelation
from .rng import SplitMix64, derive_seed


class HasTies(RboKitError):
    def __init__(self):
        super().__init__("untied rankings required")


@dataclass(frozen=True)
class SynthConfig:
    n_items: int = 1000
    tau_range: tuple[float, float] = (0.5, 1.0)
    tie_fraction_range: tuple[float, float] = (0.1, 1.0)
    truncation_range: tuple[int, int] = (10, 100)
    pair_count: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.n_items < 2:
            raise ValueError("n_items must be at least 2")
        lo, hi = self.tau_range
        if not (-1.0 <= lo <= hi <= 1.0):
            raise ValueError(f"tau_range {self.tau_range} outside [-1, 1]")
        lo, hi = self.tie_fraction_range
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"tie_fraction_range {self.tie_fraction_range} outside [0, 1]")
        lo, hi = self.truncation_range
        if not (1 <= lo <= hi):
            raise ValueError(f"truncation_range {self.truncation_range} invalid")
        if hi > self.n_items:
            raise ValueError("truncation_range exceeds n_items")
        if self.pair_count < 1:
            raise ValueError("pair_count must be positive")


@dataclass(frozen=True)
class PairMeta:
    pair_index: int
    tau: float
    tie_fraction_1: float
    tie_fraction_2: float
    length_1: int
    length_2: int


def _index_stream(gen: SplitMix64, n: int, block: int = 4096) -> Iterator[int]:
    """Endless uniform-ish indices in [0, n) from vectorized blocks."""
    shift = np.uint64(32)
    mult = np.uint64(n)
    while True:
        yield from (((gen.block(block) >> shift) * mult) >> shift).tolist()


def _transposition_walk(v: list[str], base_pos: dict[str, int], swaps: int,
                        gen: SplitMix64) -> None:
    """Apply exactly `swaps` discordance-creating adjacent swaps to v."""
    n = len(v)
    if swaps <= 0 or n < 2:
        return
    ppos = [base_pos[e] for e in v]
    done = 0
    for i in _index_stream(gen, n - 1):
        if ppos[i] < ppos[i + 1]:
            ppos[i], ppos[i + 1] = ppos[i + 1], ppos[i]
            v[i], v[i + 1] = v[i + 1], v[i]
            done += 1
            if done == swaps:
                return


def _swaps_for_tau(n: int, target: float) -> int:
    """Smallest swap count whose exact tau reaches or crosses target."""
    pairs = n * (n - 1)
    k = -(-int((1.0 - target) * pairs) // 4)  # ceil under integer floor
    # float truncation of (1-target)*pairs can land one low; fix by check
    while 1.0 - 4.0 * k / pairs > target:
        k += 1
    while k > 0 and 1.0 - 4.0 * (k - 1) / pairs <= target:
        k -= 1
    return k


def _merge_boundaries(n: int, target_fraction: float, gen: SplitMix64) -> list[int]:
    """Group sizes after merging random adjacent boundaries.

    Boundaries are consumed uniformly without replacement (a pre-shuffled
    sequence) until the tied-item fraction reaches the target.
    """
    if n == 0:
        return []
    order = list(range(1, n))
    gen.shuffle(order)
    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tied = 0
    for b in order:
        if tied >= target_fraction * n:
            break
        ra, rb = find(b - 1), find(b)
        sa, sb = size[ra], size[rb]
        if sa == 1:
            tied += 1
        if sb == 1:
            tied += 1
        if sa >= sb:
            parent[rb] = ra
            size[ra] = sa + sb
        else:
            parent[ra] = rb
            size[rb] = sa + sb

    sizes: list[int] = []
    i = 0
    while i < n:
        s = size[find(i)]
        sizes.append(s)
        i += s
    return sizes


def _truncate_sizes(sizes: list[int], drawn: int) -> list[int]:
    kept: list[int] = []
    total = 0
    for s in sizes:
        if total + s > drawn:
            break
        kept.append(s)
        total += s
    if not kept:
        kept.append(sizes[0])
    return kept


def _to_groups(items: list[str], sizes: list[int]) -> Ranking:
    groups = []
    at = 0
    for s in sizes:
        groups.append(items[at:at + s])
        at += s
    return ranking_from_groups(groups)


def _tied_fraction(sizes: list[int]) -> float:
    total = sum(sizes)
    tied = sum(s for s in sizes if s >= 2)
    return tied / total if total else 0.0


def generate_pair(cfg: SynthConfig, pair_index: int) -> tuple[Ranking, Ranking, PairMeta]:
    """Deterministic pair for (cfg.seed, pair_index); see module docs."""
    n = cfg.n_items
    targets = SplitMix64(derive_seed(cfg.seed, 0, pair_index, 5))
    tau_target = targets.uniform_in(*cfg.tau_range)
    tie_t1 = targets.uniform_in(*cfg.tie_fraction_range)
    tie_t2 = targets.uniform_in(*cfg.tie_fraction_range)
    len1 = targets.randint(*cfg.truncation_range)
    len2 = targets.randint(*cfg.truncation_range)

    items1 = [f"d{i:05d}" for i in range(n)]
    SplitMix64(derive_seed(cfg.seed, 0, pair_index, 0)).shuffle(items1)
    items2 = list(items1)
    swaps = _swaps_for_tau(n, tau_target)
    _transposition_walk(items2, {e: i for i, e in enumerate(items1)}, swaps,
                        SplitMix64(derive_seed(cfg.seed, 0, pair_index, 1)))
    tau = 1.0 - 4.0 * swaps / (n * (n - 1))

    sizes1 = _merge_boundaries(n, tie_t1, SplitMix64(derive_seed(cfg.seed, 0, pair_index, 2)))
    sizes2 = _merge_boundaries(n, tie_t2, SplitMix64(derive_seed(cfg.seed, 0, pair_index, 3)))
    sizes1 = _truncate_sizes(sizes1, len1)
    sizes2 = _truncate_sizes(sizes2, len2)
    r1 = _to_groups(items1, sizes1)
    r2 = _to_groups(items2, sizes2)
    meta = PairMeta(
        pair_index=pair_index,
        tau=tau,
        tie_fraction_1=_tied_fraction(sizes1),
        tie_fraction_2=_tied_fraction(sizes2),
        length_1=r1.length,
        length_2=r2.length,
    )
    return r1, r2, meta


def generate_shared_tie_pair(cfg: SynthConfig, pair_index: int) -> tuple[Ranking, Ranking, PairMeta]:
    """Pair whose tie groups hold identical item sets in both rankings.

    Ranking 1 is built as usual (random permutation, then boundary
    merging); ranking 2 reorders the same groups via a group-level
    transposition walk toward a tau target drawn from ``tau_range``.
    Because every group appears in both rankings with the same members,
    breaking ties by item id resolves them identically on both sides,
    while seeded random breaking (with different seeds per side) does
    not — the construction used to measure tie-break score inflation.
    """
    n = cfg.n_items
    targets = SplitMix64(derive_seed(cfg.seed, 1, pair_index, 5))
    tau_target = targets.uniform_in(*cfg.tau_range)
    tie_t = targets.uniform_in(*cfg.tie_fraction_range)
    len1 = targets.randint(*cfg.truncation_range)
    len2 = targets.randint(*cfg.truncation_range)

    items = [f"d{i:05d}" for i in range(n)]
    SplitMix64(derive_seed(cfg.seed, 1, pair_index, 0)).shuffle(items)
    sizes = _merge_boundaries(n, tie_t, SplitMix64(derive_seed(cfg.seed, 1, pair_index, 2)))

    group_ids = [f"g{i}" for i in range(len(sizes))]
    order2 = list(group_ids)
    m = len(group_ids)
    swaps = _swaps_for_tau(m, tau_target) if m >= 2 else 0
    _transposition_walk(order2, {g: i for i, g in enumerate(group_ids)}, swaps,
                        SplitMix64(derive_seed(cfg.seed, 1, pair_index, 1)))
    tau = 1.0 - 4.0 * swaps / (m * (m - 1)) if m >= 2 else 1.0

    groups1 = []
    at = 0
    for s in sizes:
        groups1.append(items[at:at + s])
        at += s
    by_id = dict(zip(group_ids, groups1))
    groups2 = [by_id[g] for g in order2]

    sizes1 = _truncate_sizes([len(g) for g in groups1], len1)
    sizes2 = _truncate_sizes([len(g) for g in groups2], len2)
    r1 = ranking_from_groups(groups1[: len(sizes1)])
    r2 = ranking_from_groups(groups2[: len(sizes2)])
    meta = PairMeta(
        pair_index=pair_index,
        tau=tau,
        tie_fraction_1=_tied_fraction(sizes1),
        tie_fraction_2=_tied_fraction(sizes2),
        length_1=r1.length,
        length_2=r2.length,
    )
    return r1, r2, meta


def _count_inversions(seq: list[int]) -> int:
    """Merge-sort inversion count, O(n log n)."""
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    inv = _count_inversions(left) + _count_inversions(right)
    i = j = k = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            seq[k] = left[i]
            i += 1
        else:
            seq[k] = right[j]
            j += 1
            inv += len(left) - i
        k += 1
    seq[k:] = left[i:] or right[j:]
    return inv


def kendall_tau_untied(u: Ranking, v: Ranking) -> Fraction:
    """Exact tau of two untied conjoint rankings: 1 - 4*inversions/(n(n-1))."""
    if u.has_ties or v.has_ties:
        raise HasTies()
    items_u = u.items()
    pos_v = {e: i for i, e in enumerate(v.items())}
    if len(pos_v) != len(items_u) or any(e not in pos_v for e in items_u):
        raise NotConjoint()
    n = len(items_u)
    if n < 2:
        raise UndefinedCorrelation()
    inv = _count_inversions([pos_v[e] for e in items_u])
    pairs = n * (n - 1)
    return Fraction(pairs - 4 * inv, pairs)
