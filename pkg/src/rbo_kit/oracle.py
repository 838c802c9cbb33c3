"""Slow, self-contained reference implementations.

Everything here re-derives results from first principles so the fast
paths elsewhere have something independent to be checked against:

- tie permutations are enumerated outright, so the expected-overlap
  treatment can be compared against an actual average over orderings
  in exact rational arithmetic;
- ``rbo_numeric`` recomputes the whole prefix decomposition depth by
  depth from contribution dictionaries rebuilt at every depth, with a
  numeric tail where agreement keeps changing;
- ``kendall_tau_b`` is the quadratic sign-product form of the tie-aware
  rank correlation.

Nothing in this module shares code with the engine in ``prefix`` or the
exact single-depth forms in ``agreement``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations, product
from math import isqrt
from typing import Union

from .core import Ranking, RboKitError, Variant, ranking_from_items
from .prefix import Assumption, RboParams, _check_p

Real = Union[Fraction, float]

PERMUTATION_CAP = 10080  # 7! * 2


class TooManyPermutations(RboKitError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} tie permutations exceed the cap of {cap}")
        self.count = count
        self.cap = cap


class NotConjoint(RboKitError):
    def __init__(self):
        super().__init__("rankings must cover the same item set")


class UndefinedCorrelation(RboKitError):
    def __init__(self):
        super().__init__("tau_b is undefined when a ranking is one single tie group")


def permutation_count(r: Ranking) -> int:
    n = 1
    for g in r.groups:
        n *= math.factorial(len(g))
    return n


def _orderings(r: Ranking, cap: int) -> list[tuple[str, ...]]:
    n = permutation_count(r)
    if n > cap:
        raise TooManyPermutations(n, cap)
    out = []
    for combo in product(*(permutations(g) for g in r.groups)):
        out.append(tuple(e for g in combo for e in g))
    return out


def enumerate_tie_permutations(r: Ranking, cap: int = PERMUTATION_CAP) -> list[Ranking]:
    """Every untied ranking obtainable by ordering items inside groups."""
    return [ranking_from_items(seq) for seq in _orderings(r, cap)]


def agreement_a_enumerated(
    s: Ranking, l: Ranking, d: int, cap: int = PERMUTATION_CAP
) -> Fraction:
    """Exact average of strict overlap over all permutation pairs, over d.

    This is what the expected-overlap agreement claims to equal in one
    pass; here it is computed by brute force.
    """
    if not 1 <= d <= min(s.length, l.length):
        raise ValueError(f"depth {d} outside [1, {min(s.length, l.length)}]")
    tops_s = [frozenset(seq[:d]) for seq in _orderings(s, cap)]
    tops_l = [frozenset(seq[:d]) for seq in _orderings(l, cap)]
    total = 0
    for a in tops_s:
        for b in tops_l:
            total += len(a & b)
    return Fraction(total, len(tops_s) * len(tops_l) * d)


# ---------------------------------------------------------------------------
# numeric re-derivation of prefix RBO


def _contribs(r: Ranking, d: int, variant: Variant) -> dict[str, float]:
    """Item -> contribution (> 0 only) at depth d, rebuilt from scratch."""
    out: dict[str, float] = {}
    rank = 0
    for g in r.groups:
        top = rank + 1
        rank += len(g)
        if top > d:
            break
        if variant is Variant.W:
            c = 1.0
        elif rank <= d:
            c = 1.0
        else:
            c = (d - top + 1) / (rank - top + 1)
        for e in g:
            out[e] = c
    return out


def _agreement_float(s: Ranking, l: Ranking, d: int, variant: Variant) -> float:
    cs = _contribs(s, d, variant)
    cl = _contribs(l, d, variant)
    num = sum(c * cl.get(e, 0.0) for e, c in cs.items())
    if variant is Variant.W:
        return 2.0 * num / (len(cs) + len(cl))
    if variant is Variant.B:
        den = math.sqrt(sum(c * c for c in cs.values()))
        den *= math.sqrt(sum(c * c for c in cl.values()))
        return num / den
    return num / d  # A and BASE (BASE only reached on untied inputs)


def rbo_numeric(
    s: Ranking, l: Ranking, params: RboParams, assumption: Assumption
) -> float:
    """Prefix RBO by direct per-depth summation.

    Depths up to the longer length are evaluated one at a time from
    freshly built contribution maps.  Beyond that, MAX and EXT have
    constant-agreement tails which are summed analytically, while MIN's
    decaying agreement is summed numerically until the remaining weight
    p^(d+1)/(1-p) drops below 1e-13.
    """
    _check_p(params.p)
    if s.length > l.length:
        s, l = l, s
    p, variant = float(params.p), params.variant
    ns, nl = s.length, l.length
    members_s = set(s.items())

    total = 0.0
    pw = 1.0
    a_star = 0.0
    for d in range(1, ns + 1):
        pw *= p
        a_d = _agreement_float(s, l, d, variant)
        total += a_d * pw
        if d == ns:
            a_star = a_d

    for d in range(ns + 1, nl + 1):
        pw *= p
        cl = _contribs(l, d, variant)
        seen = sum(cl.get(e, 0.0) for e in members_s)
        pool = sorted(
            (c for e, c in cl.items() if e not in members_s), reverse=True
        )
        if assumption is Assumption.MIN:
            unseen = 0.0
        elif assumption is Assumption.MAX:
            unseen = sum(pool[: d - ns])
        else:
            unseen = (d - ns) * a_star * (sum(pool) / len(pool) if pool else 0.0)
        x_t = seen + unseen
        if variant is Variant.W:
            a_d = 2.0 * x_t / (d + len(cl))
        elif variant is Variant.B:
            a_d = x_t / math.sqrt(d * sum(c * c for c in cl.values()))
        else:
            a_d = x_t / d
        total += a_d * pw

    x_l = sum(1 for e in members_s if e in l)
    if assumption is Assumption.MIN:
        d = nl
        while pw / (1.0 - p) > 1e-13:
            d += 1
            pw *= p
            total += x_l / d * pw
    elif assumption is Assumption.MAX:
        f = nl + ns - x_l
        for d in range(nl + 1, f + 1):
            pw *= p
            total += (2 * d - nl - ns + x_l) / d * pw
        total += p ** (f + 1) / (1.0 - p)
    else:
        total += ((x_l + a_star * (nl - ns)) / nl) * p ** (nl + 1) / (1.0 - p)

    return (1.0 - p) / p * total


# ---------------------------------------------------------------------------
# tie-aware rank correlation (quadratic reference)


def kendall_tau_b(u: Ranking, v: Ranking) -> Real:
    """tau_b via the pairwise sign-product formula over midranks."""
    items = sorted(u.items())
    if sorted(v.items()) != items:
        raise NotConjoint()
    ru = {e: u.bounds(e).top + u.bounds(e).bottom for e in items}  # 2*midrank
    rv = {e: v.bounds(e).top + v.bounds(e).bottom for e in items}
    num = 0
    cu = 0
    cv = 0
    n = len(items)
    for i in range(n):
        ei = items[i]
        for j in range(i + 1, n):
            ej = items[j]
            su = (ru[ei] > ru[ej]) - (ru[ei] < ru[ej])
            sv = (rv[ei] > rv[ej]) - (rv[ei] < rv[ej])
            num += su * sv
            cu += su * su
            cv += sv * sv
    if cu == 0 or cv == 0:
        raise UndefinedCorrelation()
    den_sq = cu * cv
    root = isqrt(den_sq)
    if root * root == den_sq:
        return Fraction(num, root)
    return num / math.sqrt(den_sq)
