"""Rank-biased overlap on truncated rankings: point estimate and bounds.

RBO is the p-weighted average of per-depth agreement,
(1-p)/p * sum_d A_d p^d, with p in (0, 1) controlling how top-heavy the
average is.  With two truncated rankings (S shorter with s items, L
longer with l items) the infinite sum splits into three sections:

  1. d = 1..s       both prefixes observed: the variant's agreement
  2. d = s+1..l     only L observed: agreement needs an assumption about
                    the ranks S no longer shows
  3. d = l+1..      nothing observed: closed-form tails

Unseen ranks of S are always assumed untied.  Per assumption, an unseen
rank either matches nothing (MIN), matches the best still-unmatched
potentially-active item of L (MAX), or matches a random unmatched item
with probability equal to the agreement at the last observed depth
(EXT).  MIN and MAX bound every continuation; EXT is the score usually
reported, and RES = MAX - MIN measures how much the truncation left
undetermined.

``rbo`` runs an O(s + l) incremental engine: per-depth overlap is
assembled from integer counters (split by active/crossing state on each
side) that come from difference arrays, so no per-item work happens
inside the depth loop and no float accumulates across depths except the
final weighted sums.  ``section2_sum``/``section3_sum`` and their helper
operations spell the same semantics out definitionally; the tests hold
both routes together, and ``oracle.rbo_numeric`` re-derives everything a
third way.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate
from typing import Union

from .agreement import CrossingGroupAtDepth, _count_tops, _sum_sq, agreement
from .core import Ranking, RboKitError, Variant, contribution

Real = Union[Fraction, float]


class InvalidPersistence(RboKitError):
    def __init__(self, p):
        super().__init__(f"persistence must satisfy 0 < p < 1, got {p!r}")
        self.p = p


class ExtrapolationWarning(RuntimeWarning):
    """EXT fell outside [MIN, MAX] by more than tolerance (not expected)."""


class Assumption(Enum):
    MIN = "min"
    MAX = "max"
    EXT = "ext"


@dataclass(frozen=True)
class RboParams:
    p: float
    variant: Variant = Variant.A


@dataclass(frozen=True)
class RboScores:
    ext: float
    min: float
    max: float
    res: float


def _check_p(p) -> None:
    if not isinstance(p, (int, float)) or not 0.0 < float(p) < 1.0:
        raise InvalidPersistence(p)


@lru_cache(maxsize=1024)
def _min_tail_factor(p: float, l: int) -> float:
    """ln(1/(1-p)) - sum_{d=1..l} p^d/d, the weight of 1/d beyond depth l."""
    total = -math.log1p(-p)
    pw = 1.0
    for d in range(1, l + 1):
        pw *= p
        total -= pw / d
    return total


def _tails(p: float, s_len: int, l_len: int, x_l: int, a_star: float):
    """Raw sum of A_d p^d over d > l for each assumption.

    MIN keeps overlap frozen at X_l.  MAX matches every further rank
    pairwise until agreement hits 1 at depth f = l + s - X_l and stays
    there.  EXT extrapolates the depth-l assumed agreement flat.
    """
    t_min = x_l * _min_tail_factor(p, l_len)
    f = l_len + s_len - x_l
    acc = 0.0
    pw = p**l_len
    for d in range(l_len + 1, f + 1):
        pw *= p
        acc += (2 * d - l_len - s_len + x_l) / d * pw
    t_max = acc + p ** (f + 1) / (1.0 - p)
    t_ext = ((x_l + a_star * (l_len - s_len)) / l_len) * p ** (l_len + 1) / (1.0 - p)
    return t_min, t_max, t_ext


def _finish(p: float, sum1: float, s2: tuple, tails: tuple) -> RboScores:
    scale = (1.0 - p) / p
    mn = scale * (sum1 + s2[0] + tails[0])
    mx = scale * (sum1 + s2[1] + tails[1])
    ext = scale * (sum1 + s2[2] + tails[2])
    if ext < mn - 1e-9 or ext > mx + 1e-9:
        warnings.warn(
            f"extrapolated score {ext!r} outside bounds [{mn!r}, {mx!r}]",
            ExtrapolationWarning,
        )
    clamp = lambda v: 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)
    mn, mx, ext = clamp(mn), clamp(mx), clamp(ext)
    return RboScores(ext=ext, min=mn, max=mx, res=max(mx - mn, 0.0))


# ---------------------------------------------------------------------------
# tie-unaware reference path (BASE)


def _require_untied(r: Ranking) -> None:
    rank = 0
    for g in r.groups:
        if len(g) > 1:
            raise CrossingGroupAtDepth(rank + 1)
        rank += 1


def _rbo_base(s: Ranking, l: Ranking, p: float) -> RboScores:
    """Bare RBO on untied rankings, written set-wise for independence."""
    _require_untied(s)
    _require_untied(l)
    s_seq = [g[0] for g in s.groups]
    l_seq = [g[0] for g in l.groups]
    ns, nl = len(s_seq), len(l_seq)
    seen_s: set = set()
    seen_l: set = set()
    x = 0
    pw = 1.0
    sum1 = 0.0
    for d in range(1, ns + 1):
        a, b = s_seq[d - 1], l_seq[d - 1]
        if a == b:
            x += 1
        else:
            if a in seen_l:
                x += 1
            if b in seen_s:
                x += 1
            seen_s.add(a)
            seen_l.add(b)
        pw *= p
        sum1 += x / d * pw
    a_star = x / ns
    s_members = set(s_seq)
    s2_min = s2_max = s2_ext = 0.0
    for d in range(ns + 1, nl + 1):
        if l_seq[d - 1] in s_members:
            x += 1
        pw *= p
        s2_min += x / d * pw
        s2_max += (x + (d - ns)) / d * pw
        s2_ext += (x + (d - ns) * a_star) / d * pw
    tails = _tails(p, ns, nl, x, a_star)
    return _finish(p, sum1, (s2_min, s2_max, s2_ext), tails)


# ---------------------------------------------------------------------------
# tie-aware incremental engine


def _group_tables(r: Ranking, upto: int):
    """Arrays top/bottom/size of the group covering each rank (0 = none)."""
    top = [0] * (upto + 2)
    bot = [0] * (upto + 2)
    size = [0] * (upto + 2)
    rank = 0
    for g in r.groups:
        t = rank + 1
        rank += len(g)
        for d in range(t, min(rank, upto) + 1):
            top[d] = t
            bot[d] = rank
            size[d] = len(g)
    return top, bot, size


def _cum_counts(r: Ranking, upto: int):
    """cum_top[d] = #items with t_e <= d; cum_bot[d] = #items with b_e <= d."""
    d_top = [0] * (upto + 2)
    d_bot = [0] * (upto + 2)
    rank = 0
    for g in r.groups:
        t = rank + 1
        rank += len(g)
        if t <= upto:
            d_top[t] += len(g)
        if rank <= upto:
            d_bot[rank] += len(g)
    return list(accumulate(d_top)), list(accumulate(d_bot))


def _rbo_engine(s: Ranking, l: Ranking, p: float, variant: Variant) -> RboScores:
    ns, nl = s.length, l.length
    top_s, bot_s, size_s = _group_tables(s, nl)
    top_l, bot_l, size_l = _group_tables(l, nl)
    cumt_s, _ = _cum_counts(s, nl)
    cumt_l, cumb_l = _cum_counts(l, nl)
    _, cumb_s = _cum_counts(s, nl)

    # difference arrays over depth for the shared-item product sum:
    # num_d = N + alpha*P + beta*Q + alpha*beta*R with integer counters
    # split by (S state) x (L state) in {active, crossing}
    d_n = [0] * (nl + 2)
    d_p = [0] * (nl + 2)
    d_q = [0] * (nl + 2)
    d_r = [0] * (nl + 2)
    d_w = [0] * (nl + 2)
    x_l = 0
    for e in s.items():
        tb_l = l.bounds(e)
        if tb_l is None:
            continue
        x_l += 1
        t1, b1 = s.bounds(e)
        t2, b2 = tb_l
        d_n[max(b1, b2)] += 1
        d_w[max(t1, t2)] += 1
        lo, hi = max(t1, b2), b1 - 1
        if lo <= hi:
            d_p[lo] += 1
            d_p[hi + 1] -= 1
        lo, hi = max(t2, b1), b2 - 1
        if lo <= hi:
            d_q[lo] += 1
            d_q[hi + 1] -= 1
        lo, hi = max(t1, t2), min(b1, b2) - 1
        if lo <= hi:
            d_r[lo] += 1
            d_r[hi + 1] -= 1
    cn = list(accumulate(d_n))
    cp = list(accumulate(d_p))
    cq = list(accumulate(d_q))
    cr = list(accumulate(d_r))
    cw = list(accumulate(d_w))

    # unique-to-L items that unseen ranks of S may be matched against
    d_ua = [0] * (nl + 2)
    d_up = [0] * (nl + 2)
    rank = 0
    for g in l.groups:
        t = rank + 1
        rank += len(g)
        uniq = sum(1 for e in g if e not in s)
        if uniq:
            d_ua[rank] += uniq
            d_up[t] += uniq
    cua = list(accumulate(d_ua))
    cup = list(accumulate(d_up))

    is_w = variant is Variant.W
    is_b = variant is Variant.B

    pw = 1.0
    sum1 = 0.0
    a_star = 0.0
    for d in range(1, ns + 1):
        pw *= p
        if is_w:
            a_d = 2.0 * cw[d] / (cumt_s[d] + cumt_l[d])
        else:
            bs, bl = bot_s[d], bot_l[d]
            alpha = (d - top_s[d] + 1) / size_s[d] if bs > d else 0.0
            beta = (d - top_l[d] + 1) / size_l[d] if bl > d else 0.0
            num = cn[d] + alpha * cp[d] + beta * cq[d] + alpha * beta * cr[d]
            if is_b:
                ssq_s = cumb_s[d] + size_s[d] * alpha * alpha
                ssq_l = cumb_l[d] + size_l[d] * beta * beta
                a_d = num / math.sqrt(ssq_s * ssq_l)
            else:
                a_d = num / d
        sum1 += a_d * pw
        if d == ns:
            a_star = a_d

    s2_min = s2_max = s2_ext = 0.0
    for d in range(ns + 1, nl + 1):
        pw *= p
        beta = (d - top_l[d] + 1) / size_l[d] if bot_l[d] > d else 0.0
        up, ua = cup[d], cua[d]
        k = d - ns if d - ns < up else up
        if is_w:
            seen = float(cw[d])
            unseen_max = float(k)
            mean_u = 1.0 if up else 0.0
            den = d + cumt_l[d]
            scale2 = 2.0
        else:
            seen = cn[d] + beta * cq[d]
            unseen_max = float(k) if k <= ua else ua + beta * (k - ua)
            mean_u = (ua + beta * (up - ua)) / up if up else 0.0
            if is_b:
                ssq_l = cumb_l[d] + size_l[d] * beta * beta
                den = math.sqrt(d * ssq_l)
            else:
                den = float(d)
            scale2 = 1.0
        unseen_ext = (d - ns) * a_star * mean_u
        w_d = scale2 * pw / den
        s2_min += seen * w_d
        s2_max += (seen + unseen_max) * w_d
        s2_ext += (seen + unseen_ext) * w_d

    tails = _tails(p, ns, nl, x_l, a_star)
    return _finish(p, sum1, (s2_min, s2_max, s2_ext), tails)


def rbo(s: Ranking, l: Ranking, params: RboParams) -> RboScores:
    """EXT/MIN/MAX/RES scores for one pair of rankings.

    Order of the arguments does not matter; the shorter ranking plays
    the role of S.  BASE requires untied inputs and runs an independent
    reference path.
    """
    _check_p(params.p)
    if s.length > l.length:
        s, l = l, s
    if params.variant is Variant.BASE:
        return _rbo_base(s, l, float(params.p))
    return _rbo_engine(s, l, float(params.p), params.variant)


# ---------------------------------------------------------------------------
# definitional forms of the assumed-overlap machinery (slow, explicit)


def unmatched_sequence(
    s: Ranking, l: Ranking, d: int, variant: Variant = Variant.A
) -> list[tuple[str, Fraction]]:
    """Potentially active items of L that cannot match a seen item of S.

    These are the candidates an unseen rank of S may be matched against:
    unique to L with contribution > 0 at depth d, ordered by
    non-increasing contribution (which is L's rank order).
    """
    if s.length > l.length:
        s, l = l, s
    if not 1 <= d <= l.length:
        raise ValueError(f"depth {d} outside [1, {l.length}]")
    entries = []
    rank = 0
    for g in l.groups:
        top = rank + 1
        rank += len(g)
        if top > d:
            break
        for e in g:
            if e in s:
                continue
            c = contribution(l, e, d, variant)
            if c > 0:
                entries.append((e, c))
    entries.sort(key=lambda ec: -ec[1])  # already non-increasing; keep stable
    return entries


def ext_unseen_contribution(
    s: Ranking, l: Ranking, d: int, variant: Variant
) -> tuple[Real, Real]:
    """EXT's assumed contributions (c_S, c_L) of one unseen rank at depth d.

    The unseen item of S is assumed to match a random entry of the
    unmatched sequence with probability equal to the variant's agreement
    at the last seen depth: c_S is that agreement, c_L the mean candidate
    contribution (0 when there is no candidate to match), and their
    product enters the assumed overlap once per unseen slot.  For untied
    inputs every candidate is fully active, so c_L = 1 and the joint
    contribution reduces to the depth-s agreement alone.
    """
    if s.length > l.length:
        s, l = l, s
    if not s.length < d <= l.length:
        raise ValueError(f"depth {d} outside ({s.length}, {l.length}]")
    seq = unmatched_sequence(s, l, d, variant)
    a_star = agreement(s, l, s.length, variant).value
    if not seq:
        return a_star, Fraction(0)
    return a_star, sum(c for _, c in seq) / len(seq)


def section2_sum(s: Ranking, l: Ranking, params: RboParams, assumption: Assumption) -> float:
    """sum of assumed-agreement * p^d over the L-only section, definitionally.

    Returns 0 when the rankings have equal length.  This is the spelled
    out form of what the engine accumulates incrementally; it exists to
    be read and to cross-check the engine.
    """
    _check_p(params.p)
    if s.length > l.length:
        s, l = l, s
    p, variant = float(params.p), params.variant
    ns, nl = s.length, l.length
    total = 0.0
    pw = p**ns
    a_star = float(agreement(s, l, ns, variant).value) if ns else 0.0
    for d in range(ns + 1, nl + 1):
        pw *= p
        seen = sum(contribution(l, e, d, variant) for e in s.items())
        seq = unmatched_sequence(s, l, d, variant)
        if assumption is Assumption.MIN:
            unseen: Real = Fraction(0)
        elif assumption is Assumption.MAX:
            unseen = sum((c for _, c in seq[: d - ns]), Fraction(0))
        else:
            unseen = (d - ns) * a_star * (
                float(sum(c for _, c in seq)) / len(seq) if seq else 0.0
            )
        x_t = float(seen) + float(unseen)
        if variant is Variant.W:
            a_d = 2.0 * x_t / (d + _count_tops(l, d))
        elif variant is Variant.B:
            a_d = x_t / math.sqrt(d * float(_sum_sq(l, d)))
        else:
            a_d = x_t / d
        total += a_d * pw
    return total


def section3_sum(s: Ranking, l: Ranking, params: RboParams, assumption: Assumption) -> float:
    """Closed-form sum of assumed-agreement * p^d beyond the longer prefix."""
    _check_p(params.p)
    if s.length > l.length:
        s, l = l, s
    p = float(params.p)
    ns, nl = s.length, l.length
    x_l = sum(1 for e in s.items() if e in l)
    a_star = float(agreement(s, l, ns, params.variant).value)
    t_min, t_max, t_ext = _tails(p, ns, nl, x_l, a_star)
    return {Assumption.MIN: t_min, Assumption.MAX: t_max, Assumption.EXT: t_ext}[
        assumption
    ]
