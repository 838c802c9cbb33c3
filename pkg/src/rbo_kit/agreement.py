"""Agreement between two ranking prefixes at one depth, per tie treatment.

All four treatments share the shape actual-overlap / measurable-overlap:

  base  X_d / d                 strict overlap, rejects crossing groups
  w     2*X^w_d / (|S_:d| + |L_:d|)   sports-style membership by top rank
  a     (1/d) * sum_e c_S * c_L       expected overlap when ties are
                                      broken uniformly at random
  b     sum_e c_S*c_L / (sqrt(sum c_S^2) * sqrt(sum c_L^2))
                                      overlap over the geometric mean of
                                      what each prefix has measurably
                                      committed to (Cauchy-Schwarz keeps
                                      it in [0, 1])

Values are computed in exact rational arithmetic.  The b denominator is
irrational in general; it is kept exact whenever the product under the
root is a perfect rational square (identical prefixes, untied prefixes),
so the identities A^b(r, r, d) == 1 and the no-ties reduction hold
exactly, not approximately.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt
from typing import Union

from .core import Ranking, RboKitError, Variant, overlap

Real = Union[Fraction, float]


class CrossingGroupAtDepth(RboKitError):
    def __init__(self, depth: int):
        super().__init__(
            f"a tie group crosses depth {depth}; the tie-unaware agreement "
            f"is undefined there"
        )
        self.depth = depth


@dataclass(frozen=True)
class AgreementValue:
    """Agreement with its overlap numerator and measurable denominator.

    value == numerator / denominator; the pieces are exposed because the
    prefix evaluation reuses them when building assumed overlaps.
    """

    value: Real
    numerator: Real
    denominator: Real


def _check_depth(s: Ranking, l: Ranking, d: int) -> None:
    m = min(s.length, l.length)
    if not 1 <= d <= m:
        raise ValueError(
            f"depth {d} outside [1, {m}]; agreement is only defined where "
            f"both prefixes are observed"
        )


def _fractional(top: int, bottom: int, d: int) -> Fraction:
    if d < top:
        return Fraction(0)
    if bottom <= d:
        return Fraction(1)
    return Fraction(d - top + 1, bottom - top + 1)


def _product_sum(s: Ranking, l: Ranking, d: int) -> Fraction:
    """sum_e c_{e,S|d} * c_{e,L|d} over items present in both."""
    small, big = (s, l) if s.length <= l.length else (l, s)
    total = Fraction(0)
    rank = 0
    for group in small.groups:
        top = rank + 1
        rank += len(group)
        if top > d:
            break
        c_small = _fractional(top, rank, d)
        for e in group:
            tb = big.bounds(e)
            if tb is not None and tb.top <= d:
                total += c_small * _fractional(tb.top, tb.bottom, d)
    return total


def _sum_sq(r: Ranking, d: int) -> Fraction:
    """sum over r's items of the squared contribution at depth d."""
    total = Fraction(0)
    rank = 0
    for group in r.groups:
        top = rank + 1
        rank += len(group)
        if top > d:
            break
        if rank <= d:
            total += len(group)
        else:
            c = Fraction(d - top + 1, rank - top + 1)
            total += len(group) * c * c
    return total


def _count_tops(r: Ranking, d: int) -> int:
    """|r_:d| under sports membership: items whose group starts at/above d."""
    count = 0
    rank = 0
    for group in r.groups:
        if rank + 1 > d:
            break
        rank += len(group)
        count += len(group)
    return count


def agreement_base(s: Ranking, l: Ranking, d: int) -> AgreementValue:
    """Tie-unaware agreement X_d / d; crossing groups are an error."""
    _check_depth(s, l, d)
    for r in (s, l):
        rank = 0
        for group in r.groups:
            top = rank + 1
            rank += len(group)
            if top <= d < rank:
                raise CrossingGroupAtDepth(d)
            if rank >= d:
                break
    x = overlap(s, l, d)
    return AgreementValue(Fraction(x, d), Fraction(x), Fraction(d))


def agreement_w(s: Ranking, l: Ranking, d: int) -> AgreementValue:
    _check_depth(s, l, d)
    small, big = (s, l) if s.length <= l.length else (l, s)
    shared = 0
    rank = 0
    for group in small.groups:
        if rank + 1 > d:
            break
        rank += len(group)
        for e in group:
            tb = big.bounds(e)
            if tb is not None and tb.top <= d:
                shared += 1
    num = Fraction(2 * shared)
    den = Fraction(_count_tops(s, d) + _count_tops(l, d))
    return AgreementValue(num / den, num, den)


def agreement_a(s: Ranking, l: Ranking, d: int) -> AgreementValue:
    _check_depth(s, l, d)
    num = _product_sum(s, l, d)
    den = Fraction(d)
    return AgreementValue(num / den, num, den)


def agreement_b(s: Ranking, l: Ranking, d: int) -> AgreementValue:
    _check_depth(s, l, d)
    num = _product_sum(s, l, d)
    den_sq = _sum_sq(s, d) * _sum_sq(l, d)
    rn, rd = isqrt(den_sq.numerator), isqrt(den_sq.denominator)
    if rn * rn == den_sq.numerator and rd * rd == den_sq.denominator:
        den: Real = Fraction(rn, rd)
        value: Real = num / den
    else:
        den = sqrt(den_sq.numerator / den_sq.denominator)
        value = float(num) / den
    return AgreementValue(value, num, den)


_DISPATCH = {
    Variant.BASE: agreement_base,
    Variant.W: agreement_w,
    Variant.A: agreement_a,
    Variant.B: agreement_b,
}


def agreement(s: Ranking, l: Ranking, d: int, variant: Variant) -> AgreementValue:
    """Agreement at depth d under the given tie treatment."""
    return _DISPATCH[variant](s, l, d)
