"""Ranking construction, tie bounds, contributions, overlap, text format."""

from fractions import Fraction

import pytest
from hypothesis import given, settings

from rbo_kit import (
    DuplicateItem,
    EmptyRanking,
    Ranking,
    Variant,
    contribution,
    format_ranking_text,
    overlap,
    parse_ranking_text,
    ranking_from_groups,
    ranking_from_items,
    read_ranking,
    tie_bounds,
    universe,
)
from ranking_strategies import rankings


def test_group_layout_and_length(short_tied, long_tied):
    assert short_tied.length == 7
    assert len(long_tied) == 13
    assert short_tied.groups == (("f",), ("b",), ("a",), ("e", "c", "d"), ("n",))
    assert list(short_tied.items()) == ["f", "b", "a", "e", "c", "d", "n"]


def test_membership_and_equality(short_tied):
    assert "c" in short_tied
    assert "z" not in short_tied
    assert short_tied == ranking_from_groups([["f"], ["b"], ["a"], ["e", "c", "d"], ["n"]])
    assert short_tied != ranking_from_groups([["f"], ["b"], ["a"], ["e", "c"], ["d", "n"]])
    assert hash(short_tied) == hash(ranking_from_groups(short_tied.groups))


def test_duplicate_items_rejected():
    with pytest.raises(DuplicateItem):
        ranking_from_groups([["a", "b"], ["a"]])
    with pytest.raises(DuplicateItem):
        ranking_from_groups([["a", "a"]])


def test_empty_rankings_rejected():
    with pytest.raises(EmptyRanking):
        ranking_from_groups([])
    with pytest.raises(EmptyRanking):
        ranking_from_groups([[]])
    with pytest.raises(EmptyRanking):
        ranking_from_items([])


def test_tie_bounds(short_tied, long_tied):
    assert tie_bounds(short_tied, "c") == (4, 6)
    assert tie_bounds(long_tied, "g") == (7, 9)
    assert tie_bounds(long_tied, "d") == (2, 2)
    assert tie_bounds(long_tied, "zzz") is None


def test_has_ties_and_tied_fraction(short_tied, long_tied):
    assert short_tied.has_ties and long_tied.has_ties
    assert not ranking_from_items("abc").has_ties
    assert short_tied.tied_item_fraction() == pytest.approx(3 / 7)
    assert ranking_from_items("abc").tied_item_fraction() == 0.0


def test_contribution_series_of_crossing_group(short_tied):
    # item c sits in the group spanning ranks 4..6
    expected = (0, 0, 0, Fraction(1, 3), Fraction(2, 3), 1, 1)
    got = tuple(contribution(short_tied, "c", d, Variant.A) for d in range(1, 8))
    assert got == expected
    # under W the whole group counts as soon as it starts
    got_w = tuple(contribution(short_tied, "c", d, Variant.W) for d in range(1, 8))
    assert got_w == (0, 0, 0, 1, 1, 1, 1)


def test_contribution_of_deep_tied_item(long_tied):
    # item j sits in the 4-wide group at ranks 10..13
    assert contribution(long_tied, "j", 12, Variant.A) == Fraction(3, 4)
    assert contribution(long_tied, "j", 12, Variant.B) == Fraction(3, 4)
    assert contribution(long_tied, "j", 12, Variant.W) == 1


def test_contribution_absent_item_and_bad_depth(short_tied):
    assert contribution(short_tied, "zzz", 3, Variant.A) == 0
    with pytest.raises(ValueError):
        contribution(short_tied, "c", 0, Variant.A)


def test_overlap_and_universe(short_tied, long_tied):
    assert overlap(short_tied, long_tied, 13) == 5
    assert overlap(long_tied, short_tied, 13) == 5
    assert len(universe(short_tied, long_tied)) == 15
    with pytest.raises(ValueError):
        overlap(short_tied, long_tied, 0)


def test_overlap_is_strict_about_crossing_groups(short_tied, long_tied):
    # at depth 4 the group e,c,d (ranks 4..6) is not yet fully inside
    # the prefix, so only items whose bottom rank fits on both sides count
    assert overlap(short_tied, long_tied, 4) == 1  # just a
    assert overlap(short_tied, long_tied, 5) == 1  # e,c,d still crossing
    assert overlap(short_tied, long_tied, 6) == 4  # a, e, c, d


def test_overlap_matches_set_intersection_on_untied():
    u = ranking_from_items("abcdefg")
    v = ranking_from_items("gfabxyz")
    for d in range(1, 8):
        expected = len(set("abcdefg"[:d]) & set("gfabxyz"[:d]))
        assert overlap(u, v, d) == expected


@settings(max_examples=100)
@given(r=rankings(max_items=10))
def test_contributions_sum_to_depth(r):
    # fractional membership is conserved: the depth-d prefix always holds
    # exactly min(d, len) units of item mass
    for d in range(1, r.length + 2):
        total = sum(contribution(r, e, d, Variant.A) for e in r.items())
        assert total == min(d, r.length)
        total_w = sum(contribution(r, e, d, Variant.W) for e in r.items())
        assert total_w >= total


def test_parse_ranking_text_groups_comments_blanks():
    text = "# header comment\nf\nb\n\na\ne c d\nn\n"
    r = parse_ranking_text(text)
    assert r.groups == (("f",), ("b",), ("a",), ("e", "c", "d"), ("n",))
    with pytest.raises(EmptyRanking):
        parse_ranking_text("# only a comment\n")


def test_format_parse_round_trip(short_tied, long_tied):
    for r in (short_tied, long_tied):
        assert parse_ranking_text(format_ranking_text(r)) == r


def test_read_ranking_from_file(tmp_path, long_tied):
    path = tmp_path / "r.txt"
    path.write_text(format_ranking_text(long_tied), encoding="utf-8")
    assert read_ranking(path) == long_tied
