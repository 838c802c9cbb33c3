"""TREC run ingestion: parse runs, group score ties, break ties.

A run file holds lines of six whitespace-separated columns::

    topic  Q0  doc_id  rank  score  tag

Only the score governs ordering: documents are sorted by score
descending (stable, preserving file order among equal scores) and
maximal stretches of *exactly* equal scores become one tie group.  The
rank column is parsed and kept for diagnostics but never trusted; the
second column is carried through without interpretation.  Comment lines
are not part of the format — a line starting with '#' is malformed.

Score equality is exact on the parsed 64-bit float.  There is no
epsilon option: fuzzy regrouping silently changes results, so callers
who want coarser grouping must round scores themselves before writing
the run.  Non-finite scores are rejected at parse time because NaN
breaks both ordering and grouping.

Tie breaking supports two strategies.  DOCID orders each group
lexicographically by document id, the convention used by standard
evaluation tooling.  RANDOM permutes each group uniformly with a
dedicated deterministic generator seeded from ``(seed, group index)``,
starting from the sorted order so the outcome depends only on the seed
and the group's membership, never on incidental input order.  Callers
comparing two rankings under RANDOM must pass *different* seeds per
ranking, otherwise structurally identical groups break identically and
the comparison degenerates to the DOCID case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import IO, Iterable, Mapping, Union

from .core import Ranking, RboKitError, ranking_from_groups
from .rng import SplitMix64, derive_seed


class MalformedLine(RboKitError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateDoc(RboKitError):
    def __init__(self, topic: str, doc_id: str):
        super().__init__(f"document {doc_id!r} appears twice under topic {topic!r}")
        self.topic = topic
        self.doc_id = doc_id


class EmptyRun(RboKitError):
    def __init__(self):
        super().__init__("run contains no entries")


class UnknownTopic(RboKitError):
    def __init__(self, topic: str):
        super().__init__(f"topic {topic!r} not present in run")
        self.topic = topic


@dataclass(frozen=True)
class RunEntry:
    doc_id: str
    score: float
    given_rank: int


@dataclass(frozen=True)
class TrecRun:
    """One parsed run: a tag and, per topic, entries in score order."""

    tag: str
    topics: Mapping[str, tuple[RunEntry, ...]]

    def ranking(self, topic: str) -> Ranking:
        return to_ranking(self, topic)


class TieBreakKind(Enum):
    DOCID = "docid"
    RANDOM = "random"


@dataclass(frozen=True)
class TieBreakStrategy:
    """How to linearize tie groups; RANDOM carries its seed."""

    kind: TieBreakKind
    seed: int = 0

    @staticmethod
    def docid() -> "TieBreakStrategy":
        return TieBreakStrategy(TieBreakKind.DOCID)

    @staticmethod
    def random(seed: int) -> "TieBreakStrategy":
        return TieBreakStrategy(TieBreakKind.RANDOM, seed)


def parse_run(source: Union[str, bytes, IO, Iterable[str]]) -> TrecRun:
    """Parse a run from text, bytes, an open file, or an iterable of lines.

    Blank lines are skipped; anything else must be a six-column entry.
    The run's tag is taken from the first entry.
    """
    if isinstance(source, bytes):
        lines: Iterable[str] = source.decode("utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source

    tag = None
    topics: dict[str, list[RunEntry]] = {}
    seen: set[tuple[str, str]] = set()
    for line_no, raw in enumerate(lines, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            raise MalformedLine(line_no, "comment lines are not part of the run format")
        cols = line.split()
        if len(cols) != 6:
            raise MalformedLine(line_no, f"expected 6 columns, got {len(cols)}")
        topic, _q0, doc_id, rank_s, score_s, line_tag = cols
        try:
            given_rank = int(rank_s)
        except ValueError:
            raise MalformedLine(line_no, f"rank {rank_s!r} is not an integer") from None
        try:
            score = float(score_s)
        except ValueError:
            raise MalformedLine(line_no, f"score {score_s!r} is not a number") from None
        if not math.isfinite(score):
            raise MalformedLine(line_no, f"score {score_s!r} is not finite")
        if (topic, doc_id) in seen:
            raise DuplicateDoc(topic, doc_id)
        seen.add((topic, doc_id))
        if tag is None:
            tag = line_tag
        topics.setdefault(topic, []).append(RunEntry(doc_id, score, given_rank))

    if tag is None:
        raise EmptyRun()
    ordered = {
        topic: tuple(sorted(entries, key=lambda e: e.score, reverse=True))
        for topic, entries in topics.items()
    }
    return TrecRun(tag=tag, topics=MappingProxyType(ordered))


def read_run(path) -> TrecRun:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_run(fh)


def serialize_run(run: TrecRun) -> str:
    """Inverse of parse_run up to whitespace; scores written with repr
    so parse(serialize(run)) reproduces every 64-bit value exactly."""
    out = []
    for topic in run.topics:
        for entry in run.topics[topic]:
            out.append(
                f"{topic} Q0 {entry.doc_id} {entry.given_rank} {entry.score!r} {run.tag}"
            )
    return "\n".join(out) + "\n"


def to_ranking(run: TrecRun, topic: str) -> Ranking:
    """Tie groups from maximal stretches of exactly equal scores."""
    if topic not in run.topics:
        raise UnknownTopic(topic)
    groups: list[list[str]] = []
    last_score: float | None = None
    for entry in run.topics[topic]:
        if groups and entry.score == last_score:
            groups[-1].append(entry.doc_id)
        else:
            groups.append([entry.doc_id])
            last_score = entry.score
    return ranking_from_groups(groups)


def break_ties(r: Ranking, strategy: TieBreakStrategy) -> Ranking:
    """Linearize every tie group; the result has singleton groups only."""
    items: list[str] = []
    for index, group in enumerate(r.groups):
        ordered = sorted(group)
        if strategy.kind is TieBreakKind.RANDOM and len(ordered) > 1:
            SplitMix64(derive_seed(strategy.seed, index)).shuffle(ordered)
        items.extend(ordered)
    return ranking_from_groups([[e] for e in items])


@dataclass(frozen=True)
class TieStats:
    """Corpus-level tie prevalence over a collection of runs.

    ``mean_tie_group_size`` averages only groups of two or more items;
    singleton "groups" are not ties.  When no such group exists the mean
    is reported as 0.0 with ``group_size_defined`` False.
    """

    runs_with_ties: float
    rankings_with_ties: float
    docs_tied: float
    mean_tie_group_size: float
    group_size_defined: bool


def tie_stats(runs: Iterable[TrecRun]) -> TieStats:
    n_runs = 0
    runs_tied = 0
    n_rankings = 0
    rankings_tied = 0
    n_docs = 0
    docs_tied = 0
    group_sizes: list[int] = []
    for run in runs:
        n_runs += 1
        run_has_tie = False
        for topic in run.topics:
            n_rankings += 1
            ranking = to_ranking(run, topic)
            n_docs += ranking.length
            tied_here = 0
            for g in ranking.groups:
                if len(g) >= 2:
                    tied_here += len(g)
                    group_sizes.append(len(g))
            docs_tied += tied_here
            if tied_here:
                rankings_tied += 1
                run_has_tie = True
        if run_has_tie:
            runs_tied += 1
    defined = bool(group_sizes)
    return TieStats(
        runs_with_ties=runs_tied / n_runs if n_runs else 0.0,
        rankings_with_ties=rankings_tied / n_rankings if n_rankings else 0.0,
        docs_tied=docs_tied / n_docs if n_docs else 0.0,
        mean_tie_group_size=sum(group_sizes) / len(group_sizes) if defined else 0.0,
        group_size_defined=defined,
    )


def tie_impact(r: Ranking, p: float) -> float:
    """Share of the geometric depth weight falling on tied ranks.

    sum of p^d over depths d inside groups of size >= 2, divided by the
    sum of p^d over all depths 1..len(r).  0 for untied rankings, 1 for
    a single all-tied group; ties near the top weigh more than the same
    count near the bottom.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    num = 0.0
    den = 0.0
    pw = 1.0
    rank = 0
    for g in r.groups:
        tied = len(g) >= 2
        for _ in g:
            rank += 1
            pw *= p
            den += pw
            if tied:
                num += pw
    return num / den
