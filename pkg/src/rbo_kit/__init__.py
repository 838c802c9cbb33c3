"""Rank-biased overlap for truncated, uneven, tied rankings.

The package computes RBO between two rankings that may be cut off at
different depths, need not draw from the same item pool, and may rank
items in tie groups.  Three tie treatments are provided next to the
tie-unaware base measure, each with extrapolated, lower-bound and
upper-bound prefix evaluations, plus slow independent references, TREC
run ingestion, and a deterministic synthetic-experiment harness.
"""

from .agreement import (
    AgreementValue,
    CrossingGroupAtDepth,
    agreement,
    agreement_a,
    agreement_b,
    agreement_base,
    agreement_w,
)
from .core import (
    DuplicateItem,
    EmptyRanking,
    Ranking,
    RboKitError,
    TieBounds,
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
from .oracle import (
    NotConjoint,
    TooManyPermutations,
    UndefinedCorrelation,
    agreement_a_enumerated,
    enumerate_tie_permutations,
    kendall_tau_b,
    permutation_count,
    rbo_numeric,
)
from .prefix import (
    Assumption,
    ExtrapolationWarning,
    InvalidPersistence,
    RboParams,
    RboScores,
    ext_unseen_contribution,
    rbo,
    section2_sum,
    section3_sum,
    unmatched_sequence,
)
from .rng import SplitMix64, derive_seed
from .synth import (
    HasTies,
    PairMeta,
    SynthConfig,
    generate_pair,
    generate_shared_tie_pair,
    kendall_tau_untied,
)
from .trec import (
    DuplicateDoc,
    EmptyRun,
    MalformedLine,
    RunEntry,
    TieBreakKind,
    TieBreakStrategy,
    TieStats,
    TrecRun,
    UnknownTopic,
    break_ties,
    parse_run,
    read_run,
    serialize_run,
    tie_impact,
    tie_stats,
    to_ranking,
)

__version__ = "0.1.0"

__all__ = [
    "AgreementValue",
    "Assumption",
    "CrossingGroupAtDepth",
    "DuplicateDoc",
    "DuplicateItem",
    "EmptyRanking",
    "EmptyRun",
    "ExtrapolationWarning",
    "HasTies",
    "InvalidPersistence",
    "MalformedLine",
    "NotConjoint",
    "PairMeta",
    "Ranking",
    "RboKitError",
    "RboParams",
    "RboScores",
    "RunEntry",
    "SplitMix64",
    "SynthConfig",
    "TieBounds",
    "TieBreakKind",
    "TieBreakStrategy",
    "TieStats",
    "TooManyPermutations",
    "TrecRun",
    "UndefinedCorrelation",
    "UnknownTopic",
    "Variant",
    "agreement",
    "agreement_a",
    "agreement_a_enumerated",
    "agreement_b",
    "agreement_base",
    "agreement_w",
    "break_ties",
    "contribution",
    "derive_seed",
    "enumerate_tie_permutations",
    "ext_unseen_contribution",
    "format_ranking_text",
    "generate_pair",
    "generate_shared_tie_pair",
    "kendall_tau_b",
    "kendall_tau_untied",
    "overlap",
    "parse_ranking_text",
    "parse_run",
    "permutation_count",
    "ranking_from_groups",
    "ranking_from_items",
    "rbo",
    "rbo_numeric",
    "read_ranking",
    "read_run",
    "section2_sum",
    "section3_sum",
    "serialize_run",
    "tie_bounds",
    "tie_impact",
    "tie_stats",
    "to_ranking",
    "unmatched_sequence",
    "universe",
]
