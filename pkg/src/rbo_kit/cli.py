"""Command-line surface: compute scores, run experiments, summarize ties,
verify the fast engine against the slow references.

Output conventions, fixed so golden-file comparison works:

- CSV with a header row, '.' decimal point, floats at 12 significant
  digits, newline line endings; byte-identical across repeated runs
  with identical flags and seeds (worker count does not affect output
  order).
- Exit codes: 0 success, 1 I/O or data failure (unreadable file,
  malformed run, undefined score on the given data), 2 invalid
  arguments (bad flag values, p outside (0, 1), bad config ranges).

Experiment mode scores every pair with bare RBO after both tie-break
strategies and with all three tie-aware variants.  Differences in the
summary are taken against the id-ordered (docid) bare score, the
deterministic convention of standard evaluation tools.  Random tie
breaking uses a different derived seed per side, so structurally
identical tie groups in the two rankings do not break identically.

The worker pool is capped by the RBO_KIT_THREADS environment variable;
rows are emitted in task order regardless of completion order.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .agreement import agreement_a
from .core import Ranking, RboKitError, Variant, read_ranking
from .oracle import (
    PERMUTATION_CAP,
    TooManyPermutations,
    agreement_a_enumerated,
    rbo_numeric,
)
from .prefix import Assumption, InvalidPersistence, RboParams, RboScores, rbo
from .rng import derive_seed
from .synth import SynthConfig, generate_pair, generate_shared_tie_pair
from .trec import TieBreakStrategy, break_ties, read_run, tie_impact, tie_stats, to_ranking

DEFAULT_P = (0.8, 0.9, 0.95)
VARIANTS = {"w": Variant.W, "a": Variant.A, "b": Variant.B, "base": Variant.BASE}
TIE_VARIANTS = ("w", "a", "b")
BARE_SCORERS = ("base_docid", "base_random")


class DiffBucket(Enum):
    """Absolute-difference buckets: SMALL <= 0.01 < MEDIUM <= 0.1 < LARGE <= 1."""

    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"

    @staticmethod
    def classify(delta: float) -> "DiffBucket":
        a = abs(delta)
        if a <= 0.01:
            return DiffBucket.SMALL
        if a <= 0.1:
            return DiffBucket.MEDIUM
        return DiffBucket.LARGE


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _p_arg(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 < p < 1.0:
        raise argparse.ArgumentTypeError(f"p must be in (0, 1), got {text}")
    return p


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _thread_cap() -> int:
    raw = os.environ.get("RBO_KIT_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RBO_KIT_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"RBO_KIT_THREADS must be positive, got {n}")
    return n


def _pool_map(fn: Callable, tasks: Sequence) -> list:
    workers = _thread_cap()
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=8))


def _write_csv(stream, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


# ---------------------------------------------------------------------------
# input loading shared by compute and verify


def _load_pairs(args) -> list[tuple[str, Ranking, Ranking]]:
    """(label, ranking, ranking) units from two plain files or two runs."""
    if args.format == "plain":
        return [("-", read_ranking(args.left), read_ranking(args.right))]
    run_a, run_b = read_run(args.left), read_run(args.right)
    if args.topic:
        topics = list(args.topic)
        for t in topics:
            if t not in run_a.topics or t not in run_b.topics:
                raise RboKitError(f"topic {t!r} missing from one of the runs")
    else:
        topics = sorted(set(run_a.topics) & set(run_b.topics))
        if not topics:
            raise RboKitError("runs share no topics")
    return [(t, to_ranking(run_a, t), to_ranking(run_b, t)) for t in topics]


def _broken(r: Ranking, kind: str, seed: int) -> Ranking:
    if kind == "docid":
        return break_ties(r, TieBreakStrategy.docid())
    return break_ties(r, TieBreakStrategy.random(seed))


# ---------------------------------------------------------------------------
# compute


def cmd_compute(args) -> int:
    pairs = _load_pairs(args)
    variants = args.variant or list(TIE_VARIANTS)
    strategies = args.tie_break or []
    header = ["topic", "p", "variant", "ext", "min", "max", "res"]
    header += [f"{st}_ext" for st in strategies]
    rows = []
    for index, (label, r1, r2) in enumerate(pairs):
        bare: dict[tuple[str, float], float] = {}
        for st in strategies:
            b1 = _broken(r1, st, derive_seed(args.seed, index, 0))
            b2 = _broken(r2, st, derive_seed(args.seed, index, 1))
            for p in args.p:
                bare[(st, p)] = rbo(b1, b2, RboParams(p=p, variant=Variant.BASE)).ext
        for p in args.p:
            for name in variants:
                scores = rbo(r1, r2, RboParams(p=p, variant=VARIANTS[name]))
                row = [label, p, name, scores.ext, scores.min, scores.max, scores.res]
                row += [bare[(st, p)] for st in strategies]
                rows.append(row)
    _write_csv(sys.stdout, header, rows)
    return 0


# ---------------------------------------------------------------------------
# experiment


def _score_columns() -> list[str]:
    cols = []
    for scorer in BARE_SCORERS + TIE_VARIANTS:
        cols += [f"{scorer}_{f}" for f in ("ext", "min", "max", "res")]
    return cols


def _score_pair(r1: Ranking, r2: Ranking, p: float, seed_pair: tuple[int, int]) -> dict[str, RboScores]:
    d1 = _broken(r1, "docid", 0)
    d2 = _broken(r2, "docid", 0)
    x1 = _broken(r1, "random", seed_pair[0])
    x2 = _broken(r2, "random", seed_pair[1])
    out = {
        "base_docid": rbo(d1, d2, RboParams(p=p, variant=Variant.BASE)),
        "base_random": rbo(x1, x2, RboParams(p=p, variant=Variant.BASE)),
    }
    for name in TIE_VARIANTS:
        out[name] = rbo(r1, r2, RboParams(p=p, variant=VARIANTS[name]))
    return out


def _flatten_scores(scores: dict[str, RboScores]) -> list[float]:
    row = []
    for scorer in BARE_SCORERS + TIE_VARIANTS:
        s = scores[scorer]
        row += [s.ext, s.min, s.max, s.res]
    return row


def _summarize(per_pair: list[tuple[float, dict[str, RboScores]]],
               p_values: Sequence[float]) -> list[list]:
    """Wide summary: per p, mean/max |diff| and bucket shares per variant.

    Differences are variant ext minus id-broken bare ext.
    """
    rows = []
    for p in p_values:
        row: list = [p]
        diffs = {
            v: [abs(sc[v].ext - sc["base_docid"].ext)
                for (pp, sc) in per_pair if pp == p]
            for v in TIE_VARIANTS
        }
        for v in TIE_VARIANTS:
            ds = diffs[v]
            n = len(ds)
            buckets = [DiffBucket.classify(d) for d in ds]
            row += [
                sum(ds) / n if n else 0.0,
                max(ds) if ds else 0.0,
                100.0 * sum(b is DiffBucket.MEDIUM for b in buckets) / n if n else 0.0,
                100.0 * sum(b is DiffBucket.LARGE for b in buckets) / n if n else 0.0,
            ]
        rows.append(row)
    return rows


def _summary_header() -> list[str]:
    header = ["p"]
    for v in TIE_VARIANTS:
        header += [f"{v}_mean_abs_diff", f"{v}_max_abs_diff",
                   f"{v}_pct_medium", f"{v}_pct_large"]
    return header


def _experiment_synth(args) -> tuple[list[str], list[list], list[list]]:
    cfg = SynthConfig(
        n_items=args.n_items,
        tau_range=tuple(args.tau_range),
        tie_fraction_range=tuple(args.tie_fraction_range),
        truncation_range=tuple(args.truncation_range),
        pair_count=args.pair_count,
        seed=args.seed,
    )
    generator = generate_shared_tie_pair if args.shared_ties else generate_pair

    def work(index: int):
        r1, r2, meta = generator(cfg, index)
        seeds = (derive_seed(cfg.seed, 2, index, 0), derive_seed(cfg.seed, 2, index, 1))
        rows = []
        scored = []
        for p in args.p:
            scores = _score_pair(r1, r2, p, seeds)
            scored.append((p, scores))
            rows.append(
                [index, p, meta.length_1, meta.length_2, meta.tau,
                 meta.tie_fraction_1, meta.tie_fraction_2,
                 tie_impact(r1, p), tie_impact(r2, p)]
                + _flatten_scores(scores)
            )
        return rows, scored

    results = _pool_map(work, list(range(cfg.pair_count)))
    pair_rows = [row for rows, _ in results for row in rows]
    scored = [item for _, sc in results for item in sc]
    header = (["pair", "p", "length_1", "length_2", "tau",
               "tie_fraction_1", "tie_fraction_2", "tie_impact_1", "tie_impact_2"]
              + _score_columns())
    return header, pair_rows, _summarize(scored, args.p)


def _trec_pair_list(args) -> list[tuple[Path, Path]]:
    run_dir = Path(args.runs)
    files = sorted(f for f in run_dir.iterdir() if f.is_file())
    if args.pairs:
        pairs = []
        for raw in Path(args.pairs).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line:
                continue
            names = line.split()
            if len(names) != 2:
                raise RboKitError(f"pair list line needs two file names: {line!r}")
            pairs.append((run_dir / names[0], run_dir / names[1]))
        return pairs
    if args.tag_prefix is not None:
        runs = [(f, read_run(f).tag) for f in files]
        groups: dict[str, list[Path]] = {}
        for f, tag in runs:
            groups.setdefault(tag[: args.tag_prefix], []).append(f)
        return [pair for members in groups.values()
                for pair in combinations(members, 2)]
    return list(combinations(files, 2))


def _experiment_trec(args) -> tuple[list[str], list[list], list[list]]:
    pair_files = _trec_pair_list(args)
    if not pair_files:
        raise RboKitError("no run pairs to score")

    def work(task):
        index, (file_a, file_b) = task
        run_a, run_b = read_run(file_a), read_run(file_b)
        topics = sorted(set(run_a.topics) & set(run_b.topics))
        rows = []
        scored = []
        for t_index, topic in enumerate(topics):
            r1 = to_ranking(run_a, topic)
            r2 = to_ranking(run_b, topic)
            label = f"{file_a.name}:{file_b.name}:{topic}"
            seeds = (derive_seed(args.seed, 3, index, t_index, 0),
                     derive_seed(args.seed, 3, index, t_index, 1))
            tied1 = r1.tied_item_fraction()
            tied2 = r2.tied_item_fraction()
            for p in args.p:
                scores = _score_pair(r1, r2, p, seeds)
                scored.append((p, scores))
                rows.append(
                    [label, p, r1.length, r2.length, tied1, tied2,
                     tie_impact(r1, p), tie_impact(r2, p)]
                    + _flatten_scores(scores)
                )
        return rows, scored

    results = _pool_map(work, list(enumerate(pair_files)))
    pair_rows = [row for rows, _ in results for row in rows]
    scored = [item for _, sc in results for item in sc]
    header = (["pair", "p", "length_1", "length_2",
               "tie_fraction_1", "tie_fraction_2", "tie_impact_1", "tie_impact_2"]
              + _score_columns())
    return header, pair_rows, _summarize(scored, args.p)


def cmd_experiment(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.mode == "synth":
        header, pair_rows, summary_rows = _experiment_synth(args)
    else:
        header, pair_rows, summary_rows = _experiment_trec(args)
    with open(out_dir / "pairs.csv", "w", encoding="utf-8", newline="") as fh:
        _write_csv(fh, header, pair_rows)
    with open(out_dir / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        _write_csv(fh, _summary_header(), summary_rows)
    _write_csv(sys.stdout, _summary_header(), summary_rows)
    return 0


# ---------------------------------------------------------------------------
# stats


def cmd_stats(args) -> int:
    runs = [read_run(path) for path in args.runs]
    stats = tie_stats(runs)
    print(f"runs:                 {len(runs)}")
    print(f"runs with ties:       {_fmt(stats.runs_with_ties)}")
    print(f"rankings with ties:   {_fmt(stats.rankings_with_ties)}")
    print(f"docs tied:            {_fmt(stats.docs_tied)}")
    if stats.group_size_defined:
        print(f"mean tie group size:  {_fmt(stats.mean_tie_group_size)}")
    else:
        print("mean tie group size:  n/a (no tie groups)")
    for p in args.p:
        impacts = [
            tie_impact(to_ranking(run, topic), p)
            for run in runs
            for topic in run.topics
        ]
        mean = sum(impacts) / len(impacts) if impacts else 0.0
        print(f"mean tie impact p={_fmt(p)}: {_fmt(mean)}")
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    pairs = _load_pairs(args)
    worst_numeric = 0.0
    numeric_evals = 0
    worst_perm = 0.0
    perm_evals = 0
    skipped: list[str] = []
    for label, r1, r2 in pairs:
        for p in args.p:
            for name in TIE_VARIANTS:
                params = RboParams(p=p, variant=VARIANTS[name])
                scores = rbo(r1, r2, params)
                for assumption, got in ((Assumption.EXT, scores.ext),
                                        (Assumption.MIN, scores.min),
                                        (Assumption.MAX, scores.max)):
                    ref = rbo_numeric(r1, r2, params, assumption)
                    worst_numeric = max(worst_numeric, abs(got - ref))
                    numeric_evals += 1
        try:
            for d in range(1, min(r1.length, r2.length) + 1):
                fast = agreement_a(r1, r2, d)
                slow = agreement_a_enumerated(r1, r2, d, cap=args.cap)
                worst_perm = max(worst_perm, abs(float(fast.value) - float(slow)))
                perm_evals += 1
        except TooManyPermutations as exc:
            skipped.append(
                f"{label}: permutation check skipped "
                f"({exc.count} orderings exceed cap {exc.cap})"
            )
    print(f"numeric check: max deviation {_fmt(worst_numeric)} "
          f"over {numeric_evals} evaluations")
    if perm_evals:
        print(f"permutation check: max deviation {_fmt(worst_perm)} "
              f"over {perm_evals} depths")
    for note in skipped:
        print(note)
    ok = worst_numeric < 1e-9 and worst_perm < 1e-9
    print("PASS" if ok else "FAIL", "(tolerance 1e-9)")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_common_inputs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("left", help="first ranking or run file")
    sub.add_argument("right", help="second ranking or run file")
    sub.add_argument("--format", choices=("plain", "trec"), default="plain",
                     help="input format (default plain)")
    sub.add_argument("--topic", action="append", default=[],
                     help="topic to score in trec format (repeatable; default: all shared)")
    sub.add_argument("--p", action="append", type=_p_arg, default=None,
                     metavar="P", help="persistence value in (0,1), repeatable "
                     f"(default {', '.join(str(x) for x in DEFAULT_P)})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbo-kit",
        description="Rank-biased overlap with tie-aware variants",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="score one pair of rankings")
    _add_common_inputs(compute)
    compute.add_argument("--variant", action="append", choices=sorted(VARIANTS),
                         default=None, help="variant to report (repeatable; default w, a, b)")
    compute.add_argument("--tie-break", action="append", choices=("docid", "random"),
                         default=None, dest="tie_break",
                         help="also report bare RBO after this tie-break strategy (repeatable)")
    compute.add_argument("--seed", type=int, default=0,
                         help="seed for random tie breaking (default 0)")
    compute.set_defaults(func=cmd_compute)

    experiment = commands.add_parser("experiment", help="score many pairs and summarize")
    experiment.add_argument("--mode", choices=("synth", "trec"), required=True)
    experiment.add_argument("--out", required=True, help="output directory")
    experiment.add_argument("--p", action="append", type=_p_arg, default=None, metavar="P")
    experiment.add_argument("--seed", type=int, default=0)
    experiment.add_argument("--pair-count", type=_positive_int, default=2000,
                            help="synth: number of pairs (default 2000)")
    experiment.add_argument("--n-items", type=_positive_int, default=1000,
                            help="synth: universe size (default 1000)")
    experiment.add_argument("--tau-range", nargs=2, type=float, default=(0.5, 1.0),
                            metavar=("LO", "HI"))
    experiment.add_argument("--tie-fraction-range", nargs=2, type=float,
                            default=(0.1, 1.0), metavar=("LO", "HI"))
    experiment.add_argument("--truncation-range", nargs=2, type=_positive_int,
                            default=(10, 100), metavar=("LO", "HI"))
    experiment.add_argument("--shared-ties", action="store_true",
                            help="synth: both rankings tie identical item sets")
    experiment.add_argument("--runs", help="trec: directory of run files")
    experiment.add_argument("--pairs", help="trec: file of run-file name pairs")
    experiment.add_argument("--tag-prefix", type=_positive_int, default=None,
                            help="trec: pair runs sharing this many leading tag characters")
    experiment.set_defaults(func=cmd_experiment)

    stats = commands.add_parser("stats", help="tie statistics over run files")
    stats.add_argument("runs", nargs="+", help="run files")
    stats.add_argument("--p", action="append", type=_p_arg, default=None, metavar="P")
    stats.set_defaults(func=cmd_stats)

    verify = commands.add_parser("verify", help="cross-check engine against references")
    _add_common_inputs(verify)
    verify.add_argument("--cap", type=_positive_int, default=PERMUTATION_CAP,
                        help="permutation enumeration cap")
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "p", None) is None:
        args.p = list(DEFAULT_P)
    if args.command == "experiment" and args.mode == "trec" and not args.runs:
        parser.error("--mode trec requires --runs")
    try:
        return args.func(args)
    except InvalidPersistence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RboKitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
