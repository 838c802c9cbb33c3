"""The command-line surface, driven in-process through main(argv)."""

import csv
import io

import pytest

from rbo_kit import RboParams, Variant, rbo, read_ranking
from rbo_kit.cli import DiffBucket, main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_compute_plain_defaults(capsys, data_dir):
    code, out, _ = run_cli(
        capsys, ["compute", str(data_dir / "short.txt"), str(data_dir / "long.txt")]
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["topic", "p", "variant", "ext", "min", "max", "res"]
    assert len(rows) == 9  # three default p values x three tie variants
    assert {r[2] for r in rows} == {"w", "a", "b"}
    # spot-check one row against the library at the CLI's precision
    short = read_ranking(data_dir / "short.txt")
    long_ = read_ranking(data_dir / "long.txt")
    expected = rbo(short, long_, RboParams(p=0.9, variant=Variant.B))
    row = next(r for r in rows if r[1] == "0.9" and r[2] == "b")
    assert row[3] == format(expected.ext, ".12g")
    assert row[6] == format(expected.res, ".12g")


def test_compute_tie_break_columns_on_identical_inputs(capsys, data_dir):
    path = str(data_dir / "short.txt")
    code, out, _ = run_cli(
        capsys,
        [
            "compute",
            path,
            path,
            "--variant",
            "b",
            "--p",
            "0.9",
            "--tie-break",
            "docid",
            "--tie-break",
            "random",
        ],
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header[-2:] == ["docid_ext", "random_ext"]
    assert len(rows) == 1
    # id-ordered breaking resolves identical tie groups identically, and
    # the information-ratio variant treats the pair as fully agreeing
    assert float(rows[0][3]) == 1.0
    assert float(rows[0][7]) == 1.0
    # per-side random seeds resolve the shared group differently
    assert float(rows[0][8]) < 1.0


def test_compute_trec_topics(capsys, data_dir):
    code, out, _ = run_cli(
        capsys,
        [
            "compute",
            str(data_dir / "runs" / "run_a.txt"),
            str(data_dir / "runs" / "run_b.txt"),
            "--format",
            "trec",
            "--p",
            "0.9",
        ],
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert {r[0] for r in rows} == {"101", "102"}
    assert len(rows) == 6


def test_missing_file_is_io_failure(capsys, tmp_path):
    code, _, err = run_cli(
        capsys, ["compute", str(tmp_path / "nope.txt"), str(tmp_path / "nope.txt")]
    )
    assert code == 1
    assert "error:" in err


def test_malformed_run_is_data_failure(capsys, tmp_path, data_dir):
    bad = tmp_path / "bad.txt"
    bad.write_text("101 Q0 d1 1 2.0\n", encoding="utf-8")  # five columns
    code, _, err = run_cli(
        capsys,
        ["compute", str(bad), str(data_dir / "runs" / "run_b.txt"), "--format", "trec"],
    )
    assert code == 1
    assert "line 1" in err


def test_unknown_topic_is_data_failure(capsys, data_dir):
    code, _, err = run_cli(
        capsys,
        [
            "compute",
            str(data_dir / "runs" / "run_a.txt"),
            str(data_dir / "runs" / "run_b.txt"),
            "--format",
            "trec",
            "--topic",
            "999",
        ],
    )
    assert code == 1
    assert "999" in err


def test_bad_p_is_usage_error(capsys, data_dir):
    with pytest.raises(SystemExit) as err:
        main(
            [
                "compute",
                str(data_dir / "short.txt"),
                str(data_dir / "long.txt"),
                "--p",
                "1.5",
            ]
        )
    assert err.value.code == 2


def test_trec_experiment_requires_runs_dir(capsys, tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["experiment", "--mode", "trec", "--out", str(tmp_path)])
    assert err.value.code == 2


def test_invalid_thread_cap_is_usage_error(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RBO_KIT_THREADS", "many")
    code, _, err = run_cli(
        capsys,
        [
            "experiment",
            "--mode",
            "synth",
            "--out",
            str(tmp_path / "o"),
            "--pair-count",
            "2",
            "--n-items",
            "30",
            "--truncation-range",
            "5",
            "10",
            "--p",
            "0.9",
        ],
    )
    assert code == 2
    assert "RBO_KIT_THREADS" in err


def test_verify_passes_on_worked_pair(capsys, data_dir):
    code, out, _ = run_cli(
        capsys,
        [
            "verify",
            str(data_dir / "short.txt"),
            str(data_dir / "long.txt"),
            "--p",
            "0.9",
        ],
    )
    assert code == 0
    assert "PASS" in out
    assert "permutation check" in out


def test_verify_skips_oversized_permutation_checks(capsys, data_dir):
    code, out, _ = run_cli(
        capsys,
        [
            "verify",
            str(data_dir / "short.txt"),
            str(data_dir / "long.txt"),
            "--p",
            "0.9",
            "--cap",
            "100",
        ],
    )
    assert code == 0  # numeric check still runs and passes
    assert "skipped" in out
    assert "PASS" in out


def test_stats_output(capsys, data_dir):
    code, out, _ = run_cli(
        capsys,
        ["stats", str(data_dir / "tied_run.txt"), "--p", "0.9"],
    )
    assert code == 0
    lines = dict(
        line.split(":", 1) for line in out.strip().splitlines() if ":" in line
    )
    assert lines["docs tied"].strip() == "1"
    assert lines["mean tie group size"].strip() == "4"
    assert lines["mean tie impact p=0.9"].strip() == "1"


def test_stats_multiple_runs(capsys, data_dir):
    code, out, _ = run_cli(
        capsys,
        [
            "stats",
            str(data_dir / "runs" / "run_a.txt"),
            str(data_dir / "runs" / "run_b.txt"),
            "--p",
            "0.9",
        ],
    )
    assert code == 0
    assert "runs:                 2" in out


def _synth_args(out_dir):
    return [
        "experiment",
        "--mode",
        "synth",
        "--out",
        str(out_dir),
        "--pair-count",
        "20",
        "--n-items",
        "80",
        "--truncation-range",
        "8",
        "20",
        "--p",
        "0.9",
        "--seed",
        "13",
    ]


def test_synth_experiment_outputs_and_determinism(capsys, tmp_path):
    code1, out1, _ = run_cli(capsys, _synth_args(tmp_path / "one"))
    code2, out2, _ = run_cli(capsys, _synth_args(tmp_path / "two"))
    assert code1 == code2 == 0
    assert out1 == out2
    for name in ("pairs.csv", "summary.csv"):
        first = (tmp_path / "one" / name).read_bytes()
        second = (tmp_path / "two" / name).read_bytes()
        assert first == second
    header, rows = parse_csv((tmp_path / "one" / "pairs.csv").read_text())
    assert len(rows) == 20
    assert header[:2] == ["pair", "p"]
    assert "base_docid_ext" in header and "b_res" in header


def test_worker_count_does_not_change_output(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RBO_KIT_THREADS", "1")
    run_cli(capsys, _synth_args(tmp_path / "serial"))
    monkeypatch.setenv("RBO_KIT_THREADS", "3")
    run_cli(capsys, _synth_args(tmp_path / "pooled"))
    assert (tmp_path / "serial" / "pairs.csv").read_bytes() == (
        tmp_path / "pooled" / "pairs.csv"
    ).read_bytes()


def test_trec_experiment_matches_golden(capsys, tmp_path, data_dir):
    code, _, _ = run_cli(
        capsys,
        [
            "experiment",
            "--mode",
            "trec",
            "--runs",
            str(data_dir / "runs"),
            "--out",
            str(tmp_path),
            "--p",
            "0.9",
            "--seed",
            "7",
        ],
    )
    assert code == 0
    for name in ("pairs.csv", "summary.csv"):
        got = (tmp_path / name).read_text(encoding="utf-8")
        golden = (data_dir / f"golden_trec_{name.replace('.csv', '')}.csv").read_text(
            encoding="utf-8"
        )
        assert got == golden


def test_diff_bucket_boundaries():
    assert DiffBucket.classify(0.01) is DiffBucket.SMALL
    assert DiffBucket.classify(-0.01) is DiffBucket.SMALL
    assert DiffBucket.classify(0.0100001) is DiffBucket.MEDIUM
    assert DiffBucket.classify(0.1) is DiffBucket.MEDIUM
    assert DiffBucket.classify(0.2) is DiffBucket.LARGE
