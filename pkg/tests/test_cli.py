"""Command-line behavior end to end, pinned by golden dialog transcripts."""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np

from namesieve.ingest import parse_export_file

DATA = Path(__file__).parent / "data"
GARCIA = DATA / "garcia.txt"

DIALOG_ANSWERS = "help\ny\np\nn\nd\nu\nall\n"
ALT_ANSWERS = "c\n4\np\np\nzz\n\n99\ny\nnone\n"


def run_cli(argv, cwd, stdin_text=""):
    return subprocess.run([sys.executable, "-m", "namesieve", *argv],
                          input=stdin_text, capture_output=True, text=True,
                          cwd=cwd)


def run_filter(cwd, answers, session="sess.json", extra=()):
    return run_cli(["filter", str(GARCIA), "--session", session, *extra],
                   cwd, stdin_text=answers)


# -- filter ------------------------------------------------------------------

def test_dialog_matches_golden_transcript(tmp_path):
    proc = run_filter(tmp_path, DIALOG_ANSWERS)
    assert proc.returncode == 0
    assert proc.stderr == ""
    assert proc.stdout == (DATA / "garcia_dialog.golden").read_text()


def test_dialog_alt_verbs_match_golden_transcript(tmp_path):
    proc = run_filter(tmp_path, ALT_ANSWERS)
    assert proc.returncode == 0
    assert proc.stderr == ""
    assert proc.stdout == (DATA / "garcia_dialog_alt.golden").read_text()


def test_dialog_is_deterministic(tmp_path):
    runs = []
    for sub in ("a", "b"):
        cwd = tmp_path / sub
        cwd.mkdir()
        runs.append(run_filter(cwd, DIALOG_ANSWERS))
    assert runs[0].stdout == runs[1].stdout
    assert (tmp_path / "a" / "sess.json").read_bytes() == \
        (tmp_path / "b" / "sess.json").read_bytes()


def test_dialog_writes_session_state(tmp_path):
    run_filter(tmp_path, DIALOG_ANSWERS)
    data = json.loads((tmp_path / "sess.json").read_text())
    assert data["version"] == 1
    assert data["corpus_hash"] == parse_export_file(GARCIA).content_hash()
    assert data["corpus_name"] == "garcia_m"
    assert data["decisions"] == {"1": "accepted", "2": "rejected",
                                 "3": "accepted", "4": "accepted"}
    assert [(e["seq"], e["action"]) for e in data["log"]] == [
        (0, "decide"), (1, "decide"), (2, "decide_all")]


def test_dialog_eof_saves_partial_session(tmp_path):
    proc = run_filter(tmp_path, "y\n")
    assert proc.returncode == 0
    assert "Selected     1 groups with      4 papers and      108 citations" \
        in proc.stdout
    data = json.loads((tmp_path / "sess.json").read_text())
    assert data["decisions"] == {"1": "accepted", "2": "undecided",
                                 "3": "undecided", "4": "undecided"}


def test_dialog_resumes_saved_session(tmp_path):
    run_filter(tmp_path, DIALOG_ANSWERS)
    proc = run_filter(tmp_path, "")
    assert proc.returncode == 0
    assert "Select this group?" not in proc.stdout
    assert "Selected     3 groups with      9 papers and      123 citations" \
        in proc.stdout


def test_dialog_cutoff_flag_is_recorded(tmp_path):
    run_filter(tmp_path, "", extra=("--cutoff", "6.4"))
    data = json.loads((tmp_path / "sess.json").read_text())
    assert data["cutoff"] == 6.4
    assert data["log"][0]["action"] == "cutoff"


def test_dialog_refuses_session_from_another_corpus(tmp_path):
    run_filter(tmp_path, "y\n")
    data = json.loads((tmp_path / "sess.json").read_text())
    data["corpus_hash"] = "0" * 64
    (tmp_path / "sess.json").write_text(json.dumps(data))
    proc = run_filter(tmp_path, "")
    assert proc.returncode == 1
    assert "different corpus" in proc.stderr


# -- merit ---------------------------------------------------------------------

def test_merit_report_and_export(tmp_path):
    run_filter(tmp_path, DIALOG_ANSWERS)
    proc = run_cli(["merit", str(GARCIA), "--session", "sess.json"], tmp_path)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == [
        "Papers                9",
        "Citations           123",
        "Citations/paper      13.67",
        "Period           1993-2002",
        "h-index               5",
        "Filtered export written to sess.export.txt",
    ]
    exported = parse_export_file(tmp_path / "sess.export.txt",
                                 query_name="Garcia, M")
    assert len(exported.records) == 9
    assert sum(r.citations for r in exported.records) == 123


def test_merit_needs_an_accepting_session(tmp_path):
    run_filter(tmp_path, "none\n")
    proc = run_cli(["merit", str(GARCIA), "--session", "sess.json"], tmp_path)
    assert proc.returncode == 1
    assert "nothing accepted" in proc.stderr


# -- cluster ---------------------------------------------------------------------

GROUP_TABLE = [
    "Found     12 papers in     4 groups",
    "group, papers, citations =   1     4     108",
    "group, papers, citations =   2     3      90",
    "group, papers, citations =   3     2      12",
    "group, papers, citations =   4     3       3",
]


def test_cluster_prints_group_table(tmp_path):
    proc = run_cli(["cluster", str(GARCIA)], tmp_path)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == GROUP_TABLE


def test_cluster_merges_multiple_files(tmp_path):
    proc = run_cli(["cluster", str(GARCIA), str(GARCIA)], tmp_path)
    assert proc.returncode == 0
    # duplicated records land on their originals at negative raw distance
    assert proc.stdout.splitlines()[0] == "Found     24 papers in     4 groups"


def test_cluster_dump_matrix(tmp_path):
    proc = run_cli(["cluster", str(GARCIA), "--dump-matrix", "m.csv"], tmp_path)
    assert proc.returncode == 0
    lines = (tmp_path / "m.csv").read_text().splitlines()
    assert lines[0] == "id," + ",".join(str(i) for i in range(12))
    assert len(lines) == 13
    values = np.loadtxt(tmp_path / "m.csv", delimiter=",", skiprows=1)[:, 1:]
    assert values.shape == (12, 12)
    assert np.allclose(values, values.T)
    assert np.all(np.diag(values) == 0.0)


def test_n_docs_shifts_the_raw_layer_uniformly(tmp_path):
    for n_docs, name in ((8.0, "a.csv"), (9.0, "b.csv")):
        proc = run_cli(["cluster", str(GARCIA), "--n-docs", str(n_docs),
                        "--dump-matrix", name, "--matrix-layer", "raw"],
                       tmp_path)
        assert proc.returncode == 0
    low = np.loadtxt(tmp_path / "a.csv", delimiter=",", skiprows=1)[:, 1:]
    high = np.loadtxt(tmp_path / "b.csv", delimiter=",", skiprows=1)[:, 1:]
    assert np.allclose(high - low, 1.0, atol=5e-6)


def test_field_size_override_rejects_unknown_field(tmp_path):
    proc = run_cli(["cluster", str(GARCIA), "--field-size", "bogus=3"],
                   tmp_path)
    assert proc.returncode == 1
    assert "--field-size expects" in proc.stderr


def test_include_query_name_flag(tmp_path):
    proc = run_cli(["cluster", str(GARCIA), "--include-query-name"], tmp_path)
    assert proc.returncode == 0
    assert proc.stdout.startswith("Found     12 papers in")


# -- bench -----------------------------------------------------------------------

def test_bench_writes_artifacts_and_metrics(tmp_path):
    proc = run_cli(["bench", "--authors", "4", "--papers", "8", "12",
                    "--seed", "5", "--out", "benchdir"], tmp_path)
    assert proc.returncode == 0
    assert "purity = 1.0" in proc.stdout
    assert "false_positive_pairs = 0" in proc.stdout
    out_dir = tmp_path / "benchdir"
    header, row = (out_dir / "metrics.csv").read_text().splitlines()
    metrics = dict(zip(header.split(","), row.split(",")))
    assert metrics["purity"] == "1.0"
    assert metrics["n_authors"] == "4"
    corpus = parse_export_file(out_dir / "corpus.tsv", fmt="tsv",
                               query_name="Garcia, M")
    truth_rows = (out_dir / "truth.csv").read_text().splitlines()
    assert truth_rows[0] == "record_id,author_id"
    assert len(truth_rows) == len(corpus.records) + 1


# -- error handling ----------------------------------------------------------------

def test_missing_file_exits_2(tmp_path):
    proc = run_cli(["cluster", "no_such_file.txt"], tmp_path)
    assert proc.returncode == 2
    assert proc.stderr.startswith("namesieve:")


def test_malformed_file_exits_2(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("FN Export\nVR 1.0\nPT J\nTC not_a_number\nER\nEF\n")
    proc = run_cli(["cluster", str(bad)], tmp_path)
    assert proc.returncode == 2
    assert "namesieve:" in proc.stderr
