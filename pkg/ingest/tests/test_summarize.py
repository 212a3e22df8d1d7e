import csv
import json

import pytest

from bal_ingest.summarize import SummaryError, summarize_run


def make_run_dir(tmp_path, with_balance=False, with_beta=False):
    (tmp_path / "trace.csv").write_text(
        "cycle,labeled_count,lambda,accuracy\n"
        "1,5,0.000000,0.6000000000\n"
        "2,10,0.800000,0.7500000000\n")
    lines = [
        {"cycle": 1, "beta": 0.0, "subpool_start": 0, "subpool_end": 20,
         "selected": [0, 1, 2, 3, 4], "scores": [0.1] * 5},
        {"cycle": 2, "beta": 0.8, "subpool_start": 2, "subpool_end": 10,
         "selected": [5, 6, 7, 8, 9], "scores": [0.2] * 5},
    ]
    (tmp_path / "manifests.jsonl").write_text(
        "".join(json.dumps(d) + "\n" for d in lines))
    if with_balance:
        (tmp_path / "balance.csv").write_text(
            "cycle,balance\n1,0.91\n2,0.85\n")
    if with_beta:
        (tmp_path / "beta_report.json").write_text(json.dumps(
            {"candidates": [0.6, 0.8], "accuracies": [0.7, 0.75],
             "chosen": 0.8}))
    return tmp_path


def test_basic_merge(tmp_path):
    make_run_dir(tmp_path)
    out = tmp_path / "summary.csv"
    n = summarize_run(tmp_path, out)
    assert n == 2
    rows = list(csv.DictReader(out.open()))
    assert [r["cycle"] for r in rows] == ["1", "2"]
    assert rows[0]["selected"] == "5"
    assert rows[1]["subpool_start"] == "2"
    assert rows[1]["accuracy"] == "0.7500000000"
    assert "balance" not in rows[0]


def test_optional_columns(tmp_path):
    make_run_dir(tmp_path, with_balance=True, with_beta=True)
    out = tmp_path / "summary.csv"
    summarize_run(tmp_path, out)
    rows = list(csv.DictReader(out.open()))
    assert rows[0]["balance"] == "0.91"
    assert rows[0]["chosen_beta"] == "0.8"


def test_missing_trace_names_file(tmp_path):
    make_run_dir(tmp_path)
    (tmp_path / "trace.csv").unlink()
    with pytest.raises(SummaryError, match="trace.csv"):
        summarize_run(tmp_path, tmp_path / "summary.csv")


def test_trace_cycle_missing_from_manifests(tmp_path):
    make_run_dir(tmp_path)
    (tmp_path / "manifests.jsonl").write_text("")
    with pytest.raises(SummaryError, match="cycle 1"):
        summarize_run(tmp_path, tmp_path / "summary.csv")
