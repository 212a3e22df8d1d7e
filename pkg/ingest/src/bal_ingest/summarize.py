"""Flatten an engine run directory into one per-cycle CSV table."""

import csv
import json
import os


class SummaryError(ValueError):
    pass


def _read_trace(path):
    if not os.path.exists(path):
        raise SummaryError(f"missing file: {path}")
    with open(path) as f:
        return list(csv.DictReader(f))


def _read_manifests(path):
    if not os.path.exists(path):
        raise SummaryError(f"missing file: {path}")
    out = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                d = json.loads(line)
                out[int(d["cycle"])] = d
    return out


def _read_balance(path):
    if not os.path.exists(path):
        return {}
    with open(path) as f:
        return {int(r["cycle"]): r["balance"] for r in csv.DictReader(f)}


def summarize_run(run_dir, out_path):
    """Merge trace.csv, manifests.jsonl, and optional balance/beta files."""
    trace = _read_trace(os.path.join(run_dir, "trace.csv"))
    manifests = _read_manifests(os.path.join(run_dir, "manifests.jsonl"))
    balance = _read_balance(os.path.join(run_dir, "balance.csv"))

    chosen_beta = None
    report_path = os.path.join(run_dir, "beta_report.json")
    if os.path.exists(report_path):
        with open(report_path) as f:
            chosen_beta = json.load(f)["chosen"]

    fields = ["cycle", "labeled_count", "lambda", "accuracy", "selected",
              "subpool_start", "subpool_end"]
    if balance:
        fields.append("balance")
    if chosen_beta is not None:
        fields.append("chosen_beta")

    with open(out_path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fields)
        writer.writeheader()
        for rec in trace:
            cycle = int(rec["cycle"])
            man = manifests.get(cycle)
            if man is None:
                raise SummaryError(f"cycle {cycle} present in trace.csv but "
                                   "missing from manifests.jsonl")
            row = {"cycle": cycle, "labeled_count": rec["labeled_count"],
                   "lambda": rec["lambda"], "accuracy": rec["accuracy"],
                   "selected": len(man["selected"]),
                   "subpool_start": man["subpool_start"],
                   "subpool_end": man["subpool_end"]}
            if balance:
                row["balance"] = balance.get(cycle, "")
            if chosen_beta is not None:
                row["chosen_beta"] = chosen_beta
            writer.writerow(row)
    return len(trace)
