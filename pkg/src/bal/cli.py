"""Command-line front end: composable pipeline stages over FMAT/JSON/CSV files.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import balancer, clustering, harness, orchestrator, samplers, taskmodel
from .cdd import Direction, Metric, SortedPool, sort_pool
from .featio import (FeatureMatrix, FormatError, read_csv, read_fmat,
                     read_manifest, write_fmat)
from .pool import make_subpool, window_bounds


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _seed(args):
    env = os.environ.get("BAL_SEED")
    return int(env) if env is not None else args.seed


def _load_features(path):
    if str(path).endswith(".csv"):
        return read_csv(path, has_label_column=True)
    return read_fmat(path)


def cmd_synth(args):
    m = harness.synth_generate(classes=args.classes, per_class=args.per_class,
                               dim=args.dim, spread=args.spread, sep=args.sep,
                               seed=_seed(args))
    write_fmat(m, args.out)
    print(f"wrote {m.n_rows}x{m.n_cols} features ({args.classes} classes) to {args.out}")


def cmd_cluster(args):
    m = _load_features(args.features)
    clus = clustering.kmeans_fit(m, k=args.k, seed=_seed(args),
                                 max_iter=args.max_iter, tol=args.tol)
    with open(args.out, "w") as f:
        json.dump(clus.to_dict(), f)
        f.write("\n")
    print(f"k={args.k} inertia={clus.inertia:.6g} iterations={clus.iterations}")


def cmd_cdd(args):
    m = _load_features(args.features)
    with open(args.clustering) as f:
        centroids = np.asarray(json.load(f)["centroids"])
    sp = sort_pool(m, centroids, Metric(args.metric), Direction(args.direction))
    out = args.out if args.out else None
    f = open(out, "w") if out else sys.stdout
    try:
        f.write("row_index,score,rank\n")
        rank_of = np.empty(sp.n, dtype=np.int64)
        rank_of[sp.order] = np.arange(sp.n)
        for row in range(sp.n):
            f.write(f"{row},{sp.scores[row]:.10g},{rank_of[row]}\n")
    finally:
        if out:
            f.close()


def cmd_subpool(args):
    start, end = window_bounds(args.n, args.cycle, args.cycles, args.beta)
    print(f"[{start}, {end})")


def _pool_from_scores_csv(path):
    rows, scores, ranks = [], [], []
    with open(path) as f:
        reader = csv.DictReader(f)
        for rec in reader:
            rows.append(int(rec["row_index"]))
            scores.append(float(rec["score"]))
            ranks.append(int(rec["rank"]))
    n = len(rows)
    order = np.empty(n, dtype=np.int64)
    score_arr = np.empty(n)
    for row, score, rank in zip(rows, scores, ranks):
        order[rank] = row
        score_arr[row] = score
    return SortedPool(order=order, scores=score_arr, metric=Metric.CDD,
                      direction=Direction.ASCENDING)


def cmd_select(args):
    sp = _pool_from_scores_csv(args.scores)
    labeled = set()
    if args.labeled:
        with open(args.labeled) as f:
            labeled = {int(line) for line in f if line.strip()}
    if args.cycle == 1:
        sel = samplers.select_first_cycle(sp, args.k)
        for i in sel:
            print(int(i))
        return
    subpool = make_subpool(sp, args.cycle, args.cycles, args.beta, labeled=labeled)
    seed = _seed(args)
    if args.sampler in ("confidence", "entropy"):
        probs = read_fmat(args.probs).data.astype(np.float64)[subpool.members]
        if args.sampler == "confidence":
            sel, _ = samplers.select_confidence(subpool, probs, args.k)
        else:
            sel, _ = samplers.select_entropy(subpool, probs, args.k)
    elif args.sampler == "cluster":
        m = _load_features(args.features)
        sel, _ = samplers.select_cluster(subpool, m.data, args.k, seed=seed)
    else:
        sel, _ = samplers.select_random(subpool, args.k, seed=seed)
    for i in sel:
        print(int(i))


def _run_config(args):
    with open(args.config) as f:
        raw = json.load(f)
    if args.beta is not None:
        raw["beta"] = args.beta
    if args.seed is not None:
        raw["seed"] = args.seed
    if os.environ.get("BAL_SEED") is not None:
        raw["seed"] = int(os.environ["BAL_SEED"])
    return orchestrator.RunConfig(**raw)


def cmd_run(args):
    config = _run_config(args)
    m = _load_features(args.features)
    run = orchestrator.run_bal(config, m, out_dir=args.out)
    print(f"beta={run.beta} final_accuracy={run.accuracy_trace[-1]:.4f} "
          f"labeled={len(run.label_state.labeled)}")


def cmd_baseline(args):
    config = _run_config(args)
    m = _load_features(args.features)
    run = orchestrator.run_baseline_random(config, m, out_dir=args.out)
    print(f"final_accuracy={run.accuracy_trace[-1]:.4f} "
          f"labeled={len(run.label_state.labeled)}")


def cmd_balance(args):
    m = _load_features(args.features)
    manifests = read_manifest(os.path.join(args.run_dir, "manifests.jsonl"))

    class _Shim:
        pass

    shim = _Shim()
    shim.manifests = manifests
    balances = harness.subpool_class_balance(shim, m)
    out_path = args.out or os.path.join(args.run_dir, "balance.csv")
    with open(out_path, "w") as f:
        f.write("cycle,balance\n")
        for man, b in zip(manifests, balances):
            f.write(f"{man.cycle},{b:.10f}\n")
    print(f"mean_balance={np.mean(balances):.4f} -> {out_path}")


def _read_trace(run_dir):
    path = os.path.join(run_dir, "trace.csv")
    out = []
    with open(path) as f:
        for rec in csv.DictReader(f):
            out.append((int(rec["cycle"]), int(rec["labeled_count"]),
                        float(rec["accuracy"])))
    return out


def cmd_compare(args):
    ta, tb = _read_trace(args.run_a), _read_trace(args.run_b)
    if [r[:2] for r in ta] != [r[:2] for r in tb]:
        raise FormatError("run directories have mismatched labeling grids")
    f = open(args.out, "w") if args.out else sys.stdout
    try:
        f.write("cycle,accuracy_a,accuracy_b,delta\n")
        for (c, _, xa), (_, _, xb) in zip(ta, tb):
            f.write(f"{c},{xa:.10f},{xb:.10f},{xa - xb:.10f}\n")
    finally:
        if args.out:
            f.close()


def build_parser():
    p = _Parser(prog="bal", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic Gaussian-blob pool")
    s.add_argument("--classes", type=int, default=10)
    s.add_argument("--per-class", type=int, default=200)
    s.add_argument("--dim", type=int, default=16)
    s.add_argument("--spread", type=float, default=1.0)
    s.add_argument("--sep", type=float, default=4.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("cluster", help="fit k-means and emit JSON")
    s.add_argument("--features", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iter", type=int, default=300)
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("cdd", help="emit per-row score/rank CSV")
    s.add_argument("--features", required=True)
    s.add_argument("--clustering", required=True)
    s.add_argument("--metric", choices=[m.value for m in Metric], default="cdd")
    s.add_argument("--direction", choices=[d.value for d in Direction],
                   default="ascending")
    s.add_argument("--out")
    s.set_defaults(func=cmd_cdd)

    s = sub.add_parser("subpool", help="print the window for (N, I, beta, i)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--cycles", type=int, required=True)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--cycle", type=int, required=True)
    s.set_defaults(func=cmd_subpool)

    s = sub.add_parser("select", help="one sampler step from files")
    s.add_argument("--scores", required=True, help="CSV from the cdd command")
    s.add_argument("--sampler", choices=samplers.SAMPLERS, default="confidence")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--cycle", type=int, required=True)
    s.add_argument("--cycles", type=int, required=True)
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--probs", help="FMAT of posteriors (confidence/entropy)")
    s.add_argument("--features", help="FMAT of features (cluster sampler)")
    s.add_argument("--labeled", help="file of already-labeled row indices")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_select)

    for name, fn in (("run", cmd_run), ("baseline", cmd_baseline)):
        s = sub.add_parser(name, help=f"{name} loop from a config file")
        s.add_argument("--config", required=True)
        s.add_argument("--features", required=True)
        s.add_argument("--out", required=True)
        s.add_argument("--beta")
        s.add_argument("--seed", type=int)
        s.set_defaults(func=fn)

    s = sub.add_parser("balance", help="per-cycle class balance of a run")
    s.add_argument("--run-dir", required=True)
    s.add_argument("--features", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_balance)

    s = sub.add_parser("compare", help="accuracy deltas between two run dirs")
    s.add_argument("--run-a", required=True)
    s.add_argument("--run-b", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    try:
        args.func(args)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
