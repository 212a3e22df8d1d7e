"""Full multi-cycle run on a synthetic pool: BAL vs random selection.

Prints the searched balancing factor, the per-cycle accuracy traces, and the
class balance of each cycle's selections.
"""

import numpy as np

from bal import RunConfig, run_bal, run_baseline_random, synth_generate
from bal.harness import compare_runs, subpool_class_balance

pool = synth_generate(classes=10, per_class=200, dim=16, seed=0)
config = RunConfig(cycles=8, budget_per_cycle=50, n_clusters=10, beta="auto",
                   seed=0)

bal_run = run_bal(config, pool)
rand_run = run_baseline_random(RunConfig(cycles=8, budget_per_cycle=50,
                                         n_clusters=10, seed=0), pool)

print(f"chosen beta: {bal_run.beta}")
print("candidates:", dict(zip(bal_run.beta_report.candidates,
                              np.round(bal_run.beta_report.accuracies, 3))))
print("\ncycle  labeled  bal_acc  rand_acc  bal_balance")
balances = subpool_class_balance(bal_run, pool)
for row, balance in zip(compare_runs(bal_run, rand_run), balances):
    labeled = row["cycle"] * 50
    print(f"{row['cycle']:5d}  {labeled:7d}  {row['accuracy_a']:.4f}   "
          f"{row['accuracy_b']:.4f}    {balance:.3f}")
print(f"\nfinal: bal={bal_run.accuracy_trace[-1]:.4f} "
      f"random={rand_run.accuracy_trace[-1]:.4f}")
