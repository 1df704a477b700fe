"""Two-cluster sweep: how often the merged sub-solutions are already optimal.

Runs the clustered trials and, with the same trial seeds, the uniform
reassignment baseline at the same total size.
"""

import argparse
from pathlib import Path

from bapkit.experiments import case1_trials, case2_trials, records_csv, summarize, summary_csv
from bapkit.instances import CASE2_CENTERS, CASE2_VARIANCE


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", default="2,4,6,8,10,12,14,16,18,20")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--variance", type=float, default=CASE2_VARIANCE)
    ap.add_argument("--out", default="results/case2")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    clustered, uniform = [], []
    print("   k  clustered  uniform")
    for k in (int(s) for s in args.ks.split(",")):
        c2 = case2_trials(k, args.trials, args.seed, CASE2_CENTERS, args.variance)
        c1 = case1_trials(2 * k, k, k, args.trials, args.seed)
        clustered += c2
        uniform += c1
        print(f"{k:4d}  {sum(r.merged_optimal for r in c2):9d}  {sum(r.merged_optimal for r in c1):7d}")
    (out / "clustered_trials.csv").write_text(records_csv(clustered))
    (out / "clustered_summary.csv").write_text(summary_csv(summarize(clustered)))
    (out / "uniform_trials.csv").write_text(records_csv(uniform))
    (out / "uniform_summary.csv").write_text(summary_csv(summarize(uniform)))
    print(f"wrote CSVs to {out}")


if __name__ == "__main__":
    main()
