#!/usr/bin/env python3
"""Generate the budget and failure-rate sweep tables as CSV files."""

import os
import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from shallowscope.cli.tables import emit_csv
from shallowscope.experiments import budget_sweep, failure_rate_sweep
from shallowscope.qcore import random_pure_state


def main():
    import argparse

    parser = argparse.ArgumentParser(description='Generate shot-budget sweep tables')
    parser.add_argument('--output-dir', default='sweeps', help='Directory for the CSV files')
    parser.add_argument('--epsilon', type=float, default=0.2, help='Trace-distance precision')
    parser.add_argument('--delta', type=float, default=0.1, help='Failure probability')
    parser.add_argument('--failure-rate', action='store_true',
                        help='Also run the single-qubit failure-rate sweep (slow)')
    parser.add_argument('--trials', type=int, default=20, help='Runs per precision for --failure-rate')
    parser.add_argument('--seed', type=int, default=0)
    args = parser.parse_args()

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    table = budget_sweep("full", [1, 2, 3, 4], args.epsilon, args.delta)
    path = out / "budget_full.csv"
    path.write_text(emit_csv(table), encoding="utf-8")
    print(f"Budget table written to: {path}")
    for n, shots in zip(table.column("n"), table.column("shots")):
        print(f"  n={n}: {shots} shots")

    if args.failure_rate:
        state = random_pure_state(1, args.seed)
        epsilons = [0.5, 0.4, 0.3, 0.2]
        table = failure_rate_sweep(state, epsilons, args.delta, args.trials, seed=args.seed)
        path = out / "failure_rate.csv"
        path.write_text(emit_csv(table), encoding="utf-8")
        print(f"\nFailure-rate table written to: {path}")
        for eps, rate in zip(table.column("epsilon"), table.column("failure_rate")):
            print(f"  epsilon={eps}: failure rate {rate:.3f} (target <= {args.delta})")


if __name__ == "__main__":
    main()
