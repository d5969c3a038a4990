"""
Stabilizer and branch checks of the two-row CNOT cluster.

Usage:
    python scripts/python/verification/verify_cnot.py                       # 256 sampled branches
    python scripts/python/verification/verify_cnot.py --branches sample 64  # 64 sampled branches
    python scripts/python/verification/verify_cnot.py --branches all        # all 4096
    python scripts/python/verification/verify_cnot.py --link-column 4       # negative control
"""
import sys
from pathlib import Path

# Add repository root to Python path (4 levels up from scripts/python/verification/)
REPO_ROOT = Path(__file__).resolve().parent.parent.parent.parent
sys.path.insert(0, str(REPO_ROOT))

import argparse

import numpy as np
import pandas as pd

import config
from utils import statevector as sv
from utils.exceptions import EXIT_FAILED, EXIT_OK, MBQCError, exit_code
from utils.verifier import (
    CNOT_LINK_COLUMN,
    check_correl_products,
    cnot_graph,
    enumerate_branches,
    link_column_sweep,
    stabilizer_expectations,
)


def branch_mode(tokens):
    """'all' -> None; 'sample N' or a bare N -> N."""
    if tokens == ["all"]:
        return None
    if len(tokens) == 2 and tokens[0] == "sample":
        tokens = tokens[1:]
    if len(tokens) != 1:
        raise argparse.ArgumentTypeError(f"expected 'all' or 'sample N', got {' '.join(tokens)!r}")
    try:
        value = int(tokens[0])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'all' or 'sample N', got {tokens[0]!r}") from None
    if not 1 <= value <= 4096:
        raise argparse.ArgumentTypeError(f"branch count must be 1..4096, got {value}")
    return value


def verification_inputs(seed, n_random=3):
    """|++>, |10> and a few random two-qubit states."""
    rng = np.random.default_rng(seed)
    inputs = [("|++>", sv.new_plus_state(2)), ("|10>", sv.basis_state([1, 0]))]
    for i in range(n_random):
        inputs.append((f"random_{i}", sv.random_state(2, rng)))
    return inputs


def cmd_verify_cnot(branches=config.BRANCH_SAMPLE, link_column=CNOT_LINK_COLUMN,
                    seed=config.RANDOM_SEED, output=config.VERIFY_OUTPUT, log_file=None):
    """
    Returns:
        True if every equation and every evaluated branch passes
    """
    print("=" * 80)
    print("CNOT CLUSTER VERIFICATION")
    print("=" * 80)
    graph = cnot_graph(link_column)
    print(f"Vertical edge at column {link_column}")
    print()

    log = open(log_file, 'a') if log_file else None
    try:
        stabilizers = stabilizer_expectations(graph)
        bad = {v: e for v, e in stabilizers.items() if abs(e - 1.0) > config.EIGEN_TOL}
        print(f"Correlation operators with <K> = 1: {len(stabilizers) - len(bad)}/{len(stabilizers)}")

        equations = check_correl_products(graph)
        print("\nProduct equations:")
        for row in equations.itertuples():
            mark = "✓" if row.passed else "✗"
            print(f"  {mark} {row.equation}: {row.product}  (expected {row.target}, <.> = {row.expectation:+.6f})")
            if not row.passed and log:
                log.write(f"{row.equation}: got {row.product}, expected {row.target}\n")

        sweep = link_column_sweep()
        valid = [int(c) for c in sweep.loc[sweep["all_passed"], "link_column"]]
        print(f"\nLink columns satisfying all four equations: {valid}")

        print(f"\nBranches: {'all 4096' if branches is None else branches}")
        summaries = []
        for name, state in verification_inputs(seed):
            df, summary = enumerate_branches(state, branches=branches, graph=graph, seed=seed, progress=True)
            summary["input"] = name
            summaries.append(summary)
            mark = "✓" if summary["passed"] == summary["evaluated"] else "✗"
            print(f"  {mark} {name}: {summary['passed']}/{summary['evaluated']} passed, "
                  f"{summary['skipped']} skipped, min fidelity {summary['min_fidelity']:.12f}")
            if log:
                for row in df[~df["passed"]].itertuples():
                    log.write(f"{name} branch {row.m}: fidelity {row.fidelity:.12f}, "
                              f"byproducts that fit: {row.matching or 'none'}\n")
    finally:
        if log:
            log.close()

    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        branch_df = pd.DataFrame(summaries)[["input", "evaluated", "skipped", "passed",
                                             "probability_sum", "min_fidelity"]]
        with open(output, 'w') as f:
            equations.to_csv(f, sep='\t', index=False, lineterminator='\n')
            f.write('\n')
            branch_df.to_csv(f, sep='\t', index=False, lineterminator='\n')
        print(f"\n✓ Report written to {output}")

    passed = (
        not bad
        and bool(equations["passed"].all())
        and all(s["passed"] == s["evaluated"] for s in summaries)
    )
    print()
    print("✓ CNOT pattern verified" if passed else "✗ Verification failed")
    return passed


def main(argv=None):
    parser = argparse.ArgumentParser(description='Verify the CNOT cluster pattern')
    parser.add_argument('--branches', nargs='+', default=["sample", str(config.BRANCH_SAMPLE)],
                        metavar='MODE',
                        help=f"'all' or 'sample N' (default: sample {config.BRANCH_SAMPLE})")
    parser.add_argument('--link-column', type=int, default=CNOT_LINK_COLUMN,
                        help='Column of the vertical edge (anything but 3 is a negative control)')
    parser.add_argument('--seed', type=int, default=config.RANDOM_SEED, help='Sampling / input seed')
    parser.add_argument('--output', default=config.VERIFY_OUTPUT, help='Report output (TSV)')
    parser.add_argument('--log-file', default=None, help='Append failures to this file')
    args = parser.parse_args(argv)
    try:
        branches = branch_mode(args.branches)
    except argparse.ArgumentTypeError as e:
        parser.error(str(e))

    try:
        passed = cmd_verify_cnot(branches, args.link_column, args.seed, args.output, args.log_file)
    except (MBQCError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return exit_code(e)
    return EXIT_OK if passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
