"""
Testbench replay: drive the controller emulator with the program words and
outcomes of a trace file and check that it reproduces the recorded s, b and
sb columns.
"""
import sys
from pathlib import Path

# Add repository root to Python path (4 levels up from scripts/python/simulation/)
REPO_ROOT = Path(__file__).resolve().parent.parent.parent.parent
sys.path.insert(0, str(REPO_ROOT))

import argparse

import pandas as pd

from utils.controller import replay_trace
from utils.exceptions import EXIT_FAILED, EXIT_OK, MBQCError, exit_code
from utils.trace import load_trace


def cmd_replay(trace_file, report_output=None, strict=False):
    """
    Returns:
        list of Mismatch
    """
    print("=" * 80)
    print("TRACE REPLAY")
    print("=" * 80)
    header, records = load_trace(trace_file)
    print(f"Trace: {trace_file}")
    print(f"  Rows: {header.n_qubits}  Rounds: {header.rounds}  Seed: {header.seed}")

    mismatches = replay_trace(records, strict=strict)
    if report_output:
        Path(report_output).parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(mismatches, columns=["round", "row", "field", "expected", "got"]).to_csv(
            report_output, sep='\t', index=False
        )
    if mismatches:
        print(f"✗ {len(mismatches)} mismatch(es)")
        for mm in mismatches[:20]:
            print(f"  round {mm.round} row {mm.row} {mm.field}: expected {mm.expected}, got {mm.got}")
    else:
        print(f"✓ All {len(records)} records reproduced")
    return mismatches


def main(argv=None):
    parser = argparse.ArgumentParser(description='Replay a trace against the controller emulator')
    parser.add_argument('--input', required=True, help='Trace file (TSV)')
    parser.add_argument('--report', default=None, help='Write mismatches to this TSV')
    parser.add_argument('--strict', action='store_true', help='Treat controller protocol slips as errors')
    args = parser.parse_args(argv)

    try:
        mismatches = cmd_replay(args.input, args.report, args.strict)
    except (MBQCError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return exit_code(e)
    return EXIT_FAILED if mismatches else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
