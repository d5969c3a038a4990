"""
Stream a compiled circuit through the cluster-state simulator, write the
trace and compare the corrected output with the gate model.

Usage:
    python scripts/python/simulation/simulate.py --input data/golden/u_cnot_circuit.txt \
        --forced-outcomes data/golden/u_cnot_outcomes.tsv
"""
import sys
from pathlib import Path

# Add repository root to Python path (4 levels up from scripts/python/simulation/)
REPO_ROOT = Path(__file__).resolve().parent.parent.parent.parent
sys.path.insert(0, str(REPO_ROOT))

import argparse

import config
from utils.circuit import load_circuit
from utils.exceptions import EXIT_FAILED, EXIT_OK, MBQCError, exit_code
from utils.simulator import simulate
from utils.trace import load_outcomes, write_trace


def cmd_simulate(circuit_file, seed=config.RANDOM_SEED, forced_file=None,
                 trace_output=config.TRACE_OUTPUT, readout=False, strict=False, log_file=None):
    """
    Returns:
        RunResult with reference state and fidelity filled in
    """
    print("=" * 80)
    print("CLUSTER-STATE SIMULATION")
    print("=" * 80)
    print(f"Circuit: {circuit_file}")
    print(f"Seed: {seed}")

    circuit = load_circuit(circuit_file)
    forced = None
    if forced_file:
        forced = load_outcomes(forced_file)
        print(f"Forced outcomes: {forced_file}")
    print()

    result = simulate(circuit, seed=seed, forced_outcomes=forced, readout=readout, strict=strict)
    write_trace(result.trace, n_qubits=circuit.n_rows, seed=seed, path=trace_output)
    print(f"✓ Trace written to {trace_output} ({len(result.trace)} records)")

    print("Final byproducts (x, z):")
    for row, b in enumerate(result.byproducts):
        print(f"  row {row}: ({b.x}, {b.z})")
    if result.corrected_bits is not None:
        print(f"Raw readout:       {''.join(map(str, result.raw_readout))}")
        print(f"Corrected readout: {''.join(map(str, result.corrected_bits))}")

    print(f"fidelity={result.fidelity:.12f}")
    if not result.passed and log_file:
        with open(log_file, 'a') as f:
            f.write(f"{circuit_file} seed {seed}: fidelity {result.fidelity:.12f}\n")
    return result


def main(argv=None):
    parser = argparse.ArgumentParser(description='Simulate a circuit on a streamed cluster state')
    parser.add_argument('--input', required=True, help='Circuit IR file')
    parser.add_argument('--seed', type=int, default=config.RANDOM_SEED, help='Outcome RNG seed')
    parser.add_argument('--forced-outcomes', default=None,
                        help='TSV of outcomes to post-select instead of drawing')
    parser.add_argument('--output', default=config.TRACE_OUTPUT, help='Trace output (TSV)')
    parser.add_argument('--readout', action='store_true',
                        help='Measure the output column in Z and report corrected bits')
    parser.add_argument('--strict', action='store_true', help='Treat controller protocol slips as errors')
    parser.add_argument('--log-file', default=None, help='Append failures to this file')
    args = parser.parse_args(argv)

    try:
        result = cmd_simulate(args.input, args.seed, args.forced_outcomes, args.output,
                              args.readout, args.strict, args.log_file)
    except (MBQCError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return exit_code(e)
    return EXIT_OK if result.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
