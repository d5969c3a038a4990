"""
Equivalence suite: the golden circuit over many seeds, then a batch of random
circuits, each corrected output compared with the gate-model state.
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
from utils.metrics import summarize_fidelities
from utils.simulator import readout_report, verify_equivalence, verify_random_circuits


def cmd_verify_equivalence(circuit_file=config.GOLDEN_CIRCUIT_FILE, n_seeds=config.EQUIVALENCE_SEEDS,
                           n_random=config.RANDOM_CIRCUITS, seed=config.RANDOM_SEED,
                           workers=config.NUM_WORKERS, output=None, log_file=None, readout_shots=0):
    """
    Returns:
        True if every seed, every random circuit and (when `readout_shots` > 0)
        the readout statistics agree with the gate model
    """
    print("=" * 80)
    print("MBQC / GATE-MODEL EQUIVALENCE")
    print("=" * 80)

    log = open(log_file, 'a') if log_file else None
    try:
        circuit = load_circuit(circuit_file)
        print(f"Circuit: {circuit_file} over {n_seeds} seeds ({workers} workers)")
        report = verify_equivalence(circuit, range(seed, seed + n_seeds), workers=workers,
                                    progress=True, log_file=log)
        stats = summarize_fidelities(report.results["fidelity"], config.FIDELITY_TOL)
        print(f"  min fidelity {stats['min']:.12f}, failures {stats['failures']}")

        print()
        print(f"Random circuits: {n_random} (rows <= {config.RANDOM_CIRCUIT_MAX_ROWS}, "
              f"layers <= {config.RANDOM_CIRCUIT_MAX_LAYERS})")
        random_df = verify_random_circuits(n_random, seed=seed, progress=True, log_file=log)
        random_stats = summarize_fidelities(random_df["fidelity"], config.FIDELITY_TOL)
        print(f"  min fidelity {random_stats['min']:.12f}, failures {random_stats['failures']}")

        readout_ok = True
        if readout_shots:
            print()
            print(f"Readout: {readout_shots} shots of {circuit_file}")
            readout = readout_report(circuit, shots=readout_shots, seed=seed, progress=True)
            readout_ok = readout["passed"]
            print(f"  outcomes {readout['outcomes']}, TVD {readout['tvd']:.4f}, "
                  f"worst deviation {readout['max_sigma']:.2f} sigma")
            if not readout_ok and log:
                log.write(f"readout of {circuit_file}: worst deviation {readout['max_sigma']:.2f} sigma, "
                          f"TVD {readout['tvd']:.4f}\n")
    finally:
        if log:
            log.close()

    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        random_df.to_csv(output, sep='\t', index=False)
        print(f"✓ Random-circuit results written to {output}")

    passed = stats['failures'] == 0 and random_stats['failures'] == 0 and readout_ok
    print()
    print("✓ All runs agree with the gate model" if passed else "✗ Equivalence failures found")
    return passed


def main(argv=None):
    parser = argparse.ArgumentParser(description='Check streamed MBQC against the gate model')
    parser.add_argument('--input', default=config.GOLDEN_CIRCUIT_FILE, help='Circuit IR file')
    parser.add_argument('--seeds', type=int, default=config.EQUIVALENCE_SEEDS, help='Seeds for the circuit')
    parser.add_argument('--random', type=int, default=config.RANDOM_CIRCUITS, help='Random circuits to try')
    parser.add_argument('--seed', type=int, default=config.RANDOM_SEED, help='Base seed')
    parser.add_argument('--workers', type=int, default=config.NUM_WORKERS, help='Parallel workers')
    parser.add_argument('--output', default=None, help='Random-circuit results (TSV)')
    parser.add_argument('--log-file', default=None, help='Append failures to this file')
    parser.add_argument('--readout-shots', type=int, default=0,
                        help='Also compare this many corrected readouts with the Born rule')
    args = parser.parse_args(argv)

    try:
        passed = cmd_verify_equivalence(args.input, args.seeds, args.random, args.seed,
                                        args.workers, args.output, args.log_file, args.readout_shots)
    except (MBQCError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return exit_code(e)
    return EXIT_OK if passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
