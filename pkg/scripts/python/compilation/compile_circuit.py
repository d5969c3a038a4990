"""
Compile a circuit IR file into a program ROM and an angle table.

Usage:
    python scripts/python/compilation/compile_circuit.py --input data/golden/u_cnot_circuit.txt
"""
import sys
from pathlib import Path

# Add repository root to Python path (4 levels up from scripts/python/compilation/)
REPO_ROOT = Path(__file__).resolve().parent.parent.parent.parent
sys.path.insert(0, str(REPO_ROOT))

import argparse

import config
from utils.circuit import load_circuit
from utils.compiler import compile_circuit, emit_rom, emit_trace_stimulus, theta_table
from utils.exceptions import EXIT_OK, MBQCError, exit_code


def cmd_compile(circuit_file, rom_output=config.ROM_OUTPUT, theta_output=config.THETA_OUTPUT,
                stimulus_output=None, readout=False):
    """Compile and write the ROM, angle table and optional stimulus trace."""
    print("=" * 80)
    print("COMPILE CIRCUIT")
    print("=" * 80)
    print(f"Circuit: {circuit_file}")

    circuit = load_circuit(circuit_file)
    image = compile_circuit(circuit, readout=readout)
    print(f"  Rows: {image.n_rows}")
    print(f"  Layers: {len(circuit.layers)}")
    print(f"  Rounds: {image.total_rounds}")
    print(f"  Vertical links: {len(image.vertical_links)}")
    print()

    emit_rom(image, rom_output)
    print(f"✓ ROM written to {rom_output}")

    Path(theta_output).parent.mkdir(parents=True, exist_ok=True)
    theta_table(image).to_csv(theta_output, sep='\t', index=False)
    print(f"✓ Angle table written to {theta_output}")

    if stimulus_output:
        emit_trace_stimulus(image, path=stimulus_output)
        print(f"✓ Stimulus trace written to {stimulus_output}")
    return image


def main(argv=None):
    parser = argparse.ArgumentParser(description='Compile a circuit into per-row program words')
    parser.add_argument('--input', required=True, help='Circuit IR file')
    parser.add_argument('--rom', default=config.ROM_OUTPUT, help='ROM output file')
    parser.add_argument('--theta', default=config.THETA_OUTPUT, help='Angle table output (TSV)')
    parser.add_argument('--stimulus', default=None,
                        help='Also write an all-zero-outcome stimulus trace to this file')
    parser.add_argument('--readout', action='store_true',
                        help='Append the computational-basis output round')
    args = parser.parse_args(argv)

    try:
        cmd_compile(args.input, args.rom, args.theta, args.stimulus, args.readout)
    except (MBQCError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return exit_code(e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
