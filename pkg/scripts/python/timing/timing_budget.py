"""
Photonic timing budget: delay-line length, analog budget and clock-phase
margins at one frequency, or a frequency sweep.

Usage:
    python scripts/python/timing/timing_budget.py --freq 150e6 --tlogic 5.08e-9
    python scripts/python/timing/timing_budget.py --preset kintex7 --tinternal 1.1e-9
    python scripts/python/timing/timing_budget.py --sweep
"""
import sys
from pathlib import Path

# Add repository root to Python path (4 levels up from scripts/python/timing/)
REPO_ROOT = Path(__file__).resolve().parent.parent.parent.parent
sys.path.insert(0, str(REPO_ROOT))

import argparse

import config
from utils.exceptions import EXIT_INFEASIBLE_TIMING, EXIT_OK, EXIT_USAGE, MBQCError, exit_code
from utils.timing import (
    PRESETS,
    ClockPlan,
    PhotonicParams,
    TimingBudget,
    frequency_sweep,
    timing_report,
)


def cmd_timing(freq=None, n_eff=config.MODE_INDEX, t_logic=None, phases=None,
               t_co=0.0, t_su=0.0, t_internal=0.0, preset=None, sweep=False,
               output=config.TIMING_OUTPUT):
    """
    Returns:
        DataFrame written to `output`; a report with any failing check
        means the plan is infeasible
    """
    print("=" * 80)
    print("TIMING BUDGET")
    print("=" * 80)
    params = PhotonicParams(n_eff=n_eff)

    if sweep:
        df = frequency_sweep(t_logic=config.T_LOGIC_150MHZ if t_logic is None else t_logic, params=params)
        print(f"Sweep {df['f_p_hz'].iloc[0] / 1e6:.0f}-{df['f_p_hz'].iloc[-1] / 1e6:.0f} MHz, "
              f"{len(df)} points")
    else:
        if preset:
            plan = PRESETS[preset]
            if freq is not None:
                plan = ClockPlan(freq, plan.phase_s, plan.phase_r)
        else:
            phase_s, phase_r = phases or (config.PHASE_S_DEG, config.PHASE_R_DEG)
            plan = ClockPlan(freq if freq is not None else config.PHOTON_CLOCK_HZ, phase_s, phase_r)
        budget = TimingBudget(t_co=t_co, t_su=t_su, t_internal=t_internal, t_logic=t_logic)
        print(f"f_p = {plan.f_p / 1e6:.3f} MHz, X_s at {plan.phase_s:.0f}°, X_r at {plan.phase_r:.0f}°")
        df = timing_report(plan, budget, params)
        for row in df.itertuples():
            mark = "✓" if row.passed else "✗"
            print(f"  {mark} {row.quantity:<34} {row.value:.6g}")

    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(output, sep='\t', index=False)
        print(f"✓ Report written to {output}")
    return df


def main(argv=None):
    parser = argparse.ArgumentParser(description='Photonic clock timing budget')
    parser.add_argument('--freq', type=float, default=None, help='Photonic clock frequency (Hz)')
    parser.add_argument('--neff', type=float, default=config.MODE_INDEX, help='Waveguide mode index')
    parser.add_argument('--tlogic', type=float, default=None, help='Digital logic delay per period (s)')
    parser.add_argument('--phases', type=float, nargs=2, metavar=('X_S', 'X_R'), default=None,
                        help='X_s and X_r phases (degrees)')
    parser.add_argument('--tco', type=float, default=0.0, help='Input clock-to-out (s)')
    parser.add_argument('--tsu', type=float, default=0.0, help='Output setup time (s)')
    parser.add_argument('--tinternal', type=float, default=0.0, help='Logic between X_s and X_r (s)')
    parser.add_argument('--preset', choices=sorted(PRESETS), default=None, help='Clock-plan preset')
    parser.add_argument('--sweep', action='store_true', help='Frequency sweep instead of one plan')
    parser.add_argument('--output', default=config.TIMING_OUTPUT, help='Report output (TSV)')
    args = parser.parse_args(argv)

    if args.freq is not None and not args.freq > 0:
        print(f"ERROR: --freq must be positive, got {args.freq}", file=sys.stderr)
        return EXIT_USAGE

    try:
        df = cmd_timing(args.freq, args.neff, args.tlogic, args.phases, args.tco, args.tsu,
                        args.tinternal, args.preset, args.sweep, args.output)
    except (MBQCError, ValueError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return exit_code(e)
    if not args.sweep and not df["passed"].all():
        return EXIT_INFEASIBLE_TIMING
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
