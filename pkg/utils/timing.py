"""
Closed-form timing budget of the photonic clock.

All quantities are SI: seconds, hertz, metres, degrees for clock phases.
Measured logic delays are inputs; nothing here models FPGA internals.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

import config
from utils.exceptions import InfeasibleTimingError


@dataclass(frozen=True)
class ClockPlan:
    """Photonic clock X_p at f_p; X_s and X_r rise at the given phases."""
    f_p: float
    phase_s: float = config.PHASE_S_DEG
    phase_r: float = config.PHASE_R_DEG

    def __post_init__(self):
        if self.f_p <= 0:
            raise ValueError(f"clock frequency must be positive, got {self.f_p}")
        for name in ("phase_s", "phase_r"):
            value = getattr(self, name)
            if not 0 <= value < 360:
                raise ValueError(f"{name} must lie in [0, 360), got {value}")

    @property
    def period(self):
        return 1.0 / self.f_p

    def phase_time(self, degrees):
        return degrees / 360.0 * self.period

    @property
    def internal_window(self):
        """Time from the X_s edge to the X_r edge."""
        return self.phase_time(self.phase_r - self.phase_s)


@dataclass(frozen=True)
class TimingBudget:
    """
    Args:
        t_co: input clock-to-out (detector edge to latched outcome)
        t_su: output setup (modulator settle before the next photon)
        t_internal: logic between X_s and X_r
        t_logic: total digital delay within one period; defaults to t_internal
    """
    t_co: float = 0.0
    t_su: float = 0.0
    t_internal: float = 0.0
    t_logic: float = None

    def __post_init__(self):
        for name in ("t_co", "t_su", "t_internal"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.t_logic is None:
            object.__setattr__(self, "t_logic", self.t_internal)
        elif self.t_logic < 0:
            raise ValueError(f"t_logic must be non-negative, got {self.t_logic}")


@dataclass(frozen=True)
class PhotonicParams:
    n_eff: float = config.MODE_INDEX
    c: float = config.SPEED_OF_LIGHT

    def __post_init__(self):
        if self.n_eff < 1:
            raise ValueError(f"mode index must be >= 1, got {self.n_eff}")


PRESETS = {
    "kintex7": ClockPlan(config.KINTEX7_FMAX_HZ, config.PHASE_S_DEG, config.PHASE_R_DEG),
    "ultrascale": ClockPlan(config.ULTRASCALE_FMAX_HZ, config.ULTRASCALE_PHASE_S_DEG,
                            config.ULTRASCALE_PHASE_R_DEG),
}


def _check_frequency(f_p):
    if not f_p > 0:
        raise ValueError(f"clock frequency must be positive, got {f_p}")


def delay_line_length(f_p, params=PhotonicParams()):
    """Waveguide length that delays a photon by one clock period: c / (n_eff f_p)."""
    _check_frequency(f_p)
    return params.c / (params.n_eff * f_p)


def analog_budget(f_p, t_logic):
    """Time left for analog input and output processing: 1/f_p - t_logic."""
    _check_frequency(f_p)
    period = 1.0 / f_p
    if t_logic >= period:
        raise InfeasibleTimingError(
            f"logic delay {t_logic * 1e9:.3f} ns fills the {period * 1e9:.3f} ns period"
        )
    return period - t_logic


def logic_fraction(f_p, t_logic):
    """Share of the photonic period spent in digital processing."""
    _check_frequency(f_p)
    return t_logic * f_p


class PhaseCheck(NamedTuple):
    name: str
    margin: float     # seconds; negative means violated
    passed: bool


def phase_legality(plan, budget, hold_margin=0.0):
    """
    Evaluate the clock-phase constraints.

    (a) input:    X_s waits for the latched outcome, phase_s T/360 >= t_co
    (b) internal: the X_s -> X_r window holds the logic, phase_r > phase_s
    (c) reset:    X_r rises before the next X_p edge with `hold_margin` to spare
    (d) analog:   t_co + t_su fits in the period minus the logic delay
    """
    period = plan.period
    a = plan.phase_time(plan.phase_s) - budget.t_co
    b = plan.internal_window - budget.t_internal
    c = period - plan.phase_time(plan.phase_r) - hold_margin
    d = (period - budget.t_logic) - (budget.t_co + budget.t_su)
    return [
        PhaseCheck("input_settle", a, a >= 0),
        PhaseCheck("internal_window", b, b >= 0 and plan.phase_r > plan.phase_s),
        PhaseCheck("reset_before_next_photon", c, c >= 0),
        PhaseCheck("analog_slack", d, d >= 0),
    ]


def pin_count(n_rows, serial_byproducts=False):
    """I/O pads: 4 per row plus 4 shared, or about 2 per row with serial byproduct output."""
    if n_rows < 1:
        raise ValueError(f"need at least one row, got {n_rows}")
    if serial_byproducts:
        return 2 * n_rows
    return 4 * n_rows + config.COMMON_PINS


def max_rows_for_pins(pin_budget=config.VIRTEX7_USER_IO, serial_byproducts=False):
    """Largest row count whose pin_count fits within `pin_budget`."""
    if serial_byproducts:
        return pin_budget // 2
    return max(0, (pin_budget - config.COMMON_PINS) // 4)


def frequency_sweep(f_lo=config.SWEEP_START_HZ, f_hi=config.SWEEP_STOP_HZ,
                    step=config.SWEEP_STEP_HZ, t_logic=config.T_LOGIC_150MHZ,
                    params=PhotonicParams()):
    """
    Period, delay-line length, analog budget and logic fraction per frequency.

    Frequencies where the logic fills the period get a negative budget and
    feasible = False rather than an exception.
    """
    _check_frequency(f_lo)
    if step <= 0 or f_hi < f_lo:
        raise ValueError(f"bad sweep {f_lo}..{f_hi} step {step}")
    rows = []
    for f in np.arange(f_lo, f_hi + step / 2, step):
        period = 1.0 / f
        rows.append({
            "f_p_hz": float(f),
            "period_s": period,
            "delay_line_m": delay_line_length(f, params),
            "analog_budget_s": period - t_logic,
            "logic_fraction": logic_fraction(f, t_logic),
            "feasible": t_logic < period,
        })
    return pd.DataFrame(rows)


def timing_report(plan, budget, params=PhotonicParams(), hold_margin=0.0):
    """
    Table of derived quantities and phase-check margins.

    A logic delay that fills the period shows up as a negative analog budget
    with passed = False; the margins are still reported.
    """
    analog = plan.period - budget.t_logic
    rows = [
        {"quantity": "f_p_hz", "value": plan.f_p, "passed": True},
        {"quantity": "period_s", "value": plan.period, "passed": True},
        {"quantity": "delay_line_m", "value": delay_line_length(plan.f_p, params), "passed": True},
        {"quantity": "analog_budget_s", "value": analog, "passed": analog > 0},
        {"quantity": "logic_fraction", "value": logic_fraction(plan.f_p, budget.t_logic), "passed": True},
        {"quantity": "internal_window_s", "value": plan.internal_window, "passed": True},
    ]
    for check in phase_legality(plan, budget, hold_margin):
        rows.append({"quantity": f"margin_{check.name}_s", "value": check.margin, "passed": check.passed})
    return pd.DataFrame(rows, columns=["quantity", "value", "passed"])
