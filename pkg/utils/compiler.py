"""
Circuit -> per-row program words, angle tables and link schedule.

Placement rules for a pattern starting at absolute round t0:
  - B masks of local round k go in word t0 + k (they process measurement k)
  - A masks producing s for local round k go in word t0 + k - 1, since s is
    registered one round ahead of the measurement that uses it
  - the pre-gate action (store for U, commutation for CNOT) goes in word
    t0 - 1 of each row the gate occupies; nothing is emitted when t0 = 0
  - pattern constants go in the C field of their own round
"""
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import pandas as pd

from utils import controller as ctl
from utils.exceptions import CircuitError, ParseError
from utils.patterns import (
    PRE_GATE_COMMUTE,
    PRE_GATE_STORE,
    Cnot,
    Identity,
    pattern_for,
    pattern_length,
)
from utils.trace import TraceRecord, write_trace


class Placement(NamedTuple):
    gate: object
    start: int


@dataclass(frozen=True)
class Layout:
    n_rows: int
    total_rounds: int
    placements: tuple


def layout(circuit):
    """
    Schedule every layer and pad short rows with identity wires so that all
    rows of a layer finish together.

    Returns:
        Layout whose placements cover every (row, round) exactly once
    """
    placements = []
    t = 0
    for index, layer in enumerate(circuit.layers):
        if not layer:
            continue
        length = max(pattern_length(g) for g in layer)
        busy = set()
        for gate in layer:
            placements.append(Placement(gate, t))
            busy.update(gate.rows)
            residue = length - pattern_length(gate)
            if residue == 0:
                continue
            if residue % 2:
                raise CircuitError(f"layer {index + 1}: cannot pad {gate!r} by an odd {residue} rounds")
            for row in gate.rows:
                placements.append(Placement(Identity(row, residue), t + pattern_length(gate)))
        for row in range(circuit.n_rows):
            if row not in busy:
                placements.append(Placement(Identity(row, length), t))
        t += length
    placements.sort(key=lambda p: (p.start, min(p.gate.rows)))
    return Layout(circuit.n_rows, t, tuple(placements))


@dataclass(frozen=True)
class ProgramImage:
    """
    Compiled program. All per-row tables are indexed [row][round].

    When `readout` is set the last round is the output column, measured in
    the computational basis (basis_select 0) with an all-zero word.
    """
    n_rows: int
    total_rounds: int
    words: tuple
    theta: tuple
    basis_select: tuple
    vertical_links: tuple = ()
    readout: bool = False

    @property
    def logical_rounds(self):
        return self.total_rounds - 1 if self.readout else self.total_rounds

    def links_at(self, round_index):
        return [upper for k, upper in self.vertical_links if k == round_index]

    def word_column(self, round_index):
        return [self.words[r][round_index] for r in range(self.n_rows)]

    def hex_words(self, row):
        return [f"{w:04x}" for w in self.words[row]]


def _neighbour_bit(row, source_row):
    offset = source_row - row
    if offset == 0:
        return ctl.CURRENT
    if offset == -1:
        return ctl.ABOVE
    if offset == 1:
        return ctl.BELOW
    raise CircuitError(f"row {row} cannot read the measurement of non-adjacent row {source_row}")


class _WordBuilder:
    """Accumulates program-word fields per (row, round)."""

    def __init__(self, n_rows, n_rounds):
        self.fields = [[dict(c=0, a_b=0, a_m=0, b_x=0, b_z=0) for _ in range(n_rounds)]
                       for _ in range(n_rows)]

    def add(self, row, round_index, name, bits):
        self.fields[row][round_index][name] |= bits

    def build(self):
        words = []
        for row, per_round in enumerate(self.fields):
            row_words = []
            for k, f in enumerate(per_round):
                if f["c"] & ctl.C_COMMUTE and f["c"] & ctl.C_CONSTANTS:
                    raise CircuitError(f"row {row}, round {k}: commutation and constants in one word")
                row_words.append(ctl.encode(ctl.ProgramWord(**f)))
            words.append(tuple(row_words))
        return tuple(words)


def compile_circuit(circuit, readout=False):
    """
    Compile a circuit into a ProgramImage.

    Args:
        circuit: Circuit (padded internally by `layout`)
        readout: append the computational-basis output round
    """
    plan = layout(circuit)
    n_rows = plan.n_rows
    rounds = plan.total_rounds + (1 if readout else 0)
    builder = _WordBuilder(n_rows, rounds)
    theta = [[0.0] * rounds for _ in range(n_rows)]
    basis = [[1] * rounds for _ in range(n_rows)]
    links = set()

    for placement in plan.placements:
        gate, t0 = placement
        pattern = pattern_for(gate)
        rows = gate.rows
        for local_row, row in enumerate(rows):
            for k in range(pattern.length):
                t = t0 + k
                theta[row][t] = float(pattern.theta[local_row][k])
                basis[row][t] = int(pattern.basis_select[local_row][k])
                for src in pattern.x_sources[local_row][k]:
                    builder.add(row, t, "b_x", _neighbour_bit(row, rows[src]))
                for src in pattern.z_sources[local_row][k]:
                    builder.add(row, t, "b_z", _neighbour_bit(row, rows[src]))

                rule = pattern.adaptive[local_row][k]
                if not rule.empty:
                    if k == 0:
                        raise CircuitError(f"{pattern.name}: s of its first round would come from a previous gate")
                    for j in rule.rounds:
                        builder.add(row, t - 1, "a_m", ctl.a_m_bit(k - 1 - j))
                    if rule.stored_x:
                        builder.add(row, t - 1, "a_b", ctl.A_B_X)
                    if rule.stored_z:
                        builder.add(row, t - 1, "a_b", ctl.A_B_Z)

                cx, cz = pattern.constants.get((local_row, k), (0, 0))
                if cx or cz:
                    c = ctl.C_CONSTANTS
                    if cz:
                        c |= ctl.C_CONTROL
                    if cx:
                        c |= ctl.C_PARTNER_ABOVE
                    builder.add(row, t, "c", c)

        for k, _ in pattern.vertical_links:
            links.add((t0 + k, min(rows)))

        if t0 == 0 or pattern.pre_gate is None:
            continue
        if pattern.pre_gate == PRE_GATE_STORE:
            for row in rows:
                builder.add(row, t0 - 1, "c", ctl.C_STORE)
        elif pattern.pre_gate == PRE_GATE_COMMUTE:
            for row in rows:
                partner = gate.target if row == gate.control else gate.control
                c = ctl.C_COMMUTE
                if isinstance(gate, Cnot) and row == gate.control:
                    c |= ctl.C_CONTROL
                if partner == row - 1:
                    c |= ctl.C_PARTNER_ABOVE
                builder.add(row, t0 - 1, "c", c)

    if readout:
        for row in range(n_rows):
            basis[row][rounds - 1] = 0

    return ProgramImage(
        n_rows=n_rows,
        total_rounds=rounds,
        words=builder.build(),
        theta=tuple(tuple(r) for r in theta),
        basis_select=tuple(tuple(r) for r in basis),
        vertical_links=tuple(sorted(links)),
        readout=readout,
    )


# ----------------------------
# Output files
# ----------------------------

def emit_rom(image, path=None):
    """
    ROM text: a 'qubit <i>' header per row followed by one lowercase
    four-digit hex word per line.
    """
    lines = []
    for row in range(image.n_rows):
        lines.append(f"qubit {row}")
        lines.extend(image.hex_words(row))
    text = "\n".join(lines) + "\n"
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            path.write_text(text)
        except OSError as e:
            raise OSError(f"cannot write ROM to {path}: {e.strerror}") from e
    return text


def parse_rom(text, source=None):
    """Inverse of emit_rom: list of word lists, one per row."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("qubit"):
            parts = line.split()
            if len(parts) != 2 or parts[1] != str(len(rows)):
                raise ParseError(f"expected 'qubit {len(rows)}', got {line!r}", lineno, 1, source)
            rows.append([])
            continue
        if not rows:
            raise ParseError("word before the first 'qubit' header", lineno, 1, source)
        if len(line) != 4:
            raise ParseError(f"ROM words are four hex digits, got {line!r}", lineno, 1, source)
        try:
            rows[-1].append(int(line, 16))
        except ValueError:
            raise ParseError(f"not a hex word: {line!r}", lineno, 1, source) from None
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise ParseError(f"rows have different lengths {sorted(lengths)}", None, None, source)
    return rows


def stimulus_records(image, outcomes=None):
    """
    Trace records for an image driven by fixed outcomes (all zero by
    default), with s/b/sb taken from the controller emulator.
    """
    if outcomes is None:
        outcomes = [[0] * image.total_rounds for _ in range(image.n_rows)]
    result = ctl.replay(image.words, outcomes)
    records = []
    for k in range(image.total_rounds):
        for row in range(image.n_rows):
            records.append(TraceRecord(
                round=k,
                row=row,
                m=int(outcomes[row][k]),
                word=image.words[row][k],
                theta=image.theta[row][k],
                s=result.s[row][k],
                b=result.byproducts[row][k],
                sb=result.stored[row][k],
            ))
    return records


def emit_trace_stimulus(image, outcomes=None, path=None):
    """Trace text usable as hardware-testbench stimulus and expected output."""
    return write_trace(
        stimulus_records(image, outcomes),
        n_qubits=image.n_rows,
        seed=None,
        rounds=image.total_rounds,
        path=path,
    )


def theta_table(image):
    """Long-format table of word, angle and basis flag per round and row."""
    rows = [
        {
            "round": k,
            "row": row,
            "P": f"{image.words[row][k]:04x}",
            "theta": image.theta[row][k],
            "basis_select": image.basis_select[row][k],
            "vertical_link": int(row in image.links_at(k)),
        }
        for k in range(image.total_rounds)
        for row in range(image.n_rows)
    ]
    return pd.DataFrame(rows, columns=["round", "row", "P", "theta", "basis_select", "vertical_link"])
