"""
Circuits and their line-oriented text form.

    # comment
    qubits 2
    u 0 0.1 0.2 0.3
    id 1 4
    layer
    cnot 0 1

`qubits N` must come first. A `layer` line closes the current layer; gate
lines before the first `layer` line form the first layer. Rows a layer does
not mention are idle and get identity padding at layout time.
"""
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from utils.exceptions import CircuitError, ParseError
from utils.patterns import Cnot, Identity, OneQubit

_TOKEN = re.compile(r"\S+")


@dataclass
class Circuit:
    n_rows: int
    layers: list = field(default_factory=list)

    def __post_init__(self):
        if self.n_rows < 1:
            raise CircuitError(f"a circuit needs at least one row, got {self.n_rows}")
        for index, layer in enumerate(self.layers):
            check_layer(layer, self.n_rows, index)

    def add_layer(self, gates):
        gates = list(gates)
        check_layer(gates, self.n_rows, len(self.layers))
        self.layers.append(gates)
        return self

    @property
    def gates(self):
        return [g for layer in self.layers for g in layer]

    def is_empty(self):
        return not any(self.layers)


def check_layer(gates, n_rows, index=0):
    """Every row at most once, every row index in range."""
    used = {}
    for gate in gates:
        for row in gate.rows:
            if not 0 <= row < n_rows:
                raise CircuitError(f"layer {index + 1}: row {row} outside 0..{n_rows - 1}")
            if row in used:
                raise CircuitError(
                    f"layer {index + 1}: row {row} assigned to both {used[row]!r} and {gate!r}"
                )
            used[row] = gate


# ----------------------------
# Parsing
# ----------------------------

def _tokens(line):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _int(token, column, lineno, source, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno, column, source) from None


def _float(token, column, lineno, source, what):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"{what} must be a number, got {token!r}", lineno, column, source) from None
    if not np.isfinite(value):
        raise ParseError(f"{what} must be finite, got {token!r}", lineno, column, source)
    return value


_ARITY = {"u": 5, "cnot": 3, "id": 3, "layer": 1, "qubits": 2}


def parse_circuit(text, source=None):
    """
    Parse circuit IR text.

    Raises:
        ParseError: with the offending line and column
    """
    n_rows = None
    layers = []
    current = []
    saw_gate_or_layer = False

    def close_layer():
        nonlocal current
        layers.append(current)
        current = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        keyword, kcol = toks[0][0].lower(), toks[0][1]
        if keyword not in _ARITY:
            raise ParseError(f"unknown statement {toks[0][0]!r}", lineno, kcol, source)
        if len(toks) != _ARITY[keyword]:
            column = toks[_ARITY[keyword]][1] if len(toks) > _ARITY[keyword] else len(line.rstrip()) + 1
            raise ParseError(
                f"'{keyword}' takes {_ARITY[keyword] - 1} argument(s), got {len(toks) - 1}",
                lineno, column, source,
            )
        args = toks[1:]

        if keyword == "qubits":
            if n_rows is not None:
                raise ParseError("'qubits' given twice", lineno, kcol, source)
            if saw_gate_or_layer:
                raise ParseError("'qubits' must precede every gate", lineno, kcol, source)
            n_rows = _int(args[0][0], args[0][1], lineno, source, "qubit count")
            if n_rows < 1:
                raise ParseError(f"qubit count must be >= 1, got {n_rows}", lineno, args[0][1], source)
            continue

        if n_rows is None:
            raise ParseError("'qubits N' must come first", lineno, kcol, source)
        saw_gate_or_layer = True

        if keyword == "layer":
            if current or layers:
                close_layer()
            continue

        if keyword == "u":
            row = _int(args[0][0], args[0][1], lineno, source, "row")
            angles = [_float(t, c, lineno, source, name)
                      for (t, c), name in zip(args[1:], ("xi", "eta", "zeta"))]
            gate = OneQubit(row, *angles)
            row_cols = {row: args[0][1]}
        elif keyword == "cnot":
            control = _int(args[0][0], args[0][1], lineno, source, "control row")
            target = _int(args[1][0], args[1][1], lineno, source, "target row")
            try:
                gate = Cnot(control, target)
            except CircuitError as e:
                raise ParseError(str(e), lineno, args[1][1], source) from None
            row_cols = {control: args[0][1], target: args[1][1]}
        else:
            row = _int(args[0][0], args[0][1], lineno, source, "row")
            length = _int(args[1][0], args[1][1], lineno, source, "identity length")
            try:
                gate = Identity(row, length)
            except CircuitError as e:
                raise ParseError(str(e), lineno, args[1][1], source) from None
            row_cols = {row: args[0][1]}

        taken = {r for g in current for r in g.rows}
        for row, column in row_cols.items():
            if not 0 <= row < n_rows:
                raise ParseError(f"row {row} outside 0..{n_rows - 1}", lineno, column, source)
            if row in taken:
                raise ParseError(f"row {row} already used in this layer", lineno, column, source)
        current.append(gate)

    if n_rows is None:
        raise ParseError("missing 'qubits N' line", None, None, source)
    if current:
        close_layer()
    return Circuit(n_rows, [layer for layer in layers if layer])


def load_circuit(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read circuit file: {e.strerror}", source=path) from None
    return parse_circuit(text, source=path)


def format_circuit(circuit):
    """Circuit IR text; parse_circuit(format_circuit(c)) rebuilds c."""
    lines = [f"qubits {circuit.n_rows}"]
    for index, layer in enumerate(circuit.layers):
        if index:
            lines.append("layer")
        for gate in layer:
            if isinstance(gate, OneQubit):
                lines.append(f"u {gate.row} {gate.xi!r} {gate.eta!r} {gate.zeta!r}")
            elif isinstance(gate, Cnot):
                lines.append(f"cnot {gate.control} {gate.target}")
            else:
                lines.append(f"id {gate.row} {gate.length}")
    return "\n".join(lines) + "\n"


# ----------------------------
# Random circuits
# ----------------------------

def random_angle(rng):
    """Uniform in (-pi, pi]."""
    return float(-rng.uniform(-np.pi, np.pi))


def random_circuit(rng, max_rows=4, max_layers=4, p_cnot=0.4, p_idle=0.2):
    """
    Random circuit of one-qubit rotations and nearest-neighbour CNOTs.

    Args:
        rng: numpy Generator
        max_rows: rows drawn uniformly from 1..max_rows
        max_layers: layers drawn uniformly from 1..max_layers
    """
    n_rows = int(rng.integers(1, max_rows + 1))
    n_layers = int(rng.integers(1, max_layers + 1))
    circuit = Circuit(n_rows)
    for _ in range(n_layers):
        gates = []
        row = 0
        while row < n_rows:
            draw = rng.random()
            if row + 1 < n_rows and draw < p_cnot:
                if rng.random() < 0.5:
                    gates.append(Cnot(row, row + 1))
                else:
                    gates.append(Cnot(row + 1, row))
                row += 2
                continue
            if draw >= 1.0 - p_idle:
                row += 1
                continue
            gates.append(OneQubit(row, random_angle(rng), random_angle(rng), random_angle(rng)))
            row += 1
        if not gates:
            gates.append(OneQubit(0, random_angle(rng), random_angle(rng), random_angle(rng)))
        circuit.add_layer(gates)
    return circuit


def golden_circuit():
    """U(0.1, 0.2, 0.3) on row 0 beside an idle row 1, then CNOT 0 -> 1."""
    return Circuit(2, [[OneQubit(0, 0.1, 0.2, 0.3)], [Cnot(0, 1)]])
