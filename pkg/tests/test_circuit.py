import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from utils.circuit import (
    Circuit,
    format_circuit,
    golden_circuit,
    load_circuit,
    parse_circuit,
    random_angle,
    random_circuit,
)
from utils.exceptions import CircuitError, ParseError
from utils.patterns import Cnot, Identity, OneQubit


def test_parse_golden_text():
    text = "# U then CNOT\nqubits 2\nu 0 0.1 0.2 0.3\nlayer\ncnot 0 1\n"
    assert parse_circuit(text) == golden_circuit()


def test_parse_identity_and_comments():
    c = parse_circuit("qubits 2\nid 1 6   # idle\nU 0 0 0 0\n")
    assert c.layers == [[Identity(1, 6), OneQubit(0, 0.0, 0.0, 0.0)]]


def test_leading_and_repeated_layer_lines_are_ignored():
    c = parse_circuit("qubits 1\nlayer\nu 0 1 2 3\nlayer\nlayer\nu 0 3 2 1\n")
    assert len(c.layers) == 2


@pytest.mark.parametrize("text, line, column", [
    ("u 0 1 2 3\n", 1, 1),
    ("qubits 2\nswap 0 1\n", 2, 1),
    ("qubits 2\nu 0 0.1 0.2\n", 2, 12),
    ("qubits 2\nu 0 0.1 x 0.3\n", 2, 9),
    ("qubits 2\ncnot 0 0\n", 2, 8),
    ("qubits 3\ncnot 0 2\n", 2, 8),
    ("qubits 2\nu 2 0 0 0\n", 2, 3),
    ("qubits 2\nu 0 0 0 0\nid 0 4\n", 3, 4),
    ("qubits 2\nid 0 3\n", 2, 6),
    ("qubits 0\n", 1, 8),
    ("qubits 2\nu 0 nan 0 0\n", 2, 5),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_circuit(text, source="bad.txt")
    assert exc.value.line == line
    assert exc.value.column == column
    assert "bad.txt" in str(exc.value)


def test_missing_qubits_line():
    with pytest.raises(ParseError):
        parse_circuit("# nothing\n")


def test_load_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_circuit(tmp_path / "absent.txt")


def test_circuit_checks_layers():
    with pytest.raises(CircuitError):
        Circuit(2, [[OneQubit(0, 0, 0, 0), Cnot(0, 1)]])
    with pytest.raises(CircuitError):
        Circuit(1).add_layer([OneQubit(1, 0, 0, 0)])
    with pytest.raises(CircuitError):
        Circuit(0)
    assert Circuit(3).is_empty()


def test_random_angle_range(rng):
    values = [random_angle(rng) for _ in range(1000)]
    assert all(-np.pi < v <= np.pi for v in values)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_format_then_parse_rebuilds_random_circuits(seed):
    c = random_circuit(np.random.default_rng(seed))
    assert 1 <= c.n_rows <= 4 and 1 <= len(c.layers) <= 4
    assert parse_circuit(format_circuit(c)) == c
