"""
Trace files: one TSV row per (round, row) with the program word, outcome,
angle, adaptive output and the byproduct registers as seen before X_r.

    #nqubits=2
    #seed=42
    #rounds=10
    round	row	m	P	theta	s	b	sb
    0	0	0	0302	0.000000	0	00	00
"""
import io
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import pandas as pd

from utils.exceptions import ParseError
from utils.patterns import ByproductPair

COLUMNS = ["round", "row", "m", "P", "theta", "s", "b", "sb"]
HEADER_KEYS = ("nqubits", "seed", "rounds")


@dataclass(frozen=True)
class TraceRecord:
    round: int
    row: int
    m: int
    word: int
    theta: float
    s: int
    b: ByproductPair
    sb: ByproductPair


class TraceHeader(NamedTuple):
    n_qubits: int
    seed: object      # int, or None for stimulus generated without a quantum run
    rounds: int


def format_theta(theta):
    text = f"{theta:.6f}"
    if float(text) == 0.0:
        text = "0.000000"
    return text


def records_to_frame(records):
    rows = [
        {
            "round": str(r.round),
            "row": str(r.row),
            "m": str(r.m),
            "P": f"{r.word:04x}",
            "theta": format_theta(r.theta),
            "s": str(r.s),
            "b": r.b.label(),
            "sb": r.sb.label(),
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=COLUMNS)


def write_trace(records, n_qubits, seed=None, rounds=None, path=None):
    """
    Serialise trace records.

    Args:
        records: TraceRecords, written in the given order
        n_qubits: number of rows
        seed: RNG seed of the run, None for forced or stimulus-only traces
        rounds: defaults to 1 + the largest round in `records`
        path: optional output file

    Returns:
        the trace text
    """
    records = list(records)
    if rounds is None:
        rounds = max((r.round for r in records), default=-1) + 1
    seed_text = "none" if seed is None else str(seed)
    header = f"#nqubits={n_qubits}\n#seed={seed_text}\n#rounds={rounds}\n"
    body = records_to_frame(records).to_csv(sep="\t", index=False, lineterminator="\n")
    text = header + body
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            path.write_text(text)
        except OSError as e:
            raise OSError(f"cannot write trace to {path}: {e.strerror}") from e
    return text


def _parse_header(lines, source):
    values = {}
    for lineno, line in enumerate(lines, start=1):
        key, sep, value = line[1:].partition("=")
        if not sep or key not in HEADER_KEYS:
            raise ParseError(f"unexpected header line {line!r}", lineno, 1, source)
        values[key] = value.strip()
    missing = [k for k in HEADER_KEYS if k not in values]
    if missing:
        raise ParseError(f"missing header field(s) {', '.join(missing)}", None, None, source)
    try:
        n_qubits = int(values["nqubits"])
        rounds = int(values["rounds"])
        seed = None if values["seed"] == "none" else int(values["seed"])
    except ValueError as e:
        raise ParseError(f"bad header value: {e}", None, None, source) from None
    return TraceHeader(n_qubits, seed, rounds)


def _bit(text, name, lineno, source):
    if text not in ("0", "1"):
        raise ParseError(f"{name} must be 0 or 1, got {text!r}", lineno, COLUMNS.index(name) + 1, source)
    return int(text)


def _record(row, lineno, source):
    def col(name):
        return COLUMNS.index(name) + 1

    try:
        round_index = int(row["round"])
        row_index = int(row["row"])
    except ValueError:
        raise ParseError("round and row must be integers", lineno, col("round"), source) from None
    word_text = row["P"]
    if len(word_text) != 4 or any(c not in "0123456789abcdef" for c in word_text):
        raise ParseError(f"P must be 4 lowercase hex digits, got {word_text!r}", lineno, col("P"), source)
    try:
        theta = float(row["theta"])
    except ValueError:
        raise ParseError(f"theta is not a number: {row['theta']!r}", lineno, col("theta"), source) from None
    try:
        b = ByproductPair.from_label(row["b"])
        sb = ByproductPair.from_label(row["sb"])
    except ValueError as e:
        raise ParseError(str(e), lineno, col("b"), source) from None
    return TraceRecord(
        round=round_index,
        row=row_index,
        m=_bit(row["m"], "m", lineno, source),
        word=int(word_text, 16),
        theta=theta,
        s=_bit(row["s"], "s", lineno, source),
        b=b,
        sb=sb,
    )


def read_trace(text, source=None):
    """
    Parse trace text.

    Returns:
        (TraceHeader, list of TraceRecord)

    Raises:
        ParseError: naming the offending line
    """
    lines = text.splitlines()
    n_header = 0
    while n_header < len(lines) and lines[n_header].startswith("#"):
        n_header += 1
    header = _parse_header(lines[:n_header], source)

    if n_header >= len(lines):
        raise ParseError("missing column header line", n_header + 1, 1, source)
    columns = lines[n_header].split("\t")
    if columns != COLUMNS:
        raise ParseError(f"expected columns {' '.join(COLUMNS)}", n_header + 1, 1, source)

    first_data_line = n_header + 2
    for offset, line in enumerate(lines[n_header + 1:]):
        if line.count("\t") != len(COLUMNS) - 1:
            raise ParseError(
                f"expected {len(COLUMNS)} tab-separated fields", first_data_line + offset, 1, source
            )

    body = "\n".join(lines[n_header:]) + "\n"
    df = pd.read_csv(io.StringIO(body), sep="\t", dtype=str, keep_default_na=False)
    records = [
        _record(row, first_data_line + i, source)
        for i, row in enumerate(df.to_dict("records"))
    ]
    return header, records


def load_trace(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read trace file: {e.strerror}", source=path) from None
    return read_trace(text, source=path)


# ----------------------------
# Forced-outcome tables
# ----------------------------

def outcomes_to_frame(outcomes):
    """[row][round] bits -> DataFrame with a round column and one m_<row> column per row."""
    n_rounds = len(outcomes[0]) if outcomes else 0
    data = {"round": list(range(n_rounds))}
    for row, bits in enumerate(outcomes):
        data[f"m_{row}"] = [int(b) for b in bits]
    return pd.DataFrame(data)


def write_outcomes(outcomes, path=None):
    text = outcomes_to_frame(outcomes).to_csv(sep="\t", index=False, lineterminator="\n")
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return text


def read_outcomes(text, source=None):
    """
    Parse a forced-outcome table.

    Returns:
        outcomes[row][round]
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty outcome table", 1, 1, source)
    columns = lines[0].split("\t")
    expected = ["round"] + [f"m_{i}" for i in range(len(columns) - 1)]
    if len(columns) < 2 or columns != expected:
        raise ParseError(f"expected columns {' '.join(expected)}", 1, 1, source)
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(columns):
            raise ParseError(f"expected {len(columns)} fields, got {len(fields)}", lineno, 1, source)
        if fields[0] != str(lineno - 2):
            raise ParseError(f"round must be {lineno - 2}, got {fields[0]!r}", lineno, 1, source)
        for col, value in enumerate(fields[1:], start=2):
            if value not in ("0", "1"):
                raise ParseError(f"outcome must be 0 or 1, got {value!r}", lineno, col, source)
    df = pd.read_csv(io.StringIO(text), sep="\t", dtype=int)
    return [df[c].astype(int).tolist() for c in columns[1:]]


def load_outcomes(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read outcome table: {e.strerror}", source=path) from None
    return read_outcomes(text, source=path)
