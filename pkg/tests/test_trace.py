import pytest
from hypothesis import given, strategies as st

from conftest import GOLDEN_OUTCOMES, golden_path
from utils.exceptions import ParseError
from utils.patterns import ByproductPair
from utils.trace import (
    TraceRecord,
    format_theta,
    load_outcomes,
    load_trace,
    read_outcomes,
    read_trace,
    write_outcomes,
    write_trace,
)

HEADER = "#nqubits=1\n#seed=7\n#rounds=1\nround\trow\tm\tP\ttheta\ts\tb\tsb\n"


def test_format_theta():
    assert format_theta(-0.1) == "-0.100000"
    assert format_theta(1.5707963267948966) == "1.570796"
    assert format_theta(-0.0) == "0.000000"
    assert format_theta(-1e-9) == "0.000000"


def test_golden_trace_row():
    header, records = load_trace(golden_path("GOLDEN_TRACE_FILE"))
    assert header.n_qubits == 2 and header.seed == 42 and header.rounds == 10
    lines = golden_path("GOLDEN_TRACE_FILE").read_text().splitlines()
    assert lines[4 + 12] == "6\t0\t0\ta013\t1.570796\t0\t10\t00"
    rec = records[12]
    assert (rec.round, rec.row, rec.word, rec.b) == (6, 0, 0xa013, ByproductPair(1, 0))


def test_write_then_read_is_identity_on_golden_text():
    text = golden_path("GOLDEN_TRACE_FILE").read_text()
    header, records = read_trace(text)
    assert write_trace(records, header.n_qubits, header.seed, header.rounds) == text


def test_write_defaults(tmp_path):
    rec = TraceRecord(0, 0, 1, 0x0010, 0.25, 0, ByproductPair(1, 0), ByproductPair())
    path = tmp_path / "t" / "trace.tsv"
    text = write_trace([rec], n_qubits=1, path=path)
    assert text.startswith("#nqubits=1\n#seed=none\n#rounds=1\n")
    assert path.read_text() == text
    assert text.splitlines()[-1] == "0\t0\t1\t0010\t0.250000\t0\t10\t00"


@pytest.mark.parametrize("text, line", [
    ("#nqubits=1\n#rounds=1\nround\trow\tm\tP\ttheta\ts\tb\tsb\n", None),
    ("#nqubits=1\n#seed=7\n#rounds=1\n#colour=red\n", 4),
    (HEADER.replace("theta", "phi"), 4),
    (HEADER + "0\t0\t2\t0010\t0.0\t0\t00\t00\n", 5),
    (HEADER + "0\t0\t1\t10\t0.0\t0\t00\t00\n", 5),
    (HEADER + "0\t0\t1\t0010\tabc\t0\t00\t00\n", 5),
    (HEADER + "0\t0\t1\t0010\t0.0\t0\t0\t00\n", 5),
    (HEADER + "0\t0\t1\t0010\t0.0\t0\t00\n", 5),
])
def test_read_trace_errors(text, line):
    with pytest.raises(ParseError) as exc:
        read_trace(text)
    assert exc.value.line == line


def test_load_trace_missing(tmp_path):
    with pytest.raises(ParseError):
        load_trace(tmp_path / "none.tsv")


def test_outcome_table_round_trip(tmp_path):
    path = tmp_path / "m.tsv"
    text = write_outcomes(GOLDEN_OUTCOMES, path)
    assert text == golden_path("GOLDEN_OUTCOMES_FILE").read_text()
    assert load_outcomes(path) == GOLDEN_OUTCOMES


@pytest.mark.parametrize("text", [
    "",
    "round\tm_1\n0\t0\n",
    "round\tm_0\n1\t0\n",
    "round\tm_0\n0\t2\n",
    "round\tm_0\tm_1\n0\t0\n",
])
def test_read_outcomes_errors(text):
    with pytest.raises(ParseError):
        read_outcomes(text)


bits = st.integers(0, 1)
pairs = st.builds(ByproductPair, bits, bits)
records = st.builds(
    TraceRecord,
    round=st.integers(0, 500),
    row=st.integers(0, 63),
    m=bits,
    word=st.integers(0, 0xFFFF),
    theta=st.integers(-7_000_000, 7_000_000).map(lambda k: k / 1e6),
    s=bits,
    b=pairs,
    sb=pairs,
)


@given(rows=st.lists(records, min_size=1, max_size=30), seed=st.none() | st.integers(0, 2 ** 32 - 1))
def test_random_traces_survive_write_and_read(rows, seed):
    text = write_trace(rows, n_qubits=64, seed=seed)
    header, parsed = read_trace(text)
    assert header.seed == seed
    assert header.rounds == max(r.round for r in rows) + 1
    assert parsed == rows
