import importlib.util

import pytest

from conftest import REPO_ROOT, golden_path
from utils.exceptions import (
    EXIT_FAILED,
    EXIT_IMPOSSIBLE_BRANCH,
    EXIT_INFEASIBLE_TIMING,
    EXIT_OK,
    EXIT_USAGE,
)

SCRIPTS = REPO_ROOT / "scripts" / "python"


def load_script(relative):
    path = SCRIPTS / relative
    spec = importlib.util.spec_from_file_location(path.stem, path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="module")
def compile_script():
    return load_script("compilation/compile_circuit.py")


@pytest.fixture(scope="module")
def simulate_script():
    return load_script("simulation/simulate.py")


@pytest.fixture(scope="module")
def replay_script():
    return load_script("simulation/replay_trace.py")


@pytest.fixture(scope="module")
def timing_script():
    return load_script("timing/timing_budget.py")


@pytest.fixture(scope="module")
def verify_script():
    return load_script("verification/verify_cnot.py")


def test_compile_golden(compile_script, tmp_path):
    rom, theta, stim = tmp_path / "rom.txt", tmp_path / "theta.tsv", tmp_path / "stim.tsv"
    code = compile_script.main([
        "--input", str(golden_path("GOLDEN_CIRCUIT_FILE")),
        "--rom", str(rom), "--theta", str(theta), "--stimulus", str(stim),
    ])
    assert code == EXIT_OK
    assert rom.read_text() == golden_path("GOLDEN_ROM_FILE").read_text()
    assert theta.read_text().splitlines()[0] == "round\trow\tP\ttheta\tbasis_select\tvertical_link"
    assert stim.read_text().startswith("#nqubits=2\n#seed=none\n#rounds=10\n")


def test_compile_bad_input(compile_script, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("qubits 2\ncnot 0 5\n")
    assert compile_script.main(["--input", str(bad), "--rom", str(tmp_path / "r")]) == EXIT_USAGE
    assert compile_script.main(["--input", str(tmp_path / "missing.txt")]) == EXIT_USAGE


def test_simulate_forced_golden(simulate_script, tmp_path, capsys):
    out = tmp_path / "trace.tsv"
    code = simulate_script.main([
        "--input", str(golden_path("GOLDEN_CIRCUIT_FILE")),
        "--forced-outcomes", str(golden_path("GOLDEN_OUTCOMES_FILE")),
        "--output", str(out),
    ])
    assert code == EXIT_OK
    assert out.read_text() == golden_path("GOLDEN_TRACE_FILE").read_text()
    assert "fidelity=" in capsys.readouterr().out


def test_simulate_impossible_branch(simulate_script, tmp_path):
    circuit = tmp_path / "zero.txt"
    circuit.write_text("qubits 1\nu 0 0 1.5707963267948966 1.5707963267948966\n")
    forced = tmp_path / "forced.tsv"
    forced.write_text("round\tm_0\n0\t0\n1\t0\n2\t0\n3\t0\n4\t1\n")
    code = simulate_script.main([
        "--input", str(circuit), "--forced-outcomes", str(forced), "--readout",
        "--output", str(tmp_path / "trace.tsv"),
    ])
    assert code == EXIT_IMPOSSIBLE_BRANCH


def test_simulate_bad_outcome_table(simulate_script, tmp_path):
    forced = tmp_path / "forced.tsv"
    forced.write_text("round\tm_0\n0\t0\n")
    code = simulate_script.main([
        "--input", str(golden_path("GOLDEN_CIRCUIT_FILE")), "--forced-outcomes", str(forced),
        "--output", str(tmp_path / "trace.tsv"),
    ])
    assert code == EXIT_USAGE


def test_replay_golden_and_tampered(replay_script, tmp_path):
    assert replay_script.main(["--input", str(golden_path("GOLDEN_TRACE_FILE"))]) == EXIT_OK

    lines = golden_path("GOLDEN_TRACE_FILE").read_text().splitlines()
    lines[16] = lines[16].replace("\t10\t00", "\t11\t00")
    tampered = tmp_path / "tampered.tsv"
    tampered.write_text("\n".join(lines) + "\n")
    report = tmp_path / "report.tsv"
    assert replay_script.main(["--input", str(tampered), "--report", str(report)]) == EXIT_FAILED
    assert report.read_text().splitlines()[1] == "6\t0\tb\t11\t10"

    broken = tmp_path / "broken.tsv"
    broken.write_text("#nqubits=2\n")
    assert replay_script.main(["--input", str(broken)]) == EXIT_USAGE


def test_verify_cnot(verify_script, tmp_path, capsys):
    out = tmp_path / "verify.tsv"
    assert verify_script.main(["--branches", "16", "--output", str(out)]) == EXIT_OK
    assert "Link columns satisfying all four equations: [3]" in capsys.readouterr().out
    assert out.read_text().startswith("equation\tproduct\ttarget")
    log = tmp_path / "fail.log"
    code = verify_script.main(["--branches", "sample", "64", "--link-column", "4",
                               "--output", str(tmp_path / "v4.tsv"), "--log-file", str(log)])
    assert code == EXIT_FAILED
    text = log.read_text()
    assert "E4" in text
    assert "byproducts that fit: " in text


def test_verify_cnot_usage_errors(verify_script):
    with pytest.raises(SystemExit) as exc:
        verify_script.main(["--branches", "0"])
    assert exc.value.code == EXIT_USAGE
    assert verify_script.main(["--link-column", "9", "--output", ""]) == EXIT_USAGE


def test_timing_exit_codes(timing_script, tmp_path):
    out = str(tmp_path / "timing.tsv")
    assert timing_script.main(["--output", out]) == EXIT_OK
    assert timing_script.main(["--freq", "150e6", "--tlogic", "5.08e-9", "--output", out]) == EXIT_OK
    assert timing_script.main(["--preset", "kintex7", "--tinternal", "1.1e-9", "--output", out]) == EXIT_OK
    assert timing_script.main(["--sweep", "--output", out]) == EXIT_OK
    assert timing_script.main(["--freq", "0", "--output", out]) == EXIT_USAGE
    assert timing_script.main(["--tlogic", "7e-9", "--output", out]) == EXIT_INFEASIBLE_TIMING
    assert timing_script.main(["--phases", "300", "220", "--output", out]) == EXIT_INFEASIBLE_TIMING
    assert timing_script.main(["--phases", "220", "400", "--output", out]) == EXIT_USAGE


def test_timing_infeasible_still_writes_margins(timing_script, tmp_path, capsys):
    out = tmp_path / "timing.tsv"
    code = timing_script.main(["--freq", "200e6", "--tlogic", "5.08e-9", "--output", str(out)])
    assert code == EXIT_INFEASIBLE_TIMING
    lines = out.read_text().splitlines()
    assert lines[0] == "quantity\tvalue\tpassed"
    assert any(line.startswith("margin_analog_slack_s\t") and line.endswith("False") for line in lines)
    assert "✗ margin_analog_slack_s" in capsys.readouterr().out


def test_equivalence_script(tmp_path):
    script = load_script("simulation/verify_equivalence.py")
    out = tmp_path / "random.tsv"
    code = script.main([
        "--input", str(golden_path("GOLDEN_CIRCUIT_FILE")),
        "--seeds", "4", "--random", "2", "--workers", "2", "--output", str(out),
    ])
    assert code == EXIT_OK
    assert out.read_text().splitlines()[0].startswith("circuit\trows")


def test_compile_empty_circuit(compile_script, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("qubits 2\n")
    rom, theta = tmp_path / "rom.txt", tmp_path / "theta.tsv"
    code = compile_script.main(["--input", str(empty), "--rom", str(rom), "--theta", str(theta)])
    assert code == EXIT_OK
    assert rom.read_text() == "qubit 0\nqubit 1\n"
    assert theta.read_text().splitlines() == ["round\trow\tP\ttheta\tbasis_select\tvertical_link"]


def test_simulate_readout_with_logical_outcome_table(simulate_script, tmp_path, capsys):
    code = simulate_script.main([
        "--input", str(golden_path("GOLDEN_CIRCUIT_FILE")),
        "--forced-outcomes", str(golden_path("GOLDEN_OUTCOMES_FILE")),
        "--readout", "--seed", "3", "--output", str(tmp_path / "trace.tsv"),
    ])
    assert code == EXIT_OK
    assert (tmp_path / "trace.tsv").read_text().startswith("#nqubits=2\n")
    assert "fidelity=" in capsys.readouterr().out


def test_verify_cnot_branch_modes(verify_script, tmp_path):
    assert verify_script.branch_mode(["sample", "8"]) == 8
    assert verify_script.branch_mode(["8"]) == 8
    assert verify_script.branch_mode(["all"]) is None
    out = str(tmp_path / "verify.tsv")
    assert verify_script.main(["--branches", "sample", "8", "--output", out]) == EXIT_OK
    for bad in (["sample"], ["sample", "x"], ["every"], ["sample", "0"]):
        with pytest.raises(SystemExit) as exc:
            verify_script.main(["--branches", *bad, "--output", out])
        assert exc.value.code == EXIT_USAGE


def test_equivalence_script_readout_shots(tmp_path, capsys):
    script = load_script("simulation/verify_equivalence.py")
    code = script.main([
        "--input", str(golden_path("GOLDEN_CIRCUIT_FILE")),
        "--seeds", "2", "--random", "0", "--readout-shots", "200",
        "--output", str(tmp_path / "random.tsv"),
    ])
    assert code == EXIT_OK
    assert "sigma" in capsys.readouterr().out
