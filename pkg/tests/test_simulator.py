import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import config
from conftest import GOLDEN_OUTCOMES, golden_path
from utils import statevector as sv
from utils.circuit import Circuit, parse_circuit, random_circuit
from utils.compiler import compile_circuit
from utils.exceptions import ImpossibleBranchError, ResourceLimitError
from utils.metrics import born_probabilities, max_binomial_deviation
from utils.patterns import ByproductPair, OneQubit
from utils.simulator import (
    correct_final_state,
    corrected_readout,
    measurement_angle,
    modulator_voltages,
    readout_distribution,
    readout_report,
    run_gate_model,
    run_mbqc,
    simulate,
    verify_equivalence,
    verify_random_circuits,
)
from utils.trace import write_trace

HALF_PI = np.pi / 2
ZERO_STATE_U = "qubits 1\nu 0 0 1.5707963267948966 1.5707963267948966\n"


def test_measurement_angle():
    assert measurement_angle(0.3, 0) == pytest.approx(0.3)
    assert measurement_angle(0.3, 1) == pytest.approx(-0.3)
    assert measurement_angle(0.3, 1, c=1) == pytest.approx(np.pi - 0.3)


def test_modulator_voltages():
    assert modulator_voltages(1, 0, 0.0) == pytest.approx((HALF_PI, HALF_PI))
    assert modulator_voltages(1, 1, 0.3) == pytest.approx((HALF_PI, HALF_PI + 0.3))
    assert modulator_voltages(0, 0, 0.0) == pytest.approx((0.0, HALF_PI))


def test_golden_forced_run_reproduces_trace(circuit):
    result = simulate(circuit, seed=config.RANDOM_SEED, forced_outcomes=GOLDEN_OUTCOMES)
    text = write_trace(result.trace, n_qubits=2, seed=config.RANDOM_SEED)
    assert text == golden_path("GOLDEN_TRACE_FILE").read_text()
    assert result.byproducts == [ByproductPair(1, 1), ByproductPair(1, 0)]
    assert result.fidelity == pytest.approx(1.0, abs=config.FIDELITY_TOL)
    assert result.passed


def test_gate_model_golden(circuit):
    state = run_gate_model(circuit)
    expected = sv.apply_cnot(sv.apply_rx(sv.apply_rz(sv.apply_rx(sv.new_plus_state(2), 0, 0.1), 0, 0.2), 0, 0.3), 0, 1)
    assert sv.fidelity_up_to_phase(state, expected) == pytest.approx(1.0)


def test_same_seed_same_trace(circuit):
    image = compile_circuit(circuit)
    a, b = run_mbqc(image, seed=5), run_mbqc(image, seed=5)
    assert a.trace == b.trace


def test_settings_record_every_measurement(circuit):
    result = run_mbqc(compile_circuit(circuit), seed=1)
    assert len(result.settings) == 20
    k, row, alpha, beta = result.settings[0]
    assert (k, row) == (0, 0)
    assert (alpha, beta) == pytest.approx((HALF_PI, HALF_PI))


def test_forced_outcomes_shape(circuit):
    image = compile_circuit(circuit)
    with pytest.raises(ValueError):
        run_mbqc(image, forced_outcomes=[[0] * 10])
    with pytest.raises(ValueError):
        run_mbqc(image, forced_outcomes=[[0] * 10, [2] * 10])


def test_row_cap(circuit):
    with pytest.raises(ResourceLimitError):
        run_mbqc(compile_circuit(circuit), max_rows=1)


def test_readout_of_deterministic_output():
    c = parse_circuit(ZERO_STATE_U)
    result = simulate(c, forced_outcomes=[[0, 0, 0, 0, 0]], readout=True)
    assert result.raw_readout == [0]
    assert result.corrected_bits == [0]
    assert len(result.trace) == 5


def test_impossible_readout_branch():
    c = parse_circuit(ZERO_STATE_U)
    with pytest.raises(ImpossibleBranchError) as exc:
        simulate(c, forced_outcomes=[[0, 0, 0, 0, 1]], readout=True)
    assert (exc.value.round_index, exc.value.row, exc.value.outcome) == (4, 0, 1)


def test_correction_helpers():
    state = sv.basis_state([1, 0])
    with pytest.raises(ValueError):
        correct_final_state(state, [ByproductPair()])
    fixed = correct_final_state(state, [ByproductPair(1, 1), ByproductPair()])
    assert sv.branch_probability(fixed, 0, 0) == pytest.approx(1.0)
    assert corrected_readout(state, [ByproductPair(1, 0), ByproductPair(0, 1)], seed=3) == [0, 0]


def test_equivalence_over_seeds(circuit):
    report = verify_equivalence(circuit, range(20), workers=2)
    assert list(report.results["seed"]) == list(range(20))
    assert report.passed
    assert report.min_fidelity >= 1.0 - config.FIDELITY_TOL


def test_single_row_rotations():
    c = Circuit(1, [[OneQubit(0, 0.7, -1.1, 2.3)], [OneQubit(0, -0.4, 0.9, 0.1)]])
    for seed in range(10):
        assert simulate(c, seed=seed).passed


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_random_circuit_matches_gate_model(seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, max_rows=3, max_layers=3)
    assert simulate(c, seed=int(rng.integers(2 ** 32))).passed


@pytest.mark.slow
def test_random_circuit_batch():
    df = verify_random_circuits(config.RANDOM_CIRCUITS)
    assert len(df) == config.RANDOM_CIRCUITS
    assert df["passed"].all()


@pytest.mark.slow
def test_golden_equivalence_full(circuit):
    report = verify_equivalence(circuit, range(config.EQUIVALENCE_SEEDS))
    assert report.passed


@pytest.mark.slow
def test_readout_distribution_follows_born_rule(circuit):
    shots = 2000
    counts = readout_distribution(circuit, shots=shots, seed=7)
    probs = born_probabilities(run_gate_model(circuit))
    assert sum(counts.values()) == shots
    assert max_binomial_deviation(counts, {k: p for k, p in probs.items() if p > 1e-12}, shots) < 4.5


def test_forced_outcomes_may_leave_readout_to_the_seed(circuit):
    plain = simulate(circuit, forced_outcomes=GOLDEN_OUTCOMES)
    result = simulate(circuit, seed=3, forced_outcomes=GOLDEN_OUTCOMES, readout=True)
    assert len(result.trace) == 22
    assert [r.m for r in result.trace[:20]] == [r.m for r in plain.trace]
    assert result.byproducts == plain.byproducts
    assert len(result.corrected_bits) == 2
    assert result.passed


def test_forced_rows_must_agree_on_length(circuit):
    image = compile_circuit(circuit, readout=True)
    with pytest.raises(ValueError):
        run_mbqc(image, forced_outcomes=[GOLDEN_OUTCOMES[0], GOLDEN_OUTCOMES[1] + [0]])
    with pytest.raises(ValueError):
        run_mbqc(image, forced_outcomes=[row + [0, 0] for row in GOLDEN_OUTCOMES])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), row=st.integers(0, 2))
def test_z_byproduct_does_not_change_readout(seed, row):
    state = sv.random_state(3, np.random.default_rng(seed))
    flipped = sv.apply_z(state, row)
    clean = [ByproductPair(1, 0), ByproductPair(), ByproductPair(0, 0)]
    with_z = [ByproductPair(b.x, 1) if i == row else b for i, b in enumerate(clean)]
    assert corrected_readout(flipped, with_z, seed=seed) == corrected_readout(state, clean, seed=seed)


def test_readout_report_of_deterministic_output():
    report = readout_report(parse_circuit(ZERO_STATE_U), shots=50, seed=2)
    assert report["counts"] == {"0": 50}
    assert report["outcomes"] == 1
    assert report["tvd"] == pytest.approx(0.0)
    assert report["max_sigma"] == pytest.approx(0.0, abs=1e-6)
    assert report["passed"]


def test_no_random_circuits_gives_an_empty_table():
    df = verify_random_circuits(0)
    assert df.empty
    assert list(df.columns) == ["circuit", "rows", "layers", "rounds", "seed", "fidelity", "passed"]
