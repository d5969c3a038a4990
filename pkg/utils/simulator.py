"""
Column-streaming cluster-state execution and the gate-model reference.

Only two columns are ever live: at round k the state holds column k
(qubits 0..N-1) and the freshly generated column k+1 (qubits N..2N-1).
Column k is entangled with its successor and its vertical links, measured
row by row with the angle the controller registered in round k-1, and then
removed.
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from tqdm import tqdm

import config
from utils import controller as ctl
from utils import statevector as sv
from utils.circuit import format_circuit, random_circuit
from utils.compiler import compile_circuit
from utils.exceptions import ContractViolation, ImpossibleBranchError, ResourceLimitError
from utils.metrics import born_probabilities, max_binomial_deviation, total_variation_distance
from utils.patterns import Cnot, Identity, OneQubit
from utils.trace import TraceRecord


def measurement_angle(theta, s, c=0):
    """phi = pi*c + (-1)^s * theta; c is the cut-out bit, 0 in compiled programs."""
    return np.pi * c + (-theta if s else theta)


def modulator_voltages(basis_select, s, theta):
    """
    Phase-modulator settings (alpha, beta) in radians for one measurement:
    alpha = (pi/2) z and beta = pi/2 - (-1)^s theta.
    """
    return (np.pi / 2) * basis_select, np.pi / 2 - measurement_angle(theta, s)


@dataclass
class RunResult:
    n_rows: int
    seed: object
    trace: list
    final_state: sv.StateVector
    byproducts: list
    corrected_state: sv.StateVector
    reference_state: sv.StateVector = None
    fidelity: float = None
    raw_readout: list = None
    corrected_bits: list = None
    settings: list = field(default_factory=list)

    @property
    def passed(self):
        return self.fidelity is not None and self.fidelity >= 1.0 - config.FIDELITY_TOL


def _check_forced(image, forced_outcomes):
    if forced_outcomes is None:
        return None
    forced = [[int(v) for v in row] for row in forced_outcomes]
    # the readout round may be left out; it is then drawn
    allowed = {image.total_rounds, image.logical_rounds}
    if len(forced) != image.n_rows or any(len(r) not in allowed for r in forced) \
            or len({len(r) for r in forced}) > 1:
        rounds = f"{image.logical_rounds} or {image.total_rounds}" if image.readout else str(image.total_rounds)
        raise ValueError(
            f"forced outcomes must be {image.n_rows} rows x {rounds} rounds"
        )
    if any(v not in (0, 1) for r in forced for v in r):
        raise ValueError("forced outcomes must be bits")
    return forced


def _measure(state, qubit, basis_select, phi, forced, rng, round_index, row):
    """Measure one qubit; returns (outcome, collapsed state)."""
    if basis_select:
        state = sv.rotate_to_equator_basis(state, qubit, phi)
    if forced is None:
        return sv.measure_z(state, qubit, rng.random())
    p = sv.branch_probability(state, qubit, forced)
    if p < config.IMPOSSIBLE_BRANCH_P:
        raise ImpossibleBranchError(round_index, row, forced, p)
    _, collapsed = sv.project_z(state, qubit, forced)
    return forced, collapsed


def run_mbqc(image, seed=None, forced_outcomes=None, max_rows=config.SIM_MAX_ROWS, strict=False):
    """
    Execute a compiled program on a streamed cluster state.

    Args:
        image: ProgramImage
        seed: seed of the numpy Generator that draws outcomes
        forced_outcomes: optional [row][round] bits; outcomes are then
            post-selected by projection instead of drawn
        max_rows: row cap (2 * max_rows qubits are live at once)

    Returns:
        RunResult without reference state or fidelity
    """
    n = image.n_rows
    if n > max_rows:
        raise ResourceLimitError(n, max_rows, what="rows")
    forced = _check_forced(image, forced_outcomes)
    rng = np.random.default_rng(seed)
    states = ctl.new_array(n)
    s_prev = [0] * n
    trace = []
    settings = []

    state = sv.new_plus_state(n)
    column = sv.new_plus_state(n)
    for k in range(image.logical_rounds):
        state = sv.kron(state, column)
        for row in range(n):
            state = sv.apply_cz(state, row, n + row)
        for upper in image.links_at(k):
            state = sv.apply_cz(state, upper, upper + 1)

        outcomes = []
        for row in range(n):
            theta = image.theta[row][k]
            z = image.basis_select[row][k]
            phi = measurement_angle(theta, s_prev[row])
            settings.append((k, row, *modulator_voltages(z, s_prev[row], theta)))
            m, state = _measure(
                state, row, z, phi,
                None if forced is None else forced[row][k],
                rng, k, row,
            )
            outcomes.append(m)

        words = image.word_column(k)
        out = ctl.step_round(states, words, outcomes, strict)
        for row in range(n):
            trace.append(TraceRecord(
                round=k, row=row, m=outcomes[row], word=words[row],
                theta=image.theta[row][k], s=out.s[row],
                b=out.byproducts[row], sb=out.stored[row],
            ))
        s_prev = out.s

        state = sv.remove_leading_qubits(state, n)
        if abs(state.norm() - 1.0) > config.NORM_TOL * 1e3:
            raise ContractViolation(f"round {k}: state norm drifted to {state.norm():.15f}")

    byproducts = [st.byproduct for st in states]
    final_state = state
    result = RunResult(
        n_rows=n,
        seed=seed,
        trace=trace,
        final_state=final_state,
        byproducts=byproducts,
        corrected_state=correct_final_state(final_state, byproducts),
        settings=settings,
    )

    if image.readout:
        k = image.logical_rounds
        raw = []
        for row in range(n):
            m, state = _measure(
                state, row, 0, 0.0,
                None if forced is None or len(forced[row]) <= k else forced[row][k],
                rng, k, row,
            )
            raw.append(m)
        words = image.word_column(k)
        out = ctl.step_round(states, words, raw, strict)
        for row in range(n):
            trace.append(TraceRecord(
                round=k, row=row, m=raw[row], word=words[row], theta=image.theta[row][k],
                s=out.s[row], b=out.byproducts[row], sb=out.stored[row],
            ))
        result.raw_readout = raw
        result.corrected_bits = [m ^ b.x for m, b in zip(raw, byproducts)]
    return result


def run_gate_model(circuit):
    """Apply the circuit's gates to |+>^N in layer order."""
    state = sv.new_plus_state(circuit.n_rows)
    for layer in circuit.layers:
        for gate in layer:
            if isinstance(gate, OneQubit):
                state = sv.apply_rx(state, gate.row, gate.xi)
                state = sv.apply_rz(state, gate.row, gate.eta)
                state = sv.apply_rx(state, gate.row, gate.zeta)
            elif isinstance(gate, Cnot):
                state = sv.apply_cnot(state, gate.control, gate.target)
            elif not isinstance(gate, Identity):
                raise TypeError(f"unknown gate {gate!r}")
    return state


def correct_final_state(state, byproducts):
    """Undo Z^z X^x on every row: X^x first, then Z^z."""
    if len(byproducts) != state.n_qubits:
        raise ValueError(f"{len(byproducts)} byproducts for {state.n_qubits} rows")
    for row, b in enumerate(byproducts):
        if b.x:
            state = sv.apply_x(state, row)
        if b.z:
            state = sv.apply_z(state, row)
    return state


def corrected_readout(state, byproducts, seed=None):
    """
    Measure every output row in Z and flip row i iff x_i = 1.

    z bits do not affect computational-basis outcomes and are ignored.
    """
    if len(byproducts) != state.n_qubits:
        raise ValueError(f"{len(byproducts)} byproducts for {state.n_qubits} rows")
    rng = np.random.default_rng(seed)
    bits = []
    for row, b in enumerate(byproducts):
        m, state = sv.measure_z(state, row, rng.random())
        bits.append(m ^ b.x)
    return bits


def simulate(circuit, seed=None, forced_outcomes=None, readout=False, strict=False):
    """Compile, stream, correct and compare against the gate model."""
    image = compile_circuit(circuit, readout=readout)
    result = run_mbqc(image, seed=seed, forced_outcomes=forced_outcomes, strict=strict)
    result.reference_state = run_gate_model(circuit)
    result.fidelity = sv.fidelity_up_to_phase(result.corrected_state, result.reference_state)
    return result


# ----------------------------
# Equivalence and readout statistics
# ----------------------------

@dataclass
class EquivalenceReport:
    results: pd.DataFrame     # one row per seed: seed, fidelity, passed

    @property
    def min_fidelity(self):
        return float(self.results["fidelity"].min()) if len(self.results) else 1.0

    @property
    def failures(self):
        return self.results[~self.results["passed"]]

    @property
    def passed(self):
        return self.failures.empty


def _fidelity_for_seed(circuit, image, reference, seed):
    result = run_mbqc(image, seed=seed)
    return seed, sv.fidelity_up_to_phase(result.corrected_state, reference)


def verify_equivalence(circuit, seeds, workers=config.NUM_WORKERS, progress=False, log_file=None):
    """
    Run the streamed computation for every seed and compare each corrected
    output with the gate-model state.

    Args:
        log_file: optional open text file; one line per failing seed
    """
    image = compile_circuit(circuit)
    reference = run_gate_model(circuit)
    seeds = list(seeds)
    rows = []
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {
            executor.submit(_fidelity_for_seed, circuit, image, reference, seed): seed
            for seed in seeds
        }
        with tqdm(total=len(seeds), desc="Seeds", disable=not progress) as pbar:
            for future in as_completed(futures):
                seed, fid = future.result()
                ok = fid >= 1.0 - config.FIDELITY_TOL
                rows.append({"seed": seed, "fidelity": fid, "passed": ok})
                if not ok and log_file is not None:
                    log_file.write(f"seed {seed}: fidelity {fid:.12f}\n")
                    log_file.flush()
                pbar.update(1)
    df = pd.DataFrame(rows, columns=["seed", "fidelity", "passed"])
    return EquivalenceReport(df.sort_values("seed").reset_index(drop=True))


def readout_distribution(circuit, shots=config.READOUT_SHOTS, seed=config.RANDOM_SEED, progress=False):
    """
    Corrected readout counts over independent streamed runs that end with the
    computational-basis output column.

    Returns:
        dict bitstring -> count
    """
    image = compile_circuit(circuit, readout=True)
    rng = np.random.default_rng(seed)
    counts = {}
    for _ in tqdm(range(shots), desc="Shots", disable=not progress):
        result = run_mbqc(image, seed=int(rng.integers(2 ** 32)))
        key = "".join(str(b) for b in result.corrected_bits)
        counts[key] = counts.get(key, 0) + 1
    return counts


def readout_report(circuit, shots=config.READOUT_SHOTS, seed=config.RANDOM_SEED,
                   n_sigma=config.READOUT_SIGMA, progress=False):
    """
    Corrected readout counts against the Born probabilities of the gate-model
    state.

    Returns:
        dict with shots, outcomes seen, total variation distance, worst
        per-outcome deviation in binomial sigmas, passed, and the raw counts
    """
    counts = readout_distribution(circuit, shots=shots, seed=seed, progress=progress)
    probabilities = {
        key: p for key, p in born_probabilities(run_gate_model(circuit)).items()
        if p > config.IMPOSSIBLE_BRANCH_P
    }
    deviation = max_binomial_deviation(counts, probabilities, shots)
    return {
        "shots": shots,
        "outcomes": len(counts),
        "tvd": total_variation_distance(counts, probabilities),
        "max_sigma": deviation,
        "passed": deviation <= n_sigma,
        "counts": counts,
    }


RANDOM_COLUMNS = ["circuit", "rows", "layers", "rounds", "seed", "fidelity", "passed"]


def verify_random_circuits(n_circuits=config.RANDOM_CIRCUITS, seed=config.RANDOM_SEED,
                           max_rows=config.RANDOM_CIRCUIT_MAX_ROWS,
                           max_layers=config.RANDOM_CIRCUIT_MAX_LAYERS,
                           progress=False, log_file=None):
    """
    One streamed run per random circuit, compared with the gate model.

    Returns:
        DataFrame with circuit index, rows, layers, rounds, run seed, fidelity, passed
    """
    rng = np.random.default_rng(seed)
    rows = []
    for index in tqdm(range(n_circuits), desc="Circuits", disable=not progress):
        circuit = random_circuit(rng, max_rows=max_rows, max_layers=max_layers)
        run_seed = int(rng.integers(2 ** 32))
        result = simulate(circuit, seed=run_seed)
        rows.append({
            "circuit": index,
            "rows": circuit.n_rows,
            "layers": len(circuit.layers),
            "rounds": len(result.trace) // circuit.n_rows,
            "seed": run_seed,
            "fidelity": result.fidelity,
            "passed": result.passed,
        })
        if not result.passed and log_file is not None:
            log_file.write(f"random circuit {index} (seed {run_seed}): fidelity {result.fidelity:.12f}\n")
            log_file.write(format_circuit(circuit))
            log_file.flush()
    return pd.DataFrame(rows, columns=RANDOM_COLUMNS)
