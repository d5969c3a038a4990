"""
Stabilizer checks for the two-row CNOT cluster.

The cluster has fourteen qubits: control chain 0-1-2-3-4-5-R, target chain
6-7-8-9-10-11-S and one vertical edge between the chains. Qubits 0 and 6
carry the input, R and S the output. With every cluster qubit in |+> and a
CZ per edge, each correlation operator K_a = X_a prod_{b~a} Z_b fixes the
state, and four products of them pin down the CNOT action.
"""
from dataclasses import dataclass

import networkx as nx
import numpy as np
import pandas as pd
from tqdm import tqdm

import config
from utils import statevector as sv
from utils.exceptions import ResourceLimitError
from utils.patterns import ByproductPair, cnot_byproduct
from utils.pauli import PauliString, product

CONTROL_CHAIN = (0, 1, 2, 3, 4, 5, "R")
TARGET_CHAIN = (6, 7, 8, 9, 10, 11, "S")
VERTEX_ORDER = CONTROL_CHAIN + TARGET_CHAIN
IN_VERTICES = (0, 6)
OUT_VERTICES = ("R", "S")
MEASURED = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11)

# Measurement basis of each measured qubit, as read off the product equations
BASES = {q: ("Y" if q in (1, 2, 4, 5) else "X") for q in MEASURED}
BASIS_ANGLE = {"X": 0.0, "Y": np.pi / 2}

CNOT_LINK_COLUMN = 3


class ClusterGraph:
    """Undirected graph on labelled vertices with a fixed qubit order."""

    def __init__(self, vertices, edges=()):
        self.graph = nx.Graph()
        self.graph.add_nodes_from(vertices)
        for a, b in edges:
            self.add_edge(a, b)

    def add_edge(self, a, b):
        if a == b:
            raise ValueError(f"self-loop on vertex {a!r}")
        for v in (a, b):
            if v not in self.graph:
                raise ValueError(f"unknown vertex {v!r}")
        self.graph.add_edge(a, b)

    @property
    def vertices(self):
        return list(self.graph.nodes)

    @property
    def edges(self):
        return [tuple(e) for e in self.graph.edges]

    def index(self, vertex):
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise ValueError(f"unknown vertex {vertex!r}") from None

    def neighbours(self, vertex):
        if vertex not in self.graph:
            raise ValueError(f"unknown vertex {vertex!r}")
        return list(self.graph.neighbors(vertex))

    def __len__(self):
        return self.graph.number_of_nodes()


def cnot_graph(link_column=CNOT_LINK_COLUMN):
    """
    The two 7-chains plus one vertical edge at `link_column` (0..6; 6 joins
    R and S).
    """
    if not 0 <= link_column < len(CONTROL_CHAIN):
        raise ValueError(f"link column must be 0..{len(CONTROL_CHAIN) - 1}, got {link_column}")
    edges = list(zip(CONTROL_CHAIN, CONTROL_CHAIN[1:])) + list(zip(TARGET_CHAIN, TARGET_CHAIN[1:]))
    edges.append((CONTROL_CHAIN[link_column], TARGET_CHAIN[link_column]))
    return ClusterGraph(VERTEX_ORDER, edges)


def build_cluster(graph, input_state=None, max_vertices=config.VERIFIER_MAX_VERTICES):
    """
    |+> on every vertex (or `input_state` on the IN pair), then CZ per edge.

    Args:
        input_state: optional 2-qubit StateVector for vertices (0, 6), qubit 0 first
    """
    n = len(graph)
    if n > max_vertices:
        raise ResourceLimitError(n, max_vertices, what="vertices")
    if input_state is None:
        state = sv.new_plus_state(n)
    else:
        if input_state.n_qubits != 2:
            raise ValueError(f"input state must have 2 qubits, got {input_state.n_qubits}")
        inputs = [graph.index(v) for v in IN_VERTICES]
        rest = [i for i in range(n) if i not in inputs]
        joint = sv.kron(input_state, sv.new_plus_state(n - 2))
        # axes of `joint` are inputs followed by rest; reorder to graph order
        psi = joint.tensor()
        order = inputs + rest
        psi = np.transpose(psi, np.argsort(order))
        state = sv.StateVector(n, np.ascontiguousarray(psi).reshape(-1))
    for a, b in graph.edges:
        state = sv.apply_cz(state, graph.index(a), graph.index(b))
    return state


def correlation_operator(graph, vertex):
    """K_a: X on the vertex, Z on each neighbour."""
    terms = {graph.index(vertex): "X"}
    for b in graph.neighbours(vertex):
        terms[graph.index(b)] = "Z"
    return PauliString.from_terms(len(graph), terms)


def _pauli(graph, terms, phase=0):
    return PauliString.from_terms(len(graph), {graph.index(v): p for v, p in terms.items()}, phase)


@dataclass(frozen=True)
class CorrelationEquation:
    name: str
    factors: tuple        # vertices whose K operators are multiplied, left to right
    target: dict          # vertex -> Pauli letter of the right-hand side
    sign: int             # +1 or -1


EQUATIONS = (
    CorrelationEquation(
        "E1", (0, 2, 3, 4, "R", 10, "S"),
        {0: "X", 2: "Y", 3: "X", 4: "Y", "R": "X", 10: "X", "S": "X"}, -1,
    ),
    CorrelationEquation(
        "E2", (1, 2, 4, 5),
        {0: "Z", 1: "Y", 2: "Y", 4: "Y", 5: "Y", "R": "Z"}, +1,
    ),
    CorrelationEquation(
        "E3", (6, 8, 10, "S"),
        {6: "X", 8: "X", 10: "X", "S": "X"}, +1,
    ),
    CorrelationEquation(
        "E4", (4, 5, 7, 9, 11),
        {4: "Y", 5: "Y", "R": "Z", 6: "Z", 7: "X", 9: "X", 11: "X", "S": "Z"}, +1,
    ),
)


def target_operator(graph, equation):
    return _pauli(graph, equation.target, 0 if equation.sign > 0 else 2)


def check_correl_products(graph=None, tol=config.EIGEN_TOL):
    """
    Multiply the K operators of each product equation and compare with its
    stated right-hand side; also evaluate that right-hand side on the
    cluster state, which must give +1.

    Returns:
        DataFrame, one row per equation: product, target, matches,
        expectation, passed
    """
    graph = graph or cnot_graph()
    state = build_cluster(graph)
    names = graph.vertices
    rows = []
    for eq in EQUATIONS:
        prod = product(correlation_operator(graph, v) for v in eq.factors)
        target = target_operator(graph, eq)
        value = sv.expectation(state, target)
        matches = prod == target
        rows.append({
            "equation": eq.name,
            "product": prod.label(names),
            "target": target.label(names),
            "matches": matches,
            "expectation": value,
            "passed": bool(matches and abs(value - 1.0) < tol),
        })
    return pd.DataFrame(rows, columns=["equation", "product", "target", "matches", "expectation", "passed"])


def stabilizer_expectations(graph=None):
    """<K_a> on the all-|+> cluster for every vertex."""
    graph = graph or cnot_graph()
    state = build_cluster(graph)
    return {v: sv.expectation(state, correlation_operator(graph, v)) for v in graph.vertices}


def link_column_sweep(tol=config.EIGEN_TOL):
    """Which single vertical-edge placements satisfy all four equations."""
    rows = []
    for column in range(len(CONTROL_CHAIN)):
        report = check_correl_products(cnot_graph(column), tol)
        rows.append({
            "link_column": column,
            "equations_passed": int(report["passed"].sum()),
            "all_passed": bool(report["passed"].all()),
        })
    return pd.DataFrame(rows)


# ----------------------------
# Branch enumeration
# ----------------------------

def measured_basis_tensor(graph, input_state):
    """
    Cluster state with every measured qubit rotated so that outcome m of its
    basis maps to |m>; indexing the tensor by the outcomes leaves the
    unnormalised OUT state.
    """
    state = build_cluster(graph, input_state)
    for q in MEASURED:
        state = sv.rotate_to_equator_basis(state, graph.index(q), BASIS_ANGLE[BASES[q]])
    return state.tensor()


def ideal_output(input_state, bc, bt):
    """Z_C^zc X_C^xc Z_T^zt X_T^xt CNOT |input>."""
    out = sv.apply_cnot(input_state, 0, 1)
    for q, b in ((0, bc), (1, bt)):
        if b.x:
            out = sv.apply_x(out, q)
        if b.z:
            out = sv.apply_z(out, q)
    return out


def matching_byproducts(out_state, input_state, tol=config.FIDELITY_TOL):
    """All (x_c, z_c, x_t, z_t) whose ideal output equals `out_state` up to phase."""
    matches = []
    for bits in range(16):
        xc, zc, xt, zt = (bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1
        ideal = ideal_output(input_state, ByproductPair(xc, zc), ByproductPair(xt, zt))
        if sv.fidelity_up_to_phase(out_state, ideal) >= 1.0 - tol:
            matches.append((xc, zc, xt, zt))
    return matches


def branch_bits(branch):
    """Outcomes m0..m11 of branch index (m0 is the most significant bit)."""
    return [(branch >> (11 - i)) & 1 for i in range(12)]


def enumerate_branches(input_state, branches=None, graph=None, seed=config.RANDOM_SEED,
                       tol=config.FIDELITY_TOL, progress=False):
    """
    Check OUT = B CNOT IN on every measurement branch.

    Args:
        input_state: 2-qubit StateVector on (control, target)
        branches: None for all 4096, an int for a seeded random sample of
            that many, or an explicit list of branch indices

    Returns:
        (DataFrame with one row per evaluated branch, dict summary); the
        `matching` column lists, for failing branches only, the x_c z_c x_t z_t
        patterns that do reproduce the output (empty if none)
    """
    graph = graph or cnot_graph()
    if branches is None:
        indices = list(range(4096))
    elif isinstance(branches, (int, np.integer)):
        rng = np.random.default_rng(seed)
        indices = sorted(int(i) for i in rng.choice(4096, size=min(int(branches), 4096), replace=False))
    else:
        indices = [int(i) for i in branches]

    psi = measured_basis_tensor(graph, input_state)
    axes = [graph.index(q) for q in MEASURED]
    out_axes = [graph.index(v) for v in OUT_VERTICES]
    zero = ByproductPair()

    rows = []
    skipped = 0
    for branch in tqdm(indices, desc="Branches", disable=not progress):
        m = branch_bits(branch)
        index = [slice(None)] * psi.ndim
        for axis, bit in zip(axes, m):
            index[axis] = bit
        out = psi[tuple(index)]
        # remaining axes keep graph order; put R before S
        if out_axes[0] > out_axes[1]:
            out = out.T
        amps = np.ascontiguousarray(out).reshape(-1)
        p = float(np.sum(np.abs(amps) ** 2))
        if p < config.IMPOSSIBLE_BRANCH_P:
            skipped += 1
            continue
        out_state = sv.StateVector(2, amps / np.sqrt(p))
        bc, bt = cnot_byproduct(zero, zero, m)
        fid = sv.fidelity_up_to_phase(out_state, ideal_output(input_state, bc, bt))
        passed = fid >= 1.0 - tol
        # on a failing branch, record which byproduct bits would explain the output
        matching = "" if passed else ",".join(
            "".join(map(str, bits)) for bits in matching_byproducts(out_state, input_state, tol)
        )
        rows.append({
            "branch": branch,
            "m": "".join(map(str, m)),
            "probability": p,
            "x_c": bc.x, "z_c": bc.z, "x_t": bt.x, "z_t": bt.z,
            "fidelity": fid,
            "passed": passed,
            "matching": matching,
        })
    df = pd.DataFrame(rows, columns=["branch", "m", "probability", "x_c", "z_c", "x_t", "z_t",
                                     "fidelity", "passed", "matching"])
    summary = {
        "evaluated": len(df),
        "skipped": skipped,
        "passed": int(df["passed"].sum()) if len(df) else 0,
        "probability_sum": float(df["probability"].sum()) if len(df) else 0.0,
        "min_fidelity": float(df["fidelity"].min()) if len(df) else 1.0,
    }
    return df, summary
