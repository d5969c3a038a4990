import numpy as np
import pytest

import config
from utils import statevector as sv
from utils.exceptions import ResourceLimitError
from utils.patterns import ByproductPair
from utils.verifier import (
    branch_bits,
    build_cluster,
    check_correl_products,
    cnot_graph,
    correlation_operator,
    enumerate_branches,
    ideal_output,
    matching_byproducts,
    stabilizer_expectations,
    link_column_sweep,
)


def test_cnot_graph_shape():
    g = cnot_graph()
    assert len(g) == 14
    assert len(g.edges) == 13
    assert set(g.neighbours(3)) == {2, 4, 9}
    assert set(g.neighbours("R")) == {5}
    with pytest.raises(ValueError):
        cnot_graph(7)
    with pytest.raises(ValueError):
        g.add_edge(1, 1)


def test_correlation_operator_letters():
    g = cnot_graph()
    k = correlation_operator(g, 3)
    support = {g.vertices[q]: p for q, p in k.support().items()}
    assert support == {3: "X", 2: "Z", 4: "Z", 9: "Z"}


def test_cluster_is_stabilised():
    values = stabilizer_expectations()
    assert len(values) == 14
    assert all(v == pytest.approx(1.0, abs=config.EIGEN_TOL) for v in values.values())


def test_cluster_vertex_cap():
    with pytest.raises(ResourceLimitError):
        build_cluster(cnot_graph(), max_vertices=13)


def test_product_equations_hold_at_column_three():
    df = check_correl_products()
    assert list(df["equation"]) == ["E1", "E2", "E3", "E4"]
    assert df["matches"].all()
    assert df["passed"].all()
    assert df["expectation"].to_numpy() == pytest.approx(np.ones(4))
    assert df.loc[0, "target"].startswith("-")


def test_moved_link_breaks_equations():
    df = check_correl_products(cnot_graph(4))
    assert not df.set_index("equation").loc["E4", "passed"]
    assert not df["passed"].all()


def test_column_three_is_the_only_valid_link():
    df = link_column_sweep()
    assert list(df[df["all_passed"]]["link_column"]) == [3]


def test_branch_bits_order():
    assert branch_bits(1 << 11) == [1] + [0] * 11
    assert branch_bits(1) == [0] * 11 + [1]


def test_matching_byproducts_finds_the_applied_pair(rng):
    state = sv.random_state(2, rng)
    out = ideal_output(state, ByproductPair(1, 0), ByproductPair(0, 1))
    assert (1, 0, 0, 1) in matching_byproducts(out, state)


@pytest.mark.parametrize("name", ["plus", "basis", "random"])
def test_sampled_branches_match_byproduct_formula(name, rng):
    state = {
        "plus": sv.new_plus_state(2),
        "basis": sv.basis_state([1, 0]),
        "random": sv.random_state(2, rng),
    }[name]
    df, summary = enumerate_branches(state, branches=64)
    assert summary["evaluated"] + summary["skipped"] == 64
    assert summary["passed"] == summary["evaluated"] > 0
    assert summary["min_fidelity"] >= 1.0 - config.FIDELITY_TOL


def test_explicit_branch_list(rng):
    df, summary = enumerate_branches(sv.random_state(2, rng), branches=[0, 1234, 4095])
    assert list(df["branch"]) == [0, 1234, 4095]
    assert df["passed"].all()
    assert df.loc[0, "m"] == "0" * 12


def test_moved_link_fails_branch_check(rng):
    _, summary = enumerate_branches(sv.random_state(2, rng), branches=64, graph=cnot_graph(4))
    assert summary["passed"] < summary["evaluated"]


@pytest.mark.slow
def test_all_branches(rng):
    df, summary = enumerate_branches(sv.random_state(2, rng))
    assert summary["evaluated"] + summary["skipped"] == 4096
    assert summary["passed"] == summary["evaluated"]
    assert summary["probability_sum"] == pytest.approx(1.0)


def test_matching_column_explains_only_failures(rng):
    state = sv.random_state(2, rng)
    good, _ = enumerate_branches(state, branches=[0, 1234, 4095])
    assert (good["matching"] == "").all()

    bad, _ = enumerate_branches(state, branches=64, graph=cnot_graph(4))
    failing = bad[~bad["passed"]]
    assert len(failing) > 0
    for row in failing.itertuples():
        predicted = f"{row.x_c}{row.z_c}{row.x_t}{row.z_t}"
        patterns = row.matching.split(",") if row.matching else []
        assert all(len(p) == 4 and set(p) <= {"0", "1"} for p in patterns)
        assert predicted not in patterns
    assert (bad[bad["passed"]]["matching"] == "").all()
