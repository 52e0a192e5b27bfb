import networkx as nx
import numpy as np
import pytest

from hubres.graph import DisconnectedGraphError, Graph, complete_graph, cycle_graph, path_graph
from hubres.laplacian import ALPHAS, build_laplacian
from hubres.resistance import (
    conjecture_check,
    group_inverse_residual,
    kirchhoff_bounds_report,
    kirchhoff_consistency,
    kirchhoff_index,
    kirchhoff_triple,
    metric_properties_report,
    resistance_bounds_survey,
    resistance_matrix,
)
from hubres.spectral import PseudoinverseKind

from conftest import connected_graphs, random_connected_graph

KINDS = list(PseudoinverseKind)


def oracle_group_inverse(g, a):
    """Group inverse from a rank-one completion, independent of any eigensolver."""
    L = build_laplacian(g, a).L
    y = g.degrees.astype(float) ** (-2 * int(a))
    P = np.outer(np.ones(g.n), y) / y.sum()
    return np.linalg.inv(L + P) - P


def omega_from(G):
    d = np.diag(G)
    return d[:, None] + d[None, :] - G - G.T


def test_p3_attracting_group_inverse():
    om = resistance_matrix(path_graph(3), -1).omega
    assert om[0, 1] == pytest.approx(0.75, abs=1e-10)
    assert om[1, 2] == pytest.approx(0.75, abs=1e-10)
    assert om[0, 2] == pytest.approx(1.0, abs=1e-10)


def test_p3_standard_series():
    for kind in KINDS:
        om = resistance_matrix(path_graph(3), 0, kind).omega
        np.testing.assert_allclose(om, [[0, 1, 2], [1, 0, 1], [2, 1, 0]], atol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_complete_graph_resistance(n):
    for a in ALPHAS:
        for kind in (PseudoinverseKind.GROUP_INVERSE, PseudoinverseKind.MOORE_PENROSE):
            om = resistance_matrix(complete_graph(n), a, kind).omega
            off = om[~np.eye(n, dtype=bool)]
            np.testing.assert_allclose(off, 2.0 / n, atol=1e-12)


def test_corollary_kind_p3_pair_sum():
    # unnormalised K^a U rows: pair sum 2 against n * sum 1/rho = 2.5
    rm = resistance_matrix(path_graph(3), -1, PseudoinverseKind.COROLLARY)
    assert rm.pair_sum() == pytest.approx(2.0, abs=1e-10)
    assert resistance_matrix(path_graph(3), -1).pair_sum() == pytest.approx(2.5, abs=1e-10)


def test_group_inverse_kind_against_rank_one_oracle():
    rng = np.random.default_rng(21)
    for _ in range(100):
        g = random_connected_graph(rng, int(rng.integers(2, 14)))
        for a in ALPHAS:
            om = resistance_matrix(g, a).omega
            np.testing.assert_allclose(om, omega_from(oracle_group_inverse(g, a)), atol=1e-9)


def test_moore_penrose_kind_against_numpy():
    rng = np.random.default_rng(22)
    for _ in range(30):
        g = random_connected_graph(rng, int(rng.integers(2, 12)))
        for a in ALPHAS:
            om = resistance_matrix(g, a, PseudoinverseKind.MOORE_PENROSE).omega
            ref = omega_from(np.linalg.pinv(build_laplacian(g, a).L))
            np.fill_diagonal(ref, 0.0)
            np.testing.assert_allclose(om, ref, atol=1e-9)


def test_standard_resistance_against_networkx():
    rng = np.random.default_rng(23)
    for _ in range(20):
        g = random_connected_graph(rng, int(rng.integers(2, 10)))
        G = nx.Graph(list(g.edges))
        om = resistance_matrix(g, 0).omega
        for v in range(g.n):
            for w in range(v + 1, g.n):
                assert om[v, w] == pytest.approx(nx.resistance_distance(G, v, w), rel=1e-9)


def test_kinds_coincide_for_standard_bias():
    rng = np.random.default_rng(26)
    for _ in range(20):
        g = random_connected_graph(rng, int(rng.integers(2, 12)))
        ref = resistance_matrix(g, 0).omega
        for kind in KINDS:
            np.testing.assert_allclose(resistance_matrix(g, 0, kind).omega, ref, atol=1e-9)


@pytest.mark.parametrize("n", range(3, 8))
def test_kinds_on_regular_graphs(n):
    for g in connected_graphs(n):
        if not g.is_regular():
            continue
        d = float(g.degrees[0])
        ref = resistance_matrix(g, 0).omega
        for a in ALPHAS:
            for kind in (PseudoinverseKind.GROUP_INVERSE, PseudoinverseKind.MOORE_PENROSE):
                np.testing.assert_allclose(resistance_matrix(g, a, kind).omega, ref, atol=1e-9)
            # K^a U = d^a U on a d-regular graph
            cor = resistance_matrix(g, a, PseudoinverseKind.COROLLARY).omega
            np.testing.assert_allclose(cor, d ** (2 * int(a)) * ref, rtol=1e-9, atol=1e-9)


def test_resistance_csv():
    text = resistance_matrix(path_graph(3), -1).to_csv()
    lines = text.splitlines()
    assert lines[0] == "row,col,value"
    assert lines[3] == "0,2,1"
    assert len(lines) == 10


def test_resistance_rejects_disconnected():
    g = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError):
        resistance_matrix(g, 0)
    with pytest.raises(DisconnectedGraphError):
        kirchhoff_index(g, 1)


def test_kirchhoff_examples():
    t = kirchhoff_triple(path_graph(3))
    assert t.as_tuple() == pytest.approx((20 / 3, 4.0, 2.5), abs=1e-10)
    assert t[1] == t.R_repelling and t[-1] == t.R_attracting
    for n in range(2, 9):
        for a in ALPHAS:
            assert kirchhoff_index(complete_graph(n), a) == pytest.approx(n - 1, rel=1e-12)


def test_kirchhoff_bounds_examples():
    rows = {r.bound_id: r for r in kirchhoff_bounds_report(complete_graph(8))}
    r = rows["kirchhoff_complete[0]"]
    assert r.value == pytest.approx(7.0) and r.tight
    rows = {r.bound_id: r for r in kirchhoff_bounds_report(path_graph(3))}
    assert rows["kirchhoff_attracting_degree[-1]"].lhs == pytest.approx(1.5)
    assert rows["kirchhoff_attracting_degree[-1]"].value == pytest.approx(2.5)
    assert rows["kirchhoff_repelling_degree[1]"].lhs == pytest.approx(1.5)
    assert all(r.passed for r in rows.values())


def test_kirchhoff_repelling_degree_refuted_on_complete_graphs():
    for n in range(2, 8):
        rows = {r.bound_id: r for r in kirchhoff_bounds_report(complete_graph(n))}
        r = rows["kirchhoff_repelling_degree[1]"]
        # the bound equals n while R_1 = n - 1
        assert r.lhs == pytest.approx(n) and not r.passed


def test_kirchhoff_pair_sum_matches_spectrum():
    rng = np.random.default_rng(24)
    for _ in range(100):
        g = random_connected_graph(rng, int(rng.integers(2, 16)))
        for a in ALPHAS:
            pair = resistance_matrix(g, a).pair_sum()
            assert pair == pytest.approx(kirchhoff_index(g, a), rel=1e-9)
            assert kirchhoff_consistency(g, a) <= 1e-9
            assert group_inverse_residual(g, a) <= 1e-10


def test_survey_examples():
    s = resistance_bounds_survey(complete_graph(5), 1)
    assert s.lower == pytest.approx(0.4) and s.upper == pytest.approx(0.4)
    assert s.violations == 0 and s.pairs == 10
    s = resistance_bounds_survey(path_graph(3), 0)
    assert (s.lower, s.upper) == pytest.approx((2 / 3, 2.0))
    assert s.violations == 0
    s = resistance_bounds_survey(path_graph(3), -1)
    assert (s.lower, s.upper) == pytest.approx((2 / 3, 1.0))
    assert s.violations == 0
    assert s.to_dict()["violations"] == 0


def test_metric_report_standard_always_passes():
    rng = np.random.default_rng(25)
    for _ in range(30):
        g = random_connected_graph(rng, int(rng.integers(2, 11)))
        assert metric_properties_report(g, 0).all_pass
    for a in ALPHAS:
        assert metric_properties_report(complete_graph(6), a).all_pass


def test_metric_report_detects_violation():
    om = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    rep = metric_properties_report(path_graph(3), 0, omega=om)
    assert rep.triangle == 2 and not rep.all_pass
    assert rep.to_dict()["triangle"] == 2


def test_conjecture_examples():
    rec = conjecture_check(path_graph(3))
    assert rec.ok and not rec.regular
    assert not rec.repelling_eq_standard and not rec.standard_eq_attracting
    rec = conjecture_check(cycle_graph(8))
    assert rec.ok and rec.regular and rec.repelling_eq_standard and rec.standard_eq_attracting
    assert rec.to_dict()["ok"]


@pytest.mark.parametrize("n", range(2, 8))
def test_conjecture_small_graphs(n):
    for g in connected_graphs(n):
        assert conjecture_check(g).ok
