import numpy as np
import pytest

from hubres.graph import DisconnectedGraphError, Graph, complete_graph, cycle_graph, path_graph, star_graph
from hubres.laplacian import ALPHAS, build_laplacian
from hubres.spectral import (
    biased_spectrum,
    eigen_bounds_report,
    group_inverse,
    moore_penrose,
    normalized_laplacian_spectrum,
    sym_eigen,
)

from conftest import connected_graphs, random_connected_graph


def test_sym_eigen_examples():
    np.testing.assert_allclose(sym_eigen(build_laplacian(complete_graph(3), 1).S).rho,
                               [0, 3, 3], atol=1e-14)
    S1 = [[0.5, -1, 0], [-1, 4, -1], [0, -1, 0.5]]
    np.testing.assert_allclose(sym_eigen(S1).rho, [0, 0.5, 4.5], atol=1e-14)
    Sm1 = [[2, -1, 0], [-1, 1, -1], [0, -1, 2]]
    np.testing.assert_allclose(sym_eigen(Sm1).rho, [0, 2, 3], atol=1e-14)


def test_sym_eigen_methods_agree():
    g = random_connected_graph(np.random.default_rng(2), 15)
    S = build_laplacian(g, 1).S
    np.testing.assert_allclose(sym_eigen(S, method="jacobi").rho, sym_eigen(S, method="lapack").rho,
                               atol=1e-12)
    with pytest.raises(ValueError):
        sym_eigen(S, method="qr")


def test_p3_biased_spectra():
    g = path_graph(3)
    np.testing.assert_allclose(biased_spectrum(g, 1).rho, [0, 0.5, 4.5], atol=1e-14)
    np.testing.assert_allclose(biased_spectrum(g, -1).rho, [0, 2, 3], atol=1e-14)
    np.testing.assert_allclose(biased_spectrum(g, 0).rho, [0, 1, 3], atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_complete_graph_spectrum(n):
    for a in ALPHAS:
        sp = biased_spectrum(complete_graph(n), a)
        np.testing.assert_allclose(sp.rho, [0] + [n] * (n - 1), atol=1e-12)


def test_psi_are_eigenvectors_of_biased_laplacian():
    rng = np.random.default_rng(4)
    for _ in range(20):
        g = random_connected_graph(rng, int(rng.integers(3, 12)))
        for a in ALPHAS:
            b = build_laplacian(g, a)
            sp = biased_spectrum(b)
            np.testing.assert_allclose(b.L @ sp.psi, sp.psi * sp.rho[None, :], atol=1e-10)


def test_spectra_against_numpy_oracle():
    rng = np.random.default_rng(9)
    for _ in range(100):
        g = random_connected_graph(rng, int(rng.integers(2, 20)))
        for a in ALPHAS:
            b = build_laplacian(g, a)
            ref = np.sort(np.linalg.eigvals(b.L).real)
            np.testing.assert_allclose(biased_spectrum(b).rho, ref, atol=1e-9)


def test_zero_count_matches_components():
    g = Graph(7, [(0, 1), (1, 2), (3, 4), (5, 6)])
    for a in ALPHAS:
        assert biased_spectrum(g, a).zero_count == 3
    assert biased_spectrum(path_graph(4), 1).zero_count == 1


def test_group_inverse_p3_attracting():
    g = path_graph(3)
    b = build_laplacian(g, -1)
    Sp = np.array([[13, -4, -5], [-4, 4, -4], [-5, -4, 13]]) / 36
    np.testing.assert_allclose(biased_spectrum(b).pinv(), Sp, atol=1e-14)
    k = g.degrees.astype(float)
    expect = np.diag(k ** -1) @ Sp @ np.diag(k)
    np.testing.assert_allclose(group_inverse(b), expect, atol=1e-14)


@pytest.mark.parametrize("n", [3, 6])
def test_group_inverse_complete_graph(n):
    G = group_inverse(build_laplacian(complete_graph(n), 1))
    np.testing.assert_allclose(G, (np.eye(n) - 1.0 / n) / n, atol=1e-14)


def test_group_inverse_identities():
    rng = np.random.default_rng(12)
    for _ in range(50):
        g = random_connected_graph(rng, int(rng.integers(2, 16)))
        for a in ALPHAS:
            b = build_laplacian(g, a)
            sp = biased_spectrum(b)
            L, G = b.L, group_inverse(b, sp)
            s = np.linalg.norm(L)
            assert np.linalg.norm(L @ G @ L - L) <= 1e-10 * s
            assert np.linalg.norm(G @ L @ G - G) <= 1e-10 * np.linalg.norm(G)
            assert np.linalg.norm(L @ G - G @ L) <= 1e-10 * s * np.linalg.norm(G)
            assert np.abs(G @ np.ones(g.n)).max() <= 1e-10
            assert abs(np.ones(g.n) @ G @ np.ones(g.n)) <= 1e-9
            assert np.trace(G) == pytest.approx(sp.reciprocal_sum(), rel=1e-10)


def test_group_inverse_rejects_disconnected():
    b = build_laplacian(Graph(4, [(0, 1), (2, 3)]), 0)
    with pytest.raises(DisconnectedGraphError):
        group_inverse(b)


def test_moore_penrose_examples():
    np.testing.assert_allclose(moore_penrose(np.array([[1.0, -1.0], [-1.0, 1.0]])),
                               [[0.25, -0.25], [-0.25, 0.25]], atol=1e-15)
    np.testing.assert_allclose(moore_penrose(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]), atol=1e-15)


def test_moore_penrose_p3_differs_from_group_inverse():
    b = build_laplacian(path_graph(3), -1)
    L, M = b.L, moore_penrose(b.L)
    assert np.abs(M - group_inverse(b)).max() > 1e-3
    assert np.linalg.norm(L @ M @ L - L) <= 1e-12
    assert np.linalg.norm(M @ L @ M - M) <= 1e-12
    assert np.linalg.norm((L @ M).T - L @ M) <= 1e-12
    assert np.linalg.norm((M @ L).T - M @ L) <= 1e-12
    np.testing.assert_allclose(M, np.linalg.pinv(L), atol=1e-12)


def test_moore_penrose_equals_group_inverse_when_symmetric():
    rng = np.random.default_rng(3)
    for _ in range(10):
        b = build_laplacian(random_connected_graph(rng, 9), 0)
        np.testing.assert_allclose(moore_penrose(b.L), group_inverse(b), atol=1e-12)


def test_normalized_spectrum_examples():
    np.testing.assert_allclose(normalized_laplacian_spectrum(complete_graph(2)).rho, [0, 2], atol=1e-14)
    np.testing.assert_allclose(normalized_laplacian_spectrum(path_graph(3)).rho, [0, 1, 2], atol=1e-14)
    for n in (4, 7):
        np.testing.assert_allclose(normalized_laplacian_spectrum(complete_graph(n)).rho,
                                   [0] + [n / (n - 1)] * (n - 1), atol=1e-13)


def _rows(g, a):
    return {r.bound_id: r for r in eigen_bounds_report(g, a)}


@pytest.mark.parametrize("n", [3, 5, 8])
def test_eigen_bounds_complete_graph(n):
    for a in ALPHAS:
        sp = biased_spectrum(complete_graph(n), a)
        assert sp.algebraic_connectivity == pytest.approx(n) and sp.rho_max == pytest.approx(n)
        assert all(r.passed for r in eigen_bounds_report(complete_graph(n), a))


@pytest.mark.parametrize("k", range(2, 9))
def test_eigen_bounds_star_upper_values(k):
    # star with k+1 leaves: n = k+2, m = k+1, delta = 1, Delta = k+1
    g = star_graph(k + 1)
    for a in ALPHAS:
        rows = _rows(g, a)
        tag = f"[{int(a)}]"
        assert rows["rho2_upper_average" + tag].rhs == pytest.approx(k + 2)
        assert rows["rho2_upper_degree_ratio" + tag].rhs == pytest.approx(2 * k + 2)
        assert rows["rho2_upper_average" + tag].passed
        assert rows["rho2_upper_degree_ratio" + tag].passed


def test_eigen_bounds_p3_repelling():
    rows = _rows(path_graph(3), 1)
    r = rows["rho_max_gershgorin[1]"]
    assert r.value == pytest.approx(4.5) and r.rhs == pytest.approx(8.0)
    assert all(x.passed for x in rows.values())


def test_eigen_bounds_disconnected():
    with pytest.raises(DisconnectedGraphError):
        eigen_bounds_report(Graph(4, [(0, 1), (2, 3)]), 0)


def test_normalized_row_only_for_attracting():
    g = cycle_graph(5)
    assert "rho2_lower_normalized[-1]" in _rows(g, -1)
    assert not any("normalized" in i for i in _rows(g, 1))


def test_refuted_lower_bound_witness_p4():
    rows = _rows(path_graph(4), 1)
    r = rows["rho2_lower_standard[1]"]
    assert not r.passed
    assert r.value == pytest.approx(0.234436, abs=1e-5)
    assert r.lhs == pytest.approx(0.5 * (2 - np.sqrt(2)), rel=1e-12)


@pytest.mark.parametrize("n", range(3, 8))
def test_regular_graphs_share_spectrum_across_alpha(n):
    for g in connected_graphs(n):
        if g.is_regular():
            r0 = biased_spectrum(g, 0).rho
            for a in (1, -1):
                np.testing.assert_allclose(biased_spectrum(g, a).rho, r0, atol=1e-12)
