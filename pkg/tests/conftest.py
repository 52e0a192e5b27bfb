import functools
import itertools
from pathlib import Path

import numpy as np
import pytest

from hubres.enumeration import enumerate_connected, read_graph6_file
from hubres.graph import Graph

DATA = Path(__file__).parent / "data"
CORPUS8 = DATA / "graphs8.g6"


@functools.lru_cache(maxsize=None)
def connected_graphs(n):
    if n == 8:
        return tuple(read_graph6_file(CORPUS8))
    return tuple(enumerate_connected(n))


def random_connected_graph(rng, n, p=None):
    """Random spanning tree plus independent extra edges."""
    if p is None:
        p = rng.uniform(0.05, 0.9)
    perm = rng.permutation(n)
    edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(0, i)])))) for i in range(1, n)}
    iu = np.triu_indices(n, 1)
    extra = rng.random(len(iu[0])) < p
    edges |= {(int(a), int(b)) for a, b in zip(iu[0][extra], iu[1][extra])}
    return Graph(n, sorted(edges))


def labeled_connected_classes(n):
    """Isomorphism classes of connected labeled graphs by brute force.

    Every labeled graph is encoded with its own row-major pair order and
    reduced to the minimum code over all ``n!`` relabelings.
    """
    pairs = list(itertools.combinations(range(n), 2))
    E = len(pairs)
    codes = np.arange(1 << E, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(E)) & 1
    adj = np.zeros((len(codes), n, n), dtype=bool)
    for e, (i, j) in enumerate(pairs):
        adj[:, i, j] = adj[:, j, i] = bits[:, e].astype(bool)
    # connectivity by repeated squaring of the reachability relation
    reach = adj | np.eye(n, dtype=bool)
    for _ in range(n):
        reach = np.einsum("gij,gjk->gik", reach, reach) > 0
    conn = reach.all(axis=(1, 2))
    bits, adj = bits[conn], adj[conn]
    best = np.full(len(bits), np.iinfo(np.int64).max)
    for perm in itertools.permutations(range(n)):
        code = np.zeros(len(bits), dtype=np.int64)
        for e, (i, j) in enumerate(pairs):
            code |= adj[:, perm[i], perm[j]].astype(np.int64) << e
        best = np.minimum(best, code)
    return int(conn.sum()), len(np.unique(best))


# connected labeled graphs on n vertices (OEIS A001187)
LABELED_CONNECTED = {2: 1, 3: 4, 4: 38, 5: 728, 6: 26704}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
