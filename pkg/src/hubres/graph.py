"""Simple undirected graphs, graph6 / edge-list ingestion and structural statistics.

Vertices are dense 0-based integers.  A :class:`Graph` is immutable once
built: adjacency and degree arrays are marked read-only so that instances
can be shared freely between sweep workers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np


class GraphError(ValueError):
    """Raised when a graph violates the simple, isolated-vertex-free model."""


class DisconnectedGraphError(GraphError):
    """Raised by operations that are only defined on connected graphs."""


class ParseError(ValueError):
    """Raised on malformed graph6 tokens or edge-list text."""


GRAPH6_MAX_N = 258047


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph without isolated vertices.

    Parameters
    ----------
    n : int
        Number of vertices (``n >= 2``).
    edges : iterable of (int, int)
        Unordered vertex pairs.  Each pair is stored as ``(u, v)`` with
        ``u < v`` and the tuple is kept sorted.
    """

    n: int
    edges: tuple = field(default=())

    def __post_init__(self):
        n = int(self.n)
        if n < 2:
            raise GraphError(f"need at least 2 vertices, got n={n}")
        normalized = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            normalized.append((u, v) if u < v else (v, u))
        normalized.sort()
        for a, b in zip(normalized, normalized[1:]):
            if a == b:
                raise GraphError(f"multi-edge {a}")
        adj = np.zeros((n, n), dtype=np.int8)
        if normalized:
            e = np.asarray(normalized)
            adj[e[:, 0], e[:, 1]] = 1
            adj[e[:, 1], e[:, 0]] = 1
        deg = adj.sum(axis=1).astype(np.int64)
        isolated = np.flatnonzero(deg == 0)
        if isolated.size:
            raise GraphError(f"isolated vertices not allowed: {isolated.tolist()}")
        adj.setflags(write=False)
        deg.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_deg", deg)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only symmetric 0/1 ``int8`` adjacency matrix."""
        return self._adj

    @property
    def degrees(self) -> np.ndarray:
        return self._deg

    @cached_property
    def neighbors(self) -> tuple:
        return tuple(tuple(np.flatnonzero(row).tolist()) for row in self._adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def is_regular(self) -> bool:
        return bool(np.all(self._deg == self._deg[0]))

    def is_connected(self) -> bool:
        return connected_components(self)[0] == 1

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced by ``vertices``, relabelled 0.. in sorted order."""
        keep = sorted(set(int(v) for v in vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), edges)

    def relabel(self, perm) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for v in range(n) for u in range(v)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Star with centre 0 and ``leaves`` pendant vertices."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite_graph(p: int, q: int) -> Graph:
    return Graph(p + q, [(u, p + v) for u in range(p) for v in range(q)])


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _graph6_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise ParseError("empty graph6 token")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) < 4:
        raise ParseError("truncated graph6 size field")
    if data[1] == 126:
        raise ParseError("graph6 sizes above 258047 are not supported")
    n = 0
    for b in data[1:4]:
        n = (n << 6) | (b - 63)
    return n, 4


def parse_graph6(text) -> Graph:
    """Decode one graph6 token.

    The upper triangle is read column by column, ``x(0,1), x(0,2), x(1,2),
    x(0,3), ...``, six bits per byte, most significant bit first.  Trailing
    padding bits must be zero.

    Examples
    --------
    >>> parse_graph6("Bg").edges
    ((0, 1), (1, 2))
    """
    if isinstance(text, str):
        text = text.strip()
        if text.startswith(">>graph6<<"):
            text = text[len(">>graph6<<"):]
        try:
            data = text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise ParseError(f"non-ASCII character in graph6 token: {exc}") from None
    else:
        data = bytes(text).strip()
    for i, b in enumerate(data):
        if b < 63 or b > 126:
            raise ParseError(f"malformed graph6 byte {b!r} at offset {i}")
    n, offset = _graph6_size(data)
    if n < 2:
        raise ParseError(f"graph6 token encodes n={n}; at least 2 vertices required")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[offset:]
    if len(body) < nbytes:
        raise ParseError(f"truncated graph6 bit stream: need {nbytes} bytes, got {len(body)}")
    if len(body) > nbytes:
        raise ParseError(f"trailing bytes after graph6 bit stream ({len(body) - nbytes} extra)")
    vals = np.frombuffer(body, dtype=np.uint8) - 63
    bits = np.unpackbits(vals[:, None], axis=1)[:, 2:].ravel()
    if bits[nbits:].any():
        raise ParseError("nonzero graph6 padding bits")
    edges = []
    p = 0
    for j in range(1, n):
        col = bits[p:p + j]
        edges.extend((int(i), j) for i in np.flatnonzero(col))
        p += j
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def graph6_bits(g: Graph) -> np.ndarray:
    """Upper-triangle bits of ``g`` in graph6 (column-major) order."""
    rows, cols = _triu_colmajor(g.n)
    return g.adjacency[rows, cols].astype(np.uint8)


def write_graph6(g: Graph) -> str:
    n = g.n
    if n > GRAPH6_MAX_N:
        raise GraphError(f"graph6 writer supports n <= {GRAPH6_MAX_N}, got {n}")
    if n <= 62:
        head = bytes([n + 63])
    else:
        head = bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    bits = graph6_bits(g)
    pad = (-len(bits)) % 6
    bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 6)
    weights = np.array([32, 16, 8, 4, 2, 1], dtype=np.uint8)
    body = (bits @ weights + 63).astype(np.uint8).tobytes() if len(bits) else b""
    return (head + body).decode("ascii")


def _triu_colmajor(n: int) -> tuple[np.ndarray, np.ndarray]:
    rows = [i for j in range(1, n) for i in range(j)]
    cols = [j for j in range(1, n) for _ in range(j)]
    return np.array(rows, dtype=np.intp), np.array(cols, dtype=np.intp)


# ---------------------------------------------------------------------------
# edge lists
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` lines; ``#`` starts a comment.

    Duplicate and reversed lines collapse into one edge.  The vertex set is
    ``0..max_id``; ids that never occur in an edge are rejected as isolated
    vertices.
    """
    pairs = set()
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected exactly two vertex ids, got {raw!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex id in {raw!r}") from None
        if u < 0 or v < 0:
            raise ParseError(f"line {lineno}: negative vertex id in {raw!r}")
        if u == v:
            raise ParseError(f"line {lineno}: self-loop at vertex {u}")
        pairs.add((min(u, v), max(u, v)))
        max_id = max(max_id, u, v)
    if not pairs:
        raise ParseError("edge list contains no edges")
    try:
        return Graph(max_id + 1, sorted(pairs))
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def write_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def connected_components(g: Graph) -> tuple[int, np.ndarray]:
    """Breadth-first component labelling.

    Returns
    -------
    count : int
    labels : ndarray of int
        ``labels[v]`` is the index of the component containing ``v``;
        components are numbered in order of their smallest vertex.
    """
    labels = np.full(g.n, -1, dtype=np.int64)
    nbrs = g.neighbors
    count = 0
    for s in range(g.n):
        if labels[s] >= 0:
            continue
        labels[s] = count
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                if labels[w] < 0:
                    labels[w] = count
                    queue.append(w)
        count += 1
    return count, labels


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component (ties: smallest vertex first)."""
    count, labels = connected_components(g)
    if count == 1:
        return g
    sizes = np.bincount(labels)
    return g.induced(np.flatnonzero(labels == int(np.argmax(sizes))))


def _require_connected(g: Graph, what: str):
    if not g.is_connected():
        raise DisconnectedGraphError(f"{what} requires a connected graph")


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    _require_connected(g, "diameter")
    return int(max(bfs_distances(g, s).max() for s in range(g.n)))


def _max_flow_unit(nbrs, n: int, s: int, t: int, limit: int) -> int:
    # Edmonds-Karp on unit capacities; each undirected edge is a pair of
    # opposite arcs of capacity 1.  Stops once ``limit`` units are routed.
    flow = {}
    total = 0
    while total < limit:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] < 0:
            u = queue.popleft()
            for w in nbrs[u]:
                if parent[w] < 0 and flow.get((u, w), 0) < 1:
                    parent[w] = u
                    queue.append(w)
        if parent[t] < 0:
            break
        v = t
        while v != s:
            u = parent[v]
            flow[(u, v)] = flow.get((u, v), 0) + 1
            flow[(v, u)] = flow.get((v, u), 0) - 1
            v = u
        total += 1
    return total


def edge_connectivity(g: Graph) -> int:
    """Minimum number of edges whose removal disconnects ``g``.

    Computed as ``min_t maxflow(0, t)`` over unit capacities; every
    minimum cut separates vertex 0 from some ``t``.
    """
    _require_connected(g, "edge connectivity")
    nbrs = g.neighbors
    best = int(g.degrees.min())
    for t in range(1, g.n):
        best = min(best, _max_flow_unit(nbrs, g.n, 0, t, best))
    return best


def triangle_counts(g: Graph) -> np.ndarray:
    a = g.adjacency.astype(np.int64)
    return np.einsum("ij,jk,ki->i", a, a, a) // 2


@dataclass(frozen=True)
class GraphStats:
    """Degree and connectivity statistics used by the trace and eigenvalue bounds.

    ``diameter`` and ``edge_connectivity`` are ``None`` for disconnected graphs.
    """

    n: int
    m: int
    degrees: tuple
    delta: int
    Delta: int
    Delta2: int
    zagreb: int
    nbr_min_degree: tuple
    nbr_max_degree: tuple
    nbr_degree_sum: tuple
    triangles: tuple
    components: int
    diameter: Optional[int]
    edge_connectivity: Optional[int]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "degrees": list(self.degrees),
            "delta": self.delta,
            "Delta": self.Delta,
            "Delta2": self.Delta2,
            "zagreb": self.zagreb,
            "nbr_min_degree": list(self.nbr_min_degree),
            "nbr_max_degree": list(self.nbr_max_degree),
            "triangles": list(self.triangles),
            "components": self.components,
            "diameter": self.diameter,
            "edge_connectivity": self.edge_connectivity,
        }


def graph_stats(g: Graph, *, connectivity: bool = True) -> GraphStats:
    """Collect :class:`GraphStats` for ``g``.

    ``Delta2`` is the second entry of the non-increasing degree sequence, so
    it equals ``Delta`` whenever the maximum degree is attained twice.  Pass
    ``connectivity=False`` to skip the flow computation on large inputs.
    """
    k = g.degrees
    ordered = np.sort(k)[::-1]
    nbr_min, nbr_max, nbr_sum = [], [], []
    for v in range(g.n):
        kn = k[list(g.neighbors[v])]
        nbr_min.append(int(kn.min()))
        nbr_max.append(int(kn.max()))
        nbr_sum.append(int(kn.sum()))
    count, _ = connected_components(g)
    connected = count == 1
    return GraphStats(
        n=g.n,
        m=g.m,
        degrees=tuple(int(x) for x in k),
        delta=int(k.min()),
        Delta=int(k.max()),
        Delta2=int(ordered[1]),
        zagreb=int((k * k).sum()),
        nbr_min_degree=tuple(nbr_min),
        nbr_max_degree=tuple(nbr_max),
        nbr_degree_sum=tuple(nbr_sum),
        triangles=tuple(int(t) for t in triangle_counts(g)),
        components=count,
        diameter=diameter(g) if connected else None,
        edge_connectivity=edge_connectivity(g) if connected and connectivity else None,
    )
