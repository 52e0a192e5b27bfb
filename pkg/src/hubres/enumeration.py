"""Connected graphs up to isomorphism, corpus sweeps and efficiency classification.

A labelled graph on ``n`` vertices is stored as an integer mask over the
``E = n(n-1)/2`` upper-triangle pairs in graph6 order ``x(0,1), x(0,2),
x(1,2), x(0,3), ...``; the first pair is the most significant bit, so
comparing masks compares the bit strings lexicographically.

Canonical form: among all relabellings whose degree sequence is
non-decreasing, the one with the smallest mask.  Only permutations inside
each degree class need to be searched, and the form is an isomorphism
invariant because the set of admissible relabellings is.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

import numpy as np

from .bounds import REL_TOL, failures
from .graph import Graph, ParseError, _triu_colmajor, graph6_bits, graph_stats, parse_graph6, write_graph6
from .laplacian import ALPHAS, Bias, build_laplacian, hubs_trace, trace_bounds_report
from .randomwalk import relative_efficiency
from .resistance import (
    KirchhoffTriple,
    conjecture_check,
    group_inverse_residual,
    kirchhoff_bounds_report,
    kirchhoff_consistency,
    kirchhoff_index,
)
from .spectral import biased_spectrum, eigen_bounds_report, normalized_laplacian_spectrum

# connected graphs on n unlabelled vertices
KNOWN_COUNTS = {2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}
ENUM_MAX_N = 7
E_SLACK = 1e-9
NEAR_BOUNDARY = 1e-6
# cap on (graphs x permutations) evaluated at once
_CHUNK = 1 << 21


# ---------------------------------------------------------------------------
# mask helpers
# ---------------------------------------------------------------------------

def pair_index(n: int) -> np.ndarray:
    """``P[i, j]``: bit position of pair ``{i, j}`` (``-1`` on the diagonal)."""
    P = -np.ones((n, n), dtype=np.intp)
    b = 0
    for j in range(1, n):
        for i in range(j):
            P[i, j] = P[j, i] = b
            b += 1
    return P


def _weights(E: int) -> np.ndarray:
    return (1 << np.arange(E - 1, -1, -1, dtype=np.int64)).astype(np.int64)


def mask_bits(masks, n: int) -> np.ndarray:
    """Bit matrix ``(len(masks), E)`` with column ``b`` the graph6 bit ``b``."""
    E = n * (n - 1) // 2
    m = np.asarray(masks, dtype=np.int64)
    shifts = np.arange(E - 1, -1, -1, dtype=np.int64)
    return ((m[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def bits_to_masks(bits: np.ndarray) -> np.ndarray:
    return bits.astype(np.int64) @ _weights(bits.shape[1])


def graph_to_mask(g: Graph) -> int:
    return int(bits_to_masks(graph6_bits(g)[None, :])[0])


def mask_to_graph(mask: int, n: int) -> Graph:
    bits = mask_bits([mask], n)[0]
    P = pair_index(n)
    edges = [(i, j) for j in range(1, n) for i in range(j) if bits[P[i, j]]]
    return Graph(n, edges)


def _incidence(n: int) -> np.ndarray:
    """``(E, n)`` 0/1 matrix: endpoints of each pair."""
    P = pair_index(n)
    M = np.zeros((n * (n - 1) // 2, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i != j:
                M[P[i, j], i] = 1
    return M


def _degrees(bits: np.ndarray, n: int) -> np.ndarray:
    return bits.astype(np.int64) @ _incidence(n)


def _connected(bits: np.ndarray, n: int) -> np.ndarray:
    """Vectorised reachability from vertex 0 over per-vertex neighbour bitsets."""
    P = pair_index(n)
    nbr = np.zeros((bits.shape[0], n), dtype=np.int64)
    for v in range(n):
        for u in range(n):
            if u != v:
                nbr[:, v] |= bits[:, P[u, v]].astype(np.int64) << u
    reach = np.ones(bits.shape[0], dtype=np.int64)
    for _ in range(n - 1):
        new = reach.copy()
        for v in range(n):
            on = ((reach >> v) & 1).astype(bool)
            new[on] |= nbr[on, v]
        if np.array_equal(new, reach):
            break
        reach = new
    return reach == (1 << n) - 1


def _class_permutations(degseq) -> np.ndarray:
    """All permutations that preserve a sorted degree sequence, as rows."""
    degseq = list(degseq)
    blocks = []
    start = 0
    for _, grp in itertools.groupby(degseq):
        size = len(list(grp))
        blocks.append(range(start, start + size))
        start += size
    perms = []
    for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perms.append([v for part in parts for v in part])
    return np.array(perms, dtype=np.intp)


def _permuted_sources(perms: np.ndarray, n: int) -> np.ndarray:
    """``IDX[p, b]``: source bit of target bit ``b`` under vertex map ``v -> perms[p, v]``."""
    P = pair_index(n)
    rows, cols = np.nonzero(np.triu(np.ones((n, n), dtype=bool), 1))
    inv = np.argsort(perms, axis=1)
    IDX = np.empty((len(perms), n * (n - 1) // 2), dtype=np.intp)
    tgt = P[rows, cols]
    IDX[:, tgt] = P[inv[:, rows], inv[:, cols]]
    return IDX


def _min_over_perms(bits: np.ndarray, perms: np.ndarray, n: int) -> np.ndarray:
    IDX = _permuted_sources(perms, n)
    w = _weights(bits.shape[1])
    out = np.empty(bits.shape[0], dtype=np.int64)
    step = max(1, _CHUNK // len(perms))
    for s in range(0, bits.shape[0], step):
        chunk = bits[s:s + step].astype(np.int64)
        out[s:s + step] = (chunk[:, IDX] @ w).min(axis=1)
    return out


def _sort_by_degree(bits: np.ndarray, n: int) -> tuple:
    """Relabel every graph so its degree sequence is non-decreasing."""
    deg = _degrees(bits, n)
    order = np.argsort(deg, axis=1, kind="stable")
    P = pair_index(n)
    rows, cols = _triu_colmajor(n)
    src = P[order[:, rows], order[:, cols]]
    new_bits = np.take_along_axis(bits, src, axis=1)
    return new_bits, np.take_along_axis(deg, order, axis=1)


def canonical_masks(masks, n: int) -> np.ndarray:
    """Canonical mask of each labelled graph (see module docstring)."""
    bits = mask_bits(masks, n)
    if bits.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    bits, deg = _sort_by_degree(bits, n)
    out = np.empty(bits.shape[0], dtype=np.int64)
    seqs, inverse = np.unique(deg, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    for s, seq in enumerate(seqs):
        sel = np.flatnonzero(inverse == s)
        out[sel] = _min_over_perms(bits[sel], _class_permutations(seq), n)
    return out


def canonical_form(g: Graph) -> int:
    return int(canonical_masks([graph_to_mask(g)], g.n)[0])


def canonical_graph(g: Graph) -> Graph:
    return mask_to_graph(canonical_form(g), g.n)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def enumerate_connected_masks(n: int) -> np.ndarray:
    """Canonical masks of all connected graphs on ``n`` vertices, increasing."""
    if not 2 <= n <= ENUM_MAX_N:
        raise ValueError(f"built-in enumeration supports 2 <= n <= {ENUM_MAX_N}; "
                         "larger orders must come from a graph6 corpus")
    E = n * (n - 1) // 2
    out = []
    block = 1 << 18
    for lo in range(0, 1 << E, block):
        masks = np.arange(lo, min(lo + block, 1 << E), dtype=np.int64)
        bits = mask_bits(masks, n)
        deg = _degrees(bits, n)
        keep = (deg[:, 0] >= 1) & np.all(np.diff(deg, axis=1) >= 0, axis=1)
        masks, bits = masks[keep], bits[keep]
        keep = _connected(bits, n)
        masks, bits = masks[keep], bits[keep]
        if masks.size:
            out.append(masks[canonical_masks(masks, n) == masks])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def enumerate_connected(n: int):
    """Yield one :class:`Graph` per isomorphism class of connected graphs on ``n`` vertices."""
    for mask in enumerate_connected_masks(n):
        yield mask_to_graph(int(mask), n)


# ---------------------------------------------------------------------------
# corpus files
# ---------------------------------------------------------------------------

def read_graph6_lines(lines: Iterable[str]) -> list:
    """Parse one graph6 token per non-blank line; errors carry the line number."""
    graphs = []
    for lineno, line in enumerate(lines, 1):
        tok = line.strip()
        if not tok:
            continue
        try:
            graphs.append(parse_graph6(tok))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return graphs


def read_graph6_file(path) -> list:
    with open(path, encoding="ascii") as fh:
        return read_graph6_lines(fh)


@dataclass
class CorpusValidation:
    count: int
    expected: Optional[int]
    orders: list
    disconnected: list
    duplicates: list

    @property
    def ok(self) -> bool:
        return (not self.disconnected and not self.duplicates
                and (self.expected is None or self.count == self.expected))


def validate_corpus(graphs, *, check_isomorphism: bool = True) -> CorpusValidation:
    """Count, connectivity and pairwise non-isomorphism of a corpus.

    ``duplicates`` lists ``(i, j)`` line-order index pairs with equal canonical form.
    """
    orders = sorted({g.n for g in graphs})
    expected = KNOWN_COUNTS.get(orders[0]) if len(orders) == 1 else None
    disconnected = [i for i, g in enumerate(graphs) if not g.is_connected()]
    duplicates = []
    if check_isomorphism:
        for n in orders:
            idx = [i for i, g in enumerate(graphs) if g.n == n]
            canon = canonical_masks([graph_to_mask(graphs[i]) for i in idx], n)
            seen = {}
            for i, c in zip(idx, canon.tolist()):
                if c in seen:
                    duplicates.append((seen[c], i))
                else:
                    seen[c] = i
    return CorpusValidation(len(graphs), expected, orders, disconnected, duplicates)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

CSV_HEADER = ["graph6", "n", "m", "regular", "R1", "R0", "Rm1", "E1", "Em1",
              "conjecture_ok", "violations"]


@dataclass
class SweepRecord:
    """Per-graph sweep row plus numerical diagnostics.

    ``trace_gap`` is ``|tr L_1 - tr L_-1| / tr_hb``; ``kirchhoff_gap`` and
    ``group_residual`` are maxima over the three biases.
    """

    graph6: str
    n: int
    m: int
    regular: bool = False
    kirchhoff: Optional[KirchhoffTriple] = None
    E_repelling: float = math.nan
    E_attracting: float = math.nan
    conjecture_ok: bool = False
    violations: int = 0
    violated: list = field(default_factory=list)
    trace_gap: float = math.nan
    kirchhoff_gap: float = math.nan
    group_residual: float = math.nan
    error: Optional[str] = None

    def csv_row(self) -> list:
        R = self.kirchhoff.as_tuple() if self.kirchhoff else (math.nan,) * 3
        return [self.graph6, self.n, self.m, int(self.regular),
                *(f"{x:.12g}" for x in R),
                f"{self.E_repelling:.12g}", f"{self.E_attracting:.12g}",
                int(self.conjecture_ok), self.violations]


def analyze_for_sweep(g: Graph, *, diagnostics: bool = True) -> SweepRecord:
    """Compute one :class:`SweepRecord`; exceptions are stored in ``error``."""
    rec = SweepRecord(write_graph6(g), g.n, g.m)
    try:
        st = graph_stats(g)
        rec.regular = g.is_regular()
        spectra = {a: biased_spectrum(g, a) for a in ALPHAS}
        spectra["normalized"] = normalized_laplacian_spectrum(g)
        triple = KirchhoffTriple(*(kirchhoff_index(g, a, spectrum=spectra[a]) for a in ALPHAS))
        rec.kirchhoff = triple
        rec.E_repelling = relative_efficiency(g, Bias.REPELLING, triple=triple)
        rec.E_attracting = relative_efficiency(g, Bias.ATTRACTING, triple=triple)
        rec.conjecture_ok = conjecture_check(g, triple=triple).ok
        rows = trace_bounds_report(g, st)
        for a in ALPHAS:
            rows += [r for r in eigen_bounds_report(g, a, spectra=spectra, stats=st)
                     if a == Bias.STANDARD or "[" in r.bound_id]
        rows += kirchhoff_bounds_report(g, spectra=spectra, stats=st)
        bad = failures(rows)
        rec.violations = len(bad)
        rec.violated = [r.bound_id for r in bad]
        tr = hubs_trace(g)
        t1 = float(np.trace(build_laplacian(g, Bias.REPELLING).L))
        tm1 = float(np.trace(build_laplacian(g, Bias.ATTRACTING).L))
        rec.trace_gap = abs(t1 - tm1) / tr
        if diagnostics:
            rec.kirchhoff_gap = max(kirchhoff_consistency(g, a, spectrum=spectra[a]) for a in ALPHAS)
            rec.group_residual = max(group_inverse_residual(g, a, spectrum=spectra[a])
                                     for a in ALPHAS)
    except Exception as exc:  # recorded per row, the sweep continues
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _sweep_one(args):
    g, diagnostics = args
    return analyze_for_sweep(g, diagnostics=diagnostics)


def sweep(graphs: Iterable[Graph], *, workers: int = 1, diagnostics: bool = True,
          chunksize: int = 64) -> list:
    """One record per input graph, in input order."""
    graphs = list(graphs)
    if workers <= 1:
        return [analyze_for_sweep(g, diagnostics=diagnostics) for g in graphs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_one, [(g, diagnostics) for g in graphs], chunksize=chunksize))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def scatter_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph6", "E_repelling", "E_attracting"])
    for r in records:
        w.writerow([r.graph6, f"{r.E_repelling:.12g}", f"{r.E_attracting:.12g}"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class SweepSummary:
    """Efficiency classes with an absolute slack ``E_SLACK`` around 1.

    ``count_Eatt_gt1`` and friends follow the headline classes;
    ``attracting_classes`` / ``repelling_classes`` give the full
    ``gt``/``eq``/``lt`` partition of each efficiency so the headline
    numbers can be cross-checked against ``total``.
    """

    total: int
    count_Eatt_gt1: int
    count_Erep_gt1: int
    count_both_lt1: int
    count_both_eq1: int
    conjecture_failures: int
    attracting_classes: dict
    repelling_classes: dict
    implication_failures: list
    conjecture_failed: list
    errors: list
    near_boundary: list
    regular: int
    violations: dict

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _cls(x: float, slack: float) -> str:
    if x > 1 + slack:
        return "gt"
    if x < 1 - slack:
        return "lt"
    return "eq"


def classify_sweep(records, *, slack: float = E_SLACK) -> SweepSummary:
    records = [r for r in records]
    ok = [r for r in records if r.error is None]
    att = {"gt": 0, "eq": 0, "lt": 0}
    rep = {"gt": 0, "eq": 0, "lt": 0}
    both_lt = both_eq = 0
    impl, near = [], []
    viol = {}
    for r in ok:
        ca, cr = _cls(r.E_attracting, slack), _cls(r.E_repelling, slack)
        att[ca] += 1
        rep[cr] += 1
        both_lt += ca == "lt" and cr == "lt"
        both_eq += ca == "eq" and cr == "eq"
        # E_1 >= 1 must imply E_-1 >= 1
        if cr != "lt" and ca == "lt":
            impl.append(r.graph6)
        for x in (r.E_attracting, r.E_repelling):
            if slack < abs(x - 1) < NEAR_BOUNDARY:
                near.append(r.graph6)
                break
        for b in r.violated:
            viol[b] = viol.get(b, 0) + 1
    failed = [r.graph6 for r in ok if not r.conjecture_ok]
    return SweepSummary(
        total=len(records),
        count_Eatt_gt1=att["gt"],
        count_Erep_gt1=rep["gt"],
        count_both_lt1=both_lt,
        count_both_eq1=both_eq,
        conjecture_failures=len(failed),
        attracting_classes=att,
        repelling_classes=rep,
        implication_failures=impl,
        conjecture_failed=failed,
        errors=[(r.graph6, r.error) for r in records if r.error is not None],
        near_boundary=near,
        regular=sum(r.regular for r in ok),
        violations=dict(sorted(viol.items())),
    )


_METRICS = {
    "R_repelling": lambda r: r.kirchhoff.R_repelling,
    "R_standard": lambda r: r.kirchhoff.R_standard,
    "R_attracting": lambda r: r.kirchhoff.R_attracting,
    "E_repelling": lambda r: r.E_repelling,
    "E_attracting": lambda r: r.E_attracting,
}


def extremal_graphs(records, metric: str, k: int, *, largest: bool = True) -> list:
    """Top-``k`` graph6 tokens by ``metric``; ties go to the smaller token."""
    if metric not in _METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose from {sorted(_METRICS)}")
    if k < 1:
        raise ValueError("k must be >= 1")
    get = _METRICS[metric]
    rows = [r for r in records if r.error is None]
    sign = -1.0 if largest else 1.0
    rows.sort(key=lambda r: (sign * get(r), r.graph6))
    return [r.graph6 for r in rows[:k]]


def default_workers() -> int:
    return os.cpu_count() or 1
