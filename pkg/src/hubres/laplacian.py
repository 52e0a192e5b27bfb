"""Hubs-biased conductances and Laplacians.

For a bias ``alpha`` in {-1, 0, +1} the edge ``(v, w)`` carries conductance
``(k_v / k_w) ** alpha``.  The biased Laplacian is

    L_alpha = Xi_alpha - K^alpha A K^-alpha,

which is similar to the symmetric matrix ``S_alpha = Xi_alpha - A`` through
the diagonal degree matrix ``K``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bounds import check
from .graph import Graph, GraphError, graph_stats


class Bias(enum.IntEnum):
    """Bias exponent applied to degree ratios."""

    ATTRACTING = -1
    STANDARD = 0
    REPELLING = 1


ALPHAS = (Bias.REPELLING, Bias.STANDARD, Bias.ATTRACTING)


def as_bias(alpha) -> Bias:
    """Coerce ``alpha`` to :class:`Bias`; only -1, 0 and +1 are accepted."""
    if isinstance(alpha, Bias):
        return alpha
    if isinstance(alpha, float) and alpha.is_integer():
        alpha = int(alpha)
    if isinstance(alpha, (int, np.integer)) and int(alpha) in (-1, 0, 1):
        return Bias(int(alpha))
    raise ValueError(f"alpha must be one of -1, 0, +1, got {alpha!r}")


def conductance(g: Graph, alpha, v: int, w: int) -> float:
    if not g.has_edge(v, w):
        raise GraphError(f"vertices {v} and {w} are not adjacent")
    a = as_bias(alpha)
    k = g.degrees
    return float((k[v] / k[w]) ** int(a))


def conductance_matrix(g: Graph, alpha) -> np.ndarray:
    """Matrix ``C`` with ``C[v, w] = (k_v / k_w) ** alpha`` on edges and 0 elsewhere."""
    a = int(as_bias(alpha))
    k = g.degrees.astype(float)
    ratio = k[:, None] / k[None, :]
    return g.adjacency * ratio ** a


@dataclass(frozen=True, eq=False)
class LaplacianBundle:
    """``L_alpha`` together with its symmetric similar form.

    Attributes
    ----------
    L : ndarray
        The (generally non-symmetric) hubs-biased Laplacian.
    S : ndarray
        ``Xi - A``; ``L = K^alpha S K^-alpha``.
    xi : ndarray
        Total conductance per vertex (diagonal of ``Xi`` and of ``L``).
    degrees : ndarray
        Vertex degrees (diagonal of ``K``).
    """

    alpha: Bias
    L: np.ndarray
    S: np.ndarray
    xi: np.ndarray
    degrees: np.ndarray

    @property
    def Xi(self) -> np.ndarray:
        return np.diag(self.xi)

    @property
    def K(self) -> np.ndarray:
        return np.diag(self.degrees.astype(float))

    @property
    def scale(self) -> np.ndarray:
        """Diagonal of ``K^alpha``."""
        return self.degrees.astype(float) ** int(self.alpha)


def build_laplacian(g: Graph, alpha) -> LaplacianBundle:
    a = as_bias(alpha)
    C = conductance_matrix(g, a)
    xi = C.sum(axis=1)
    L = np.diag(xi) - C
    S = np.diag(xi) - g.adjacency
    for arr in (L, S, xi):
        arr.setflags(write=False)
    return LaplacianBundle(a, L, S, xi, g.degrees)


def hubs_trace(g: Graph) -> float:
    """Sum of ``k_v / k_w`` over ordered adjacent pairs; the trace of ``L_1`` and ``L_-1``."""
    return float(conductance_matrix(g, Bias.REPELLING).sum())


def trace_bounds_report(g: Graph, stats=None) -> list:
    """Evaluate every known two- and one-sided estimate of :func:`hubs_trace`.

    Rows (ids) and inequalities::

        trace_degree_ratio        2m delta/Delta <= tr <= 2m Delta/delta
        trace_zagreb              Z/Delta <= tr <= Z/delta           (Z = sum k^2)
        trace_average_degree      4m^2/(n Delta) <= tr <= 2m(2m+(n-1)(Delta-delta))/(delta(n+Delta-delta))
        trace_nbr_zagreb          sum k_v^2/Dmax_v <= tr <= sum k_v^2/dmin_v
        trace_nbr_degree          sum dmin_v <= tr <= sum Dmax_v
        trace_titu                tr >= sum k_v^3 / sum_{w~v} k_w
        trace_zagreb_second_max   Zagreb estimates involving the second largest degree
                                  (upper side needs n >= 3)

    ``dmin_v`` / ``Dmax_v`` are the extreme degrees over the neighbourhood of ``v``.
    """
    st = stats if stats is not None else graph_stats(g, connectivity=False)
    n, m = st.n, st.m
    d, D, D2 = st.delta, st.Delta, st.Delta2
    k = np.asarray(st.degrees, dtype=float)
    Z = float(st.zagreb)
    dmin = np.asarray(st.nbr_min_degree, dtype=float)
    dmax = np.asarray(st.nbr_max_degree, dtype=float)
    ksum = np.asarray(st.nbr_degree_sum, dtype=float)
    tr = hubs_trace(g)
    rows = [
        check("trace_degree_ratio", tr, 2 * m * d / D, 2 * m * D / d),
        check("trace_zagreb", tr, Z / D, Z / d),
        check("trace_average_degree", tr, 4 * m * m / (n * D),
              2 * m * (2 * m + (n - 1) * (D - d)) / (d * (n + D - d))),
        check("trace_nbr_zagreb", tr, float((k * k / dmax).sum()), float((k * k / dmin).sum())),
        check("trace_nbr_degree", tr, float(dmin.sum()), float(dmax.sum())),
        check("trace_titu", tr, float((k ** 3 / ksum).sum())),
    ]
    low = D + (2 * m - D) ** 2 / (D * (n - 1)) + 2 * (n - 2) * (D2 - d) ** 2 / (D * (n - 1) ** 2)
    high = math.inf
    if n >= 3:
        high = ((n + 1) * m - D * (n - D)) / d + 2 * (m - D) ** 2 / (d * (n - 2))
    rows.append(check("trace_zagreb_second_max", tr, low, high))
    return rows
