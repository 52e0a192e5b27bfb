"""Spectra of hubs-biased Laplacians, their pseudoinverses, and eigenvalue bounds."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import check
from .graph import DisconnectedGraphError, Graph, graph_stats
from .laplacian import Bias, LaplacianBundle, as_bias, build_laplacian
from .linalg import jacobi_eigh, pinv_svd

ZERO_SCALE = 1e-10
# above this order the Jacobi kernel is too slow in pure numpy; LAPACK takes over
JACOBI_MAX_N = 200


class PseudoinverseKind(enum.Enum):
    """How the resistance matrix is obtained from ``L_alpha``.

    ``GROUP_INVERSE`` (the default) is ``K^a S^+ K^-a``; ``MOORE_PENROSE`` is the
    true Moore-Penrose inverse of the non-symmetric ``L_alpha``; ``COROLLARY``
    is the eigenvector expansion over the rows of ``K^a U``.
    """

    GROUP_INVERSE = "group"
    MOORE_PENROSE = "moore-penrose"
    COROLLARY = "corollary"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues ``rho`` and orthonormal eigenvectors ``U`` of a symmetric matrix.

    For a hubs-biased Laplacian, ``scale`` holds the diagonal of ``K^alpha`` and
    :attr:`psi` gives eigenvectors of ``L_alpha`` itself.
    """

    rho: np.ndarray
    U: np.ndarray
    alpha: Optional[Bias] = None
    scale: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return len(self.rho)

    @property
    def zero_threshold(self) -> float:
        return ZERO_SCALE * self.n * max(float(np.abs(self.rho).max()), 0.0)

    @property
    def zero_mask(self) -> np.ndarray:
        return self.rho < self.zero_threshold

    @property
    def zero_count(self) -> int:
        return int(self.zero_mask.sum())

    @property
    def algebraic_connectivity(self) -> float:
        return float(self.rho[1])

    @property
    def rho_max(self) -> float:
        return float(self.rho[-1])

    @property
    def psi(self) -> np.ndarray:
        """Columns are eigenvectors of ``L_alpha`` (``K^alpha U``)."""
        if self.scale is None:
            return self.U
        return self.scale[:, None] * self.U

    def inverse_values(self) -> np.ndarray:
        """``1/rho`` on non-zero eigenvalues, 0 on the null space."""
        mask = ~self.zero_mask
        out = np.zeros_like(self.rho)
        out[mask] = 1.0 / self.rho[mask]
        return out

    def pinv(self) -> np.ndarray:
        """``U diag(1/rho)^+ U^T``, the pseudoinverse of the symmetric matrix."""
        return (self.U * self.inverse_values()) @ self.U.T

    def reciprocal_sum(self) -> float:
        """Sum of ``1/rho`` over the non-zero eigenvalues."""
        return float(self.inverse_values().sum())


def sym_eigen(S, *, method: str = "auto") -> Spectrum:
    """Eigendecomposition of a symmetric matrix.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    :data:`JACOBI_MAX_N`, LAPACK above).
    """
    S = np.asarray(S, dtype=float)
    if method == "auto":
        method = "jacobi" if S.shape[0] <= JACOBI_MAX_N else "lapack"
    if method == "jacobi":
        w, U = jacobi_eigh(S)
    elif method == "lapack":
        if not np.allclose(S, S.T, rtol=0.0, atol=1e-12 * max(np.linalg.norm(S), 1.0)):
            raise ValueError("matrix is not symmetric")
        w, U = np.linalg.eigh(0.5 * (S + S.T))
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    return Spectrum(w, U)


def biased_spectrum(g_or_bundle, alpha=None, *, method: str = "auto") -> Spectrum:
    """Spectrum of ``L_alpha`` computed through its symmetric form ``S_alpha``."""
    bundle = _bundle(g_or_bundle, alpha)
    sp = sym_eigen(bundle.S, method=method)
    return Spectrum(sp.rho, sp.U, bundle.alpha, bundle.scale)


def _bundle(g_or_bundle, alpha) -> LaplacianBundle:
    if isinstance(g_or_bundle, LaplacianBundle):
        return g_or_bundle
    return build_laplacian(g_or_bundle, as_bias(alpha))


def group_inverse(bundle: LaplacianBundle, spectrum: Optional[Spectrum] = None) -> np.ndarray:
    """Group inverse ``L^# = K^a S^+ K^-a`` of a connected graph's Laplacian.

    It satisfies ``L L^# L = L``, ``L^# L L^# = L^#``, ``L L^# = L^# L`` and
    annihilates the all-ones vector from both sides.
    """
    sp = spectrum if spectrum is not None else biased_spectrum(bundle)
    if sp.zero_count != 1:
        raise DisconnectedGraphError(
            f"group inverse needs a connected graph; null space has dimension {sp.zero_count}"
        )
    s = bundle.scale
    return s[:, None] * sp.pinv() / s[None, :]


def moore_penrose(L) -> np.ndarray:
    """Moore-Penrose pseudoinverse via one-sided Jacobi SVD."""
    return pinv_svd(L)


def normalized_laplacian_spectrum(g: Graph, *, method: str = "auto") -> Spectrum:
    """Spectrum of ``K^-1/2 (K - A) K^-1/2``; eigenvalues lie in ``[0, 2]``."""
    k = g.degrees.astype(float)
    inv_sqrt = 1.0 / np.sqrt(k)
    N = np.eye(g.n) - inv_sqrt[:, None] * g.adjacency * inv_sqrt[None, :]
    return sym_eigen(N, method=method)


def eigen_bounds_report(g: Graph, alpha, *, spectra=None, stats=None) -> list:
    """Check the eigenvalue estimates for ``L_alpha`` on a connected graph.

    Row ids::

        rho_max_trace_mean       rho_n >= 4m^2 / (n(n-1)Delta)
        rho2_upper_average       rho_2 <= 2m(2m+(n-1)(Delta-delta)) / (delta(n-1)(n+Delta-delta))
        rho2_upper_degree_ratio  rho_2 <= 2m Delta / ((n-1) delta)
        rho_max_gershgorin       rho_n <= 2 max_v L_vv, i.e. 2Delta (alpha=-1, 0), 2Delta^2/delta (alpha=1)
        rho2_lower_standard      rho_2 >= (delta/Delta) rho_2(L_0)
        rho2_lower_normalized    rho_2 >= delta rho_2(normalized)          (alpha=-1 only)
        fiedler_edge_connectivity  rho_2(L_0) >= 2 eta (1 - cos(pi/n))
        chung_diameter           rho_2(normalized) >= 1/(D n)
        chung_edges              rho_2(normalized) >= 1 - cos(pi/m)
        rho_max_zagreb           rho_n >= Delta/(n-1) + (2m-Delta)^2/(Delta(n-1)^2)
                                          + 2(n-2)(Delta2-delta)^2/(Delta(n-1)^3)
        rho2_upper_zagreb        rho_2 <= ((n+1)m - Delta(n-Delta))/(delta(n-1))
                                          + 2(m-Delta)^2/(delta(n-2)(n-1))      (n >= 3)

    Rows that depend on ``alpha`` carry the suffix ``[alpha]``.
    ``spectra`` may supply precomputed ``{alpha: Spectrum, "normalized": Spectrum}``.
    """
    a = as_bias(alpha)
    st = stats if stats is not None else graph_stats(g)
    if st.components != 1:
        raise DisconnectedGraphError("eigenvalue bounds require a connected graph")
    spectra = dict(spectra or {})
    for key in (a, Bias.STANDARD):
        if key not in spectra:
            spectra[key] = biased_spectrum(g, key)
    if "normalized" not in spectra:
        spectra["normalized"] = normalized_laplacian_spectrum(g)
    sp, sp0, spn = spectra[a], spectra[Bias.STANDARD], spectra["normalized"]
    n, m = st.n, st.m
    d, D, D2 = st.delta, st.Delta, st.Delta2
    rho2, rhon = sp.algebraic_connectivity, sp.rho_max
    rho2_std = sp0.algebraic_connectivity
    rho2_norm = spn.algebraic_connectivity
    tag = f"[{int(a)}]"

    rows = [
        check("rho_max_trace_mean" + tag, rhon, lhs=4 * m * m / (n * (n - 1) * D)),
        check("rho2_upper_average" + tag, rho2,
              rhs=2 * m * (2 * m + (n - 1) * (D - d)) / (d * (n - 1) * (n + D - d))),
        check("rho2_upper_degree_ratio" + tag, rho2, rhs=2 * m * D / ((n - 1) * d)),
        check("rho_max_gershgorin" + tag, rhon, rhs=2 * D * D / d if a == Bias.REPELLING else 2 * D),
        check("rho2_lower_standard" + tag, rho2, lhs=d / D * rho2_std),
    ]
    if a == Bias.ATTRACTING:
        rows.append(check("rho2_lower_normalized" + tag, rho2, lhs=d * rho2_norm))
    rows.append(check("fiedler_edge_connectivity", rho2_std,
                      lhs=2 * st.edge_connectivity * (1 - math.cos(math.pi / n))))
    rows.append(check("chung_diameter", rho2_norm, lhs=1.0 / (st.diameter * n)))
    rows.append(check("chung_edges", rho2_norm, lhs=1 - math.cos(math.pi / m)))
    rows.append(check(
        "rho_max_zagreb" + tag, rhon,
        lhs=D / (n - 1) + (2 * m - D) ** 2 / (D * (n - 1) ** 2)
        + 2 * (n - 2) * (D2 - d) ** 2 / (D * (n - 1) ** 3),
    ))
    if n >= 3:
        rows.append(check(
            "rho2_upper_zagreb" + tag, rho2,
            rhs=((n + 1) * m - D * (n - D)) / (d * (n - 1)) + 2 * (m - D) ** 2 / (d * (n - 2) * (n - 1)),
        ))
    return rows
