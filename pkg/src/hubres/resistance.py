"""Hubs-biased effective resistances and Kirchhoff indices."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .bounds import REL_TOL, check
from .graph import DisconnectedGraphError, Graph, graph_stats
from .laplacian import ALPHAS, Bias, as_bias, build_laplacian
from .spectral import PseudoinverseKind, Spectrum, biased_spectrum, group_inverse, moore_penrose


@dataclass(frozen=True, eq=False)
class ResistanceMatrix:
    omega: np.ndarray
    alpha: Bias
    kind: PseudoinverseKind

    def pair_sum(self) -> float:
        """Sum over unordered pairs ``v < w``."""
        return float(np.triu(self.omega, 1).sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("row,col,value\n")
        n = self.omega.shape[0]
        for v in range(n):
            for w in range(n):
                buf.write(f"{v},{w},{self.omega[v, w]:.12g}\n")
        return buf.getvalue()


@dataclass(frozen=True)
class KirchhoffTriple:
    R_repelling: float
    R_standard: float
    R_attracting: float

    def as_tuple(self) -> tuple:
        return (self.R_repelling, self.R_standard, self.R_attracting)

    def __getitem__(self, alpha) -> float:
        return {Bias.REPELLING: self.R_repelling, Bias.STANDARD: self.R_standard,
                Bias.ATTRACTING: self.R_attracting}[as_bias(alpha)]


def _connected_spectrum(g: Graph, alpha, spectrum=None) -> Spectrum:
    sp = spectrum if spectrum is not None else biased_spectrum(g, alpha)
    if sp.zero_count != 1:
        raise DisconnectedGraphError("resistance distances require a connected graph")
    return sp


def _from_pinv(M: np.ndarray) -> np.ndarray:
    d = np.diag(M)
    return d[:, None] + d[None, :] - M - M.T


def resistance_matrix(g: Graph, alpha, kind=PseudoinverseKind.GROUP_INVERSE,
                      *, spectrum=None) -> ResistanceMatrix:
    """Pairwise hubs-biased effective resistances.

    ``GROUP_INVERSE`` uses the closed form
    ``S+_vv + S+_ww - ((k_v/k_w)^a + (k_w/k_v)^a) S+_vw``;
    ``MOORE_PENROSE`` applies ``M_vv + M_ww - M_vw - M_wv`` to the SVD
    pseudoinverse of ``L_alpha``; ``COROLLARY`` sums
    ``(psi_kv - psi_kw)^2 / rho_k`` over the non-zero eigenpairs with
    ``psi = K^a U``.
    """
    a = as_bias(alpha)
    kind = PseudoinverseKind(kind)
    sp = _connected_spectrum(g, a, spectrum)
    if kind is PseudoinverseKind.GROUP_INVERSE:
        Sp = sp.pinv()
        r = g.degrees.astype(float)
        r = r[:, None] / r[None, :]
        d = np.diag(Sp)
        omega = d[:, None] + d[None, :] - (r ** int(a) + r ** -int(a)) * Sp
    elif kind is PseudoinverseKind.MOORE_PENROSE:
        omega = _from_pinv(moore_penrose(build_laplacian(g, a).L))
    else:
        psi = sp.psi * np.sqrt(sp.inverse_values())[None, :]
        sq = (psi * psi).sum(axis=1)
        omega = sq[:, None] + sq[None, :] - 2.0 * psi @ psi.T
    np.fill_diagonal(omega, 0.0)
    omega.setflags(write=False)
    return ResistanceMatrix(omega, a, kind)


def kirchhoff_index(g: Graph, alpha, *, spectrum=None) -> float:
    """``n`` times the sum of reciprocal non-zero eigenvalues of ``L_alpha``."""
    sp = _connected_spectrum(g, alpha, spectrum)
    return g.n * sp.reciprocal_sum()


def kirchhoff_triple(g: Graph, *, spectra=None) -> KirchhoffTriple:
    spectra = spectra or {}
    vals = [kirchhoff_index(g, a, spectrum=spectra.get(a)) for a in ALPHAS]
    return KirchhoffTriple(*vals)


def kirchhoff_bounds_report(g: Graph, *, spectra=None, stats=None) -> list:
    """Kirchhoff index estimates for every bias.

    Row ids (suffix ``[alpha]``)::

        kirchhoff_spectral    n(n-1)/rho_n <= R <= n(n-1)/rho_2
        kirchhoff_complete    R >= n - 1
        kirchhoff_repelling_degree   R_1  >= n(n-1) delta / Delta^2     (alpha = 1)
        kirchhoff_attracting_degree  R_-1 >= n(n-1) / (2 Delta)         (alpha = -1)
    """
    st = stats if stats is not None else graph_stats(g, connectivity=False)
    if st.components != 1:
        raise DisconnectedGraphError("Kirchhoff bounds require a connected graph")
    spectra = spectra or {}
    n, d, D = st.n, st.delta, st.Delta
    rows = []
    for a in ALPHAS:
        sp = _connected_spectrum(g, a, spectra.get(a))
        R = n * sp.reciprocal_sum()
        tag = f"[{int(a)}]"
        rows.append(check("kirchhoff_spectral" + tag, R, n * (n - 1) / sp.rho_max,
                          n * (n - 1) / sp.algebraic_connectivity))
        rows.append(check("kirchhoff_complete" + tag, R, lhs=n - 1))
        if a == Bias.REPELLING:
            rows.append(check("kirchhoff_repelling_degree" + tag, R, lhs=n * (n - 1) * d / D ** 2))
        elif a == Bias.ATTRACTING:
            rows.append(check("kirchhoff_attracting_degree" + tag, R, lhs=n * (n - 1) / (2 * D)))
    return rows


@dataclass
class ResistanceSurvey:
    """Per-pair check of ``2/rho_n <= Omega(v, w) <= 2/rho_2``."""

    alpha: Bias
    kind: PseudoinverseKind
    lower: float
    upper: float
    pairs: int
    below: list = field(default_factory=list)
    above: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return len(self.below) + len(self.above)

    def to_dict(self) -> dict:
        return {
            "alpha": int(self.alpha), "kind": self.kind.value,
            "lower": self.lower, "upper": self.upper, "pairs": self.pairs,
            "below_lower": [list(p) for p in self.below],
            "above_upper": [list(p) for p in self.above],
            "violations": self.violations,
        }


def resistance_bounds_survey(g: Graph, alpha, kind=PseudoinverseKind.GROUP_INVERSE,
                             *, tol: float = REL_TOL) -> ResistanceSurvey:
    """Count pairs outside the eigenvalue window; nothing is asserted."""
    a = as_bias(alpha)
    sp = _connected_spectrum(g, a)
    om = resistance_matrix(g, a, kind, spectrum=sp).omega
    lo, hi = 2.0 / sp.rho_max, 2.0 / sp.algebraic_connectivity
    out = ResistanceSurvey(a, PseudoinverseKind(kind), lo, hi, 0)
    for v in range(g.n):
        for w in range(v + 1, g.n):
            out.pairs += 1
            x = om[v, w]
            if x < lo * (1 - tol):
                out.below.append((v, w))
            elif x > hi * (1 + tol):
                out.above.append((v, w))
    return out


@dataclass
class MetricReport:
    """Violation counts of the distance axioms and the squared-Euclidean test."""

    alpha: Bias
    kind: PseudoinverseKind
    negative: int
    asymmetric: int
    indiscernible: int
    triangle: int
    sqrt_triangle: int
    gram_min_eigenvalue: float
    squared_euclidean: bool

    @property
    def all_pass(self) -> bool:
        return (self.negative == self.asymmetric == self.indiscernible
                == self.triangle == self.sqrt_triangle == 0) and self.squared_euclidean

    def to_dict(self) -> dict:
        return {
            "alpha": int(self.alpha), "kind": self.kind.value,
            "negative": self.negative, "asymmetric": self.asymmetric,
            "indiscernible": self.indiscernible, "triangle": self.triangle,
            "sqrt_triangle": self.sqrt_triangle,
            "gram_min_eigenvalue": self.gram_min_eigenvalue,
            "squared_euclidean": self.squared_euclidean, "all_pass": self.all_pass,
        }


def metric_properties_report(g: Graph, alpha, kind=PseudoinverseKind.GROUP_INVERSE,
                             *, omega=None, tol: float = 1e-9) -> MetricReport:
    """Check whether ``Omega`` is a metric and a squared Euclidean distance.

    Triangle violations count ordered triples ``(u, v, w)`` of distinct
    vertices with ``Omega(u,w) > Omega(u,v) + Omega(v,w)`` beyond ``tol``
    relative slack.  The Euclidean test asks that ``-C Omega C / 2`` with
    ``C = I - J/n`` have no eigenvalue below ``-tol * max|Omega|``.
    """
    a = as_bias(alpha)
    kind = PseudoinverseKind(kind)
    om = np.asarray(omega if omega is not None else resistance_matrix(g, a, kind).omega)
    n = om.shape[0]
    scale = max(float(np.abs(om).max()), 1e-300)
    off = ~np.eye(n, dtype=bool)
    negative = int((om[off] < -tol * scale).sum())
    asymmetric = int((np.abs(om - om.T) > tol * scale)[np.triu_indices(n, 1)].sum())
    indiscernible = int((np.abs(om[off]) <= tol * scale).sum() // 2)

    def triangle_count(d):
        via = d[:, :, None] + d[None, :, :]  # via[u, v, w] = d(u,v) + d(v,w)
        direct = np.broadcast_to(d[:, None, :], via.shape)
        bad = direct > via + tol * scale
        u, v, w = np.indices(via.shape)
        distinct = (u != v) & (v != w) & (u != w)
        return int((bad & distinct).sum())

    tri = triangle_count(om)
    sqrt_tri = triangle_count(np.sqrt(np.clip(om, 0.0, None)))
    C = np.eye(n) - 1.0 / n
    gram = -0.5 * C @ om @ C
    gmin = float(np.linalg.eigvalsh(0.5 * (gram + gram.T)).min())
    return MetricReport(a, kind, negative, asymmetric, indiscernible, tri, sqrt_tri, gmin,
                        gmin >= -tol * scale)


@dataclass(frozen=True)
class ConjectureRecord:
    """Ordering ``R_1 >= R_0 >= R_-1`` of the Kirchhoff triple, with equality flags."""

    triple: KirchhoffTriple
    repelling_ge_standard: bool
    standard_ge_attracting: bool
    repelling_eq_standard: bool
    standard_eq_attracting: bool
    regular: bool

    @property
    def ordered(self) -> bool:
        return self.repelling_ge_standard and self.standard_ge_attracting

    @property
    def equality_iff_regular(self) -> bool:
        return (self.repelling_eq_standard == self.regular
                and self.standard_eq_attracting == self.regular)

    @property
    def ok(self) -> bool:
        return self.ordered and self.equality_iff_regular

    def to_dict(self) -> dict:
        return {
            "R1": self.triple.R_repelling, "R0": self.triple.R_standard,
            "Rm1": self.triple.R_attracting,
            "R1_ge_R0": self.repelling_ge_standard, "R0_ge_Rm1": self.standard_ge_attracting,
            "R1_eq_R0": self.repelling_eq_standard, "R0_eq_Rm1": self.standard_eq_attracting,
            "regular": self.regular, "ok": self.ok,
        }


def _ge(a: float, b: float, tol: float) -> bool:
    return a >= b - tol * max(abs(a), abs(b))


def _eq(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b))


def conjecture_check(g: Graph, *, triple=None, tol: float = REL_TOL) -> ConjectureRecord:
    t = triple if triple is not None else kirchhoff_triple(g)
    r1, r0, rm1 = t.as_tuple()
    return ConjectureRecord(
        t, _ge(r1, r0, tol), _ge(r0, rm1, tol), _eq(r1, r0, tol), _eq(r0, rm1, tol), g.is_regular()
    )


def kirchhoff_consistency(g: Graph, alpha, *, spectrum=None) -> float:
    """Relative gap between the group-inverse pair sum and ``n * sum 1/rho``."""
    sp = _connected_spectrum(g, alpha, spectrum)
    R = g.n * sp.reciprocal_sum()
    total = resistance_matrix(g, alpha, spectrum=sp).pair_sum()
    return abs(total - R) / max(abs(R), 1e-300)


def group_inverse_residual(g: Graph, alpha, *, spectrum=None) -> float:
    """Largest of the group-inverse identity residuals relative to ``||L||``."""
    bundle = build_laplacian(g, alpha)
    sp = spectrum if spectrum is not None else biased_spectrum(bundle)
    L = bundle.L
    G = group_inverse(bundle, sp)
    nL = max(float(np.linalg.norm(L)), 1e-300)
    nG = max(float(np.linalg.norm(G)), 1e-300)
    res = [
        np.linalg.norm(L @ G @ L - L) / nL,
        np.linalg.norm(G @ L @ G - G) / nG,
        np.linalg.norm(L @ G - G @ L) / max(nL * nG, 1e-300),
        np.abs(G.sum(axis=1)).max() / nG,
        # left null vector of L_alpha is k^(-2 alpha), not the all-ones vector
        np.abs(bundle.scale ** -2 @ G).max() / (nG * np.linalg.norm(bundle.scale ** -2)),
    ]
    return float(max(res))

