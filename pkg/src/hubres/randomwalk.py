"""Hubs-biased random walks: transition matrices, hitting and commute times, efficiencies.

From vertex ``v`` the walker steps to neighbour ``w`` with probability
``c_alpha(v, w) / c_alpha(v)``.

Monte Carlo generator (version 1)
---------------------------------
Every trial owns an independent SplitMix64 stream, so estimates do not
depend on how trials are scheduled.  With ``G = 0x9E3779B97F4A7C15`` and the
SplitMix64 finalizer::

    mix(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
             return z ^ (z >> 31)

the stream of trial ``i`` under seed ``s`` starts in state
``x = mix(s ^ mix(i + G))`` (all arithmetic mod 2**64).  Each draw advances
``x += G`` and outputs ``mix(x)``; the top 53 bits give a uniform
``u = (out >> 11) * 2**-53`` in ``[0, 1)``.  A step from ``v`` moves to the
first neighbour ``w`` (in increasing vertex order) whose cumulative
transition probability exceeds ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .graph import DisconnectedGraphError, Graph
from .laplacian import Bias, as_bias, conductance_matrix
from .resistance import kirchhoff_index, resistance_matrix

RNG_VERSION = 1
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


class NumericalError(ArithmeticError):
    """A computed quantity failed its residual or identity check."""


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    P: np.ndarray
    alpha: Bias


def transition_matrix(g: Graph, alpha) -> TransitionMatrix:
    a = as_bias(alpha)
    C = conductance_matrix(g, a)
    P = C / C.sum(axis=1)[:, None]
    P.setflags(write=False)
    return TransitionMatrix(P, a)


def _require_connected(g: Graph):
    if not g.is_connected():
        raise DisconnectedGraphError("hitting times require a connected graph")


def exact_hitting_time(g: Graph, alpha, target: int, *, residual_tol: float = 1e-10) -> np.ndarray:
    """Expected number of steps to reach ``target`` from every vertex.

    Solves ``h(v) = 1 + sum_u P(v,u) h(u)`` for ``v != target`` with
    ``h(target) = 0`` by LU factorisation with partial pivoting.
    """
    _require_connected(g)
    P = transition_matrix(g, alpha).P
    n = g.n
    keep = np.array([v for v in range(n) if v != target])
    M = np.eye(n - 1) - P[np.ix_(keep, keep)]
    rhs = np.ones(n - 1)
    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular hitting-time system for target {target}: {exc}") from None
    resid = float(np.abs(M @ x - rhs).max())
    if resid > residual_tol * max(1.0, float(np.abs(x).max())):
        raise NumericalError(f"hitting-time residual {resid:.3e} exceeds tolerance")
    h = np.zeros(n)
    h[keep] = x
    return h


def hitting_time_matrix(g: Graph, alpha) -> np.ndarray:
    """``H[v, w]``: expected steps from ``v`` to first reach ``w``."""
    return np.column_stack([exact_hitting_time(g, alpha, w) for w in range(g.n)])


def commute_time_matrix(g: Graph, alpha) -> np.ndarray:
    H = hitting_time_matrix(g, alpha)
    return H + H.T


def volume(g: Graph, alpha) -> float:
    """Sum of the total conductances ``c_alpha(v)``."""
    return float(conductance_matrix(g, alpha).sum())


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def trial_states(seed: int, trials) -> np.ndarray:
    """Initial SplitMix64 states of the given trial indices."""
    idx = np.asarray(trials, dtype=np.uint64)
    s = np.full(idx.shape, np.uint64(seed % 2 ** 64), dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix(s ^ _mix(idx + GOLDEN))


def next_uniform(state: np.ndarray) -> np.ndarray:
    """Advance ``state`` in place and return one uniform in ``[0, 1)`` per stream."""
    with np.errstate(over="ignore"):
        state += GOLDEN
        out = _mix(state.copy())
    return (out >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


class HittingEstimate(NamedTuple):
    mean: float
    stderr: float
    completed: int
    censored: int


def _walk(cum: np.ndarray, start: np.ndarray, targets: list, state: np.ndarray,
          step_cap: int) -> np.ndarray:
    """Advance walkers through ``targets`` in order; return step counts (-1 if censored)."""
    k = len(start)
    pos = start.copy()
    steps = np.zeros(k, dtype=np.int64)
    leg = np.zeros(k, dtype=np.int64)
    active = np.ones(k, dtype=bool)
    goal = np.array(targets)
    while True:
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        s = state[idx]
        u = next_uniform(s)
        state[idx] = s
        rows = cum[pos[idx]]
        nxt = (u[:, None] < rows).argmax(axis=1)
        pos[idx] = nxt
        steps[idx] += 1
        hit = nxt == goal[leg[idx]]
        leg[idx[hit]] += 1
        done = leg[idx] >= len(targets)
        over = (steps[idx] >= step_cap) & ~done
        steps[idx[over]] = -1
        active[idx[done | over]] = False
    return steps


def _cumulative(P: np.ndarray) -> np.ndarray:
    cum = np.cumsum(P, axis=1)
    # the last neighbour of each row absorbs any rounding shortfall
    last = P.shape[1] - 1 - np.argmax(P[:, ::-1] > 0, axis=1)
    cum[np.arange(P.shape[0]), last] = 1.0
    cum[cum > 1.0] = 1.0
    for v in range(P.shape[0]):
        cum[v, last[v] + 1:] = 2.0
    return cum


def _estimate(g: Graph, alpha, v: int, targets: list, trials: int, seed: int,
              step_cap: int, start_index: int = 0) -> HittingEstimate:
    _require_connected(g)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if step_cap <= 0:
        raise ValueError("step_cap must be positive")
    cum = _cumulative(transition_matrix(g, alpha).P)
    state = trial_states(seed, np.arange(start_index, start_index + trials))
    steps = _walk(cum, np.full(trials, v, dtype=np.int64), targets, state, step_cap)
    done = steps[steps >= 0].astype(float)
    censored = int((steps < 0).sum())
    if done.size == 0:
        raise NumericalError(f"all {trials} trials exceeded step_cap={step_cap}")
    stderr = float(done.std(ddof=1) / np.sqrt(done.size)) if done.size > 1 else float("nan")
    return HittingEstimate(float(done.mean()), stderr, int(done.size), censored)


def mc_hitting_time(g: Graph, alpha, v: int, w: int, trials: int = 100_000, seed: int = 0,
                    step_cap: int = 1_000_000) -> HittingEstimate:
    """Monte Carlo first-passage time from ``v`` to ``w``.

    Walks still running after ``step_cap`` steps are censored: they are
    excluded from the mean and counted in ``censored``.
    """
    if v == w:
        raise ValueError("source and target must differ")
    return _estimate(g, alpha, v, [w], trials, seed, step_cap)


def mc_commute_time(g: Graph, alpha, v: int, w: int, trials: int = 100_000, seed: int = 0,
                    step_cap: int = 1_000_000) -> HittingEstimate:
    """Monte Carlo round trip ``v -> w -> v``; one trial is one full round trip."""
    if v == w:
        raise ValueError("source and target must differ")
    return _estimate(g, alpha, v, [w, v], trials, seed, step_cap)


# ---------------------------------------------------------------------------
# efficiencies
# ---------------------------------------------------------------------------

def efficiency(g: Graph, alpha, *, kirchhoff=None) -> float:
    """``1 / (vol_alpha * sum_{v,w} Omega_alpha(v,w))`` over ordered pairs."""
    R = kirchhoff if kirchhoff is not None else kirchhoff_index(g, alpha)
    return 1.0 / (volume(g, alpha) * 2.0 * R)


def relative_efficiency(g: Graph, alpha, *, triple=None) -> float:
    """``(vol_0 / vol_alpha) * (R_0 / R_alpha)`` for ``alpha`` in {-1, +1}."""
    a = as_bias(alpha)
    if a == Bias.STANDARD:
        raise ValueError("relative efficiency is defined for alpha = -1 or +1")
    if not g.is_connected():
        raise DisconnectedGraphError("relative efficiency requires a connected graph")
    if triple is not None:
        R0, Ra = triple[Bias.STANDARD], triple[a]
    else:
        R0, Ra = kirchhoff_index(g, Bias.STANDARD), kirchhoff_index(g, a)
    return (2.0 * g.m / volume(g, a)) * (R0 / Ra)


@dataclass
class CommuteReport:
    """Exact commute times against ``vol_alpha * Omega_alpha`` for every pair."""

    alpha: Bias
    vol: float
    pairs: list
    summary: dict

    def to_dict(self) -> dict:
        return {"alpha": int(self.alpha), "vol": self.vol, "pairs": self.pairs,
                "summary": self.summary}


def commute_identity_report(g: Graph, alpha, *, rel_tol: float = 1e-8) -> CommuteReport:
    """Compare exact commute times with ``vol_alpha * Omega_alpha(v, w)``.

    For ``alpha = 0`` the identity is a theorem and a mismatch beyond
    ``rel_tol`` raises :class:`NumericalError`.  For ``alpha = +-1`` the
    ratio is only reported.
    """
    a = as_bias(alpha)
    C = commute_time_matrix(g, a)
    vol = volume(g, a)
    om = resistance_matrix(g, a).omega
    pairs, ratios = [], []
    for v in range(g.n):
        for w in range(v + 1, g.n):
            pred = vol * om[v, w]
            ratio = C[v, w] / pred
            pairs.append({"v": v, "w": w, "exact": float(C[v, w]), "predicted": float(pred),
                          "ratio": float(ratio)})
            ratios.append(ratio)
            if a == Bias.STANDARD and abs(C[v, w] - pred) > rel_tol * abs(pred):
                raise NumericalError(
                    f"commute identity fails at ({v}, {w}): {C[v, w]!r} vs {pred!r}"
                )
    r = np.array(ratios)
    summary = {"min": float(r.min()), "mean": float(r.mean()), "max": float(r.max())}
    return CommuteReport(a, vol, pairs, summary)
