"""Dense Jacobi kernels: symmetric eigendecomposition and singular value decomposition."""

from __future__ import annotations

import math

import numpy as np


class ConvergenceError(ArithmeticError):
    """A Jacobi iteration hit its sweep limit before meeting its tolerance."""


def round_robin_schedule(n: int) -> list:
    """Partition all pairs ``p < q`` of ``range(n)`` into rounds of disjoint pairs.

    Circle-method tournament: ``n - 1`` rounds for even ``n`` (``n`` rounds
    for odd ``n``, with one vertex idle per round).
    """
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(S, *, tol: float = 1e-14, max_sweeps: int = 50, symmetry_tol: float = 1e-12):
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Each sweep visits every pair ``p < q`` once, grouped by
    :func:`round_robin_schedule` into rounds of disjoint pairs that are
    rotated together.  Iteration stops when the off-diagonal Frobenius norm
    is at most ``tol * ||S||_F``.

    Parameters
    ----------
    S : (n, n) array_like
        Symmetric input; ``|S - S.T| <= symmetry_tol * ||S||`` is required.
    tol : float
        Relative off-diagonal stopping threshold.
    max_sweeps : int
        Sweep budget; exhausting it raises :class:`ConvergenceError`.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    U : (n, n) ndarray
        Orthonormal eigenvectors as columns, ``S = U @ diag(w) @ U.T``.
    """
    A = np.array(S, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    norm = float(np.linalg.norm(A))
    if n and float(np.abs(A - A.T).max()) > symmetry_tol * max(norm, 1.0):
        raise ValueError("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    if n < 2 or norm == 0.0:
        return _sorted(np.diag(A).copy(), V)
    target = tol * norm
    rounds = _schedule(n)
    for _ in range(max_sweeps):
        if _off_norm(A) <= target:
            return _sorted(np.diag(A).copy(), V)
        for p, q in rounds:
            apq = A[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            if not active.all():
                p, q, apq = p[active], q[active], apq[active]
            app, aqq = A[p, p], A[q, q]
            with np.errstate(over="ignore"):
                theta = (aqq - app) / (2.0 * apq)
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(
                big,
                0.5 / np.where(big, theta, 1.0),
                np.copysign(1.0, th) / (np.abs(th) + np.sqrt(th * th + 1.0)),
            )
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- J^T A J, J holding [[c, s], [-s, c]] on each disjoint (p, q)
            ap, aq = A[:, p], A[:, q]
            A[:, p], A[:, q] = c * ap - s * aq, s * ap + c * aq
            ap, aq = A[p, :], A[q, :]
            A[p, :], A[q, :] = c[:, None] * ap - s[:, None] * aq, s[:, None] * ap + c[:, None] * aq
            A[p, p] = app - t * apq
            A[q, q] = aqq + t * apq
            A[p, q] = 0.0
            A[q, p] = 0.0
            vp, vq = V[:, p], V[:, q]
            V[:, p], V[:, q] = c * vp - s * vq, s * vp + c * vq
    off = _off_norm(A)
    if off <= target:
        return _sorted(np.diag(A).copy(), V)
    raise ConvergenceError(
        f"Jacobi eigensolver: off-diagonal norm {off:.3e} > {target:.3e} after {max_sweeps} sweeps"
    )


_SCHEDULES: dict = {}


def _schedule(n: int) -> list:
    if n not in _SCHEDULES:
        _SCHEDULES[n] = round_robin_schedule(n)
    return _SCHEDULES[n]


def _off_norm(A) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _sorted(w, V):
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def jacobi_svd(M, *, tol: float = 1e-15, max_sweeps: int = 60):
    """One-sided (Hestenes) Jacobi singular value decomposition.

    Columns of a working copy of ``M`` are rotated pairwise until every pair
    is orthogonal to relative precision ``tol``.

    Returns
    -------
    U : (m, n) ndarray
        Left singular vectors; columns belonging to zero singular values are zero.
    sigma : (n,) ndarray
        Singular values in descending order.
    V : (n, n) ndarray
        Right singular vectors, ``M = U @ diag(sigma) @ V.T``.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    transpose = A.shape[0] < A.shape[1]
    if transpose:
        A = A.T.copy()
    n = A.shape[1]
    V = np.eye(n)
    pairs = [(i, j) for i in range(n - 1) for j in range(i + 1, n)]
    for _ in range(max_sweeps):
        rotated = False
        for i, j in pairs:
            ai, aj = A[:, i], A[:, j]
            alpha = float(ai @ ai)
            beta = float(aj @ aj)
            gamma = float(ai @ aj)
            if alpha == 0.0 or beta == 0.0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                continue
            rotated = True
            zeta = (beta - alpha) / (2.0 * gamma)
            t = 1.0 / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
            if zeta < 0.0:
                t = -t
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = c * t
            ai = ai.copy()
            A[:, i] = c * ai - s * aj
            A[:, j] = s * ai + c * A[:, j]
            vi = V[:, i].copy()
            V[:, i] = c * vi - s * V[:, j]
            V[:, j] = s * vi + c * V[:, j]
        if not rotated:
            break
    else:
        raise ConvergenceError(f"one-sided Jacobi SVD did not converge in {max_sweeps} sweeps")
    sigma = np.linalg.norm(A, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, A, V = sigma[order], A[:, order], V[:, order]
    U = np.zeros_like(A)
    nz = sigma > 0
    U[:, nz] = A[:, nz] / sigma[nz]
    if transpose:
        return V, sigma, U
    return U, sigma, V


def pinv_svd(M, *, rcond_scale: float = 1e-10) -> np.ndarray:
    """Moore-Penrose pseudoinverse from :func:`jacobi_svd`.

    Singular values below ``rcond_scale * n * sigma_max`` are treated as zero.
    """
    M = np.asarray(M, dtype=float)
    U, sigma, V = jacobi_svd(M)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros(M.T.shape)
    cutoff = rcond_scale * max(M.shape) * sigma[0]
    inv = np.where(sigma > cutoff, 1.0 / np.where(sigma > cutoff, sigma, 1.0), 0.0)
    return (V * inv) @ U.T
