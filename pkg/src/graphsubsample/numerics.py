"""Dense real-matrix kernel.

Matrices are plain ``float64`` numpy arrays; :func:`as_matrix` is the single
validation gate. The SVD is a one-sided (Hestenes) Jacobi iteration with a
round-robin pair ordering so every round rotates ``n // 2`` disjoint column
pairs at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularOperatorError, SvdConvergenceError

EPS = np.finfo(float).eps
SINGULAR_CONDITION = 1.0 / np.sqrt(EPS)
MAX_SWEEPS = 80


def as_matrix(m, name="matrix") -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


@dataclass(frozen=True)
class SvdResult:
    singular_values: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        k = len(self.singular_values)
        return (self.u[:, :k] * self.singular_values) @ self.v[:, :k].T


def _round_robin(n):
    """Pairings for a round-robin tournament over ``n`` players.

    Returns ``n - 1`` rounds (``n`` padded to even); pairs touching the
    padding index are dropped.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        half = m // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        keep = (p < n) & (q < n)
        rounds.append((p[keep], q[keep]))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _complete_basis(cols: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """Fill the columns flagged in ``missing`` with an orthonormal complement."""
    q = cols.copy()
    n = q.shape[0]
    have = [j for j in range(q.shape[1]) if not missing[j]]
    for j in np.flatnonzero(missing):
        basis = q[:, have]
        best, best_norm = None, -1.0
        for k in range(n):
            e = np.zeros(n)
            e[k] = 1.0
            for _ in range(2):
                e -= basis @ (basis.T @ e)
            nrm = np.linalg.norm(e)
            if nrm > best_norm:
                best, best_norm = e, nrm
            if nrm > 0.7:
                break
        q[:, j] = best / best_norm
        have.append(j)
    return q


def _orthonormalize(cols: np.ndarray, null: np.ndarray) -> np.ndarray:
    # classical Gram-Schmidt applied twice (CGS2), in the given column order
    q = cols.copy()
    k = q.shape[1]
    for j in range(k):
        if null[j]:
            continue
        v = q[:, j]
        prev = q[:, [i for i in range(j) if not null[i]]]
        for _ in range(2):
            v = v - prev @ (prev.T @ v)
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            null[j] = True
            continue
        q[:, j] = v / nrm
    if null.any():
        q = _complete_basis(q, null)
    return q


def _jacobi_columns(a: np.ndarray):
    """Orthogonalize the columns of ``a`` (rows >= cols). Returns (A V, V)."""
    rows, n = a.shape
    # work on transposes so that each column is a contiguous row
    wt = a.T.copy()
    vt = np.eye(n)
    tol = EPS * max(rows, 1)
    # columns below this energy are rounding noise and cannot be orthogonalized further
    noise = (EPS * np.linalg.norm(a)) ** 2
    rounds = _round_robin(n)
    for sweep in range(MAX_SWEEPS):
        rotated = False
        for p, q in rounds:
            if len(p) == 0:
                continue
            wp, wq = wt[p], wt[q]
            alpha = np.einsum("ij,ij->i", wp, wp)
            beta = np.einsum("ij,ij->i", wq, wq)
            gamma = np.einsum("ij,ij->i", wp, wq)
            active = (np.abs(gamma) > tol * np.sqrt(alpha) * np.sqrt(beta)) & (np.minimum(alpha, beta) > noise)
            if not active.any():
                continue
            with np.errstate(over="ignore", divide="ignore"):
                zeta = (beta - alpha) / (2.0 * np.where(active, gamma, 1.0))
                t = np.sign(zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
            t[zeta == 0] = 1.0
            # a rotation angle that underflows to zero cannot make progress
            active &= t != 0
            if not active.any():
                continue
            rotated = True
            if not active.all():
                p, q = p[active], q[active]
                wp, wq = wp[active], wq[active]
                t = t[active]
            c = (1.0 / np.sqrt(1.0 + t * t))[:, None]
            s = c * t[:, None]
            wt[p] = c * wp - s * wq
            wt[q] = s * wp + c * wq
            vp, vq = vt[p], vt[q]
            vt[p] = c * vp - s * vq
            vt[q] = s * vp + c * vq
        if not rotated:
            return wt.T, vt.T
    raise SvdConvergenceError(a.shape, MAX_SWEEPS)


def svd(m) -> SvdResult:
    """Full SVD ``m = U diag(s) V^T`` with ``s`` sorted nonincreasing.

    For an ``r x c`` input, ``U`` is ``r x r`` and ``V`` is ``c x c``; left
    (or right) vectors for zero singular values are completed to an
    orthonormal basis.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows < cols:
        t = svd(a.T)
        return SvdResult(t.singular_values, t.v, t.u)

    scale = float(np.abs(a).max())
    if scale == 0.0:
        return SvdResult(np.zeros(cols), np.eye(rows), np.eye(cols))
    w, v = _jacobi_columns(a / scale)
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, w, v = sigma[order], w[:, order], v[:, order]

    smax = sigma[0] if len(sigma) else 0.0
    null = sigma <= max(smax * EPS * rows, np.finfo(float).tiny)
    u = np.zeros((rows, rows))
    safe = np.where(null, 1.0, sigma)
    u[:, :cols] = w / safe
    null_u = np.concatenate([null, np.ones(rows - cols, dtype=bool)])
    u = _orthonormalize(u, null_u)
    v = _orthonormalize(v, np.zeros(cols, dtype=bool))
    return SvdResult(sigma * scale, u, v)


def singular_values(m) -> np.ndarray:
    return svd(m).singular_values


def condition_number(m) -> float:
    s = singular_values(m)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def solve_square(a, b) -> np.ndarray:
    """Solve ``a x = b`` with LU and partial pivoting.

    Raises :class:`SingularOperatorError` when the 2-norm condition number
    of ``a`` exceeds ``1/sqrt(eps)``.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"solve_square needs a square matrix, got {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"row mismatch: a is {a.shape}, b is {b.shape}")
    cond = condition_number(a)
    if not cond <= SINGULAR_CONDITION:
        raise SingularOperatorError(cond)
    return np.linalg.solve(a, b)


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a), "fro"))


def spectral_norm_via_svd(a) -> float:
    return float(singular_values(a)[0])


def row_normalize(a) -> np.ndarray:
    """Scale each row to unit 2-norm; all-zero rows stay zero."""
    a = as_matrix(a)
    norms = np.linalg.norm(a, axis=1)
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return a * scale[:, None]


def numerical_rank(m, rtol=1e-10) -> int:
    s = singular_values(m)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))
