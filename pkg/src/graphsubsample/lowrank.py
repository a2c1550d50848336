"""Rank selection and the two rank-P approximations of the generator.

``svd`` keeps the P largest singular triplets (T = U_P). ``samp`` copies the
selected rows of B and projects every other row onto their span; T is then
the columns of the approximation indexed by the selected nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError, RankDeficientSelectionError
from .numerics import SvdResult, as_matrix, svd

INDEPENDENCE_RTOL = 1e-10
GS_TOL = 1e-12


@dataclass(frozen=True)
class RankSelection:
    P: int
    epsilon: float
    discarded_energy: float
    total_energy: float


@dataclass(frozen=True, eq=False)
class LowRankFactorization:
    scheme: str
    P: int
    b_tilde: np.ndarray
    t_factor: np.ndarray
    selected: tuple[int, ...] | None = None
    singular_values: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "P": self.P,
            "selected_set": None if self.selected is None else list(self.selected),
            "singular_values": None if self.singular_values is None else self.singular_values.tolist(),
            "b_tilde": self.b_tilde.tolist(),
            "t_factor": self.t_factor.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LowRankFactorization":
        sv = d.get("singular_values")
        sel = d.get("selected_set")
        return cls(
            scheme=d["scheme"],
            P=int(d["P"]),
            b_tilde=np.array(d["b_tilde"], dtype=float),
            t_factor=np.array(d["t_factor"], dtype=float).reshape(len(d["b_tilde"]), int(d["P"])),
            selected=None if sel is None else tuple(int(i) for i in sel),
            singular_values=None if sv is None else np.array(sv, dtype=float),
        )


def select_rank(singular_values, epsilon: float) -> RankSelection:
    """Smallest P >= 1 whose discarded energy is at most ``epsilon**2`` of the total."""
    s = np.asarray(singular_values, dtype=float)
    if s.ndim != 1 or len(s) == 0:
        raise ValueError("singular values must be a non-empty vector")
    if np.any(s < 0) or np.any(np.diff(s) > 0):
        raise ValueError("singular values must be nonnegative and sorted nonincreasing")
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    energy = s * s
    total = float(energy.sum())
    if total == 0.0:
        raise NumericalError("all singular values are zero; nothing to sample")
    # tail[j] = sum_{i > j} sigma_i^2 with 1-based j
    tail = np.concatenate([np.cumsum(energy[::-1])[::-1][1:], [0.0]])
    budget = epsilon**2 * total
    P = int(np.argmax(tail <= budget)) + 1
    return RankSelection(P, float(epsilon), float(tail[P - 1]), total)


def approx_svd(b, P: int, decomposition: SvdResult | None = None) -> LowRankFactorization:
    b = as_matrix(b, "B")
    n = b.shape[0]
    if not 1 <= P <= n:
        raise ValueError(f"rank P must be in [1, {n}], got {P}")
    dec = decomposition if decomposition is not None else svd(b)
    u = dec.u[:, :P]
    s = dec.singular_values
    b_tilde = (u * s[:P]) @ dec.v[:, :P].T
    return LowRankFactorization("svd", P, b_tilde, u.copy(), None, s.copy())


def _row_basis(rows: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as columns) for the span of ``rows``; Gram-Schmidt with reorthogonalization."""
    q = np.zeros((rows.shape[1], rows.shape[0]))
    for k, r in enumerate(rows):
        v = r.copy()
        nrm0 = np.linalg.norm(v)
        for _ in range(2):
            v -= q[:, :k] @ (q[:, :k].T @ v)
        nrm = np.linalg.norm(v)
        if nrm <= GS_TOL * nrm0 or nrm == 0.0:
            raise NumericalError(f"row {k} of the selected block is dependent")
        q[:, k] = v / nrm
    return q


def approx_samp(b, selected) -> LowRankFactorization:
    b = as_matrix(b, "B")
    n = b.shape[0]
    sel = tuple(int(i) for i in selected)
    if not sel or len(set(sel)) != len(sel) or min(sel) < 0 or max(sel) >= n:
        raise ValueError(f"selected set {list(sel)} is not a set of distinct nodes in [0, {n})")
    block = b[list(sel), :]
    s = svd(block).singular_values
    ratio = 0.0 if s[0] == 0 else float(s[-1] / s[0])
    if not ratio > INDEPENDENCE_RTOL:
        raise RankDeficientSelectionError(sel, ratio)
    q = _row_basis(block)
    b_tilde = (b @ q) @ q.T
    b_tilde[list(sel), :] = block
    t_factor = b_tilde[:, list(sel)].copy()
    return LowRankFactorization("samp", len(sel), b_tilde, t_factor, sel, None)


def compute_f(b_tilde, t_factor) -> np.ndarray:
    """Least-squares coefficient matrix F with ``T F ~= B_tilde`` (diagnostic only)."""
    b_tilde = as_matrix(b_tilde, "b_tilde")
    t_factor = as_matrix(t_factor, "t_factor")
    if t_factor.shape[0] != b_tilde.shape[0]:
        raise ValueError(f"T is {t_factor.shape} but B_tilde is {b_tilde.shape}")
    s = svd(t_factor).singular_values
    if t_factor.shape[1] > t_factor.shape[0] or not s[-1] > INDEPENDENCE_RTOL * s[0]:
        raise NumericalError("T factor is not of full column rank")
    f, *_ = np.linalg.lstsq(t_factor, b_tilde, rcond=None)
    return f


def identity_columns(f, atol=1e-9) -> dict[int, int]:
    """Columns of F that equal a standard basis vector: ``{column: k}`` for ``F[:, column] = e_k``."""
    f = as_matrix(f, "F")
    out = {}
    for j in range(f.shape[1]):
        col = f[:, j]
        k = int(np.argmax(np.abs(col)))
        e = np.zeros_like(col)
        e[k] = 1.0
        if np.max(np.abs(col - e)) <= atol:
            out[j] = k
    return out
