"""Node subsampling, reconstruction from the selected nodes, and error accounting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, SingularOperatorError
from .lowrank import LowRankFactorization
from .numerics import as_matrix, condition_number, solve_square

DB_FLOOR = -400.0
CHECK_RTOL = 1e-9


@dataclass(frozen=True)
class SubsamplingOperator:
    """Row selection A_S: the identity rows of an ``n x n`` matrix indexed by ``selected``."""

    selected: tuple[int, ...]
    n: int

    def __post_init__(self):
        sel = tuple(int(i) for i in self.selected)
        object.__setattr__(self, "selected", sel)
        if not sel:
            raise ValueError("selection must contain at least one node")
        if len(set(sel)) != len(sel):
            raise ValueError(f"duplicate nodes in selection {list(sel)}")
        bad = [i for i in sel if not 0 <= i < self.n]
        if bad:
            raise IndexError(f"nodes {bad} out of range for a {self.n}-node graph")

    @property
    def P(self) -> int:
        return len(self.selected)

    def matrix(self) -> np.ndarray:
        return np.eye(self.n)[list(self.selected)]

    def apply(self, m) -> np.ndarray:
        return np.asarray(m)[list(self.selected)]


@dataclass(frozen=True, eq=False)
class ReconstructionReport:
    y_hat: np.ndarray
    per_time_error: np.ndarray
    relative_error: float
    error_db: float
    low_rank_term: float | None
    sampling_term: float | None
    condition_ast: float

    def to_dict(self) -> dict:
        per_t = [None if not np.isfinite(v) else float(v) for v in self.per_time_error]
        return {
            "error_db": self.error_db,
            "relative_error": self.relative_error,
            "low_rank_term": self.low_rank_term,
            "sampling_term": self.sampling_term,
            "condition_ast": self.condition_ast,
            "per_time_error": per_t,
        }


def subsample(y, op: SubsamplingOperator) -> np.ndarray:
    y = as_matrix(y, "signals")
    if y.shape[0] != op.n:
        raise ValueError(f"signal has {y.shape[0]} rows, operator expects {op.n}")
    return op.apply(y).copy()


def sampled_operator(fac: LowRankFactorization, op: SubsamplingOperator) -> np.ndarray:
    if fac.t_factor.shape != (op.n, op.P):
        raise ValueError(
            f"T factor is {fac.t_factor.shape}, expected {(op.n, op.P)} for this selection"
        )
    return op.apply(fac.t_factor)


def reconstruct(y_s, fac: LowRankFactorization, op: SubsamplingOperator) -> np.ndarray:
    """``y_hat = T (A_S T)^-1 y_S``, solved without forming the inverse."""
    y_s = as_matrix(y_s, "y_S")
    ast = sampled_operator(fac, op)
    try:
        coeffs = solve_square(ast, y_s)
    except SingularOperatorError as exc:
        raise SingularOperatorError(exc.condition, op.selected) from None
    return fac.t_factor @ coeffs


def _to_db(ratio: float) -> float:
    if ratio <= 0.0:
        return DB_FLOOR
    return max(DB_FLOOR, 10.0 * float(np.log10(ratio)))


def error_report(y, y_hat, b, fac: LowRankFactorization, c, op: SubsamplingOperator) -> ReconstructionReport:
    """Normalized error in dB plus the two terms of the triangle-inequality bound.

    ``c`` may be ``None`` when only the observed signals are available; the
    bound terms are then left unset.
    """
    y = as_matrix(y, "y")
    y_hat = as_matrix(y_hat, "y_hat")
    if y.shape != y_hat.shape:
        raise ValueError(f"shape mismatch: y {y.shape} vs y_hat {y_hat.shape}")
    y_norm = float(np.linalg.norm(y))
    if y_norm == 0.0:
        raise NumericalError("normalized error undefined: the signal is identically zero")
    diff = y - y_hat
    err = float(np.linalg.norm(diff))

    col_norm = np.linalg.norm(y, axis=0)
    col_err = np.linalg.norm(diff, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        per_t = np.where(col_norm > 0, col_err / np.where(col_norm > 0, col_norm, 1.0), np.nan)

    ast = sampled_operator(fac, op)
    cond = condition_number(ast)
    low_rank_term = sampling_term = None
    if c is not None:
        b = as_matrix(b, "B")
        c = as_matrix(c, "c")
        y_tilde = fac.b_tilde @ c
        low_rank_term = float(np.linalg.norm((b - fac.b_tilde) @ c))
        gap = op.apply(y_tilde) - op.apply(y)
        sampling_term = float(np.linalg.norm(fac.t_factor @ solve_square(ast, gap)))
        slack = CHECK_RTOL * y_norm
        if err > low_rank_term + sampling_term + slack:
            raise NumericalError(
                f"triangle bound violated: error {err:.6e} > "
                f"{low_rank_term:.6e} + {sampling_term:.6e}"
            )
        if fac.scheme == "samp" and sampling_term > slack:
            raise NumericalError(
                f"row-copy approximation left a nonzero sampling term {sampling_term:.3e}"
            )

    return ReconstructionReport(
        y_hat=y_hat,
        per_time_error=per_t,
        relative_error=err / y_norm,
        error_db=_to_db((err / y_norm) ** 2),
        low_rank_term=low_rank_term,
        sampling_term=sampling_term,
        condition_ast=cond,
    )
