"""Correlation-based greedy node selection and an exhaustive oracle.

Greedy removal: while more than P nodes remain, take the most correlated
remaining pair (i, j) and drop whichever of the two has the larger total
correlation. Ties in the pair search go to the lexicographically smallest
(i, j); a rowsum tie drops j, matching the strict ``>`` in the rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError, RankDeficientSelectionError, SingularOperatorError
from .lowrank import approx_samp, approx_svd
from .numerics import as_matrix, row_normalize, svd
from .reconstruct import SubsamplingOperator, error_report, reconstruct

BRUTE_FORCE_MAX_N = 12


@dataclass(frozen=True)
class RemovalStep:
    removed: int
    pair: tuple[int, int]
    rowsum_i: float
    rowsum_j: float

    def to_dict(self) -> dict:
        return {
            "removed": self.removed,
            "pair": list(self.pair),
            "rowsum_i": self.rowsum_i,
            "rowsum_j": self.rowsum_j,
        }


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]
    removal_trace: tuple[RemovalStep, ...] = ()
    scheme: str = "samp"
    scores: dict = field(default_factory=dict)

    @property
    def removed(self) -> tuple[int, ...]:
        return tuple(step.removed for step in self.removal_trace)

    def to_dict(self) -> dict:
        d = {
            "selected": list(self.selected),
            "scheme": self.scheme,
            "removal_trace": [s.to_dict() for s in self.removal_trace],
        }
        if self.scores:
            d["scores"] = [
                {"subset": list(k), "relative_error": v} for k, v in self.scores.items()
            ]
        return d


def node_correlation_matrix(b_sel) -> np.ndarray:
    """``|B_norm B_norm^T|`` with a zeroed diagonal, rows of ``b_sel`` unit-normalized."""
    b_norm = row_normalize(b_sel)
    corr = np.abs(b_norm @ b_norm.T)
    corr = np.minimum(np.maximum(corr, corr.T), 1.0)
    np.fill_diagonal(corr, 0.0)
    return corr


def greedy_select(b_sel, P: int, scheme: str = "samp", rowsum_active_only: bool = False) -> SelectionResult:
    b_sel = as_matrix(b_sel, "B_sel")
    n = b_sel.shape[0]
    if not 1 <= P <= n:
        raise ValueError(f"P must be in [1, {n}], got {P}")
    corr = node_correlation_matrix(b_sel)
    full_rowsum = corr.sum(axis=1)
    remaining = list(range(n))
    trace = []
    while len(remaining) > P:
        best, pair = -1.0, None
        for a, i in enumerate(remaining):
            for j in remaining[a + 1:]:
                if corr[i, j] > best:
                    best, pair = corr[i, j], (i, j)
        i, j = pair
        if rowsum_active_only:
            si, sj = corr[i, remaining].sum(), corr[j, remaining].sum()
        else:
            si, sj = full_rowsum[i], full_rowsum[j]
        drop = i if si > sj else j
        remaining.remove(drop)
        trace.append(RemovalStep(drop, pair, float(si), float(sj)))
    return SelectionResult(tuple(remaining), tuple(trace), scheme)


def brute_force_select(b, P: int, c_oracle, scheme: str = "samp", max_n: int = BRUTE_FORCE_MAX_N) -> SelectionResult:
    """Score every P-subset by actual reconstruction error of ``Y = B c``.

    Infeasible subsets (singular A_S T or dependent rows) are recorded with a
    ``None`` score. The winner is the first strict minimum in lexicographic
    subset order.
    """
    b = as_matrix(b, "B")
    n = b.shape[0]
    if n > max_n:
        raise ConfigError(
            f"brute-force selection refuses N={n} > {max_n}; use greedy_select instead"
        )
    if scheme not in ("svd", "samp"):
        raise ConfigError(f"unknown scheme {scheme!r}")
    c = as_matrix(c_oracle, "c")
    y = b @ c
    svd_fac = approx_svd(b, P, svd(b)) if scheme == "svd" else None

    scores = {}
    best, best_err = None, np.inf
    for subset in itertools.combinations(range(n), P):
        op = SubsamplingOperator(subset, n)
        try:
            fac = svd_fac if svd_fac is not None else approx_samp(b, subset)
            y_hat = reconstruct(op.apply(y), fac, op)
        except (SingularOperatorError, RankDeficientSelectionError):
            scores[subset] = None
            continue
        err = error_report(y, y_hat, b, fac, None, op).relative_error
        scores[subset] = err
        if err < best_err:
            best, best_err = subset, err
    if best is None:
        raise NumericalError(f"no feasible {P}-subset of {n} nodes for scheme {scheme}")
    return SelectionResult(best, (), scheme, scores)
