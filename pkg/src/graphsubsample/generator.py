"""Laplacian-polynomial generator ``B = sum_k gamma_k L^k`` and signal synthesis."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .numerics import as_matrix

SIGNAL_MODES = ("random_sinusoids", "iid_gaussian_per_t")


@dataclass(frozen=True)
class GeneratorSpec:
    """Polynomial order and coefficients.

    With ``coefficients=None`` the ``order`` coefficients are drawn from
    Normal(0, 1) with ``coefficient_seed``; :meth:`gammas` returns the
    realized values either way.
    """

    order: int = 5
    coefficients: tuple[float, ...] | None = None
    coefficient_seed: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise ConfigError(f"generator order must be >= 1, got {self.order}")
        if self.coefficients is not None:
            coeffs = tuple(float(x) for x in self.coefficients)
            object.__setattr__(self, "coefficients", coeffs)
            if len(coeffs) != self.order:
                raise ConfigError(
                    f"expected {self.order} coefficients, got {len(coeffs)}"
                )
            if not all(np.isfinite(coeffs)):
                raise ConfigError("generator coefficients must be finite")
            if all(c == 0 for c in coeffs):
                raise ConfigError("at least one generator coefficient must be nonzero")
        if self.coefficient_seed < 0:
            raise ConfigError("coefficient_seed must be nonnegative")

    def gammas(self) -> tuple[float, ...]:
        if self.coefficients is not None:
            return self.coefficients
        draw = np.random.default_rng(self.coefficient_seed).standard_normal(self.order)
        return tuple(float(x) for x in draw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coefficients"] = None if self.coefficients is None else list(self.coefficients)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown generator fields: {sorted(unknown)}")
        if d.get("coefficients") is not None:
            d["coefficients"] = tuple(d["coefficients"])
            d.setdefault("order", len(d["coefficients"]))
        return cls(**d)


@dataclass(frozen=True)
class SignalSpec:
    time_samples: int = 256
    mode: str = "random_sinusoids"
    harmonics: int = 3
    signal_seed: int = 0

    def __post_init__(self):
        if self.time_samples < 1:
            raise ConfigError("time_samples must be >= 1")
        if self.harmonics < 1:
            raise ConfigError("harmonics must be >= 1")
        if self.mode not in SIGNAL_MODES:
            raise ConfigError(f"unknown signal mode {self.mode!r}; expected one of {SIGNAL_MODES}")
        if self.signal_seed < 0:
            raise ConfigError("signal_seed must be nonnegative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SignalSpec":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown signal fields: {sorted(unknown)}")
        return cls(**d)


def build_generator(lap, spec: GeneratorSpec) -> np.ndarray:
    lap = as_matrix(lap, "laplacian")
    n, m = lap.shape
    if n != m:
        raise ValueError(f"Laplacian must be square, got {lap.shape}")
    if np.linalg.norm(lap - lap.T) > 1e-10 * max(1.0, np.linalg.norm(lap)):
        raise ValueError("Laplacian must be symmetric")
    b = np.zeros_like(lap)
    power = np.eye(n)
    for gamma in spec.gammas():
        power = power @ lap
        b += gamma * power
    return b


def synthesize_coefficients(n: int, spec: SignalSpec) -> np.ndarray:
    """Latent coefficient signals c(t), one row per node.

    ``random_sinusoids``: row i is ``sum_h a_ih sin(2 pi h t / T + phi_ih)``
    with ``a ~ N(0, 1)`` and ``phi ~ U[0, 2 pi)``, for t = 0..T-1.
    """
    if n < 1:
        raise ValueError("need at least one node")
    rng = np.random.default_rng(spec.signal_seed)
    T = spec.time_samples
    if spec.mode == "iid_gaussian_per_t":
        return rng.standard_normal((n, T))
    h = np.arange(1, spec.harmonics + 1)
    amp = rng.standard_normal((n, spec.harmonics))
    phase = rng.uniform(0.0, 2 * np.pi, size=(n, spec.harmonics))
    t = np.arange(T)
    arg = 2 * np.pi * h[None, :, None] * t[None, None, :] / T + phase[:, :, None]
    return np.einsum("ih,iht->it", amp, np.sin(arg))


def generate_signals(b, c) -> np.ndarray:
    b = as_matrix(b, "B")
    c = as_matrix(c, "c")
    if b.shape[1] != c.shape[0]:
        raise ValueError(f"B is {b.shape} but c has {c.shape[0]} rows")
    return b @ c


def signal_correlation(y, i: int, j: int) -> float:
    """Pearson correlation over time between node rows ``i`` and ``j``."""
    y = as_matrix(y, "signals")
    if y.shape[1] < 2:
        raise ValueError("correlation needs at least two time samples")
    rows = []
    for k in (i, j):
        r = y[k] - y[k].mean()
        nrm = np.linalg.norm(r)
        if nrm <= 1e-14 * (1.0 + np.abs(y[k]).max()) * np.sqrt(y.shape[1]):
            raise ValueError(f"correlation undefined: row {k} is constant")
        rows.append(r / nrm)
    return float(np.clip(rows[0] @ rows[1], -1.0, 1.0))


def signals_to_csv(y) -> str:
    y = as_matrix(y, "signals")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node"] + [f"t{k}" for k in range(y.shape[1])])
    for i, row in enumerate(y):
        w.writerow([i] + [format(float(v), ".17g") for v in row])
    return buf.getvalue()


def signals_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][0] != "node":
        raise ValueError("signal CSV must start with a 'node,t0,...' header")
    body = rows[1:]
    for k, row in enumerate(body):
        if int(row[0]) != k:
            raise ValueError(f"signal CSV rows out of order at node {row[0]}")
    return np.array([[float(v) for v in row[1:]] for row in body])


def save_signals(y, path) -> None:
    Path(path).write_text(signals_to_csv(y))


def load_signals(path) -> np.ndarray:
    return signals_from_csv(Path(path).read_text())
