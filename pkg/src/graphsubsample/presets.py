"""Pinned experiment configurations for the five graph families.

Seeds are fixed per family. Each was chosen as the smallest seed (all three
seeds equal) for which the tolerance actually binds, i.e. the selected rank
differs between epsilon = 0.03 and epsilon = 0.01; ``scripts/seed_scan.py``
reproduces the scan. The default figure1a template has a degenerate spectrum
at alpha = 1 (it is the uniform complete graph), so no seed makes the rank
differ there and seed 3 is shared with the alpha = 5 case.

The alpha sweep uses the smallest coefficient seed whose generator polynomial
is increasing on [0, 2], the range of the normalized Laplacian spectrum.
"""

from __future__ import annotations

import numpy as np

from .experiment import ExperimentConfig
from .generator import GeneratorSpec, SignalSpec
from .graph import GraphTemplate

TABLE_EPSILONS = (0.03, 0.01)

FAMILY_TEMPLATES = {
    "figure1a_alpha5": {"kind": "figure1a", "alpha": 5.0},
    "figure1a_alpha1": {"kind": "figure1a", "alpha": 1.0},
    "erdos_renyi": {"kind": "erdos_renyi", "n": 5, "p": 0.5, "w_lo": 1.0, "w_hi": 10.0},
    "complete": {"kind": "complete", "n": 5, "w_lo": 1.0, "w_hi": 10.0},
    "bipartite": {"kind": "bipartite", "n": 5, "w_lo": 1.0, "w_hi": 10.0},
}

FAMILY_SEEDS = {
    "figure1a_alpha5": 3,
    "figure1a_alpha1": 3,
    "erdos_renyi": 3,
    "complete": 9,
    "bipartite": 0,
}

SWEEP_SEED = 1
SWEEP_ALPHAS = (1.0, 2.0, 3.0, 4.0, 5.0)


def family_config(family: str, epsilon: float, seed: int | None = None, scheme="both") -> ExperimentConfig:
    s = FAMILY_SEEDS[family] if seed is None else seed
    return ExperimentConfig(
        graph=GraphTemplate(**FAMILY_TEMPLATES[family], seed=s),
        generator=GeneratorSpec(order=5, coefficient_seed=s),
        signal=SignalSpec(time_samples=256, signal_seed=s),
        epsilon=epsilon,
        scheme=scheme,
        name=family,
    )


def table_suite(epsilons=TABLE_EPSILONS) -> list[dict]:
    return [family_config(f, e).to_dict() for f in FAMILY_TEMPLATES for e in epsilons]


def sweep_config(seed: int = SWEEP_SEED, epsilon: float = 0.03) -> ExperimentConfig:
    return ExperimentConfig(
        graph=GraphTemplate(kind="figure1a", seed=seed),
        generator=GeneratorSpec(order=5, coefficient_seed=seed),
        signal=SignalSpec(time_samples=256, signal_seed=seed),
        epsilon=epsilon,
        scheme="both",
        name="figure1a",
    )


def polynomial_increasing(gammas, lo=0.0, hi=2.0, points=2001) -> bool:
    """True if ``sum_k gamma_k x^k`` has a positive derivative on a grid over [lo, hi]."""
    x = np.linspace(lo, hi, points)
    deriv = sum(k * g * x ** (k - 1) for k, g in enumerate(gammas, start=1))
    return bool(np.all(deriv > 0))
