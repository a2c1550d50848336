"""Weighted undirected graphs, template families and the normalized Laplacian.

Node indices are 0-based throughout. The ``figure1a`` template is a 5-node
graph whose pairs (1, 3) and (0, 4) (nodes 2-4 and 1-5 when counted from one)
carry the variable weight ``alpha``; every other pair carries ``base_weight``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, IsolatedNodeError
from .numerics import as_matrix, singular_values

KINDS = ("custom", "erdos_renyi", "complete", "bipartite", "figure1a")
FIGURE1A_ALPHA_PAIRS = ((1, 3), (0, 4))


@dataclass(frozen=True)
class GraphTemplate:
    kind: str = "figure1a"
    n: int = 5
    p: float = 0.5
    w_lo: float = 1.0
    w_hi: float = 10.0
    alpha: float = 1.0
    base_weight: float = 1.0
    parts: tuple[int, int] | None = None
    weights: tuple[tuple[float, ...], ...] | None = None
    alpha_pairs: tuple[tuple[int, int], ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown graph kind {self.kind!r}; expected one of {KINDS}")
        if self.weights is not None:
            object.__setattr__(
                self, "weights", tuple(tuple(float(x) for x in row) for row in self.weights)
            )
        if self.parts is not None:
            object.__setattr__(self, "parts", tuple(int(x) for x in self.parts))
        pairs = self.alpha_pairs
        if self.kind == "figure1a" and not pairs:
            pairs = FIGURE1A_ALPHA_PAIRS
        object.__setattr__(self, "alpha_pairs", tuple(tuple(int(x) for x in pr) for pr in pairs))
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        self.validate()

    @property
    def node_count(self) -> int:
        if self.kind == "figure1a":
            return 5
        if self.kind == "custom" and self.weights is not None:
            return len(self.weights)
        return self.n

    @property
    def has_alpha(self) -> bool:
        return bool(self.alpha_pairs)

    def validate(self):
        n = self.node_count
        if n < 2:
            raise ConfigError(f"graph needs at least 2 nodes, got {n}")
        if self.kind == "figure1a":
            if not self.alpha > 0:
                raise ConfigError("figure1a requires alpha > 0")
            if self.n != 5:
                raise ConfigError("figure1a has exactly 5 nodes")
        if self.kind in ("erdos_renyi", "complete", "bipartite"):
            if not 0 < self.w_lo <= self.w_hi:
                raise ConfigError(f"weight range must satisfy 0 < w_lo <= w_hi, got [{self.w_lo}, {self.w_hi}]")
        if self.kind == "erdos_renyi" and not 0 <= self.p <= 1:
            raise ConfigError(f"edge probability must be in [0, 1], got {self.p}")
        if self.kind == "bipartite":
            a, b = self._parts()
            if a < 1 or b < 1 or a + b != n:
                raise ConfigError(f"bipartite parts {(a, b)} invalid for n={n}")
        if self.kind == "custom" and self.weights is None:
            raise ConfigError("custom graph requires an explicit weights matrix")
        for i, j in self.alpha_pairs:
            if not (0 <= i < n and 0 <= j < n and i != j):
                raise ConfigError(f"alpha pair {(i, j)} out of range for n={n}")
        if self.alpha_pairs and not self.alpha > 0:
            raise ConfigError("alpha must be positive")

    def _parts(self):
        if self.parts is not None:
            return self.parts
        return self.n // 2, self.n - self.n // 2

    def with_alpha(self, alpha: float) -> "GraphTemplate":
        d = self.to_dict()
        d["alpha"] = float(alpha)
        return GraphTemplate.from_dict(d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["parts"] = None if self.parts is None else list(self.parts)
        d["weights"] = None if self.weights is None else [list(r) for r in self.weights]
        d["alpha_pairs"] = [list(pr) for pr in self.alpha_pairs]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GraphTemplate":
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown graph template fields: {sorted(unknown)}")
        if d.get("alpha_pairs") is not None:
            d["alpha_pairs"] = tuple(tuple(pr) for pr in d["alpha_pairs"])
        else:
            d.pop("alpha_pairs", None)
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    weights: np.ndarray
    template: GraphTemplate | None = field(default=None)

    def __post_init__(self):
        w = as_matrix(self.weights, "weights")
        if w.shape[0] != w.shape[1]:
            raise ValueError(f"adjacency must be square, got {w.shape}")
        if not np.array_equal(w, w.T):
            raise ValueError("adjacency must be exactly symmetric")
        if np.any(np.diag(w) != 0):
            raise ValueError("adjacency must have a zero diagonal")
        if np.any(w < 0):
            raise ValueError("edge weights must be nonnegative")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(self.weights[i] > 0):
                if j not in seen:
                    seen.add(int(j))
                    stack.append(int(j))
        return len(seen) == self.n


def _pair_rng(seed: int, i: int, j: int) -> np.random.Generator:
    # counter-based stream keyed on (seed, i, j): independent of iteration order
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, i, j])))


def build_graph(t: GraphTemplate) -> WeightedGraph:
    n = t.node_count
    if t.kind == "custom":
        w = np.array(t.weights, dtype=float)
    elif t.kind == "figure1a":
        w = np.full((n, n), float(t.base_weight))
        np.fill_diagonal(w, 0.0)
    else:
        w = np.zeros((n, n))
        n_left = t._parts()[0] if t.kind == "bipartite" else 0
        for i in range(n):
            for j in range(i + 1, n):
                rng = _pair_rng(t.seed, i, j)
                u = rng.random()
                weight = rng.uniform(t.w_lo, t.w_hi)
                if t.kind == "erdos_renyi" and not u < t.p:
                    continue
                if t.kind == "bipartite" and (i < n_left) == (j < n_left):
                    continue
                w[i, j] = w[j, i] = weight
    for i, j in t.alpha_pairs:
        w[i, j] = w[j, i] = float(t.alpha)
    return WeightedGraph(w, t)


def normalized_laplacian(g: WeightedGraph) -> np.ndarray:
    """``L = D^-1/2 (D - W) D^-1/2``, exactly symmetric."""
    w = g.weights
    d = w.sum(axis=1)
    zero = np.flatnonzero(d <= 0)
    if len(zero):
        raise IsolatedNodeError(int(zero[0]))
    s = 1.0 / np.sqrt(d)
    lap = s[:, None] * (np.diag(d) - w) * s[None, :]
    upper = np.triu(lap)
    return upper + np.triu(lap, 1).T


def second_smallest_singular_value(b) -> float:
    s = singular_values(b)
    if len(s) < 2:
        raise ValueError("need at least a 2x2 matrix")
    return float(s[-2])


def graph_to_dict(g: WeightedGraph) -> dict:
    t = g.template
    return {
        "n": g.n,
        "weights": g.weights.tolist(),
        "template": None if t is None else t.to_dict(),
        "seed": None if t is None else t.seed,
    }


def graph_from_dict(d: dict) -> WeightedGraph:
    t = None if d.get("template") is None else GraphTemplate.from_dict(d["template"])
    g = WeightedGraph(np.array(d["weights"], dtype=float), t)
    if g.n != d["n"]:
        raise ConfigError(f"graph file says n={d['n']} but weights are {g.n}x{g.n}")
    return g


def save_graph(g: WeightedGraph, path) -> None:
    Path(path).write_text(json.dumps(graph_to_dict(g), indent=2) + "\n")


def load_graph(path) -> WeightedGraph:
    return graph_from_dict(json.loads(Path(path).read_text()))
