"""Fractional-threshold adoption cascades on a social network.

Every node is either a non-adopter or an adopter.  Each step:

1. with probability ``innovation_rate`` one uniformly chosen non-adopter
   adopts spontaneously (an innovation);
2. the cascade then runs in synchronous rounds: every non-adopter with at
   least one adopted neighbour and an adopted-neighbour fraction
   ``>= threshold_fraction`` adopts, until a round adds nobody.

Consecutive steps that each contain at least one cascade adoption form one
avalanche.

Seed protocol: one ``numpy.random.default_rng(seed)`` stream.  The first
draw, ``rng.integers(0, 2**32)``, seeds the networkx graph generator.  Then
for each step ``rng.random()`` decides the innovation and, only when it
fires, ``rng.integers(0, m)`` picks among the ``m`` current non-adopters in
ascending node order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from ..errors import DisconnectedGraph
from .records import AvalancheRecord

DEFAULT_PARAMS = {
    "small_world": {"k": 6, "p": 0.1},
    "scale_free": {"m": 2},
    "grid": {},
}


@dataclass(frozen=True)
class AdoptionConfig:
    topology: str
    n_nodes: int
    threshold_fraction: float
    innovation_rate: float
    steps: int
    seed: int
    topology_params: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.topology not in DEFAULT_PARAMS:
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.n_nodes < 2:
            raise ValueError("need at least two nodes")
        if not 0.0 <= self.threshold_fraction <= 1.0:
            raise ValueError("threshold_fraction must lie in [0, 1]")
        if not 0.0 <= self.innovation_rate <= 1.0:
            raise ValueError("innovation_rate must lie in [0, 1]")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")

    @property
    def params(self) -> dict:
        return {**DEFAULT_PARAMS[self.topology], **self.topology_params}


@dataclass(frozen=True)
class AdoptionTrace:
    n_nodes: int
    cumulative: np.ndarray = field(compare=False)   # adopters after step t, t = 1..steps
    innovations: np.ndarray = field(compare=False)
    cascades: np.ndarray = field(compare=False)
    avalanches: tuple[AvalancheRecord, ...] = ()

    @property
    def steps(self) -> int:
        return len(self.cumulative)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "cumulative_adopters", "innovations", "cascade_adoptions"])
        for t, (c, i, k) in enumerate(zip(self.cumulative, self.innovations, self.cascades), 1):
            w.writerow([t, int(c), int(i), int(k)])
        return buf.getvalue()


def build_graph(config: AdoptionConfig, graph_seed: int) -> nx.Graph:
    n, params = config.n_nodes, config.params
    if config.topology == "small_world":
        g = nx.watts_strogatz_graph(n, int(params["k"]), float(params["p"]), seed=graph_seed)
    elif config.topology == "scale_free":
        g = nx.barabasi_albert_graph(n, int(params["m"]), seed=graph_seed)
    else:
        rows = int(params.get("rows", math.isqrt(n)))
        if rows < 1 or n % rows:
            raise ValueError(f"grid topology needs n_nodes divisible by rows={rows}")
        g = nx.convert_node_labels_to_integers(nx.grid_2d_graph(rows, n // rows),
                                               ordering="sorted")
    if config.topology != "scale_free" and not nx.is_connected(g):
        raise DisconnectedGraph(f"{config.topology} graph with seed {graph_seed} is disconnected")
    return g


def _cascade(adopted: np.ndarray, src: np.ndarray, dst: np.ndarray, degree: np.ndarray,
             threshold: float) -> int:
    added = 0
    while True:
        counts = np.bincount(src, weights=adopted[dst], minlength=len(adopted))
        frac = np.divide(counts, degree, out=np.zeros_like(counts), where=degree > 0)
        new = ~adopted & (counts > 0) & (frac >= threshold)
        n_new = int(new.sum())
        if n_new == 0:
            return added
        adopted |= new
        added += n_new


def segment_avalanches(cascades: np.ndarray) -> list[AvalancheRecord]:
    out = []
    start = None
    for t, k in enumerate(cascades, start=1):
        if k > 0 and start is None:
            start = t
        elif k == 0 and start is not None:
            out.append(AvalancheRecord(start, int(cascades[start - 1:t - 1].sum()), t - start))
            start = None
    if start is not None:
        end = len(cascades) + 1
        out.append(AvalancheRecord(start, int(cascades[start - 1:].sum()), end - start))
    return out


def run_adoption(config: AdoptionConfig) -> AdoptionTrace:
    rng = np.random.default_rng(config.seed)
    g = build_graph(config, int(rng.integers(0, 2**32)))
    n = config.n_nodes
    edges = np.array(g.edges(), dtype=np.int64).reshape(-1, 2)
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    degree = np.bincount(src, minlength=n).astype(float)

    adopted = np.zeros(n, dtype=bool)
    cumulative = np.zeros(config.steps, dtype=np.int64)
    innovations = np.zeros(config.steps, dtype=np.int64)
    cascades = np.zeros(config.steps, dtype=np.int64)
    for t in range(config.steps):
        if rng.random() < config.innovation_rate:
            candidates = np.flatnonzero(~adopted)
            if len(candidates):
                adopted[candidates[rng.integers(0, len(candidates))]] = True
                innovations[t] = 1
                # state was quiescent before this step; only an innovation can restart it
                cascades[t] = _cascade(adopted, src, dst, degree, config.threshold_fraction)
        cumulative[t] = adopted.sum()
    return AdoptionTrace(n, cumulative, innovations, cascades,
                         tuple(segment_avalanches(cascades)))


def mean_adoption_curve(config: AdoptionConfig, seeds) -> np.ndarray:
    """Cumulative adopters averaged over independent runs (one per seed)."""
    curves = [run_adoption(_with_seed(config, s)).cumulative for s in seeds]
    return np.mean(curves, axis=0)


def _with_seed(config: AdoptionConfig, seed: int) -> AdoptionConfig:
    return AdoptionConfig(config.topology, config.n_nodes, config.threshold_fraction,
                          config.innovation_rate, config.steps, seed, dict(config.topology_params))
