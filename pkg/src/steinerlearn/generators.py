"""Random STP instance generators (ER, WS, BA, GE) and labelled datasets."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .exact import DEFAULT_TERMINAL_CAP, TerminalCapExceeded, dreyfus_wagner
from .graph import Graph, STPInstance, SteinerTree, is_connected

log = logging.getLogger(__name__)

FAMILIES = ("ER", "WS", "BA", "GE")
MAX_RETRIES = 100
RETRY_STRIDE = 1000

# terminal-fraction grids: "large" and "small" terminal sets
LARGE_FRACTIONS = (0.2, 0.4, 0.6, 0.8)
SMALL_FRACTIONS = (0.03, 0.06, 0.09, 0.12, 0.15, 0.18)
FULL_SIZES = tuple(range(10, 201, 10))
DESK_SIZES = tuple(range(10, 61, 10))


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    family: str = "ER"
    n: int = 20
    er_p: Union[float, str] = "auto"
    ws_k: int = 6
    ws_p: float = 0.2
    ba_m: int = 5
    ge_eps: float = 0.5
    weighted: bool = False
    terminal_fraction: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown generator family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 4:
            raise ValueError("instances need n >= 4")
        if self.family == "WS" and not (self.ws_k % 2 == 0 and 2 <= self.ws_k < self.n):
            raise ValueError(f"WS needs an even K with 2 <= K < n, got K={self.ws_k}, n={self.n}")
        if self.family == "BA" and not (1 <= self.ba_m < self.n):
            raise ValueError(f"BA needs 1 <= m < n, got m={self.ba_m}, n={self.n}")
        if self.family == "GE" and self.ge_eps <= 0:
            raise ValueError("GE epsilon must be positive")
        if not 0 < self.terminal_fraction < 1:
            raise ValueError("terminal_fraction must lie in (0, 1)")

    @property
    def er_probability(self) -> float:
        floor = 2 * math.log(self.n) / self.n
        if self.er_p == "auto":
            return min(1.0, floor)
        return min(1.0, max(float(self.er_p), floor))

    @property
    def ge_radius(self) -> float:
        return math.sqrt((1 + self.ge_eps) * math.log(self.n) / (math.pi * self.n))

    @property
    def terminal_count(self) -> int:
        k = math.floor(self.terminal_fraction * self.n + 0.5)
        return min(max(k, 2), self.n - 1)

    @property
    def label(self) -> str:
        w = "w" if self.weighted else "u"
        return f"{self.family}-n{self.n}-f{self.terminal_fraction:g}-{w}-s{self.seed}"


def erdos_renyi_edges(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return list(zip(iu[keep].tolist(), ju[keep].tolist()))


def watts_strogatz_edges(n: int, k: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    adj = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if v not in adj[u] or rng.random() >= p:
                continue
            if len(adj[u]) >= n - 1:
                continue
            w = int(rng.integers(n))
            while w == u or w in adj[u]:
                w = int(rng.integers(n))
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    return [(u, v) for u in range(n) for v in adj[u] if u < v]


def barabasi_albert_edges(n: int, m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    # seed graph: a star on m + 1 nodes, then preferential attachment
    edges = [(0, v) for v in range(1, m + 1)]
    repeated = [0] * m + list(range(1, m + 1))
    for new in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        for t in sorted(targets):
            edges.append((t, new))
            repeated.extend((t, new))
    return edges


def geometric_edges(n: int, radius: float, rng: np.random.Generator):
    pts = rng.random((n, 2))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    iu, ju = np.triu_indices(n, k=1)
    keep = d[iu, ju] <= radius
    return list(zip(iu[keep].tolist(), ju[keep].tolist())), pts


def _draw_graph(config: GeneratorConfig, rng: np.random.Generator) -> Graph:
    n = config.n
    if config.family == "ER":
        pairs = erdos_renyi_edges(n, config.er_probability, rng)
    elif config.family == "WS":
        pairs = watts_strogatz_edges(n, config.ws_k, config.ws_p, rng)
    elif config.family == "BA":
        pairs = barabasi_albert_edges(n, config.ba_m, rng)
    else:
        pairs, _ = geometric_edges(n, config.ge_radius, rng)
    pairs = sorted((min(u, v), max(u, v)) for u, v in pairs)
    if config.weighted:
        weights = rng.integers(1, 11, size=len(pairs)).tolist()
    else:
        weights = [1] * len(pairs)
    return Graph.from_edges(n, [(u, v, w) for (u, v), w in zip(pairs, weights)])


def generate_instance(config: GeneratorConfig) -> STPInstance:
    """Draw a connected instance; disconnected draws are redrawn with sub-seeds
    ``seed + 1000 * attempt``."""
    for attempt in range(MAX_RETRIES):
        rng = np.random.default_rng(config.seed + RETRY_STRIDE * attempt)
        graph = _draw_graph(config, rng)
        if not is_connected(graph):
            continue
        terminals = rng.choice(config.n, size=config.terminal_count, replace=False)
        return STPInstance(graph, tuple(int(t) for t in terminals), config.label, config.seed)
    raise GenerationError(
        f"{config.family} generator could not produce a connected graph for seed {config.seed} "
        f"(n={config.n}) within {MAX_RETRIES} attempts")


@dataclass
class Record:
    instance: STPInstance
    family: str = ""
    weighted: bool = False
    optimal: Optional[SteinerTree] = None
    labels: Optional[np.ndarray] = None
    split: str = "train"

    @property
    def labelled(self) -> bool:
        return self.optimal is not None


@dataclass
class Dataset:
    records: list[Record] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def split(self, tag: str) -> list[Record]:
        return [r for r in self.records if r.split == tag]

    @property
    def labelled(self) -> list[Record]:
        return [r for r in self.records if r.labelled]


def grid_configs(families: Sequence[str] = FAMILIES, sizes: Sequence[int] = DESK_SIZES,
                 fractions: Sequence[float] = LARGE_FRACTIONS + SMALL_FRACTIONS,
                 seeds_per_cell: int = 1, weighted: bool = False, base_seed: int = 0,
                 **overrides) -> list[GeneratorConfig]:
    """Cartesian sweep; each cell gets consecutive seeds after ``base_seed``."""
    configs = []
    for cell, (fam, n, frac) in enumerate(itertools.product(families, sizes, fractions)):
        for j in range(seeds_per_cell):
            seed = base_seed + cell * seeds_per_cell + j
            configs.append(GeneratorConfig(family=fam, n=n, terminal_fraction=frac,
                                           weighted=weighted, seed=seed, **overrides))
    return configs


def label_record(record: Record, terminal_cap: int = DEFAULT_TERMINAL_CAP) -> Record:
    """Attach the optimal tree and node labels; instances over the cap stay unlabelled."""
    try:
        result = dreyfus_wagner(record.instance, terminal_cap)
    except TerminalCapExceeded:
        log.info("instance %s left unlabelled: %d terminals over cap %d",
                 record.instance.id, len(record.instance.terminals), terminal_cap)
        return record
    labels = np.zeros(record.instance.n, dtype=np.int8)
    labels[sorted(result.tree.nodes)] = 1
    labels[list(record.instance.terminals)] = 1
    return replace(record, optimal=result.tree, labels=labels)


def assign_split(records: list[Record], train_fraction: float = 0.8, seed: int = 0) -> None:
    order = np.random.default_rng(seed).permutation(len(records))
    n_train = math.floor(train_fraction * len(records))
    for rank, i in enumerate(order):
        records[i].split = "train" if rank < n_train else "test"


def build_dataset(configs: Iterable[GeneratorConfig], exact_budget: Optional[int] = DEFAULT_TERMINAL_CAP,
                  split_seed: int = 0, train_fraction: float = 0.8) -> Dataset:
    """Generate, label (when ``exact_budget`` is not None) and split.

    ``exact_budget`` is the terminal cap for the exact solver. Instances whose
    generation or exact solve fails are dropped and logged.
    """
    records = []
    for cfg in configs:
        try:
            rec = Record(generate_instance(cfg), cfg.family, cfg.weighted)
        except GenerationError as exc:
            log.warning("dropping %s: %s", cfg.label, exc)
            continue
        if exact_budget is not None:
            try:
                rec = label_record(rec, exact_budget)
            except Exception as exc:  # noqa: BLE001 - an unlabelled record beats a mislabelled one
                log.warning("dropping %s: exact solve failed: %s", cfg.label, exc)
                continue
        records.append(rec)
    assign_split(records, train_fraction, split_seed)
    return Dataset(records)
