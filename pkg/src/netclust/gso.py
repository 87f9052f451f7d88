"""Group Search Optimizer over label vectors.

Each member of the group is a partition of the graph's nodes.  The best
member is the producer and scans around its own position; scroungers copy
labels from the producer; rangers random-walk.  All moves reassign single
node labels with a shared rule: with probability ``neighbor_move_prob`` a
node takes the label of a random neighbor, otherwise a uniform label from
``[0, k_max)``.

Randomness is drawn from substreams keyed by ``(seed, iteration, member)``
so a run is reproducible for any number of worker threads.
"""

from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from netclust.graph import Graph
from netclust.modularity import canonicalize, modularity

logger = logging.getLogger(__name__)


class Role(str, enum.Enum):
    PRODUCER = "producer"
    SCROUNGER = "scrounger"
    RANGER = "ranger"


@dataclass(frozen=True)
class GsoParams:
    group_size: int = 60
    iterations: int = 2000
    ranger_fraction: float = 0.2
    producer_patience: int = 5
    producer_scan_count: int = 1
    scan_mutation_rates: tuple[float, float, float] = (0.02, 0.05, 0.10)
    scrounger_copy_prob: float = 0.7
    ranger_walk_rate: float = 0.2
    neighbor_move_prob: float = 0.5
    k_max: int | None = None
    seed: int | None = None
    stagnation_limit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "scan_mutation_rates", tuple(float(r) for r in self.scan_mutation_rates))
        if self.group_size < 3:
            raise ValueError("group_size must be at least 3 (producer, scrounger, ranger)")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0.0 <= self.ranger_fraction < 1.0:
            raise ValueError("ranger_fraction must lie in [0, 1)")
        if self.producer_patience < 1 or self.producer_scan_count < 1:
            raise ValueError("producer_patience and producer_scan_count must be >= 1")
        if len(self.scan_mutation_rates) != 3:
            raise ValueError("scan_mutation_rates needs exactly three rates")
        for name in ("scrounger_copy_prob", "ranger_walk_rate"):
            if not 0.0 < getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1]")
        if any(not 0.0 < r <= 1.0 for r in self.scan_mutation_rates):
            raise ValueError("scan_mutation_rates must lie in (0, 1]")
        if not 0.0 <= self.neighbor_move_prob <= 1.0:
            raise ValueError("neighbor_move_prob must lie in [0, 1]")
        if self.k_max is not None and self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.stagnation_limit is not None and self.stagnation_limit < 1:
            raise ValueError("stagnation_limit must be >= 1")

    @property
    def n_rangers(self) -> int:
        return int(round(self.ranger_fraction * (self.group_size - 1)))

    def labels_upper(self, graph: Graph) -> int:
        return graph.n if self.k_max is None else self.k_max

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scan_mutation_rates"] = list(self.scan_mutation_rates)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GsoParams":
        d = dict(d)
        if "scan_mutation_rates" in d:
            d["scan_mutation_rates"] = tuple(d["scan_mutation_rates"])
        return cls(**d)


@dataclass
class Member:
    labels: np.ndarray
    fitness: float
    role: Role = Role.SCROUNGER

    def copy(self) -> "Member":
        return Member(self.labels.copy(), self.fitness, self.role)


@dataclass
class Group:
    members: list[Member]
    producer_index: int
    best_q: float
    best_labels: np.ndarray
    patience_counter: int = 0
    patience_anchor: Member | None = None
    iteration: int = 0
    evaluations: int = 0

    @property
    def producer(self) -> Member:
        return self.members[self.producer_index]

    def roles(self) -> list[Role]:
        return [mem.role for mem in self.members]


@dataclass
class RunResult:
    best_q: float
    best_partition: np.ndarray
    trace: list[float] = field(default_factory=list)
    iterations_run: int = 0
    evaluations: int = 0

    @property
    def n_communities(self) -> int:
        return int(self.best_partition.max()) + 1 if self.best_partition.size else 0


def member_rng(seed: int, iteration: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(iteration, index)))


def group_rng(seed: int, iteration: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(iteration,)))


def reassign(graph: Graph, labels: np.ndarray, rate: float, params: GsoParams, rng) -> np.ndarray:
    """Return a copy of ``labels`` where each node is reassigned with probability ``rate``."""
    out = labels.copy()
    picked = np.flatnonzero(rng.random(graph.n) < rate)
    if picked.size == 0:
        return out
    k = picked.size
    deg = graph.degrees[picked]
    use_neighbor = (rng.random(k) < params.neighbor_move_prob) & (deg > 0)
    offset = (rng.random(k) * deg).astype(np.intp)
    slot = np.minimum(graph.indptr[picked] + offset, max(graph.indices.size - 1, 0))
    uniform = rng.integers(0, params.labels_upper(graph), size=k)
    if graph.indices.size:
        neighbor_labels = labels[graph.indices[slot]]
        out[picked] = np.where(use_neighbor, neighbor_labels, uniform)
    else:
        out[picked] = uniform
    return out


def _assign_rangers(group: Group, params: GsoParams, rng) -> None:
    others = [i for i in range(len(group.members)) if i != group.producer_index]
    rangers = set(rng.choice(others, size=params.n_rangers, replace=False).tolist()) if params.n_rangers else set()
    for i, mem in enumerate(group.members):
        if i == group.producer_index:
            mem.role = Role.PRODUCER
        else:
            mem.role = Role.RANGER if i in rangers else Role.SCROUNGER


def _argmax(members: list[Member]) -> int:
    best = 0
    for i, mem in enumerate(members):
        if mem.fitness > members[best].fitness:
            best = i
    return best


def init_group(graph: Graph, params: GsoParams) -> Group:
    """Random initial group; the fittest member (lowest index on ties) becomes producer."""
    seed = _require_seed(params)
    upper = params.labels_upper(graph)
    members = []
    for i in range(params.group_size):
        labels = member_rng(seed, 0, i).integers(0, upper, size=graph.n).astype(np.intp)
        members.append(Member(labels, modularity(graph, labels)))
    producer = _argmax(members)
    group = Group(
        members=members,
        producer_index=producer,
        best_q=members[producer].fitness,
        best_labels=members[producer].labels.copy(),
        evaluations=params.group_size,
    )
    _assign_rangers(group, params, group_rng(seed, 0))
    return group


def producer_scan(graph: Graph, group: Group, params: GsoParams, rng) -> Member:
    """Scan around the producer at each of the three mutation rates.

    Moves the producer to the best candidate if it is strictly better.
    Otherwise the patience counter grows; once it reaches
    ``producer_patience`` the producer returns to where it stood when the
    counter started.  Updates ``group`` in place and returns the producer.
    """
    producer = group.producer
    best = None
    for _ in range(params.producer_scan_count):
        for rate in params.scan_mutation_rates:
            labels = reassign(graph, producer.labels, rate, params, rng)
            q = modularity(graph, labels)
            group.evaluations += 1
            if best is None or q > best.fitness:
                best = Member(labels, q, Role.PRODUCER)
    if best.fitness > producer.fitness:
        producer.labels, producer.fitness = best.labels, best.fitness
        group.patience_counter = 0
        group.patience_anchor = None
    else:
        if group.patience_anchor is None:
            group.patience_anchor = producer.copy()
        group.patience_counter += 1
        if group.patience_counter >= params.producer_patience:
            producer.labels = group.patience_anchor.labels.copy()
            producer.fitness = group.patience_anchor.fitness
            group.patience_counter = 0
            group.patience_anchor = None
    return producer


def scrounge(graph: Graph, member: Member, producer: Member, params: GsoParams, rng) -> Member:
    copy_mask = rng.random(graph.n) < params.scrounger_copy_prob
    member.labels = np.where(copy_mask, producer.labels, member.labels)
    member.fitness = modularity(graph, member.labels)
    return member


def ranger_walk(graph: Graph, member: Member, params: GsoParams, rng) -> Member:
    member.labels = reassign(graph, member.labels, params.ranger_walk_rate, params, rng)
    member.fitness = modularity(graph, member.labels)
    return member


def step(graph: Graph, group: Group, params: GsoParams, executor: ThreadPoolExecutor | None = None) -> Group:
    """One searching bout: scan, scrounge, range, then reassign roles."""
    seed = _require_seed(params)
    it = group.iteration + 1
    p = group.producer_index
    producer = producer_scan(graph, group, params, member_rng(seed, it, p))

    def move(i: int) -> None:
        mem = group.members[i]
        rng = member_rng(seed, it, i)
        if mem.role is Role.SCROUNGER:
            scrounge(graph, mem, producer, params, rng)
        else:
            ranger_walk(graph, mem, params, rng)

    others = [i for i in range(len(group.members)) if i != p]
    if executor is None:
        for i in others:
            move(i)
    else:
        list(executor.map(move, others))
    group.evaluations += len(others)

    new_p = _argmax(group.members)
    if new_p != p:
        group.patience_counter = 0
        group.patience_anchor = None
    group.producer_index = new_p
    _assign_rangers(group, params, group_rng(seed, it))
    if group.producer.fitness > group.best_q:
        group.best_q = group.producer.fitness
        group.best_labels = group.producer.labels.copy()
    group.iteration = it
    return group


def optimize(graph: Graph, params: GsoParams, workers: int = 1) -> RunResult:
    """Run the optimizer for ``params.iterations`` bouts and return the best partition seen."""
    if graph.m_edges == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    group = init_group(graph, params)
    trace = []
    last_gain = 0
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for it in range(params.iterations):
            before = group.best_q
            step(graph, group, params, executor)
            trace.append(group.best_q)
            if group.best_q > before:
                last_gain = it
            elif params.stagnation_limit is not None and it - last_gain >= params.stagnation_limit:
                logger.debug("stopping after %d stagnant iterations", params.stagnation_limit)
                break
    finally:
        if executor is not None:
            executor.shutdown()
    return RunResult(
        best_q=group.best_q,
        best_partition=canonicalize(group.best_labels),
        trace=trace,
        iterations_run=group.iteration,
        evaluations=group.evaluations,
    )


def expected_evaluations(params: GsoParams, iterations: int | None = None) -> int:
    j = params.iterations if iterations is None else iterations
    return params.group_size + j * (3 * params.producer_scan_count + params.group_size - 1)


def _require_seed(params: GsoParams) -> int:
    if params.seed is None:
        raise ValueError("GsoParams.seed must be set; runs are always seeded")
    return params.seed


__all__ = [
    "GsoParams",
    "Group",
    "Member",
    "Role",
    "RunResult",
    "expected_evaluations",
    "init_group",
    "optimize",
    "producer_scan",
    "ranger_walk",
    "reassign",
    "scrounge",
    "step",
]
