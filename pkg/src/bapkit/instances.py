"""Seeded geometric scenarios with Euclidean edge weights.

Random numbers come from numpy's ``Generator`` over the PCG64 bit
generator.  Normal variates use numpy's ``Generator.normal``, which applies
the ziggurat method to the uniform stream.  Per-trial seeds are derived with
``trial_seed``, which feeds ``(seed, *keys)`` to ``numpy.random.SeedSequence``
and takes the first 63 bits of its output.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import BipartiteInstance, DomainError, Edge, Matching
from .solve import BottleneckSolution, solve
from .structure import MergeScenario

SCHEMA_VERSION = 1
UNIFORM_HIGH = 100.0
CASE2_CENTERS = ((40.0, 60.0), (60.0, 40.0))
CASE2_VARIANCE = 100.0

Point2 = tuple[float, float]


class Kind(enum.Enum):
    UNIFORM = "Uniform"
    CLUSTERED = "Clustered"


@dataclass(frozen=True)
class GeometricScenario:
    """Agent and task locations of one experiment trial.

    Uniform scenarios are generated unsplit: every agent sits in ``agents1``
    and ``agents2`` is empty until ``reassignment_split`` partitions them.
    """

    agents1: tuple[Point2, ...]
    agents2: tuple[Point2, ...]
    tasks1: tuple[Point2, ...]
    tasks2: tuple[Point2, ...]
    seed: int
    kind: Kind
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for name in ("agents1", "agents2", "tasks1", "tasks2"):
            pts = tuple((float(x), float(y)) for x, y in getattr(self, name))
            if not np.all(np.isfinite(np.asarray(pts, dtype=float))):
                raise DomainError(f"{name} contains non-finite coordinates")
            object.__setattr__(self, name, pts)
        if self.kind is Kind.CLUSTERED:
            if len(self.agents1) < len(self.tasks1) or len(self.agents2) < len(self.tasks2):
                raise DomainError("each cluster needs at least as many agents as tasks")
        elif len(self.agents1) + len(self.agents2) < len(self.tasks1) + len(self.tasks2):
            raise DomainError("fewer agents than tasks")

    @property
    def agents(self) -> tuple[Point2, ...]:
        return self.agents1 + self.agents2

    @property
    def tasks(self) -> tuple[Point2, ...]:
        return self.tasks1 + self.tasks2

    def combined_instance(self) -> BipartiteInstance:
        return euclidean_instance(self.agents, self.tasks)

    def to_json(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "kind": self.kind.value,
            "seed": self.seed,
            "agents1": [list(p) for p in self.agents1],
            "agents2": [list(p) for p in self.agents2],
            "tasks1": [list(p) for p in self.tasks1],
            "tasks2": [list(p) for p in self.tasks2],
        }

    @classmethod
    def from_json(cls, obj: dict) -> GeometricScenario:
        if obj.get("version") != SCHEMA_VERSION:
            raise DomainError(f"unsupported scenario version {obj.get('version')!r}")
        return cls(
            agents1=tuple(map(tuple, obj["agents1"])),
            agents2=tuple(map(tuple, obj.get("agents2", []))),
            tasks1=tuple(map(tuple, obj["tasks1"])),
            tasks2=tuple(map(tuple, obj.get("tasks2", []))),
            seed=int(obj.get("seed", 0)),
            kind=Kind(obj["kind"]),
        )


def trial_seed(seed: int, *keys: int) -> int:
    state = np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(2, np.uint64)
    return int(state[0] >> np.uint64(1))


def euclidean_instance(agents: Sequence[Point2], tasks: Sequence[Point2]) -> BipartiteInstance:
    if not len(agents) or not len(tasks):
        raise DomainError("need at least one agent and one task")
    a = np.asarray(agents, dtype=float).reshape(-1, 2)
    b = np.asarray(tasks, dtype=float).reshape(-1, 2)
    diff = a[:, None, :] - b[None, :, :]
    return BipartiteInstance(np.sqrt((diff ** 2).sum(axis=-1)))


def _uniform_points(rng: np.random.Generator, count: int, high: float = UNIFORM_HIGH) -> np.ndarray:
    pts = rng.uniform(0.0, high, size=(count, 2))
    bad = pts >= high
    while bad.any():
        pts[bad] = rng.uniform(0.0, high, size=int(bad.sum()))
        bad = pts >= high
    return pts


def uniform_scenario(m3: int, n1: int, n2: int, seed: int) -> GeometricScenario:
    """``m3`` agents and ``n1 + n2`` tasks, all uniform on ``[0, 100)^2``."""
    if n1 < 1 or n2 < 0 or m3 < n1 + n2:
        raise DomainError(f"need n1 >= 1, n2 >= 0 and m3 >= n1 + n2; got {m3}, {n1}, {n2}")
    rng = np.random.default_rng(seed)
    agents = _uniform_points(rng, m3)
    tasks = _uniform_points(rng, n1 + n2)
    return GeometricScenario(tuple(map(tuple, agents)), (), tuple(map(tuple, tasks[:n1])),
                             tuple(map(tuple, tasks[n1:])), seed, Kind.UNIFORM)


def _restrict(sol: BottleneckSolution, agents: Sequence[int]) -> BottleneckSolution:
    local = {a: k for k, a in enumerate(agents)}
    m = Matching((local[i], j) for i, j in sol.matching)
    e = sol.bottleneck_edge
    return BottleneckSolution(m, Edge(local[e.agent], e.task), sol.bottleneck_value,
                              sol.iterations, sol.critical)


def reassignment_split(sc: GeometricScenario) -> MergeScenario:
    """Assign the first task group over all agents, then give the second
    group to the agents left idle.

    The combined instance lists agents in generation order and tasks as the
    first group followed by the second.
    """
    if sc.kind is not Kind.UNIFORM:
        raise DomainError("reassignment_split expects a uniform scenario")
    agents = sc.agents
    n1, n2 = len(sc.tasks1), len(sc.tasks2)
    combined = euclidean_instance(agents, sc.tasks)
    first = solve(combined.sub(range(len(agents)), range(n1)))
    assigned = sorted(i for i, _ in first.matching)
    idle = [i for i in range(len(agents)) if i not in set(assigned)]
    sol1 = _restrict(first, assigned)
    tasks2 = tuple(range(n1, n1 + n2))
    sol2 = solve(combined.sub(idle, tasks2)) if n2 else None
    return MergeScenario(combined, tuple(assigned), tuple(range(n1)), tuple(idle), tasks2,
                         sol1, sol2, {"kind": sc.kind.value, "seed": sc.seed,
                                      "assigned_agents": assigned,
                                      "first_stage_value": first.bottleneck_value})


def split_geometry(sc: GeometricScenario, ms: MergeScenario) -> GeometricScenario:
    """Uniform scenario with agents partitioned as in ``ms``."""
    pts = sc.agents
    return GeometricScenario(tuple(pts[i] for i in ms.agents1), tuple(pts[i] for i in ms.agents2),
                             sc.tasks1, sc.tasks2, sc.seed, sc.kind)


def clustered_geometry(m1: int, n1: int, m2: int, n2: int,
                       centers: Sequence[Point2] = CASE2_CENTERS,
                       variance: float = CASE2_VARIANCE, seed: int = 0) -> GeometricScenario:
    if not variance > 0:
        raise DomainError(f"variance must be positive, got {variance}")
    if n1 < 1 or n2 < 1 or m1 < n1 or m2 < n2:
        raise DomainError(f"need m1 >= n1 >= 1 and m2 >= n2 >= 1; got {m1}, {n1}, {m2}, {n2}")
    rng = np.random.default_rng(seed)
    sd = float(np.sqrt(variance))
    (c1, c2) = (np.asarray(c, dtype=float) for c in centers)
    a1 = rng.normal(c1, sd, size=(m1, 2))
    b1 = rng.normal(c1, sd, size=(n1, 2))
    a2 = rng.normal(c2, sd, size=(m2, 2))
    b2 = rng.normal(c2, sd, size=(n2, 2))
    pts = [tuple(map(tuple, x)) for x in (a1, a2, b1, b2)]
    return GeometricScenario(*pts, seed=seed, kind=Kind.CLUSTERED)


def split_scenario(sc: GeometricScenario) -> MergeScenario:
    """Merge scenario for an already partitioned geometry; each part is
    solved on its own."""
    m1, m2 = len(sc.agents1), len(sc.agents2)
    n1, n2 = len(sc.tasks1), len(sc.tasks2)
    combined = sc.combined_instance()
    agents1, agents2 = tuple(range(m1)), tuple(range(m1, m1 + m2))
    tasks1, tasks2 = tuple(range(n1)), tuple(range(n1, n1 + n2))
    sol1 = solve(combined.sub(agents1, tasks1))
    sol2 = solve(combined.sub(agents2, tasks2)) if n2 else None
    return MergeScenario(combined, agents1, tasks1, agents2, tasks2, sol1, sol2,
                         {"kind": sc.kind.value, "seed": sc.seed})


def clustered_scenario(m1: int, n1: int, m2: int, n2: int,
                       centers: Sequence[Point2] = CASE2_CENTERS,
                       variance: float = CASE2_VARIANCE,
                       seed: int = 0) -> tuple[GeometricScenario, MergeScenario]:
    """Two Gaussian groups; ``variance`` applies to each coordinate."""
    geo = clustered_geometry(m1, n1, m2, n2, centers, variance, seed)
    return geo, split_scenario(geo)
