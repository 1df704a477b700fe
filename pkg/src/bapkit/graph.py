"""Complete bipartite instances and the matching primitives built on them.

Agents and tasks are addressed by their position within their own side.
Edges are ``(agent, task)`` pairs.  All search routines are deterministic:
free agents are tried in ascending index order and, from any agent, the
admitted tasks are tried by ascending weight with ties broken by task index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(DomainError):
    """A documented precondition of an operation does not hold."""


class Side(enum.Enum):
    AGENT = "agent"
    TASK = "task"


class VertexRef(NamedTuple):
    side: Side
    index: int

    def __str__(self) -> str:
        return ("a" if self.side is Side.AGENT else "b") + str(self.index)


def agent(i: int) -> VertexRef:
    return VertexRef(Side.AGENT, int(i))


def task(j: int) -> VertexRef:
    return VertexRef(Side.TASK, int(j))


class Edge(NamedTuple):
    agent: int
    task: int

    def endpoints(self) -> tuple[VertexRef, VertexRef]:
        return agent(self.agent), task(self.task)

    def other(self, v: VertexRef) -> VertexRef:
        """Return the endpoint opposite to ``v``."""
        a, b = self.endpoints()
        if v == a:
            return b
        if v == b:
            return a
        raise DomainError(f"{v} is not an endpoint of {self}")


@dataclass(frozen=True, eq=False)
class BipartiteInstance:
    """Complete bipartite graph with a dense ``m x n`` weight matrix.

    Row ``i`` holds the weights of agent ``i``; column ``j`` those of task
    ``j``.  The stored array is a read-only copy.
    """

    weights: np.ndarray
    agent_labels: tuple[str, ...] | None = None
    task_labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise DomainError(f"weights must be a non-empty 2-D array, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise DomainError("all weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        for name, count in (("agent_labels", w.shape[0]), ("task_labels", w.shape[1])):
            labels = getattr(self, name)
            if labels is not None:
                labels = tuple(str(s) for s in labels)
                if len(labels) != count:
                    raise DomainError(f"{name} has {len(labels)} entries, expected {count}")
                object.__setattr__(self, name, labels)

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def n(self) -> int:
        return self.weights.shape[1]

    @property
    def mcm_size(self) -> int:
        """Cardinality of every maximum matching of the complete graph."""
        return min(self.m, self.n)

    @cached_property
    def task_order(self) -> np.ndarray:
        # per agent: task indices by ascending (weight, index)
        return np.argsort(self.weights, axis=1, kind="stable")

    def weight(self, e: Edge) -> float:
        return float(self.weights[e[0], e[1]])

    def edges(self) -> Iterator[Edge]:
        for i in range(self.m):
            for j in range(self.n):
                yield Edge(i, j)

    def check_vertex(self, v: VertexRef) -> None:
        limit = self.m if v.side is Side.AGENT else self.n
        if not 0 <= v.index < limit:
            raise DomainError(f"vertex {v} out of range for a {self.m}x{self.n} instance")

    def check_edge(self, e: Edge) -> None:
        if not (0 <= e[0] < self.m and 0 <= e[1] < self.n):
            raise DomainError(f"edge {tuple(e)} out of range for a {self.m}x{self.n} instance")

    def vertices(self) -> list[VertexRef]:
        return [agent(i) for i in range(self.m)] + [task(j) for j in range(self.n)]

    def label(self, v: VertexRef) -> str:
        labels = self.agent_labels if v.side is Side.AGENT else self.task_labels
        return labels[v.index] if labels is not None else str(v)

    def sub(self, agents: Sequence[int], tasks: Sequence[int]) -> BipartiteInstance:
        """Induced complete sub-instance on the given agent and task indices."""
        agents, tasks = list(agents), list(tasks)
        w = self.weights[np.ix_(agents, tasks)]
        al = tuple(self.agent_labels[i] for i in agents) if self.agent_labels else None
        tl = tuple(self.task_labels[j] for j in tasks) if self.task_labels else None
        return BipartiteInstance(w, al, tl)


class Matching:
    """An immutable set of edges, no two of which share a vertex."""

    __slots__ = ("_pairs", "_agent_mate", "_task_mate")

    def __init__(self, edges: Iterable[Sequence[int]] = ()):
        pairs = frozenset(Edge(int(e[0]), int(e[1])) for e in edges)
        agent_mate: dict[int, int] = {}
        task_mate: dict[int, int] = {}
        for i, j in pairs:
            if i in agent_mate or j in task_mate:
                raise DomainError(f"edges do not form a matching: vertex repeated at {(i, j)}")
            agent_mate[i] = j
            task_mate[j] = i
        self._pairs = pairs
        self._agent_mate = agent_mate
        self._task_mate = task_mate

    @property
    def pairs(self) -> frozenset[Edge]:
        return self._pairs

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self._pairs))

    def __contains__(self, e: object) -> bool:
        return e in self._pairs

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Matching):
            return self._pairs == other._pairs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return f"Matching({sorted(tuple(e) for e in self._pairs)})"

    def agent_mate(self, i: int) -> int | None:
        return self._agent_mate.get(i)

    def task_mate(self, j: int) -> int | None:
        return self._task_mate.get(j)

    def mate(self, v: VertexRef) -> VertexRef | None:
        if v.side is Side.AGENT:
            j = self._agent_mate.get(v.index)
            return None if j is None else task(j)
        i = self._task_mate.get(v.index)
        return None if i is None else agent(i)

    def is_free(self, v: VertexRef) -> bool:
        return self.mate(v) is None

    def without(self, *edges: Edge) -> Matching:
        return Matching(self._pairs.difference(edges))

    def check_on(self, inst: BipartiteInstance) -> None:
        for e in self._pairs:
            inst.check_edge(e)

    def max_edge(self, inst: BipartiteInstance) -> Edge:
        """Heaviest edge; ties go to the lexicographically largest pair."""
        if not self._pairs:
            raise DomainError("an empty matching has no largest edge")
        return max(self._pairs, key=lambda e: (inst.weights[e], e))

    def max_weight(self, inst: BipartiteInstance) -> float:
        return inst.weight(self.max_edge(inst))

    def is_perfect_on(self, inst: BipartiteInstance) -> bool:
        return len(self) == inst.mcm_size


def is_matching(inst: BipartiteInstance, edges: Iterable[Sequence[int]]) -> bool:
    seen_a: set[int] = set()
    seen_b: set[int] = set()
    for e in edges:
        inst.check_edge(Edge(*e))
        if e[0] in seen_a or e[1] in seen_b:
            return False
        seen_a.add(e[0])
        seen_b.add(e[1])
    return True


@dataclass(frozen=True)
class Path:
    """A sequence of edges walked from ``start`` over distinct vertices."""

    start: VertexRef
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        vs = self.vertices()
        if len(set(vs)) != len(vs):
            raise DomainError(f"path from {self.start} revisits a vertex")

    def vertices(self) -> list[VertexRef]:
        vs = [self.start]
        for e in self.edges:
            vs.append(e.other(vs[-1]))
        return vs

    @property
    def end(self) -> VertexRef:
        return self.vertices()[-1]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class EdgeFilter:
    """Predicate over the edges of an instance.

    An edge is admitted when it is not in ``denied`` and either belongs to
    ``allowed`` or has weight below ``bound`` (strictly below unless
    ``strict`` is false).  ``bound=None`` disables the weight test, leaving an
    explicit edge set.
    """

    bound: float | None = None
    strict: bool = True
    allowed: frozenset[Edge] = field(default_factory=frozenset)
    denied: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "allowed", frozenset(Edge(*e) for e in self.allowed))
        object.__setattr__(self, "denied", frozenset(Edge(*e) for e in self.denied))

    @classmethod
    def everything(cls) -> EdgeFilter:
        return cls(bound=math.inf)

    @classmethod
    def nothing(cls) -> EdgeFilter:
        return cls()

    @classmethod
    def explicit(cls, edges: Iterable[Sequence[int]]) -> EdgeFilter:
        return cls(allowed=frozenset(Edge(*e) for e in edges))

    @classmethod
    def below(cls, bound: float, always: Iterable[Sequence[int]] = ()) -> EdgeFilter:
        return cls(bound=bound, allowed=frozenset(Edge(*e) for e in always))

    @classmethod
    def at_most(cls, bound: float) -> EdgeFilter:
        return cls(bound=bound, strict=False)

    def without(self, *edges: Sequence[int]) -> EdgeFilter:
        return EdgeFilter(self.bound, self.strict, self.allowed,
                          self.denied | {Edge(*e) for e in edges})

    def admits(self, inst: BipartiteInstance, e: Sequence[int]) -> bool:
        e = Edge(*e)
        inst.check_edge(e)
        if e in self.denied:
            return False
        if e in self.allowed:
            return True
        if self.bound is None:
            return False
        w = inst.weights[e]
        return bool(w < self.bound) if self.strict else bool(w <= self.bound)

    def mask(self, inst: BipartiteInstance) -> np.ndarray:
        if self.bound is None:
            mask = np.zeros(inst.weights.shape, dtype=bool)
        elif self.strict:
            mask = inst.weights < self.bound
        else:
            mask = inst.weights <= self.bound
        for e in self.allowed:
            inst.check_edge(e)
            mask[e] = True
        for e in self.denied:
            inst.check_edge(e)
            mask[e] = False
        return mask


def _agent_adjacency(inst: BipartiteInstance, f: EdgeFilter) -> list[list[int]]:
    mask = f.mask(inst)
    order = inst.task_order
    return [[int(j) for j in order[i] if mask[i, j]] for i in range(inst.m)]


def neighbours(inst: BipartiteInstance, v: VertexRef, f: EdgeFilter) -> list[VertexRef]:
    """Opposite-side vertices joined to ``v`` by an admitted edge, by index."""
    inst.check_vertex(v)
    mask = f.mask(inst)
    if v.side is Side.AGENT:
        return [task(j) for j in np.flatnonzero(mask[v.index])]
    return [agent(i) for i in np.flatnonzero(mask[:, v.index])]


def is_alternating_path(m: Matching, p: Path) -> bool:
    in_m: dict[VertexRef, int] = {}
    out_m: dict[VertexRef, int] = {}
    for e in p.edges:
        counts = in_m if e in m else out_m
        for v in e.endpoints():
            counts[v] = counts.get(v, 0) + 1
            if counts[v] > 1:
                return False
    return True


def is_augmenting_path(m: Matching, p: Path) -> bool:
    if not p.edges or not is_alternating_path(m, p):
        return False
    return m.is_free(p.start) and m.is_free(p.end)


def _dfs_augment(root: int, adj: list[list[int]], m: Matching,
                 visited: set[int]) -> Path | None:
    agents = [root]
    tasks: list[int] = []
    frames = [iter(adj[root])]
    while frames:
        for t in frames[-1]:
            if t in visited:
                continue
            visited.add(t)
            tasks.append(t)
            mate = m.task_mate(t)
            if mate is None:
                edges: list[Edge] = []
                for k, t_k in enumerate(tasks):
                    if k:
                        edges.append(Edge(agents[k], tasks[k - 1]))
                    edges.append(Edge(agents[k], t_k))
                return Path(agent(root), tuple(edges))
            agents.append(mate)
            frames.append(iter(adj[mate]))
            break
        else:
            frames.pop()
            agents.pop()
            if tasks:
                tasks.pop()
    return None


def _check_inside(inst: BipartiteInstance, m: Matching, mask: np.ndarray) -> None:
    for e in m.pairs:
        inst.check_edge(e)
        if not mask[e]:
            raise PreconditionError(f"matching edge {tuple(e)} is rejected by the filter")


def find_augmenting_path(inst: BipartiteInstance, m: Matching, f: EdgeFilter) -> Path | None:
    """Search for an augmenting path relative to ``m`` using admitted edges.

    Depth-first from each free agent in index order; tasks are explored by
    ascending weight.  Returns ``None`` exactly when ``m`` is maximum within
    the filter.
    """
    _check_inside(inst, m, f.mask(inst))
    adj = _agent_adjacency(inst, f)
    visited: set[int] = set()
    for i in range(inst.m):
        if m.agent_mate(i) is None:
            p = _dfs_augment(i, adj, m, visited)
            if p is not None:
                return p
    return None


def augment(m: Matching, p: Path) -> Matching:
    if not is_augmenting_path(m, p):
        raise DomainError("path is not augmenting relative to the matching")
    return Matching(m.pairs.symmetric_difference(p.edges))


def greedy_matching(inst: BipartiteInstance, f: EdgeFilter | None = None) -> Matching:
    """Scan admitted edges by ascending (weight, agent, task); keep those that fit."""
    mask = np.ones(inst.weights.shape, dtype=bool) if f is None else f.mask(inst)
    rows, cols = np.nonzero(mask)
    keys = np.lexsort((cols, rows, inst.weights[rows, cols]))
    used_a: set[int] = set()
    used_b: set[int] = set()
    chosen = []
    for k in keys:
        i, j = int(rows[k]), int(cols[k])
        if i not in used_a and j not in used_b:
            used_a.add(i)
            used_b.add(j)
            chosen.append((i, j))
    return Matching(chosen)


def maximum_cardinality_matching(inst: BipartiteInstance, f: EdgeFilter) -> Matching:
    m = greedy_matching(inst, f)
    adj = _agent_adjacency(inst, f)
    while True:
        visited: set[int] = set()
        path = None
        for i in range(inst.m):
            if m.agent_mate(i) is None:
                path = _dfs_augment(i, adj, m, visited)
                if path is not None:
                    break
        if path is None:
            return m
        m = augment(m, path)
