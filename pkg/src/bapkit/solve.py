"""Bottleneck assignment: the pruning solver and two independent oracles."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .graph import (
    BipartiteInstance,
    DomainError,
    Edge,
    EdgeFilter,
    Matching,
    Path,
    PreconditionError,
    augment,
    find_augmenting_path,
    greedy_matching,
    is_matching,
)


class SizeError(DomainError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True)
class BottleneckSolution:
    matching: Matching
    bottleneck_edge: Edge
    bottleneck_value: float
    iterations: int = 0
    critical: bool = False

    @classmethod
    def from_matching(cls, inst: BipartiteInstance, m: Matching, iterations: int = 0,
                      critical: bool = False) -> BottleneckSolution:
        e = m.max_edge(inst)
        return cls(m, e, inst.weight(e), iterations, critical)


@dataclass(frozen=True)
class TraceStep:
    max_edge: Edge
    max_weight: float
    # edges with weight >= threshold are pruned, bar the rest of the matching
    threshold: float
    path: Path | None
    pruned: int


@dataclass
class SolveTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def max_weights(self) -> list[float]:
        return [s.max_weight for s in self.steps]

    def is_non_increasing(self) -> bool:
        w = self.max_weights()
        return all(b <= a for a, b in zip(w, w[1:]))


def phi_filter(inst: BipartiteInstance, m: Matching) -> EdgeFilter:
    """The matching plus every edge strictly lighter than its heaviest edge."""
    if not len(m):
        raise DomainError("the largest weight of an empty matching is undefined")
    m.check_on(inst)
    return EdgeFilter.below(m.max_weight(inst), always=m.pairs)


def cold_start_matching(inst: BipartiteInstance) -> Matching:
    # greedy already saturates min(m, n) on a complete graph
    return greedy_matching(inst)


def _check_mcm(inst: BipartiteInstance, m: Matching) -> None:
    m.check_on(inst)
    if len(m) != inst.mcm_size:
        raise PreconditionError(
            f"initial matching has {len(m)} edges; an MCM of this instance has {inst.mcm_size}")


def prune_bap(inst: BipartiteInstance,
              initial: Matching | None = None) -> tuple[BottleneckSolution, SolveTrace]:
    """Solve the bottleneck assignment problem by iterative pruning.

    Each round drops the heaviest edge ``e`` of the current maximum matching
    and looks for an augmenting path through edges lighter than ``e``
    (plus the rest of the matching).  A hit yields a matching whose heaviest
    edge is no heavier; a miss certifies ``e`` as a critical bottleneck edge.

    Args:
        inst: the instance.
        initial: starting maximum cardinality matching; a greedy matching is
            used when omitted.

    Returns:
        The solution and a per-round trace.
    """
    m = cold_start_matching(inst) if initial is None else initial
    _check_mcm(inst, m)
    trace = SolveTrace()
    total = inst.m * inst.n
    rounds = 0
    while True:
        e = m.max_edge(inst)
        w = inst.weight(e)
        rest = m.without(e)
        f = phi_filter(inst, m).without(e)
        path = find_augmenting_path(inst, rest, f)
        kept = int(np.count_nonzero(f.mask(inst)))
        trace.steps.append(TraceStep(e, w, w, path, total - kept))
        if path is None:
            return BottleneckSolution(m, e, w, rounds, True), trace
        m = augment(rest, path)
        rounds += 1


def solve(inst: BipartiteInstance, initial: Matching | None = None) -> BottleneckSolution:
    return prune_bap(inst, initial)[0]


def warm_start_matching(sol1: BottleneckSolution, sol2: BottleneckSolution | None,
                        agents1: Sequence[int], tasks1: Sequence[int],
                        agents2: Sequence[int] = (), tasks2: Sequence[int] = ()) -> Matching:
    """Union of two sub-solutions, re-indexed into the combined instance.

    ``agentsK[i]`` is the combined index of local agent ``i`` of sub-instance
    ``K`` (likewise for tasks).
    """
    if set(agents1) & set(agents2) or set(tasks1) & set(tasks2):
        raise DomainError("sub-instance index maps overlap")
    if len(agents1) < len(tasks1) or len(agents2) < len(tasks2):
        raise DomainError("each sub-instance needs at least as many agents as tasks")
    pairs = [(agents1[i], tasks1[j]) for i, j in sol1.matching]
    if sol2 is not None:
        pairs += [(agents2[i], tasks2[j]) for i, j in sol2.matching]
    return Matching(pairs)


def _mcm_at_most(weights: np.ndarray, t: float) -> np.ndarray:
    # scipy result: matched column per row, -1 when unmatched
    return maximum_bipartite_matching(csr_matrix(weights <= t), perm_type="column")


def threshold_bap(inst: BipartiteInstance) -> BottleneckSolution:
    """Oracle: binary search for the smallest feasible weight threshold.

    Feasibility of each threshold is decided by scipy's maximum bipartite
    matching on the sub-graph of edges with weight at most the threshold.
    ``iterations`` counts feasibility probes.
    """
    values = np.unique(inst.weights)
    lo, hi = 0, len(values) - 1
    probes = 0
    best = None
    while lo < hi:
        mid = (lo + hi) // 2
        cols = _mcm_at_most(inst.weights, values[mid])
        probes += 1
        if np.count_nonzero(cols >= 0) == inst.mcm_size:
            hi, best = mid, cols
        else:
            lo = mid + 1
    if best is None:
        best = _mcm_at_most(inst.weights, values[lo])
        probes += 1
    m = Matching((i, int(j)) for i, j in enumerate(best) if j >= 0)
    return BottleneckSolution.from_matching(inst, m, iterations=probes)


BRUTE_FORCE_MAX_SIDE = 9
BRUTE_FORCE_MAX_INJECTIONS = 500_000


@lru_cache(maxsize=64)
def _injections(large: int, small: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(large), small)), dtype=np.intp).reshape(-1, small)


def brute_force_bap(inst: BipartiteInstance) -> BottleneckSolution:
    """Oracle: evaluate the min-max objective over every maximum matching."""
    k = inst.mcm_size
    large = max(inst.m, inst.n)
    count = math.perm(large, k)
    if k > BRUTE_FORCE_MAX_SIDE or count > BRUTE_FORCE_MAX_INJECTIONS:
        raise SizeError(f"{inst.m}x{inst.n} instance has {count} maximum matchings; too many to enumerate")
    w = inst.weights if inst.m <= inst.n else inst.weights.T
    perms = _injections(large, k)
    costs = w[np.arange(k), perms].max(axis=1)
    best = perms[int(np.argmin(costs))]
    if inst.m <= inst.n:
        m = Matching((i, int(j)) for i, j in enumerate(best))
    else:
        m = Matching((int(i), j) for j, i in enumerate(best))
    return BottleneckSolution.from_matching(inst, m, iterations=count)


def is_mcm(inst: BipartiteInstance, edges) -> bool:
    edges = list(edges)
    return is_matching(inst, edges) and len(edges) == inst.mcm_size
