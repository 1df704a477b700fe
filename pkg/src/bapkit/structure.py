"""Optimality certificates and merge analysis for split bottleneck problems.

A merge scenario embeds two vertex-disjoint sub-instances ``G1`` and ``G2``
into a combined instance ``G3``.  Given optimal sub-solutions, the union of
their matchings is a maximum matching of ``G3`` whose heaviest edge bounds the
combined optimum from above.  ``check_merge_conditions`` decides when the
bound is tight by looking for cheap cross edges that link the two alternating
trees of ``G1`` through an alternating path of ``G2``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .graph import (
    BipartiteInstance,
    DomainError,
    Edge,
    EdgeFilter,
    Matching,
    Path,
    PreconditionError,
    Side,
    VertexRef,
    agent,
    find_augmenting_path,
    task,
)
from .solve import BottleneckSolution, phi_filter, warm_start_matching


class CertificateError(DomainError):
    """A structural certificate's preconditions fail."""


def _check_member(m: Matching, e: Edge) -> Edge:
    e = Edge(*e)
    if e not in m:
        raise DomainError(f"edge {tuple(e)} is not in the matching")
    return e


def is_critical_bottleneck_edge(inst: BipartiteInstance, m: Matching, e: Edge) -> bool:
    """True iff ``e`` is a heaviest edge of ``m`` and removing it leaves no
    augmenting path through the lighter edges."""
    e = _check_member(m, e)
    if len(m) != inst.mcm_size:
        raise PreconditionError("matching is not maximum")
    if inst.weight(e) != m.max_weight(inst):
        return False
    f = phi_filter(inst, m).without(e)
    return find_augmenting_path(inst, m.without(e), f) is None


def _alternating_reach(inst: BipartiteInstance, m: Matching, allowed, root: VertexRef,
                       first_matched: bool) -> dict[VertexRef, VertexRef | None]:
    """BFS over alternating paths leaving ``root``; returns a parent map.

    In a bipartite graph the role of each edge (matched or not) on such a path
    is fixed by the side it leaves from, so plain vertex BFS suffices.  With
    ``first_matched`` the root leaves along its matching edge; otherwise along
    non-matching edges.
    """
    root_side = root.side
    parent: dict[VertexRef, VertexRef | None] = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        leaves_matched = (v.side is root_side) == first_matched
        if leaves_matched:
            u = m.mate(v)
            nxt = [] if u is None else [u]
        elif v.side is Side.AGENT:
            nxt = [task(j) for j in range(inst.n)
                   if allowed[v.index, j] and m.agent_mate(v.index) != j]
        else:
            nxt = [agent(i) for i in range(inst.m)
                   if allowed[i, v.index] and m.task_mate(v.index) != i]
        for u in nxt:
            if u not in parent:
                parent[u] = v
                queue.append(u)
    return parent


def is_bottleneck_cluster(inst: BipartiteInstance, sol: BottleneckSolution, e: Edge) -> bool:
    """True iff every vertex reaches the bottleneck task of ``e`` by an
    alternating path inside the matching's phi-set."""
    e = _check_member(sol.matching, e)
    if inst.weight(e) != sol.bottleneck_value or sol.bottleneck_value != sol.matching.max_weight(inst):
        raise PreconditionError("edge weight does not match the solution's bottleneck value")
    allowed = phi_filter(inst, sol.matching).mask(inst)
    root = task(e.task)
    reached = set(_alternating_reach(inst, sol.matching, allowed, root, True))
    reached |= set(_alternating_reach(inst, sol.matching, allowed, root, False))
    return len(reached) == inst.m + inst.n


@dataclass(frozen=True)
class AlternatingTree:
    root: VertexRef
    parent: Mapping[VertexRef, VertexRef]

    @property
    def vertices(self) -> frozenset[VertexRef]:
        return frozenset(self.parent) | {self.root}

    @property
    def edges(self) -> frozenset[Edge]:
        out = set()
        for v, p in self.parent.items():
            a, b = (v, p) if v.side is Side.AGENT else (p, v)
            out.add(Edge(a.index, b.index))
        return frozenset(out)

    def agents(self) -> list[int]:
        return sorted(v.index for v in self.vertices if v.side is Side.AGENT)

    def tasks(self) -> list[int]:
        return sorted(v.index for v in self.vertices if v.side is Side.TASK)

    def path_from_root(self, v: VertexRef) -> Path:
        chain = [v]
        while chain[-1] != self.root:
            chain.append(self.parent[chain[-1]])
        chain.reverse()
        edges = []
        for x, y in zip(chain, chain[1:]):
            a, b = (x, y) if x.side is Side.AGENT else (y, x)
            edges.append(Edge(a.index, b.index))
        return Path(self.root, tuple(edges))


@dataclass(frozen=True)
class AlternatingTreePair:
    mu: AlternatingTree
    nu: AlternatingTree


def alternating_tree_decomposition(inst: BipartiteInstance, sol: BottleneckSolution,
                                   e_c: Edge) -> AlternatingTreePair:
    """Split a bottleneck cluster into the alternating trees hanging off the
    two endpoints of its critical edge ``e_c``."""
    e_c = _check_member(sol.matching, e_c)
    if not is_critical_bottleneck_edge(inst, sol.matching, e_c):
        raise CertificateError(f"edge {tuple(e_c)} is not a critical bottleneck edge")
    if not is_bottleneck_cluster(inst, sol, e_c):
        raise CertificateError(f"instance is not a bottleneck cluster relative to {tuple(e_c)}")
    allowed = phi_filter(inst, sol.matching).without(e_c).mask(inst)
    rest = sol.matching.without(e_c)
    trees = []
    for root in (agent(e_c.agent), task(e_c.task)):
        parent = _alternating_reach(inst, rest, allowed, root, False)
        del parent[root]
        trees.append(AlternatingTree(root, parent))
    return AlternatingTreePair(*trees)


def merge_bound(sol1: BottleneckSolution, sol2: BottleneckSolution | None) -> float:
    if sol2 is None:
        return sol1.bottleneck_value
    return max(sol1.bottleneck_value, sol2.bottleneck_value)


@dataclass(frozen=True)
class MergeScenario:
    """Two disjoint sub-instances embedded in a combined instance.

    ``agents1[i]`` is the combined index of agent ``i`` of the first
    sub-instance; likewise for the other maps.  Sub-solutions are expressed in
    local indices.  ``sol2`` is ``None`` when the second part has no tasks.
    """

    combined: BipartiteInstance
    agents1: tuple[int, ...]
    tasks1: tuple[int, ...]
    agents2: tuple[int, ...]
    tasks2: tuple[int, ...]
    sol1: BottleneckSolution
    sol2: BottleneckSolution | None
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("agents1", "tasks1", "agents2", "tasks2"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))
        a1, a2, t1, t2 = map(set, (self.agents1, self.agents2, self.tasks1, self.tasks2))
        if len(a1) != len(self.agents1) or len(a2) != len(self.agents2) \
                or len(t1) != len(self.tasks1) or len(t2) != len(self.tasks2):
            raise DomainError("index maps contain duplicates")
        if a1 & a2 or t1 & t2:
            raise DomainError("sub-instance index maps overlap")
        if a1 | a2 != set(range(self.combined.m)) or t1 | t2 != set(range(self.combined.n)):
            raise DomainError("index maps do not cover the combined instance")
        if not self.tasks1:
            raise DomainError("the first sub-instance needs at least one task")
        if len(self.agents1) < len(self.tasks1) or len(self.agents2) < len(self.tasks2):
            raise DomainError("each sub-instance needs at least as many agents as tasks")
        if (self.sol2 is None) != (not self.tasks2):
            raise DomainError("sol2 must be given exactly when the second part has tasks")

    @property
    def inst1(self) -> BipartiteInstance:
        return self.combined.sub(self.agents1, self.tasks1)

    @property
    def inst2(self) -> BipartiteInstance | None:
        if not self.tasks2:
            return None
        return self.combined.sub(self.agents2, self.tasks2)

    def warm_start(self) -> Matching:
        return warm_start_matching(self.sol1, self.sol2, self.agents1, self.tasks1,
                                   self.agents2, self.tasks2)

    def swapped(self) -> MergeScenario:
        if self.sol2 is None:
            raise DomainError("cannot swap a scenario with an empty second part")
        return MergeScenario(self.combined, self.agents2, self.tasks2, self.agents1,
                             self.tasks1, self.sol2, self.sol1, self.metadata)


class Verdict(enum.Enum):
    MERGED_OPTIMAL = "MergedOptimal"
    STRICT_IMPROVEMENT = "StrictImprovementExists"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Assumptions:
    g1_cluster: bool
    g2_cluster: bool
    e1_critical: bool
    e2_critical: bool
    strict_inequality: bool
    singleton_argmax: bool

    @property
    def structural(self) -> bool:
        # enough to certify MergedOptimal when some condition fails
        return self.g1_cluster and self.g2_cluster and self.e1_critical and self.e2_critical

    @property
    def decisive(self) -> bool:
        # conditions i-iii then decide optimality exactly
        return self.structural and self.strict_inequality and self.singleton_argmax


@dataclass(frozen=True)
class MergeReport:
    """Outcome of the merge analysis, in combined-instance indices.

    Condition fields are ``None`` when the first sub-instance admits no tree
    decomposition (not a cluster, or its bottleneck edge is not critical).
    """

    bound: float
    swapped: bool
    e1: Edge
    e2: Edge | None
    assumptions: Assumptions
    cond_i: bool | None
    cond_ii: bool | None
    cond_iii: bool | None
    # (agent i of G2, task b' of the nu tree)
    cond_i_witnesses: tuple[Edge, ...] = ()
    # (agent a' of the mu tree, task j of G2)
    cond_ii_witnesses: tuple[Edge, ...] = ()
    cond_iii_path: Path | None = None
    single_edge_witness: bool = False
    augmenting_path: Path | None = None
    verdict: Verdict = Verdict.INCONCLUSIVE

    @property
    def conditions_hold(self) -> bool:
        return bool(self.cond_i and self.cond_ii and self.cond_iii)

    @property
    def augmenting_path_exists(self) -> bool:
        return self.augmenting_path is not None

    @property
    def conditions_agree(self) -> bool:
        """Whether the three conditions match the augmenting-path certificate."""
        return self.conditions_hold == self.augmenting_path_exists


def _g2_connecting_path(inst2: BipartiteInstance, m2: Matching, limit: float,
                        starts: Sequence[int], targets: set[int]) -> tuple[int, int, list[Edge]] | None:
    # alternating BFS from agent i that leaves and arrives along M2 edges
    w = inst2.weights
    for i in starts:
        parent: dict[int, tuple[int, int] | None] = {i: None}  # agent -> (prev agent, via task)
        queue = deque([i])
        while queue:
            x = queue.popleft()
            t = m2.agent_mate(x)
            if t is None or not w[x, t] < limit:
                continue
            if t in targets:
                edges = [Edge(x, t)]
                y = x
                while parent[y] is not None:
                    prev, via = parent[y]
                    edges.append(Edge(y, via))
                    edges.append(Edge(prev, via))
                    y = prev
                edges.reverse()
                return i, t, edges
            for y in range(inst2.m):
                if y != x and y not in parent and w[y, t] < limit and m2.agent_mate(y) is not None:
                    parent[y] = (x, t)
                    queue.append(y)
    return None


def check_merge_conditions(sc: MergeScenario) -> MergeReport:
    """Evaluate the bound, the structural hypotheses and conditions i-iii.

    The sub-instances are relabelled, if needed, so that the first has the
    heavier bottleneck edge.  Conditions are also cross-checked against a
    direct augmenting-path search in the combined instance, which decides
    the verdict whenever the two disagree.
    """
    if sc.sol2 is None:
        raise DomainError("merge analysis needs two non-empty sub-instances")
    swapped = sc.sol2.bottleneck_value > sc.sol1.bottleneck_value
    if swapped:
        sc = sc.swapped()
    inst1, inst2 = sc.inst1, sc.inst2
    s1, s2 = sc.sol1, sc.sol2
    e1, e2 = s1.bottleneck_edge, s2.bottleneck_edge
    w1 = s1.bottleneck_value
    crit1 = is_critical_bottleneck_edge(inst1, s1.matching, e1)
    crit2 = is_critical_bottleneck_edge(inst2, s2.matching, e2)
    assumptions = Assumptions(
        g1_cluster=is_bottleneck_cluster(inst1, s1, e1),
        g2_cluster=is_bottleneck_cluster(inst2, s2, e2),
        e1_critical=crit1,
        e2_critical=crit2,
        strict_inequality=w1 > s2.bottleneck_value,
        singleton_argmax=sum(inst1.weight(e) == w1 for e in s1.matching) == 1,
    )

    a1, t1, a2, t2 = sc.agents1, sc.tasks1, sc.agents2, sc.tasks2
    g3 = sc.combined
    merged = sc.warm_start()
    rest = merged.without(Edge(a1[e1.agent], t1[e1.task]))
    f3 = EdgeFilter.below(w1, always=rest.pairs)
    aug = find_augmenting_path(g3, rest, f3)

    cond_i = cond_ii = cond_iii = None
    wit_i: list[Edge] = []
    wit_ii: list[Edge] = []
    p3 = None
    single = False
    if assumptions.g1_cluster and crit1:
        trees = alternating_tree_decomposition(inst1, s1, e1)
        nu_tasks = [t1[j] for j in trees.nu.tasks()]
        mu_agents = [a1[i] for i in trees.mu.agents()]
        w = g3.weights
        starts, targets = [], set()
        for i in range(len(a2)):
            if s2.matching.agent_mate(i) is None:
                continue
            hits = [b for b in nu_tasks if w[a2[i], b] < w1]
            if hits:
                starts.append(i)
                wit_i.extend(Edge(a2[i], b) for b in hits)
        for j in range(len(t2)):
            hits = [a for a in mu_agents if w[a, t2[j]] < w1]
            if hits:
                targets.add(j)
                wit_ii.extend(Edge(a, t2[j]) for a in hits)
        cond_i, cond_ii = bool(starts), bool(targets)
        found = _g2_connecting_path(inst2, s2.matching, w1, starts, targets) \
            if starts and targets else None
        cond_iii = found is not None
        if found is not None:
            i, _, edges = found
            p3 = Path(agent(a2[i]), tuple(Edge(a2[x], t2[y]) for x, y in edges))
            single = len(edges) == 1

    all_three = bool(cond_i and cond_ii and cond_iii)
    if assumptions.structural and not all_three and aug is None:
        verdict = Verdict.MERGED_OPTIMAL
    elif assumptions.decisive and all_three and aug is not None:
        verdict = Verdict.STRICT_IMPROVEMENT
    else:
        verdict = Verdict.INCONCLUSIVE

    return MergeReport(
        bound=merge_bound(s1, s2),
        swapped=swapped,
        e1=Edge(a1[e1.agent], t1[e1.task]),
        e2=Edge(a2[e2.agent], t2[e2.task]),
        assumptions=assumptions,
        cond_i=cond_i,
        cond_ii=cond_ii,
        cond_iii=cond_iii,
        cond_i_witnesses=tuple(wit_i),
        cond_ii_witnesses=tuple(wit_ii),
        cond_iii_path=p3,
        single_edge_witness=single,
        augmenting_path=aug,
        verdict=verdict,
    )


@dataclass(frozen=True)
class MergeDecision:
    verdict: Verdict
    report: MergeReport
    # set for MergedOptimal: the union of sub-matchings and its value
    matching: Matching | None = None
    value: float | None = None


def decide_merge_optimality(sc: MergeScenario) -> MergeDecision:
    """Decide whether merging the sub-solutions already solves the combined
    problem.  ``Inconclusive`` means a warm-started solve is still needed."""
    report = check_merge_conditions(sc)
    if report.verdict is Verdict.MERGED_OPTIMAL:
        return MergeDecision(report.verdict, report, sc.warm_start(), report.bound)
    return MergeDecision(report.verdict, report)
