"""Small hand-built instances with known structure.

Agent ``a_p`` and task ``b_q`` of the drawings map to indices ``p - 1`` and
``q - 1``.
"""

from __future__ import annotations

import numpy as np

from .graph import BipartiteInstance, Edge, Matching
from .instances import euclidean_instance
from .solve import BottleneckSolution, prune_bap
from .structure import MergeScenario

# edges listed lightest first; weight = 1-based rank
RANK_ORDER = ("24", "42", "43", "34", "12", "21", "13", "22",
              "33", "23", "14", "31", "11", "41", "32", "44")


def e(label: str) -> Edge:
    """``"21"`` -> edge between agent a2 and task b1."""
    return Edge(int(label[0]) - 1, int(label[1]) - 1)


def rank_instance(ranks=None) -> BipartiteInstance:
    """4x4 instance whose weights follow ``RANK_ORDER``.

    ``ranks`` optionally maps rank ``1..16`` to any increasing sequence of
    weights.
    """
    values = np.arange(1, 17, dtype=float) if ranks is None else np.asarray(ranks, dtype=float)
    w = np.zeros((4, 4))
    for r, label in enumerate(RANK_ORDER):
        w[e(label)] = values[r]
    return BipartiteInstance(w)


RANK_INITIAL = Matching(e(s) for s in ("22", "33", "11", "44"))
RANK_FINAL = Matching(e(s) for s in ("12", "21", "34", "43"))
RANK_M1 = Matching(e(s) for s in ("12", "21"))
RANK_M2 = Matching(e(s) for s in ("43", "34"))


def rank_merge_scenario(ranks=None) -> MergeScenario:
    """The rank instance split into {a1, a2, b1, b2} and {a3, a4, b3, b4}."""
    inst = rank_instance(ranks)
    parts = ((0, 1), (0, 1)), ((2, 3), (2, 3))
    sols = []
    for (agents, tasks), m in zip(parts, (RANK_M1, RANK_M2)):
        local = Matching((agents.index(i), tasks.index(j)) for i, j in m)
        sols.append(prune_bap(inst.sub(agents, tasks), local)[0])
    return MergeScenario(inst, (0, 1), (0, 1), (2, 3), (2, 3), sols[0], sols[1])


# Two trees of a 9x9 cluster around the critical edge {a1, b1} (weight 20).
CLUSTER_MATCHING = {"11": 20, "22": 6, "55": 4, "33": 3, "44": 20,
                    "66": 20, "99": 13, "77": 19, "88": 15}
CLUSTER_TREE_EDGES = {"21": 1, "52": 6, "31": 11, "41": 10,
                      "16": 3, "69": 7, "17": 5, "18": 18}
CLUSTER_FILLER = 25.0


def cluster_instance(overrides: dict[str, float] | None = None) -> BipartiteInstance:
    w = np.full((9, 9), CLUSTER_FILLER)
    for label, value in {**CLUSTER_MATCHING, **CLUSTER_TREE_EDGES, **(overrides or {})}.items():
        w[e(label)] = value
    labels = [f"a{k}" for k in range(1, 10)], [f"b{k}" for k in range(1, 10)]
    return BipartiteInstance(w, *labels)


def cluster_solution(inst: BipartiteInstance | None = None) -> BottleneckSolution:
    inst = cluster_instance() if inst is None else inst
    m = Matching(e(s) for s in CLUSTER_MATCHING)
    return BottleneckSolution(m, e("11"), inst.weight(e("11")), 0, True)


# Node positions of the two-cluster drawing: G1 = {a1..a3, b1..b3},
# G2 = {alpha1, alpha2, beta1, beta2}; edge weight = drawn length.
CROSS_AGENTS1 = ((-0.5, 0.0), (-1.0, -0.8), (3.0, 0.5))
CROSS_TASKS1 = ((2.0, 0.0), (-1.7, -0.2), (3.5, -0.3))
CROSS_AGENTS2 = ((1.0, -1.5), (3.2, -1.4))
CROSS_TASKS2 = ((0.0, -1.5), (2.0, -1.0))
CROSS_M1 = Matching([(0, 0), (1, 1), (2, 2)])
CROSS_M2 = Matching([(0, 0), (1, 1)])


def cross_merge_scenario() -> MergeScenario:
    """Two clusters whose cheap cross edges admit a better combined matching."""
    inst = euclidean_instance(CROSS_AGENTS1 + CROSS_AGENTS2, CROSS_TASKS1 + CROSS_TASKS2)
    a1, t1, a2, t2 = (0, 1, 2), (0, 1, 2), (3, 4), (3, 4)
    s1 = prune_bap(inst.sub(a1, t1), CROSS_M1)[0]
    s2 = prune_bap(inst.sub(a2, t2), CROSS_M2)[0]
    return MergeScenario(inst, a1, t1, a2, t2, s1, s2)


def separated_merge_scenario(shift: float = 100.0) -> MergeScenario:
    """The two clusters of ``cross_merge_scenario`` pulled ``shift`` apart."""
    moved_a = tuple((x + shift, y) for x, y in CROSS_AGENTS2)
    moved_t = tuple((x + shift, y) for x, y in CROSS_TASKS2)
    inst = euclidean_instance(CROSS_AGENTS1 + moved_a, CROSS_TASKS1 + moved_t)
    a1, t1, a2, t2 = (0, 1, 2), (0, 1, 2), (3, 4), (3, 4)
    s1 = prune_bap(inst.sub(a1, t1))[0]
    s2 = prune_bap(inst.sub(a2, t2))[0]
    return MergeScenario(inst, a1, t1, a2, t2, s1, s2)


def tied_merge_scenario() -> MergeScenario:
    """``cross_merge_scenario`` with {a2, b2} raised to tie the heaviest edge
    of the first cluster, so its argmax is no longer a singleton."""
    w = cross_merge_scenario().combined.weights.copy()
    w[1, 1] = w[0, 0]
    inst = BipartiteInstance(w)
    a1, t1, a2, t2 = (0, 1, 2), (0, 1, 2), (3, 4), (3, 4)
    s1 = prune_bap(inst.sub(a1, t1), CROSS_M1)[0]
    s2 = prune_bap(inst.sub(a2, t2), CROSS_M2)[0]
    return MergeScenario(inst, a1, t1, a2, t2, s1, s2)
