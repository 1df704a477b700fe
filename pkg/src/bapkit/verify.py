"""Self-check suite behind ``bapkit verify``.

Runs the oracle triad on seeded random instances, the fixture regressions
and the certificate invariants.  Each failure carries the offending instance
so it can be replayed with ``bapkit solve``.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fixtures import (
    RANK_FINAL,
    RANK_INITIAL,
    cluster_instance,
    cluster_solution,
    cross_merge_scenario,
    e,
    rank_instance,
    rank_merge_scenario,
    separated_merge_scenario,
)
from .formats import instance_to_json
from .graph import BipartiteInstance, Matching
from .instances import euclidean_instance
from .solve import BottleneckSolution, brute_force_bap, prune_bap, solve, threshold_bap
from .structure import (
    MergeScenario,
    Verdict,
    alternating_tree_decomposition,
    check_merge_conditions,
    is_bottleneck_cluster,
    is_critical_bottleneck_edge,
)

Solver = Callable[[BipartiteInstance, "Matching | None"], BottleneckSolution]


@dataclass
class Failure:
    check: str
    detail: str
    instance: dict | None = None

    def to_json(self) -> dict:
        return {"check": self.check, "detail": self.detail, "instance": self.instance}


def faulty_solver(inst: BipartiteInstance, initial: Matching | None = None) -> BottleneckSolution:
    """Deliberately broken: stops after the starting matching."""
    m = initial if initial is not None else prune_bap(inst)[0].matching
    # flipped comparison: reports the lightest matched edge as the bottleneck
    edge = min(m, key=lambda x: (inst.weights[x], x))
    return BottleneckSolution(m, edge, inst.weight(edge), 0, False)


def random_instances(seed: int, count: int, max_side: int = 8):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        m, n = (int(x) for x in rng.integers(1, max_side + 1, size=2))
        if rng.random() < 0.5:
            yield BipartiteInstance(rng.uniform(0.0, 100.0, size=(m, n)))
        else:
            yield euclidean_instance(rng.uniform(0, 100, size=(m, 2)), rng.uniform(0, 100, size=(n, 2)))


def random_merge_scenario(rng: np.random.Generator, max_total: int = 6) -> MergeScenario:
    n1 = int(rng.integers(1, max_total // 2 + 1))
    n2 = int(rng.integers(1, max_total // 2 + 1))
    m1 = n1 + int(rng.integers(0, 2))
    m2 = n2 + int(rng.integers(0, 2))
    inst = BipartiteInstance(rng.uniform(0.0, 100.0, size=(m1 + m2, n1 + n2)))
    a1, a2 = tuple(range(m1)), tuple(range(m1, m1 + m2))
    t1, t2 = tuple(range(n1)), tuple(range(n1, n1 + n2))
    return MergeScenario(inst, a1, t1, a2, t2, solve(inst.sub(a1, t1)), solve(inst.sub(a2, t2)))


def _triad(solver: Solver, seeds, per_seed: int, failures: list[Failure]) -> None:
    for seed in seeds:
        for inst in random_instances(seed, per_seed):
            got = solver(inst, None)
            ref_t = threshold_bap(inst).bottleneck_value
            ref_b = brute_force_bap(inst).bottleneck_value
            if not got.bottleneck_value == ref_t == ref_b:
                failures.append(Failure(
                    "oracle_triad",
                    f"seed {seed}: solver {got.bottleneck_value}, threshold {ref_t}, enumeration {ref_b}",
                    instance_to_json(inst)))
                return


def _fixtures(solver: Solver, failures: list[Failure]) -> None:
    inst = rank_instance()
    sol = solver(inst, RANK_INITIAL)
    if (sol.bottleneck_edge, sol.bottleneck_value, sol.iterations, sol.matching) != \
            (e("21"), 6.0, 2, RANK_FINAL):
        failures.append(Failure("rank_regression", f"got {sol}", instance_to_json(inst)))
    warm = rank_merge_scenario().warm_start()
    wsol = solver(inst, warm)
    if (wsol.iterations, wsol.bottleneck_value) != (0, 6.0):
        failures.append(Failure("warm_start_regression", f"got {wsol}", instance_to_json(inst)))

    cinst = cluster_instance()
    csol = cluster_solution(cinst)
    ok = (is_critical_bottleneck_edge(cinst, csol.matching, e("11"))
          and is_bottleneck_cluster(cinst, csol, e("11"))
          and brute_force_bap(cinst).bottleneck_value == 20.0)
    if ok:
        trees = alternating_tree_decomposition(cinst, csol, e("11"))
        ok = trees.nu.tasks() == [0, 1, 2, 3, 4] and trees.mu.agents() == [0, 5, 6, 7, 8]
    if not ok:
        failures.append(Failure("cluster_certificates", "cluster fixture certificates fail",
                                instance_to_json(cinst)))

    if check_merge_conditions(cross_merge_scenario()).verdict is not Verdict.STRICT_IMPROVEMENT:
        failures.append(Failure("merge_cross", "expected StrictImprovementExists"))
    if check_merge_conditions(separated_merge_scenario()).verdict is not Verdict.MERGED_OPTIMAL:
        failures.append(Failure("merge_separated", "expected MergedOptimal"))


def _certificates(solver: Solver, seed: int, count: int, failures: list[Failure]) -> None:
    for inst in random_instances(seed, count):
        sol, trace = prune_bap(inst)
        if not trace.is_non_increasing():
            failures.append(Failure("trace_monotone", "max weights increased", instance_to_json(inst)))
            return
        if not is_critical_bottleneck_edge(inst, sol.matching, sol.bottleneck_edge):
            failures.append(Failure("critical_certificate", "final edge not critical",
                                    instance_to_json(inst)))
            return
        rng = np.random.default_rng(zlib.crc32(inst.weights.tobytes()))
        perm = rng.permutation(max(inst.m, inst.n))
        if inst.m <= inst.n:
            other = Matching((i, int(perm[i])) for i in range(inst.m))
        else:
            other = Matching((int(perm[j]), j) for j in range(inst.n))
        if solver(inst, other).bottleneck_value != solver(inst, None).bottleneck_value:
            failures.append(Failure("initialization_independence", "warm and cold disagree",
                                    instance_to_json(inst)))
            return


def _merges(seed: int, count: int, failures: list[Failure]) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        sc = random_merge_scenario(rng)
        r = check_merge_conditions(sc)
        opt = brute_force_bap(sc.combined).bottleneck_value
        bad = None
        if opt > r.bound:
            bad = "optimum above merge bound"
        elif r.verdict is Verdict.MERGED_OPTIMAL and opt != r.bound:
            bad = "MergedOptimal but a better matching exists"
        elif r.verdict is Verdict.STRICT_IMPROVEMENT and not opt < r.bound:
            bad = "StrictImprovementExists but merge is optimal"
        elif r.assumptions.decisive and r.verdict is Verdict.INCONCLUSIVE:
            bad = "Inconclusive although every hypothesis holds"
        if bad:
            failures.append(Failure("merge_soundness", bad, instance_to_json(sc.combined)))
            return


def run_verification(seeds=range(1, 51), per_seed: int = 40, merges: int = 500,
                     solver: Solver | None = None) -> list[Failure]:
    """Run every check; an empty list means all passed."""
    if solver is None:
        solver = solve
    failures: list[Failure] = []
    _triad(solver, seeds, per_seed, failures)
    _fixtures(solver, failures)
    _certificates(solver, seed=min(seeds, default=0) + 10_000, count=per_seed * 5, failures=failures)
    _merges(seed=min(seeds, default=0) + 20_000, count=merges, failures=failures)
    return failures
