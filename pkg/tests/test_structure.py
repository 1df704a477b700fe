import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from bapkit.fixtures import (
    RANK_FINAL,
    cluster_instance,
    cluster_solution,
    cross_merge_scenario,
    e,
    rank_instance,
    rank_merge_scenario,
    separated_merge_scenario,
    tied_merge_scenario,
)
from bapkit.graph import (
    BipartiteInstance,
    DomainError,
    Edge,
    Matching,
    Side,
    agent,
    is_alternating_path,
    task,
)
from bapkit.solve import BottleneckSolution, brute_force_bap, phi_filter, prune_bap, solve
from bapkit.structure import (
    CertificateError,
    MergeScenario,
    Verdict,
    alternating_tree_decomposition,
    check_merge_conditions,
    decide_merge_optimality,
    is_bottleneck_cluster,
    is_critical_bottleneck_edge,
    merge_bound,
)
from bapkit.verify import random_merge_scenario

from conftest import instances


def alternating_paths(inst, m, allowed, start, goal):
    """Every alternating simple path from ``start`` to ``goal`` over ``allowed`` edges."""
    out = []

    def step(v, seen, edges, last_matched):
        if v == goal and edges:
            out.append(tuple(edges))
            return
        if v.side is Side.AGENT:
            nxt = [(Edge(v.index, j), task(j)) for j in range(inst.n) if allowed[v.index, j]]
        else:
            nxt = [(Edge(i, v.index), agent(i)) for i in range(inst.m) if allowed[i, v.index]]
        for edge, u in nxt:
            matched = edge in m
            if u in seen or (last_matched is not None and matched == last_matched):
                continue
            step(u, seen | {u}, edges + [edge], matched)

    step(start, {start}, [], None)
    return out


# cluster fixture


def test_cluster_fixture_certificates():
    inst = cluster_instance()
    sol = cluster_solution(inst)
    assert is_critical_bottleneck_edge(inst, sol.matching, e("11"))
    assert is_bottleneck_cluster(inst, sol, e("11"))
    assert brute_force_bap(inst).bottleneck_value == 20.0


def test_cluster_fixture_tree_split():
    inst = cluster_instance()
    sol = cluster_solution(inst)
    trees = alternating_tree_decomposition(inst, sol, e("11"))
    assert trees.mu.root == agent(0) and trees.nu.root == task(0)
    assert trees.mu.agents() == [0, 5, 6, 7, 8] and trees.mu.tasks() == [5, 6, 7, 8]
    assert trees.nu.agents() == [1, 2, 3, 4] and trees.nu.tasks() == [0, 1, 2, 3, 4]


def test_cluster_fixture_drawn_edges_only():
    inst = cluster_instance()
    trees = alternating_tree_decomposition(inst, cluster_solution(inst), e("11"))
    drawn = {e(s) for s in ("21", "52", "31", "41", "16", "69", "17", "18",
                            "22", "55", "33", "44", "66", "99", "77", "88")}
    assert trees.mu.edges | trees.nu.edges == drawn


def test_raising_dotted_edge_breaks_cluster():
    inst = cluster_instance({"41": 30.0})
    assert not is_bottleneck_cluster(inst, cluster_solution(inst), e("11"))
    with pytest.raises(CertificateError):
        alternating_tree_decomposition(inst, cluster_solution(inst), e("11"))


def test_rank_fixture_criticality():
    inst = rank_instance()
    assert is_critical_bottleneck_edge(inst, RANK_FINAL, e("21"))
    assert not is_critical_bottleneck_edge(inst, RANK_FINAL, e("43"))
    with pytest.raises(DomainError):
        is_critical_bottleneck_edge(inst, RANK_FINAL, e("11"))


def test_single_cell_certificates():
    inst = BipartiteInstance([[3.0]])
    sol = solve(inst)
    assert is_critical_bottleneck_edge(inst, sol.matching, Edge(0, 0))
    assert is_bottleneck_cluster(inst, sol, Edge(0, 0))
    trees = alternating_tree_decomposition(inst, sol, Edge(0, 0))
    assert trees.mu.vertices == {agent(0)} and trees.nu.vertices == {task(0)}
    assert not trees.mu.edges and not trees.nu.edges


def test_merge_bound():
    s = lambda v: BottleneckSolution(Matching([(0, 0)]), Edge(0, 0), v)
    assert merge_bound(s(5.0), s(3.0)) == 5.0
    assert merge_bound(s(7.0), s(7.0)) == 7.0
    assert merge_bound(s(2.0), None) == 2.0
    sc = rank_merge_scenario()
    assert merge_bound(sc.sol1, sc.sol2) == 6.0


# certificate properties on random instances


def _decomposable(inst):
    sol = solve(inst)
    e_c = sol.bottleneck_edge
    return sol, e_c, is_bottleneck_cluster(inst, sol, e_c)


@given(instances(max_side=5))
def test_unique_alternating_path_across_critical_edge(inst):
    sol = solve(inst)
    e_c = sol.bottleneck_edge
    allowed = phi_filter(inst, sol.matching).mask(inst)
    paths = alternating_paths(inst, sol.matching, allowed, agent(e_c.agent), task(e_c.task))
    assert paths == [(e_c,)]


@given(instances(max_side=5))
def test_critical_value_is_optimal(inst):
    sol = solve(inst)
    assert is_critical_bottleneck_edge(inst, sol.matching, sol.bottleneck_edge)
    assert sol.bottleneck_value == brute_force_bap(inst).bottleneck_value


@given(instances(max_side=5, square=True))
def test_decomposition_invariants(inst):
    sol, e_c, cluster = _decomposable(inst)
    assume(cluster)
    trees = alternating_tree_decomposition(inst, sol, e_c)
    vm, vn = trees.mu.vertices, trees.nu.vertices
    assert not vm & vn
    assert len(vm | vn) == inst.m + inst.n
    phi = phi_filter(inst, sol.matching).mask(inst)
    for tree in (trees.mu, trees.nu):
        assert all(phi[x] for x in tree.edges)
        for v in tree.vertices:
            assert is_alternating_path(sol.matching, tree.path_from_root(v))
    for i in trees.mu.agents():
        for j in trees.nu.tasks():
            if (i, j) != tuple(e_c):
                assert not phi[i, j]


# merge analysis fixtures


def test_cross_fixture_strict_improvement():
    sc = cross_merge_scenario()
    r = check_merge_conditions(sc)
    assert r.assumptions.decisive
    assert (r.cond_i, r.cond_ii, r.cond_iii) == (True, True, True)
    assert r.conditions_agree
    # {alpha2, b3} and {a2, beta1} are the drawn cross edges
    assert Edge(4, 2) in r.cond_i_witnesses
    assert Edge(1, 3) in r.cond_ii_witnesses
    p = r.cond_iii_path
    m2 = sc.warm_start()
    assert sum(x in m2 for x in p.edges) == sum(x not in m2 for x in p.edges) + 1
    assert is_alternating_path(m2, p)
    assert r.verdict is Verdict.STRICT_IMPROVEMENT
    assert brute_force_bap(sc.combined).bottleneck_value < r.bound == 2.5


def test_separated_fixture_merged_optimal():
    sc = separated_merge_scenario()
    d = decide_merge_optimality(sc)
    assert d.report.cond_i is False and d.report.cond_ii is False
    assert d.verdict is Verdict.MERGED_OPTIMAL
    assert d.matching == sc.warm_start()
    assert d.value == d.report.bound == brute_force_bap(sc.combined).bottleneck_value


def test_tied_argmax_is_inconclusive():
    sc = tied_merge_scenario()
    r = check_merge_conditions(sc)
    assert not r.assumptions.singleton_argmax
    assert r.conditions_hold
    assert r.verdict is Verdict.INCONCLUSIVE
    # the oracle still finds the improvement
    assert brute_force_bap(sc.combined).bottleneck_value < r.bound


def test_swapped_scenario_gives_same_verdict():
    sc = cross_merge_scenario()
    a = check_merge_conditions(sc)
    b = check_merge_conditions(sc.swapped())
    assert not a.swapped and b.swapped
    assert (a.e1, a.verdict) == (b.e1, b.verdict)


def test_merge_analysis_needs_two_parts():
    inst = rank_instance()
    sol = solve(inst)
    sc = MergeScenario(inst, (0, 1, 2, 3), (0, 1, 2, 3), (), (), sol, None)
    with pytest.raises(DomainError):
        check_merge_conditions(sc)


def test_scenario_validation():
    inst = rank_instance()
    s = solve(inst.sub((0, 1), (0, 1)))
    with pytest.raises(DomainError):
        MergeScenario(inst, (0, 1), (0, 1), (1, 3), (2, 3), s, s)
    with pytest.raises(DomainError):
        MergeScenario(inst, (0, 1), (0, 1), (2,), (2, 3), s, s)
    with pytest.raises(DomainError):
        MergeScenario(inst, (0, 1), (0, 1), (2, 3), (2, 3), s, None)


@given(st.integers(0, 2**32 - 1))
def test_merge_verdicts_are_sound(seed):
    sc = random_merge_scenario(np.random.default_rng(seed))
    r = check_merge_conditions(sc)
    opt = brute_force_bap(sc.combined).bottleneck_value
    assert opt <= r.bound
    assert r.conditions_agree or not r.assumptions.structural
    if r.verdict is Verdict.MERGED_OPTIMAL:
        assert opt == r.bound
    elif r.verdict is Verdict.STRICT_IMPROVEMENT:
        assert opt < r.bound
    if r.assumptions.decisive:
        assert r.verdict is not Verdict.INCONCLUSIVE
        assert (r.verdict is Verdict.STRICT_IMPROVEMENT) == (opt < r.bound)
    if r.cond_iii_path is not None:
        p, m = r.cond_iii_path, sc.warm_start()
        assert sum(x in m for x in p.edges) == sum(x not in m for x in p.edges) + 1
