"""Bottleneck assignment with pruning, warm starts and merge certificates."""

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
    augment,
    find_augmenting_path,
    is_alternating_path,
    is_matching,
    maximum_cardinality_matching,
    neighbours,
    task,
)
from .instances import (
    GeometricScenario,
    clustered_scenario,
    euclidean_instance,
    reassignment_split,
    uniform_scenario,
)
from .solve import (
    BottleneckSolution,
    SizeError,
    SolveTrace,
    brute_force_bap,
    phi_filter,
    prune_bap,
    solve,
    threshold_bap,
    warm_start_matching,
)
from .structure import (
    AlternatingTreePair,
    CertificateError,
    MergeReport,
    MergeScenario,
    Verdict,
    alternating_tree_decomposition,
    check_merge_conditions,
    decide_merge_optimality,
    is_bottleneck_cluster,
    is_critical_bottleneck_edge,
    merge_bound,
)

__version__ = "0.1.0"
