"""Print the pruning trace on the 4x4 rank-weight instance, cold and warm."""

from bapkit.fixtures import RANK_INITIAL, rank_instance, rank_merge_scenario
from bapkit.solve import prune_bap


def show(title, inst, initial):
    sol, trace = prune_bap(inst, initial)
    print(title)
    for k, step in enumerate(trace.steps, 1):
        a, b = step.max_edge
        found = "augment, length %d" % len(step.path) if step.path else "no path: critical"
        print(f"  round {k}: drop e{a + 1}{b + 1} (rank {step.max_weight:g}), {found}")
    print("  final:", " ".join(f"e{a + 1}{b + 1}" for a, b in sol.matching),
          f"value {sol.bottleneck_value:g}, {sol.iterations} augmentations")


if __name__ == "__main__":
    inst = rank_instance()
    show("cold start from {e11, e22, e33, e44}", inst, RANK_INITIAL)
    show("warm start from the sub-solutions", inst, rank_merge_scenario().warm_start())
