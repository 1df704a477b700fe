"""JSON encodings of instances, scenarios, solutions and merge reports."""

from __future__ import annotations

import json
import math
from pathlib import Path as FsPath
from typing import Any

from .graph import BipartiteInstance, DomainError, Matching, Path
from .instances import (
    SCHEMA_VERSION,
    GeometricScenario,
    Kind,
    euclidean_instance,
    reassignment_split,
    split_scenario,
)
from .solve import BottleneckSolution, prune_bap
from .structure import MergeReport, MergeScenario


class InputError(ValueError):
    """A file could not be parsed into the expected object."""


def read_json(path: str | FsPath) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return obj


def write_json(obj: Any, path: str | FsPath | None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is not None:
        FsPath(path).write_text(text, encoding="utf-8")
    return text


def _check_version(obj: dict) -> None:
    if "version" not in obj:
        raise InputError("missing mandatory 'version' field")
    if obj["version"] != SCHEMA_VERSION:
        raise InputError(f"unsupported version {obj['version']!r}")


def _matching(pairs, what: str) -> Matching:
    try:
        return Matching((int(i), int(j)) for i, j in pairs)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad {what}: {exc}") from exc


def instance_from_json(obj: dict) -> tuple[BipartiteInstance, Matching | None]:
    """Instance from an explicit weight matrix, point lists, or a scenario.

    Scenario objects yield their combined instance (first-group agents and
    tasks first).  An optional ``initial`` list of ``[agent, task]`` pairs is
    returned alongside.
    """
    _check_version(obj)
    try:
        if "weights" in obj:
            inst = BipartiteInstance(obj["weights"], obj.get("agent_labels"), obj.get("task_labels"))
        elif "agents" in obj and "tasks" in obj:
            inst = euclidean_instance(obj["agents"], obj["tasks"])
        elif "kind" in obj:
            inst = GeometricScenario.from_json(obj).combined_instance()
        else:
            raise InputError("expected 'weights', 'agents'/'tasks', or a scenario object")
    except (DomainError, TypeError, KeyError) as exc:
        raise InputError(f"invalid instance: {exc}") from exc
    initial = _matching(obj["initial"], "initial matching") if "initial" in obj else None
    if initial is not None:
        try:
            initial.check_on(inst)
        except DomainError as exc:
            raise InputError(str(exc)) from exc
    return inst, initial


def merge_scenario_from_json(obj: dict) -> MergeScenario:
    """Merge scenario from a geometric scenario or a partitioned instance.

    Uniform scenarios without an agent split go through the two-stage
    reassignment; other scenarios are solved part by part.  A partitioned
    instance carries ``agents1``/``tasks1``/``agents2``/``tasks2`` index
    lists and may embed sub-solutions as ``matching1``/``matching2`` in
    local indices, which seed the sub-solves.
    """
    _check_version(obj)
    try:
        if "kind" in obj:
            geo = GeometricScenario.from_json(obj)
            if geo.kind is Kind.UNIFORM and not geo.agents2:
                return reassignment_split(geo)
            return split_scenario(geo)
        if "weights" not in obj:
            raise InputError("merge input needs a scenario or a partitioned weight matrix")
        inst = BipartiteInstance(obj["weights"], obj.get("agent_labels"), obj.get("task_labels"))
        parts = [tuple(int(x) for x in obj[k]) for k in ("agents1", "tasks1", "agents2", "tasks2")]
        a1, t1, a2, t2 = parts
        if set(a1) & set(a2) or set(t1) & set(t2):
            raise InputError("overlapping partitions")
        sols = []
        for agents, tasks, key in ((a1, t1, "matching1"), (a2, t2, "matching2")):
            if not tasks:
                sols.append(None)
                continue
            sub = inst.sub(agents, tasks)
            init = _matching(obj[key], key) if key in obj else None
            sols.append(prune_bap(sub, init)[0])
        return MergeScenario(inst, a1, t1, a2, t2, sols[0], sols[1])
    except InputError:
        raise
    except (DomainError, TypeError, KeyError, IndexError) as exc:
        raise InputError(f"invalid merge input: {exc}") from exc


def matching_to_json(m: Matching) -> list[list[int]]:
    return [[e.agent, e.task] for e in m]


def path_to_json(p: Path | None) -> list[list[int]] | None:
    return None if p is None else [[e.agent, e.task] for e in p.edges]


def _num(x: float) -> float | None:
    return None if x is None or not math.isfinite(x) else float(x)


def solution_to_json(sol: BottleneckSolution) -> dict:
    return {
        "bottleneck_value": _num(sol.bottleneck_value),
        "bottleneck_edge": [sol.bottleneck_edge.agent, sol.bottleneck_edge.task],
        "matching": matching_to_json(sol.matching),
        "iterations": sol.iterations,
        "critical": sol.critical,
    }


def instance_to_json(inst: BipartiteInstance) -> dict:
    return {"version": SCHEMA_VERSION, "weights": inst.weights.tolist()}


def report_to_json(r: MergeReport) -> dict:
    return {
        "merge_bound": _num(r.bound),
        "swapped": r.swapped,
        "e1": list(r.e1),
        "e2": None if r.e2 is None else list(r.e2),
        "assumptions": {**vars(r.assumptions), "structural": r.assumptions.structural,
                        "decisive": r.assumptions.decisive},
        "conditions": {
            "cond_i": r.cond_i,
            "cond_ii": r.cond_ii,
            "cond_iii": r.cond_iii,
            "cond_i_witnesses": [list(e) for e in r.cond_i_witnesses],
            "cond_ii_witnesses": [list(e) for e in r.cond_ii_witnesses],
            "cond_iii_path": path_to_json(r.cond_iii_path),
            "single_edge_witness": r.single_edge_witness,
        },
        "augmenting_path": path_to_json(r.augmenting_path),
        "conditions_agree": r.conditions_agree,
        "verdict": r.verdict.value,
    }
