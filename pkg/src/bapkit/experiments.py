"""Monte Carlo runners for the reassignment and clustering case studies."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from statistics import fmean
from typing import Iterable, Sequence

from .instances import (
    CASE2_CENTERS,
    CASE2_VARIANCE,
    Point2,
    clustered_scenario,
    reassignment_split,
    trial_seed,
    uniform_scenario,
)
from .solve import SizeError, brute_force_bap, solve
from .structure import MergeScenario, Verdict, check_merge_conditions

ORACLE_MAX_SIDE = 8


class VerificationError(AssertionError):
    """A solver result contradicted an oracle or a bound."""


@dataclass(frozen=True)
class TrialRecord:
    size: int
    trial: int
    seed: int
    warm_start_value: float
    optimal_value: float
    iterations_warm: int
    iterations_cold: int
    merged_optimal: bool
    verdict: str


def evaluate(ms: MergeScenario, size: int, trial: int, seed: int,
             check_oracle: bool = True) -> TrialRecord:
    g3 = ms.combined
    warm = ms.warm_start()
    warm_value = warm.max_weight(g3)
    wsol = solve(g3, warm)
    csol = solve(g3)
    if wsol.bottleneck_value != csol.bottleneck_value:
        raise VerificationError(f"warm {wsol.bottleneck_value} != cold {csol.bottleneck_value}")
    if wsol.bottleneck_value > warm_value:
        raise VerificationError("optimum exceeds the merge bound")
    if check_oracle and g3.mcm_size <= ORACLE_MAX_SIDE:
        try:
            ref = brute_force_bap(g3).bottleneck_value
        except SizeError:
            ref = None
        if ref is not None and ref != wsol.bottleneck_value:
            raise VerificationError(f"solver {wsol.bottleneck_value} != oracle {ref}")
    verdict = check_merge_conditions(ms).verdict if ms.sol2 is not None else Verdict.INCONCLUSIVE
    return TrialRecord(size, trial, seed, warm_value, wsol.bottleneck_value, wsol.iterations,
                       csol.iterations, wsol.bottleneck_value == warm_value, verdict.value)


def case1_trials(m3: int, n1: int, n2: int, trials: int, seed: int,
                 check_oracle: bool = True) -> list[TrialRecord]:
    """Uniform task reassignment; the trial seed is keyed on ``m3``."""
    out = []
    for t in range(trials):
        s = trial_seed(seed, m3, t)
        ms = reassignment_split(uniform_scenario(m3, n1, n2, s))
        out.append(evaluate(ms, m3, t, s, check_oracle))
    return out


def case2_trials(k: int, trials: int, seed: int, centers: Sequence[Point2] = CASE2_CENTERS,
                 variance: float = CASE2_VARIANCE, check_oracle: bool = True) -> list[TrialRecord]:
    """Two Gaussian groups of ``k`` agents and ``k`` tasks each.

    The size column and seed key are the total agent count ``2k`` so that
    trials pair with ``case1_trials(2k, k, k, ...)``.
    """
    out = []
    for t in range(trials):
        s = trial_seed(seed, 2 * k, t)
        _, ms = clustered_scenario(k, k, k, k, centers, variance, s)
        out.append(evaluate(ms, 2 * k, t, s, check_oracle))
    return out


SUMMARY_FIELDS = ("size", "trials", "mean_warm", "mean_opt", "merged_optimal",
                  "mean_iterations_warm", "mean_iterations_cold")


def summarize(records: Iterable[TrialRecord]) -> list[dict]:
    by_size: dict[int, list[TrialRecord]] = {}
    for r in records:
        by_size.setdefault(r.size, []).append(r)
    rows = []
    for size in sorted(by_size):
        rs = by_size[size]
        rows.append({
            "size": size,
            "trials": len(rs),
            "mean_warm": fmean(r.warm_start_value for r in rs),
            "mean_opt": fmean(r.optimal_value for r in rs),
            "merged_optimal": sum(r.merged_optimal for r in rs),
            "mean_iterations_warm": fmean(r.iterations_warm for r in rs),
            "mean_iterations_cold": fmean(r.iterations_cold for r in rs),
        })
    return rows


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def records_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(TrialRecord)])
    for r in records:
        w.writerow([_cell(x) for x in astuple(r)])
    return buf.getvalue()


def summary_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for row in rows:
        w.writerow([_cell(row[k]) for k in SUMMARY_FIELDS])
    return buf.getvalue()
