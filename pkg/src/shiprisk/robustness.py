"""Robustness sweeps over the model's two free parameters.

The cutoff lambda_23 and the weight ratio z are the only subjective numbers
left once the judgments are fixed, so robustness is a grid: for each z the
weights are recomputed (bypassing the indifference statement), for each
lambda_23 the fleet is reclassified, and the resulting category matrix can
be diffed against externally supplied baseline labels.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .errors import JudgmentError, MissingReferenceError
from .exact import as_fraction
from .riskmodel import (
    CATEGORIES,
    BatchResult,
    ClassificationPolicy,
    PerformanceRecord,
    aggregate,
    classify_batch,
)
from .scale import ValueFunction
from .weights import ClosenessJudgments, compute_weights


@dataclass(frozen=True)
class ScenarioGrid:
    lambda_values: Tuple[Fraction, ...]
    z_values: Tuple[Fraction, ...]

    def __post_init__(self):
        lams = tuple(as_fraction(v) for v in self.lambda_values)
        zs = tuple(as_fraction(v) for v in self.z_values)
        object.__setattr__(self, "lambda_values", lams)
        object.__setattr__(self, "z_values", zs)
        for name, axis in (("lambda", lams), ("z", zs)):
            if not axis:
                raise JudgmentError(f"empty {name} axis in scenario grid")
            if any(b <= a for a, b in zip(axis, axis[1:])):
                raise JudgmentError(f"{name} axis must be strictly increasing")


@dataclass(frozen=True)
class SweepCell:
    z: Fraction
    lambda_23: Fraction
    categories: Mapping[str, str]
    counts: Mapping[str, int]


@dataclass(frozen=True)
class SweepResult:
    grid: ScenarioGrid
    cells: Tuple[SweepCell, ...]  # row-major: z outermost, lambda inner
    totals_by_z: Mapping[Fraction, Mapping[str, Fraction]]

    def cell(self, z, lambda_23) -> SweepCell:
        z = as_fraction(z)
        lam = as_fraction(lambda_23)
        for c in self.cells:
            if c.z == z and c.lambda_23 == lam:
                return c
        raise MissingReferenceError(f"no sweep cell at z={z}, lambda_23={lam}")


@dataclass(frozen=True)
class BaselineDiff:
    # Aligned with SweepResult.cells: which ships differ from the baseline,
    # and how far each category count moved.
    flags: Tuple[Mapping[str, bool], ...]
    count_deltas: Tuple[Mapping[str, int], ...]


def default_grid() -> ScenarioGrid:
    return ScenarioGrid(
        lambda_values=tuple(Fraction(v) for v in range(35, 46)),
        z_values=tuple(Fraction(13, 4) + Fraction(1, 2) * i for i in range(5)),
    )


def sweep(
    perfs: Sequence[PerformanceRecord],
    value_functions: Mapping[str, ValueFunction],
    ranking,
    closeness: ClosenessJudgments,
    grid: ScenarioGrid,
    policy: ClassificationPolicy,
) -> SweepResult:
    """Reclassify the fleet in every (z, lambda_23) scenario.

    Cells are independent by contract; totals depend only on z, so they are
    computed once per grid row.
    """
    cells = []
    totals_by_z = {}
    for z in grid.z_values:
        weights = compute_weights(ranking, closeness, z)
        values = [aggregate(perf, value_functions, weights) for perf in perfs]
        totals_by_z[z] = {v.ship: v.total for v in values}
        for lam in grid.lambda_values:
            batch: BatchResult = classify_batch(
                perfs,
                value_functions,
                weights,
                replace(policy, lambda_23=lam),
            )
            cells.append(
                SweepCell(
                    z=z,
                    lambda_23=lam,
                    categories={r.ship: r.category for r in batch.results},
                    counts=dict(batch.counts),
                )
            )
    return SweepResult(grid=grid, cells=tuple(cells), totals_by_z=totals_by_z)


def compare_to_baseline(
    result: SweepResult,
    baseline: Mapping[str, str],
) -> BaselineDiff:
    """Per-cell agree/differ flags against external category labels.

    The comparison runs over the ships the baseline covers (it may label a
    subset of the fleet); naming a ship absent from the sweep is an error.
    """
    if not baseline:
        raise JudgmentError("empty baseline: no categories to compare against")
    if not result.cells:
        return BaselineDiff(flags=(), count_deltas=())
    swept = set(result.cells[0].categories)
    unknown = sorted(set(baseline) - swept)
    if unknown:
        raise MissingReferenceError(
            "baseline names ships absent from the sweep: " + ", ".join(unknown)
        )
    baseline_counts = {category: 0 for category in CATEGORIES}
    for ship, category in baseline.items():
        if category not in CATEGORIES:
            raise JudgmentError(
                f"baseline assigns unknown category {category!r} to {ship}"
            )
        baseline_counts[category] += 1
    flags = []
    deltas = []
    for cell in result.cells:
        flags.append(
            {ship: cell.categories[ship] != baseline[ship] for ship in baseline}
        )
        counts = {category: 0 for category in CATEGORIES}
        for ship in baseline:
            counts[cell.categories[ship]] += 1
        deltas.append(
            {
                category: counts[category] - baseline_counts[category]
                for category in CATEGORIES
            }
        )
    return BaselineDiff(flags=tuple(flags), count_deltas=tuple(deltas))
