"""Comparison tables and the value functions built from them.

A comparison table records, for consecutive scale levels ordered worst to
best, how many blank cards the decision maker inserted between them: k cards
between two levels mean their values differ by k+1 elementary units.  The
adjacent judgments extend transitively to every level pair through

    e_pq = e_pk + e_kq + 1        for any p < k < q,

and the two reference levels fix the size of one unit,
alpha = (high_value - low_value) / units between the references.  Each level
then gets an exact rational value; continuous scales interpolate linearly
between anchored levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple, Union

from .errors import EvaluationError, JudgmentError
from .exact import Numberish, as_fraction

DISCRETE = "discrete"
PIECEWISE = "piecewise-linear"
MINIMIZE = "minimize"
MAXIMIZE = "maximize"


@dataclass(frozen=True)
class ScaleLevel:
    id: str
    label: str = ""
    ordinal: int = 0  # position worst (0) to best (t-1)
    anchor: Optional[Fraction] = None  # numeric coordinate for continuous scales


@dataclass(frozen=True)
class ConsistencyViolation:
    """One failed instance of e_pq = e_pk + e_kq + 1 (levels worst to best)."""

    low: str
    mid: str
    high: str
    expected: int
    stated: int


@dataclass(frozen=True)
class ConsistencyReport:
    ok: bool
    violations: Tuple[ConsistencyViolation, ...] = ()


@dataclass(frozen=True)
class ComparisonTable:
    criterion_id: str
    levels: Tuple[ScaleLevel, ...]
    adjacent_cards: Tuple[int, ...]
    # Directly stated non-adjacent judgments, by ordinal pair (p, q), p < q.
    direct_cards: Mapping[Tuple[int, int], int] = field(default_factory=dict)
    full_cards: Optional[Mapping[Tuple[int, int], int]] = None

    def ordinal_of(self, level_id: str) -> int:
        for level in self.levels:
            if level.id == level_id:
                return level.ordinal
        known = ", ".join(lv.id for lv in self.levels)
        raise EvaluationError(
            f"unknown level {level_id!r} for criterion {self.criterion_id}"
            f"; expected one of: {known}"
        )


@dataclass(frozen=True)
class ReferenceAssignment:
    """The two levels whose values anchor a criterion's scale."""

    low_level: str
    high_level: str
    low_value: Fraction = Fraction(0)
    high_value: Fraction = Fraction(100)


@dataclass(frozen=True)
class ValueFunction:
    criterion_id: str
    kind: str  # DISCRETE or PIECEWISE
    direction: str  # MINIMIZE or MAXIMIZE
    # (level id | anchor, value) pairs ordered worst to best.
    points: Tuple[Tuple[Union[str, Fraction], Fraction], ...]
    alpha: Fraction
    domain_min: Optional[Fraction] = None

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(value for _, value in self.points)

    def by_level(self) -> Mapping[str, Fraction]:
        if self.kind != DISCRETE:
            raise EvaluationError(
                f"criterion {self.criterion_id} has a continuous scale"
            )
        return {key: value for key, value in self.points}


def _coerce_levels(levels: Sequence) -> Tuple[ScaleLevel, ...]:
    out = []
    for ordinal, entry in enumerate(levels):
        if isinstance(entry, ScaleLevel):
            anchor = None if entry.anchor is None else as_fraction(entry.anchor)
            out.append(
                replace(entry, ordinal=ordinal, label=entry.label or entry.id, anchor=anchor)
            )
        else:
            out.append(ScaleLevel(id=str(entry), label=str(entry), ordinal=ordinal))
    return tuple(out)


def _coerce_pair_judgments(table_levels, entries) -> Mapping[Tuple[int, int], int]:
    """Normalize {(level or ordinal, level or ordinal): cards} to ordinal pairs."""
    by_id = {lv.id: lv.ordinal for lv in table_levels}
    out = {}
    for (low, high), cards in dict(entries).items():
        p = by_id[low] if isinstance(low, str) else int(low)
        q = by_id[high] if isinstance(high, str) else int(high)
        if not (0 <= p < len(table_levels) and 0 <= q < len(table_levels)):
            raise JudgmentError(f"judgment references unknown level pair ({low}, {high})")
        if p == q:
            raise JudgmentError(f"judgment pairs a level with itself ({low})")
        if p > q:
            p, q = q, p
        if int(cards) < 0:
            raise JudgmentError("negative card count")
        out[(p, q)] = int(cards)
    return out


def new_comparison_table(
    criterion_id: str,
    levels: Sequence,
    adjacent_cards: Sequence[int],
    direct_cards=None,
) -> ComparisonTable:
    """Create a table holding the adjacent blank-card judgments.

    ``direct_cards`` may carry additional non-adjacent judgments (stated
    outright by the decision maker); they are kept verbatim and checked by
    validate_consistency, not merged into the transitive fill.
    """
    coerced = _coerce_levels(levels)
    if len(coerced) < 2:
        raise JudgmentError("a comparison table needs at least two levels")
    ids = [lv.id for lv in coerced]
    if len(set(ids)) != len(ids):
        raise JudgmentError(f"duplicate level ids in criterion {criterion_id}")
    cards = tuple(int(c) for c in adjacent_cards)
    if not cards and len(coerced) == 2:
        cards = (0,)  # a two-level scale needs no judgment beyond the pair itself
    if len(cards) != len(coerced) - 1:
        raise JudgmentError(
            f"criterion {criterion_id} has {len(coerced)} levels and needs "
            f"{len(coerced) - 1} adjacent card counts, got {len(cards)}"
        )
    if any(c < 0 for c in cards):
        raise JudgmentError("negative card count")
    direct = _coerce_pair_judgments(coerced, direct_cards or {})
    for (p, q), stated in list(direct.items()):
        if q == p + 1:
            if stated != cards[p]:
                raise JudgmentError(
                    f"conflicting judgment for adjacent levels "
                    f"{coerced[p].id} and {coerced[q].id}: {stated} vs {cards[p]}"
                )
            del direct[(p, q)]
    return ComparisonTable(
        criterion_id=criterion_id,
        levels=coerced,
        adjacent_cards=cards,
        direct_cards=direct,
    )


def fill_transitive(table: ComparisonTable) -> ComparisonTable:
    """Extend the adjacent judgments to every level pair.

    Along a chain of adjacent pairs the consistency condition telescopes to
    e_pq = sum of adjacent cards + number of interior levels, which makes the
    result independent of the chaining order; that independence is asserted.
    """
    t = len(table.levels)
    prefix = [0]
    for c in table.adjacent_cards:
        prefix.append(prefix[-1] + c + 1)  # units accumulated from level 0
    full = {}
    for p in range(t):
        for q in range(p + 1, t):
            full[(p, q)] = prefix[q] - prefix[p] - 1
    for p in range(t):
        for k in range(p + 1, t):
            for q in range(k + 1, t):
                assert full[(p, q)] == full[(p, k)] + full[(k, q)] + 1
    return replace(table, full_cards=full)


def validate_consistency(table: ComparisonTable, extra_judgments=None) -> ConsistencyReport:
    """Check every stated judgment against the consistency condition.

    The stated matrix is the transitive fill overridden by the table's own
    direct judgments and by ``extra_judgments``; every triple p < k < q must
    satisfy e_pq = e_pk + e_kq + 1.  Violations are returned as data, never
    raised.
    """
    filled = table if table.full_cards is not None else fill_transitive(table)
    stated = dict(filled.full_cards)
    stated.update(table.direct_cards)
    if extra_judgments:
        stated.update(_coerce_pair_judgments(table.levels, extra_judgments))
    t = len(table.levels)
    violations = []
    for p in range(t):
        for k in range(p + 1, t):
            for q in range(k + 1, t):
                expected = stated[(p, k)] + stated[(k, q)] + 1
                if stated[(p, q)] != expected:
                    violations.append(
                        ConsistencyViolation(
                            low=table.levels[p].id,
                            mid=table.levels[k].id,
                            high=table.levels[q].id,
                            expected=expected,
                            stated=stated[(p, q)],
                        )
                    )
    return ConsistencyReport(ok=not violations, violations=tuple(violations))


def _reference_ordinals(table: ComparisonTable, refs: ReferenceAssignment):
    low = table.ordinal_of(refs.low_level)
    high = table.ordinal_of(refs.high_level)
    if low == high:
        raise JudgmentError("reference levels must be two distinct levels")
    if low > high:
        raise JudgmentError(
            f"reference level {refs.low_level!r} must precede {refs.high_level!r} "
            f"in preference order"
        )
    if not refs.low_value < refs.high_value:
        raise JudgmentError("low reference value must be below the high reference value")
    return low, high


def compute_alpha(table: ComparisonTable, refs: ReferenceAssignment) -> Fraction:
    """Size of one preference unit implied by the reference values."""
    filled = table if table.full_cards is not None else fill_transitive(table)
    low, high = _reference_ordinals(filled, refs)
    units = filled.full_cards[(low, high)] + 1
    return (as_fraction(refs.high_value) - as_fraction(refs.low_value)) / units


def build_value_function(
    table: ComparisonTable,
    refs: ReferenceAssignment,
    kind: str = DISCRETE,
    direction: str = MINIMIZE,
    domain_min: Optional[Numberish] = None,
) -> ValueFunction:
    if kind not in (DISCRETE, PIECEWISE):
        raise JudgmentError(f"unknown value function kind {kind!r}")
    if direction not in (MINIMIZE, MAXIMIZE):
        raise JudgmentError(f"unknown preference direction {direction!r}")
    report = validate_consistency(table)
    if not report.ok:
        raise JudgmentError(
            f"inconsistent comparison table for criterion {table.criterion_id}",
            report.violations,
        )
    filled = table if table.full_cards is not None else fill_transitive(table)
    low, high = _reference_ordinals(filled, refs)
    alpha = compute_alpha(filled, refs)
    low_value = as_fraction(refs.low_value)

    values = []
    for level in filled.levels:
        k = level.ordinal
        if k == low:
            values.append(low_value)
        elif k > low:
            values.append(low_value + (filled.full_cards[(low, k)] + 1) * alpha)
        else:  # worse than the low reference: extrapolate with the same unit
            values.append(low_value - (filled.full_cards[(k, low)] + 1) * alpha)

    if kind == PIECEWISE:
        missing = [lv.id for lv in filled.levels if lv.anchor is None]
        if missing:
            raise JudgmentError(
                f"piecewise value function for {table.criterion_id} needs an "
                f"anchor on every level; missing: {', '.join(missing)}"
            )
        anchors = [lv.anchor for lv in filled.levels]
        steps = [b - a for a, b in zip(anchors, anchors[1:])]
        if not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            raise JudgmentError(
                f"anchors of {table.criterion_id} must be strictly monotone "
                f"in preference order"
            )
        points = tuple((lv.anchor, v) for lv, v in zip(filled.levels, values))
        dom = None if domain_min is None else as_fraction(domain_min)
        return ValueFunction(table.criterion_id, kind, direction, points, alpha, dom)

    points = tuple((lv.id, v) for lv, v in zip(filled.levels, values))
    return ValueFunction(table.criterion_id, kind, direction, points, alpha)


def evaluate(vf: ValueFunction, performance) -> Fraction:
    """Score a performance: exact lookup for levels, interpolation for numbers.

    Numbers beyond the outermost anchors clamp to the nearest anchor's value;
    numbers below the domain minimum are rejected.
    """
    if vf.kind == DISCRETE:
        if not isinstance(performance, str):
            raise EvaluationError(
                f"criterion {vf.criterion_id} takes a level id, got {performance!r}"
            )
        for key, value in vf.points:
            if key == performance:
                return value
        known = ", ".join(str(key) for key, _ in vf.points)
        raise EvaluationError(
            f"unknown level {performance!r} for criterion {vf.criterion_id}"
            f"; expected one of: {known}"
        )

    x = as_fraction(performance)
    if vf.domain_min is not None and x < vf.domain_min:
        raise EvaluationError(
            f"{vf.criterion_id} performance {performance} is below the "
            f"domain minimum {vf.domain_min}"
        )
    points = sorted(vf.points)  # by anchor, ascending
    if x <= points[0][0]:
        return points[0][1]
    if x >= points[-1][0]:
        return points[-1][1]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 <= x <= x1:
            return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    raise AssertionError("unreachable: anchors cover the interpolation range")
