"""Swing-based weight elicitation.

One dummy ship per weighted criterion is built at the worst reference level
everywhere except its own criterion, which sits at the best reference.  The
decision maker ranks these swings worst to best, states blank-card counts
between each swing and the top-ranked one, and fixes the ratio z between the
largest and smallest weight (usually through an indifference statement).
Weights then follow the same unit logic as scale values: the lowest swing is
pinned to 1, the top one to z, and each card adds one unit alpha_w.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple

from .errors import JudgmentError
from .exact import Numberish, as_fraction, natural_key
from .scale import (
    ConsistencyReport,
    ConsistencyViolation,
    ReferenceAssignment,
    ValueFunction,
    evaluate,
    new_comparison_table,
    validate_consistency,
)


@dataclass(frozen=True)
class SwingAction:
    """Dummy ship at the best reference on one criterion, worst on the rest."""

    id: str
    criterion_id: str
    value_profile: Mapping[str, Fraction]


@dataclass(frozen=True)
class ClosenessJudgments:
    """Blank cards between each swing and the top-ranked reference swing."""

    reference: str
    cards_to_reference: Mapping[str, int]
    # Optional directly stated judgments between non-adjacent swings,
    # keyed (worse id, better id).
    direct_cards: Mapping[Tuple[str, str], int] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.direct_cards is None:
            object.__setattr__(self, "direct_cards", {})


@dataclass(frozen=True)
class WeightVector:
    z: Fraction
    alpha_w: Fraction
    raw: Mapping[str, Fraction]
    normalized: Mapping[str, Fraction]


RankingGroups = Tuple[Tuple[str, ...], ...]


def swing_id_for(criterion_id: str) -> str:
    if criterion_id[:1] == "g" and criterion_id[1:].isdigit():
        return "s" + criterion_id[1:]
    return "s:" + criterion_id


def build_swings(
    value_functions: Mapping[str, ValueFunction],
    references: Mapping[str, ReferenceAssignment],
    swing_refs: Optional[Mapping[str, Tuple[object, object]]] = None,
) -> Tuple[SwingAction, ...]:
    """One swing per weighted criterion.

    By default a profile entry is the criterion's reference value itself;
    ``swing_refs`` may substitute other performances (worst, best) per
    criterion, which are then scored through the value functions.
    """
    missing = sorted(set(value_functions) - set(references))
    if missing:
        raise JudgmentError(
            "criterion missing reference values: " + ", ".join(missing)
        )

    def endpoint(criterion: str, best: bool) -> Fraction:
        if swing_refs and criterion in swing_refs:
            worst_perf, best_perf = swing_refs[criterion]
            return evaluate(value_functions[criterion], best_perf if best else worst_perf)
        refs = references[criterion]
        return as_fraction(refs.high_value if best else refs.low_value)

    swings = []
    for swung in sorted(value_functions, key=natural_key):
        profile = {
            criterion: endpoint(criterion, best=(criterion == swung))
            for criterion in sorted(value_functions, key=natural_key)
        }
        swings.append(SwingAction(swing_id_for(swung), swung, profile))
    return tuple(swings)


def elicit_z_from_indifference(
    top_swing: SwingAction,
    bottom_swing: SwingAction,
    indifference_performance,
    value_functions: Mapping[str, ValueFunction],
    references: Mapping[str, ReferenceAssignment],
    allow_boundary: bool = False,
) -> Fraction:
    """Derive z from indifference between two profiles.

    The decision maker is indifferent between the bottom swing at its full
    best reference and the top swing degraded to ``indifference_performance``.
    Equating the two aggregate values leaves
    z = (bottom span) / (top value at the stated performance - top low value).
    The statement only pins z when the performance lies strictly inside the
    top criterion's reference interval; the upper boundary (z = 1) is legal
    only when the closeness cards are all zero, so it must be allowed
    explicitly.
    """
    top_refs = references[top_swing.criterion_id]
    bottom_refs = references[bottom_swing.criterion_id]
    value = evaluate(
        value_functions[top_swing.criterion_id], indifference_performance
    )
    low = as_fraction(top_refs.low_value)
    high = as_fraction(top_refs.high_value)
    if value <= low or value > high:
        raise JudgmentError(
            f"indifference performance {indifference_performance!r} scores "
            f"{value}, outside the open reference interval ({low}, {high})"
        )
    if value == high and not allow_boundary:
        raise JudgmentError(
            "indifference at the best reference implies z = 1, which is only "
            "meaningful when all closeness cards are zero"
        )
    span = as_fraction(bottom_refs.high_value) - as_fraction(bottom_refs.low_value)
    return span / (value - low)


def normalize_ranking(ranking) -> RankingGroups:
    """Accept a flat id list or tie-group lists; return tuple of tuples."""
    groups = []
    for entry in ranking:
        if isinstance(entry, str):
            groups.append((entry,))
        else:
            members = tuple(str(m) for m in entry)
            if not members:
                raise JudgmentError("empty tie group in swing ranking")
            groups.append(members)
    flat = [m for g in groups for m in g]
    if len(set(flat)) != len(flat):
        raise JudgmentError("swing ranking mentions an action twice")
    if not groups:
        raise JudgmentError("empty swing ranking")
    return tuple(groups)


def _group_cards(groups: RankingGroups, closeness: ClosenessJudgments):
    """Card count per tie group, worst to best; the top group carries -1.

    -1 encodes "zero units from the reference", so that units between any
    group and the reference equal (cards difference), and the adjacent-card
    count between consecutive groups is c_worse - c_better - 1 uniformly.
    """
    top_group = groups[-1]
    if closeness.reference not in top_group:
        raise JudgmentError(
            f"closeness reference {closeness.reference!r} is not in the "
            f"top-ranked tie group"
        )
    cards = dict(closeness.cards_to_reference)
    per_group = []
    for group in groups[:-1]:
        counts = set()
        for member in group:
            if member not in cards:
                raise JudgmentError(f"no closeness cards stated for {member!r}")
            counts.add(int(cards.pop(member)))
        if len(counts) != 1:
            raise JudgmentError(
                f"tied swings {', '.join(group)} must state one shared card count"
            )
        count = counts.pop()
        if count < 0:
            raise JudgmentError("negative card count")
        per_group.append(count)
    stated_for_top = [m for m in top_group if m in cards]
    if stated_for_top:
        raise JudgmentError(
            "closeness cards must not be stated for the top-ranked swings: "
            + ", ".join(stated_for_top)
        )
    if cards:
        raise JudgmentError(
            "closeness cards stated for unranked actions: "
            + ", ".join(sorted(cards))
        )
    per_group.append(-1)
    return per_group


def validate_closeness(ranking, closeness: ClosenessJudgments) -> ConsistencyReport:
    """Structural and transitive checks on the closeness judgments.

    Card counts must strictly decrease toward the reference; any directly
    stated swing-to-swing judgments must agree with the transitive fill of
    the induced table.
    """
    groups = normalize_ranking(ranking)
    per_group = _group_cards(groups, closeness)
    if len(groups) == 1:
        # every swing is tied with the reference: no gaps to judge
        if closeness.direct_cards:
            raise JudgmentError(
                "direct closeness judgments between tied swings"
            )
        return ConsistencyReport(ok=True)

    violations = []
    reference = closeness.reference
    for (worse, cw), (better, cb) in zip(
        zip(groups[:-1], per_group), zip(groups[1:], per_group[1:])
    ):
        if cw - cb - 1 < 0:
            # the better-ranked group must sit strictly closer to the reference
            violations.append(
                ConsistencyViolation(
                    low="|".join(worse),
                    mid="|".join(better),
                    high=reference,
                    expected=cb + 1,
                    stated=cw,
                )
            )
    if violations:
        return ConsistencyReport(ok=False, violations=tuple(violations))

    labels = ["|".join(g) for g in groups]
    adjacent = [cw - cb - 1 for cw, cb in zip(per_group, per_group[1:])]
    member_to_label = {m: lbl for g, lbl in zip(groups, labels) for m in g}
    direct = {}
    for (worse, better), count in dict(closeness.direct_cards).items():
        if worse not in member_to_label or better not in member_to_label:
            raise JudgmentError(
                f"direct closeness judgment names unranked action "
                f"({worse!r}, {better!r})"
            )
        lw, lb = member_to_label[worse], member_to_label[better]
        if lw == lb:
            raise JudgmentError(
                f"direct closeness judgment between tied swings {worse!r}, {better!r}"
            )
        direct[(lw, lb)] = int(count)
    table = new_comparison_table("closeness", labels, adjacent, direct_cards=direct)
    return validate_consistency(table)


def compute_weights(ranking, closeness: ClosenessJudgments, z: Numberish) -> WeightVector:
    """Raw and normalized weights from ranking + closeness + z.

    The lowest-ranked swing is pinned to weight 1 and the reference swing to
    exactly z; every blank card toward the reference is worth one unit
    alpha_w = (z - 1) / (cards between lowest and reference + 1).
    """
    report = validate_closeness(ranking, closeness)
    if not report.ok:
        raise JudgmentError("inconsistent closeness judgments", report.violations)
    groups = normalize_ranking(ranking)
    per_group = _group_cards(groups, closeness)

    z = as_fraction(z)
    if z < 1:
        raise JudgmentError(f"z must be at least 1, got {z}")
    if len(groups) == 1:
        if z != 1:
            raise JudgmentError(
                "a ranking with every swing tied implies equal weights; z must be 1"
            )
        cards_worst = 0
    else:
        cards_worst = per_group[0]
    if z == 1 and any(c > 0 for c in per_group):
        raise JudgmentError(
            "z = 1 flattens all weights but the closeness cards state "
            "distinctions; restate the judgments"
        )

    alpha_w = (z - 1) / (cards_worst + 1)
    raw = {}
    for group, cards in zip(groups, per_group):
        weight = 1 + (cards_worst - cards) * alpha_w
        for member in group:
            raw[member] = weight
    raw = {k: raw[k] for k in sorted(raw, key=natural_key)}
    total = sum(raw.values())
    normalized = {k: v / total for k, v in raw.items()}
    return WeightVector(z=z, alpha_w=alpha_w, raw=raw, normalized=normalized)
