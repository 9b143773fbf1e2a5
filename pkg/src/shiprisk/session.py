"""Elicitation sessions: one document holding every judgment, plus derivation.

A session document is the unit of persistence and transport: the criteria
framework, the per-criterion card tables and reference levels, the swing
ranking with closeness cards, the statement fixing z, and the classification
policy.  Derivation turns the judgments into value functions and weights
without mutating the document; whatever is still missing or contradictory is
collected as plain-text problems rather than raised, so a half-finished
session remains inspectable.  Mutation helpers return new documents and do
raise, because a change that breaks consistency must be rejected before it
is stored.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Optional, Tuple, Union

from .errors import JudgmentError, SchemaError
from .exact import as_fraction, format_ratio, natural_key
from .riskmodel import (
    VALUED,
    ClassificationPolicy,
    CriteriaFramework,
    Criterion,
    default_framework,
)
from .scale import (
    DISCRETE,
    PIECEWISE,
    ComparisonTable,
    ConsistencyReport,
    ReferenceAssignment,
    ScaleLevel,
    ValueFunction,
    build_value_function,
    new_comparison_table,
    validate_consistency,
)
from .weights import (
    ClosenessJudgments,
    RankingGroups,
    SwingAction,
    WeightVector,
    build_swings,
    compute_weights,
    elicit_z_from_indifference,
    normalize_ranking,
    validate_closeness,
)

Z_INDIFFERENCE = "indifference"
Z_EXPLICIT = "explicit"

SESSION_FORMAT = "shiprisk-session"
SESSION_VERSION = 1

_KEEP = object()  # sentinel: leave the stored value untouched


@dataclass(frozen=True)
class ZSource:
    """How the top-to-bottom weight ratio z was fixed.

    ``indifference`` records the performance on the top-ranked criterion that
    the decision maker finds as good as the bottom swing's full improvement;
    ``explicit`` records z itself (used by robustness scenarios).
    """

    kind: str
    criterion: Optional[str] = None
    performance: Optional[str] = None
    value: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in (Z_INDIFFERENCE, Z_EXPLICIT):
            raise JudgmentError(f"unknown z statement kind {self.kind!r}")
        if self.kind == Z_INDIFFERENCE and self.performance is None:
            raise JudgmentError("an indifference statement needs a performance")
        if self.kind == Z_EXPLICIT and self.value is None:
            raise JudgmentError("an explicit z statement needs a value")


@dataclass(frozen=True)
class SessionDocument:
    framework: CriteriaFramework
    tables: Mapping[str, ComparisonTable]
    references: Mapping[str, ReferenceAssignment]
    swing_ranking: Optional[RankingGroups] = None
    closeness: Optional[ClosenessJudgments] = None
    z_source: Optional[ZSource] = None
    policy: ClassificationPolicy = dataclasses.field(default_factory=ClassificationPolicy)
    provenance: Mapping[str, str] = dataclasses.field(default_factory=dict)


@dataclass(frozen=True)
class DerivedArtifacts:
    """Everything computable from a document, with gaps listed as problems."""

    value_functions: Mapping[str, ValueFunction]
    swings: Optional[Tuple[SwingAction, ...]]
    z: Optional[Fraction]
    weights: Optional[WeightVector]
    problems: Tuple[str, ...] = ()

    @property
    def complete(self) -> bool:
        return self.weights is not None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool  # no consistency violation in any stored judgment
    complete: bool  # every judgment present and weights derivable
    table_reports: Mapping[str, ConsistencyReport]
    closeness_report: Optional[ConsistencyReport]
    problems: Tuple[str, ...]


def levels_for_criterion(criterion: Criterion):
    if criterion.continuous:
        return tuple(
            ScaleLevel(id=level_id, anchor=anchor)
            for level_id, anchor in zip(criterion.levels, criterion.anchors)
        )
    return criterion.levels


def table_for_criterion(
    criterion: Criterion, adjacent_cards, direct_cards=None
) -> ComparisonTable:
    return new_comparison_table(
        criterion.id, levels_for_criterion(criterion), adjacent_cards, direct_cards
    )


def new_blank_document(
    framework: Optional[CriteriaFramework] = None,
    provenance: Optional[Mapping[str, str]] = None,
) -> SessionDocument:
    """A fresh session: zero cards everywhere, extreme levels as references."""
    framework = framework or default_framework()
    tables = {}
    references = {}
    for criterion_id in framework.valued_ids():
        criterion = framework.criterion(criterion_id)
        tables[criterion_id] = table_for_criterion(
            criterion, [0] * (len(criterion.levels) - 1)
        )
        references[criterion_id] = ReferenceAssignment(
            low_level=criterion.levels[0], high_level=criterion.levels[-1]
        )
    return SessionDocument(
        framework=framework,
        tables=tables,
        references=references,
        policy=ClassificationPolicy(),
        provenance=dict(provenance or {}),
    )


def resolve_z(
    document: SessionDocument,
    swings: Tuple[SwingAction, ...],
    value_functions: Mapping[str, ValueFunction],
) -> Fraction:
    """Turn the document's z statement into a number; raises when it cannot."""
    source = document.z_source
    if source is None:
        raise JudgmentError("no z statement in the session")
    if source.kind == Z_EXPLICIT:
        return as_fraction(source.value)
    if document.swing_ranking is None:
        raise JudgmentError("an indifference statement needs the swing ranking")
    groups = normalize_ranking(document.swing_ranking)
    top_group = groups[-1]
    top = source.criterion
    if top is None:
        if len(top_group) != 1:
            raise JudgmentError(
                "the top tie group has several swings; the indifference "
                "statement must name its criterion"
            )
        top = top_group[0]
    if top not in top_group:
        raise JudgmentError(
            f"indifference must be stated on a top-ranked swing; {top!r} is not"
        )
    bottom = groups[0][0]
    by_criterion = {s.criterion_id: s for s in swings}
    allow_boundary = document.closeness is not None and all(
        int(c) == 0 for c in document.closeness.cards_to_reference.values()
    )
    return elicit_z_from_indifference(
        by_criterion[top],
        by_criterion[bottom],
        source.performance,
        value_functions,
        document.references,
        allow_boundary=allow_boundary,
    )


def derive(document: SessionDocument) -> DerivedArtifacts:
    """Compute value functions, swings, z and weights; never raises.

    Missing judgments and consistency failures become entries in
    ``problems``; partial results (for example value functions without
    weights) are still returned so callers can show progress.
    """
    problems = []
    framework = document.framework
    value_functions = {}
    for criterion_id in framework.valued_ids():
        criterion = framework.criterion(criterion_id)
        table = document.tables.get(criterion_id)
        references = document.references.get(criterion_id)
        if table is None:
            problems.append(f"{criterion_id}: no comparison table")
            continue
        if references is None:
            problems.append(f"{criterion_id}: no reference levels")
            continue
        try:
            value_functions[criterion_id] = build_value_function(
                table,
                references,
                kind=PIECEWISE if criterion.continuous else DISCRETE,
                direction=criterion.direction,
                domain_min=criterion.domain_min,
            )
        except JudgmentError as exc:
            problems.append(f"{criterion_id}: {exc}")

    swings = None
    if set(value_functions) == set(framework.valued_ids()):
        swings = build_swings(
            value_functions,
            {cid: document.references[cid] for cid in value_functions},
        )

    if document.swing_ranking is None:
        problems.append("no swing ranking")
    if document.closeness is None:
        problems.append("no closeness judgments")
    if document.z_source is None:
        problems.append("no z statement")

    z = None
    if swings is not None and document.z_source is not None:
        try:
            z = resolve_z(document, swings, value_functions)
        except JudgmentError as exc:
            problems.append(f"z: {exc}")

    weights = None
    if (
        z is not None
        and document.swing_ranking is not None
        and document.closeness is not None
    ):
        try:
            weights = compute_weights(document.swing_ranking, document.closeness, z)
        except JudgmentError as exc:
            problems.append(f"weights: {exc}")

    return DerivedArtifacts(
        value_functions=value_functions,
        swings=swings,
        z=z,
        weights=weights,
        problems=tuple(problems),
    )


def validate_session(document: SessionDocument) -> ValidationReport:
    """Consistency report for every stored judgment, as data."""
    table_reports = {
        criterion_id: validate_consistency(table)
        for criterion_id, table in sorted(document.tables.items(), key=lambda kv: natural_key(kv[0]))
    }
    closeness_report = None
    structural = []
    if document.swing_ranking is not None and document.closeness is not None:
        try:
            closeness_report = validate_closeness(
                document.swing_ranking, document.closeness
            )
        except JudgmentError as exc:
            structural.append(f"closeness: {exc}")
    derived = derive(document)
    ok = (
        all(report.ok for report in table_reports.values())
        and (closeness_report is None or closeness_report.ok)
        and not structural
    )
    return ValidationReport(
        ok=ok,
        complete=derived.complete,
        table_reports=table_reports,
        closeness_report=closeness_report,
        problems=tuple(structural) + derived.problems,
    )


# ---------------------------------------------------------------------------
# Mutations.  Each returns a new document, validating the changed judgment
# first so that an inconsistent change never reaches storage.


def with_table_cards(
    document: SessionDocument,
    criterion_id: str,
    adjacent_cards,
    direct_cards=None,
) -> SessionDocument:
    """Restate a criterion's card counts; earlier direct judgments lapse
    unless restated."""
    criterion = document.framework.criterion(criterion_id)
    if criterion.kind != VALUED:
        raise JudgmentError(
            f"criterion {criterion_id} is judged by rule, not by cards"
        )
    table = table_for_criterion(criterion, adjacent_cards, direct_cards)
    report = validate_consistency(table)
    if not report.ok:
        raise JudgmentError(
            f"inconsistent comparison table for criterion {criterion_id}",
            report.violations,
        )
    references = document.references.get(criterion_id)
    if references is not None:
        # reference levels must stay usable with the new table
        build_value_function(
            table,
            references,
            kind=PIECEWISE if criterion.continuous else DISCRETE,
            direction=criterion.direction,
            domain_min=criterion.domain_min,
        )
    return replace(document, tables={**document.tables, criterion_id: table})


def with_references(
    document: SessionDocument, criterion_id: str, references: ReferenceAssignment
) -> SessionDocument:
    criterion = document.framework.criterion(criterion_id)
    table = document.tables.get(criterion_id)
    if table is None:
        raise JudgmentError(f"{criterion_id}: no comparison table to anchor")
    build_value_function(
        table,
        references,
        kind=PIECEWISE if criterion.continuous else DISCRETE,
        direction=criterion.direction,
        domain_min=criterion.domain_min,
    )
    return replace(
        document, references={**document.references, criterion_id: references}
    )


def with_ranking(document: SessionDocument, ranking) -> SessionDocument:
    """Restate the swing ranking.

    Stored closeness judgments are kept when they still fit the new ranking
    and discarded otherwise, so re-ranking never wedges the session.
    """
    groups = normalize_ranking(ranking)
    flat = {member for group in groups for member in group}
    valued = set(document.framework.valued_ids())
    if flat != valued:
        missing = ", ".join(sorted(valued - flat, key=natural_key))
        extra = ", ".join(sorted(flat - valued, key=natural_key))
        detail = []
        if missing:
            detail.append(f"missing: {missing}")
        if extra:
            detail.append(f"unknown: {extra}")
        raise JudgmentError(
            "the swing ranking must mention every weighted criterion exactly once"
            f" ({'; '.join(detail)})"
        )
    closeness = document.closeness
    if closeness is not None:
        try:
            report = validate_closeness(groups, closeness)
        except JudgmentError:
            closeness = None
        else:
            if not report.ok:
                closeness = None
    return replace(document, swing_ranking=groups, closeness=closeness)


def with_closeness(
    document: SessionDocument,
    reference: str,
    cards_to_reference: Mapping[str, int],
    direct_cards=_KEEP,
) -> SessionDocument:
    """Restate the closeness cards.

    ``direct_cards`` left unset keeps the stored direct judgments (they are
    separate statements); passing a mapping, possibly empty, replaces them.
    """
    if document.swing_ranking is None:
        raise JudgmentError("state the swing ranking before closeness cards")
    if direct_cards is _KEEP:
        direct = dict(document.closeness.direct_cards) if document.closeness else {}
    else:
        direct = {
            (str(worse), str(better)): int(cards)
            for (worse, better), cards in dict(direct_cards or {}).items()
        }
    closeness = ClosenessJudgments(
        reference=reference,
        cards_to_reference={k: int(v) for k, v in dict(cards_to_reference).items()},
        direct_cards=direct,
    )
    report = validate_closeness(document.swing_ranking, closeness)
    if not report.ok:
        raise JudgmentError("inconsistent closeness judgments", report.violations)
    return replace(document, closeness=closeness)


def with_z_source(document: SessionDocument, z_source: ZSource) -> SessionDocument:
    candidate = replace(document, z_source=z_source)
    derived = derive(candidate)
    if derived.swings is not None and derived.z is None:
        # every input is there, so resolution itself failed; surface why
        resolve_z(candidate, derived.swings, derived.value_functions)
        raise AssertionError("resolve_z was expected to raise")
    return candidate


def with_policy(document: SessionDocument, **changes) -> SessionDocument:
    policy = replace(document.policy, **changes)
    return replace(document, policy=policy)


# ---------------------------------------------------------------------------
# Plain-dict mapping (the file format is canonical JSON of this dict).


def _ratio(value) -> str:
    return format_ratio(as_fraction(value))


def framework_to_dict(framework: CriteriaFramework) -> dict:
    criteria = []
    for c in framework.criteria:
        entry = {
            "id": c.id,
            "code": c.code,
            "name": c.name,
            "direction": c.direction,
            "kind": c.kind,
            "point_of_view": c.point_of_view,
            "significance_axis": c.significance_axis,
            "levels": list(c.levels),
        }
        if c.continuous:
            entry["continuous"] = True
            entry["anchors"] = [_ratio(a) for a in c.anchors]
            if c.domain_min is not None:
                entry["domain_min"] = _ratio(c.domain_min)
        criteria.append(entry)
    return {
        "points_of_view": [
            {"id": pv_id, "name": name} for pv_id, name in framework.points_of_view
        ],
        "significance_axes": [
            {"id": sa_id, "name": name, "point_of_view": pv_id}
            for sa_id, name, pv_id in framework.significance_axes
        ],
        "criteria": criteria,
    }


def framework_from_dict(data: Mapping) -> CriteriaFramework:
    try:
        pvs = tuple((pv["id"], pv["name"]) for pv in data["points_of_view"])
        sas = tuple(
            (sa["id"], sa["name"], sa["point_of_view"])
            for sa in data["significance_axes"]
        )
        criteria = []
        for entry in data["criteria"]:
            continuous = bool(entry.get("continuous", False))
            criteria.append(
                Criterion(
                    id=entry["id"],
                    code=entry["code"],
                    name=entry["name"],
                    direction=entry["direction"],
                    kind=entry["kind"],
                    point_of_view=entry["point_of_view"],
                    significance_axis=entry["significance_axis"],
                    levels=tuple(str(level) for level in entry["levels"]),
                    continuous=continuous,
                    anchors=tuple(
                        as_fraction(a) for a in entry.get("anchors", ())
                    ),
                    domain_min=(
                        as_fraction(entry["domain_min"])
                        if entry.get("domain_min") is not None
                        else None
                    ),
                )
            )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed criteria framework: {exc}") from exc
    return CriteriaFramework(pvs, sas, tuple(criteria))


def _table_to_dict(table: ComparisonTable) -> dict:
    direct = [
        {
            "low": table.levels[p].id,
            "high": table.levels[q].id,
            "cards": cards,
        }
        for (p, q), cards in sorted(table.direct_cards.items())
    ]
    entry = {"adjacent_cards": list(table.adjacent_cards)}
    if direct:
        entry["direct_cards"] = direct
    return entry


def _closeness_to_dict(closeness: ClosenessJudgments) -> dict:
    entry = {
        "reference": closeness.reference,
        "cards_to_reference": {
            k: int(v)
            for k, v in sorted(
                closeness.cards_to_reference.items(), key=lambda kv: natural_key(kv[0])
            )
        },
    }
    direct = [
        {"worse": worse, "better": better, "cards": int(cards)}
        for (worse, better), cards in sorted(closeness.direct_cards.items())
    ]
    if direct:
        entry["direct_cards"] = direct
    return entry


def _z_source_to_dict(source: ZSource) -> dict:
    if source.kind == Z_EXPLICIT:
        return {"kind": source.kind, "value": _ratio(source.value)}
    entry = {"kind": source.kind, "performance": str(source.performance)}
    if source.criterion is not None:
        entry["criterion"] = source.criterion
    return entry


def policy_to_dict(policy: ClassificationPolicy) -> dict:
    return {
        "c1_rules": {k: policy.c1_rules[k] for k in sorted(policy.c1_rules, key=natural_key)},
        "lambda_23": _ratio(policy.lambda_23),
        "lambda_12": None if policy.lambda_12 is None else _ratio(policy.lambda_12),
        "g3_high_override": bool(policy.g3_high_override),
    }


def policy_from_dict(data: Mapping) -> ClassificationPolicy:
    try:
        return ClassificationPolicy(
            c1_rules={str(k): str(v) for k, v in dict(data["c1_rules"]).items()},
            lambda_23=as_fraction(data["lambda_23"]),
            lambda_12=(
                None if data.get("lambda_12") is None else as_fraction(data["lambda_12"])
            ),
            g3_high_override=bool(data.get("g3_high_override", True)),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed classification policy: {exc}") from exc


def document_to_dict(document: SessionDocument) -> dict:
    data = {
        "format": SESSION_FORMAT,
        "version": SESSION_VERSION,
        "framework": framework_to_dict(document.framework),
        "tables": {
            criterion_id: _table_to_dict(table)
            for criterion_id, table in sorted(
                document.tables.items(), key=lambda kv: natural_key(kv[0])
            )
        },
        "references": {
            criterion_id: {
                "low_level": refs.low_level,
                "high_level": refs.high_level,
                "low_value": _ratio(refs.low_value),
                "high_value": _ratio(refs.high_value),
            }
            for criterion_id, refs in sorted(
                document.references.items(), key=lambda kv: natural_key(kv[0])
            )
        },
        "swing_ranking": (
            None
            if document.swing_ranking is None
            else [list(group) for group in document.swing_ranking]
        ),
        "closeness": (
            None if document.closeness is None else _closeness_to_dict(document.closeness)
        ),
        "z_source": (
            None if document.z_source is None else _z_source_to_dict(document.z_source)
        ),
        "policy": policy_to_dict(document.policy),
        "provenance": {k: str(v) for k, v in sorted(document.provenance.items())},
    }
    return data


def document_from_dict(data: Mapping) -> SessionDocument:
    if not isinstance(data, Mapping):
        raise SchemaError("a session document must be a JSON object")
    if data.get("format") != SESSION_FORMAT:
        raise SchemaError(
            f"not a session document (format={data.get('format')!r}, "
            f"expected {SESSION_FORMAT!r})"
        )
    version = data.get("version")
    if version != SESSION_VERSION:
        raise SchemaError(f"unsupported session document version {version!r}")
    try:
        framework = framework_from_dict(data["framework"])
        tables = {}
        for criterion_id, entry in dict(data.get("tables", {})).items():
            criterion = framework.criterion(criterion_id)
            direct = {
                (item["low"], item["high"]): int(item["cards"])
                for item in entry.get("direct_cards", ())
            }
            tables[criterion_id] = table_for_criterion(
                criterion, entry["adjacent_cards"], direct
            )
        references = {}
        for criterion_id, entry in dict(data.get("references", {})).items():
            framework.criterion(criterion_id)
            references[criterion_id] = ReferenceAssignment(
                low_level=str(entry["low_level"]),
                high_level=str(entry["high_level"]),
                low_value=as_fraction(entry.get("low_value", 0)),
                high_value=as_fraction(entry.get("high_value", 100)),
            )
        ranking = data.get("swing_ranking")
        swing_ranking = None if ranking is None else normalize_ranking(ranking)
        closeness_data = data.get("closeness")
        closeness = None
        if closeness_data is not None:
            closeness = ClosenessJudgments(
                reference=str(closeness_data["reference"]),
                cards_to_reference={
                    str(k): int(v)
                    for k, v in dict(closeness_data["cards_to_reference"]).items()
                },
                direct_cards={
                    (str(item["worse"]), str(item["better"])): int(item["cards"])
                    for item in closeness_data.get("direct_cards", ())
                },
            )
        z_data = data.get("z_source")
        z_source = None
        if z_data is not None:
            kind = z_data.get("kind")
            if kind == Z_EXPLICIT:
                z_source = ZSource(kind=Z_EXPLICIT, value=as_fraction(z_data["value"]))
            else:
                z_source = ZSource(
                    kind=str(kind),
                    criterion=z_data.get("criterion"),
                    performance=str(z_data["performance"]),
                )
        policy = (
            policy_from_dict(data["policy"])
            if data.get("policy") is not None
            else ClassificationPolicy()
        )
        provenance = {str(k): str(v) for k, v in dict(data.get("provenance", {})).items()}
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed session document: {exc}") from exc
    return SessionDocument(
        framework=framework,
        tables=tables,
        references=references,
        swing_ranking=swing_ranking,
        closeness=closeness,
        z_source=z_source,
        policy=policy,
        provenance=provenance,
    )
