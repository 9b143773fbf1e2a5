"""Criteria framework, performance mapping, aggregation, and sorting.

Nine criteria observe a ship from two points of view: its own
characteristics and history (type consequences, age, deficiencies,
detentions) and its registration and classification environment (company,
flag, recognised organisation).  Seven criteria carry value functions and
weights; two (IMO audit, RO recognition) are pure accept/reject rules.

Sorting is hybrid: a rule set filters the low-risk category C1, a cutoff
lambda_23 on the aggregated value separates C2 from C3, and a ship that was
never inspected in the reporting window (deficiencies level "high") drops to
C3 outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple, Union

from .errors import EvaluationError, JudgmentError, MissingReferenceError
from .exact import Numberish, as_fraction, display, natural_key
from .scale import ValueFunction, evaluate
from .weights import WeightVector

VALUED = "valued"
RULE = "acceptation-rejection"

C1, C2, C3 = "C1", "C2", "C3"
CATEGORIES = (C1, C2, C3)


@dataclass(frozen=True)
class Criterion:
    id: str
    code: str
    name: str
    direction: str  # scale.MINIMIZE or scale.MAXIMIZE
    kind: str  # VALUED or RULE
    point_of_view: str
    significance_axis: str
    levels: Tuple[str, ...] = ()  # worst to best; empty for continuous scales
    continuous: bool = False
    anchors: Tuple[Fraction, ...] = ()  # per level, for continuous scales
    domain_min: Optional[Fraction] = None  # continuous scales: smallest admissible input


@dataclass(frozen=True)
class CriteriaFramework:
    points_of_view: Tuple[Tuple[str, str], ...]  # (id, name)
    significance_axes: Tuple[Tuple[str, str, str], ...]  # (id, name, pv id)
    criteria: Tuple[Criterion, ...]

    def __post_init__(self):
        codes = [c.code for c in self.criteria]
        if len(set(codes)) != len(codes):
            raise JudgmentError("criterion codes must be unique")

    def criterion(self, criterion_id: str) -> Criterion:
        for c in self.criteria:
            if c.id == criterion_id:
                return c
        raise MissingReferenceError(f"unknown criterion {criterion_id!r}")

    def valued_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.criteria if c.kind == VALUED)

    def rule_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.criteria if c.kind == RULE)


@dataclass(frozen=True)
class RawShipRecord:
    ship: str
    type: str
    age: Fraction
    deficiencies: Optional[int]  # None when the ship is not eligible
    not_eligible: bool
    detentions: int
    ism_company: str
    flag: str
    recognised_organisation: str

    def __post_init__(self):
        if self.age < 0:
            raise JudgmentError(f"ship {self.ship}: age must be non-negative")
        if self.detentions < 0:
            raise JudgmentError(f"ship {self.ship}: detention count must be non-negative")
        if self.not_eligible:
            if self.deficiencies is not None:
                raise JudgmentError(
                    f"ship {self.ship}: a not-eligible ship carries no deficiency count"
                )
        else:
            if self.deficiencies is None or self.deficiencies < 0:
                raise JudgmentError(
                    f"ship {self.ship}: deficiency count must be a non-negative integer"
                )


@dataclass(frozen=True)
class ReferenceLists:
    """Externally published lookups that turn raw records into levels."""

    listed_ship_types: frozenset
    company_performance: Mapping[str, str]
    flag_performance: Mapping[str, str]
    flag_imo_audit: frozenset
    ro_performance: Mapping[str, str]
    ro_recognised: frozenset


@dataclass(frozen=True)
class PerformanceRecord:
    ship: str
    levels: Mapping[str, Union[str, Fraction]]  # g2 carries the numeric age


@dataclass(frozen=True)
class MappingWarning:
    ship: str
    criterion: str
    token: str
    assigned_level: str


@dataclass(frozen=True)
class ClassificationPolicy:
    c1_rules: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_C1_RULES))
    lambda_23: Fraction = Fraction(40)
    lambda_12: Optional[Fraction] = None
    g3_high_override: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lambda_23", as_fraction(self.lambda_23))
        if self.lambda_12 is not None:
            object.__setattr__(self, "lambda_12", as_fraction(self.lambda_12))
            if not self.lambda_12 > self.lambda_23:
                raise JudgmentError(
                    f"lambda_12 ({self.lambda_12}) must exceed "
                    f"lambda_23 ({self.lambda_23})"
                )


@dataclass(frozen=True)
class ShipValue:
    ship: str
    contributions: Mapping[str, Fraction]
    total: Fraction


@dataclass(frozen=True)
class ClassificationResult:
    ship: str
    contributions: Mapping[str, Fraction]
    total: Fraction
    category: str
    rule_trace: Tuple[str, ...]


@dataclass(frozen=True)
class BatchResult:
    results: Tuple[ClassificationResult, ...]
    counts: Mapping[str, int]


DEFAULT_C1_RULES = {
    "g3": "low",
    "g4": "no",
    "g5": "high",
    "g6": "high",
    "g7": "yes",
    "g8": "high",
    "g9": "yes",
}

# Ship types whose accidents carry the heaviest consequences.
DEFAULT_LISTED_SHIP_TYPES = (
    "Bulk carrier",
    "Chemical tanker",
    "Gas carrier",
    "NLS tanker",
    "Oil tanker",
    "Passenger ship",
)

AGE_ANCHORS = (25, 20, 15, 10, 5, 0)  # worst to best


def default_framework() -> CriteriaFramework:
    from .scale import MAXIMIZE, MINIMIZE

    pvs = (
        ("PV-SC&H", "Ship Characteristics and History"),
        ("PV-SR&C", "Ship Registration and Classification"),
    )
    sas = (
        ("SA-CHAR", "Ship Characteristics", "PV-SC&H"),
        ("SA-HIST", "Ship History", "PV-SC&H"),
        ("SA-COMP", "Ship Company", "PV-SR&C"),
        ("SA-FLAG", "Ship Flag State", "PV-SR&C"),
        ("SA-RECO", "Recognised Organisation", "PV-SR&C"),
    )
    criteria = (
        Criterion(
            "g1", "ACCI", "Ship accident consequences", MINIMIZE, VALUED,
            "PV-SC&H", "SA-CHAR", levels=("high", "low"),
        ),
        Criterion(
            "g2", "AGES", "Age of ship", MINIMIZE, VALUED,
            "PV-SC&H", "SA-CHAR",
            levels=tuple(str(a) for a in AGE_ANCHORS),
            continuous=True,
            anchors=tuple(Fraction(a) for a in AGE_ANCHORS),
            domain_min=Fraction(0),
        ),
        Criterion(
            "g3", "DEFC", "Deficiencies", MINIMIZE, VALUED,
            "PV-SC&H", "SA-HIST", levels=("high", "medium", "low"),
        ),
        Criterion(
            "g4", "DETN", "Detentions", MINIMIZE, VALUED,
            "PV-SC&H", "SA-HIST", levels=("more", "one", "no"),
        ),
        Criterion(
            "g5", "COPF", "Company performance", MAXIMIZE, VALUED,
            "PV-SR&C", "SA-COMP", levels=("low", "medium", "high"),
        ),
        Criterion(
            "g6", "FLPF", "Flag performance", MAXIMIZE, VALUED,
            "PV-SR&C", "SA-FLAG", levels=("very low", "low", "medium", "high"),
        ),
        Criterion(
            "g7", "FLIA", "Fulfilment of the IMO audit", MAXIMIZE, RULE,
            "PV-SR&C", "SA-FLAG", levels=("no", "yes"),
        ),
        Criterion(
            "g8", "ROPF", "Recognised organisation performance", MAXIMIZE, VALUED,
            "PV-SR&C", "SA-RECO", levels=("low", "medium", "high"),
        ),
        Criterion(
            "g9", "RORE", "Recognised organisation recognition", MAXIMIZE, RULE,
            "PV-SR&C", "SA-RECO", levels=("no", "yes"),
        ),
    )
    return CriteriaFramework(pvs, sas, criteria)


def validate_performance(framework: CriteriaFramework, record: PerformanceRecord) -> None:
    """Reject level tokens that do not belong to their criterion's scale."""
    for criterion in framework.criteria:
        if criterion.id not in record.levels:
            raise EvaluationError(
                f"ship {record.ship}: missing performance on {criterion.id}"
            )
        value = record.levels[criterion.id]
        if criterion.continuous:
            x = as_fraction(value)
            if x < 0:
                raise EvaluationError(
                    f"ship {record.ship}: {criterion.id} performance must be >= 0"
                )
        elif value not in criterion.levels:
            raise EvaluationError(
                f"ship {record.ship}: unknown level {value!r} on {criterion.id}; "
                f"expected one of: {', '.join(criterion.levels)}"
            )


def _lookup(
    table: Mapping[str, str],
    token: str,
    worst: str,
    allowed: Sequence[str],
    *,
    ship: str,
    criterion: str,
    lenient: bool,
    warnings: list,
) -> str:
    if token in table:
        level = table[token]
        if level not in allowed:
            raise MissingReferenceError(
                f"ship {ship}: reference list maps {token!r} to unknown "
                f"level {level!r} on {criterion}",
                ship=ship, criterion=criterion, token=token,
            )
        return level
    if lenient:
        warnings.append(MappingWarning(ship, criterion, token, worst))
        return worst
    raise MissingReferenceError(
        f"ship {ship}: no reference-list entry for {token!r} on {criterion}",
        ship=ship, criterion=criterion, token=token,
    )


def map_raw_to_performance(
    raw: RawShipRecord,
    lists: ReferenceLists,
    lenient: bool = False,
) -> Tuple[PerformanceRecord, Tuple[MappingWarning, ...]]:
    """Turn one raw record into scale levels.

    Membership lists answer their question by absence (an unlisted type has
    low accident consequences; a flag or RO off its list simply fails the
    rule), so they never produce missing-data warnings.  Performance lists
    (company, flag, RO) are genuine lookups: a missing entry is an error in
    strict mode and the worst level plus a warning in lenient mode.
    """
    warnings: list = []
    if raw.not_eligible:
        g3 = "high"
    else:
        g3 = "low" if raw.deficiencies <= 5 else "medium"
    if raw.detentions == 0:
        g4 = "no"
    elif raw.detentions == 1:
        g4 = "one"
    else:
        g4 = "more"
    levels = {
        "g1": "high" if raw.type in lists.listed_ship_types else "low",
        "g2": as_fraction(raw.age),
        "g3": g3,
        "g4": g4,
        "g5": _lookup(
            lists.company_performance, raw.ism_company, "low",
            ("low", "medium", "high"),
            ship=raw.ship, criterion="g5", lenient=lenient, warnings=warnings,
        ),
        "g6": _lookup(
            lists.flag_performance, raw.flag, "very low",
            ("very low", "low", "medium", "high"),
            ship=raw.ship, criterion="g6", lenient=lenient, warnings=warnings,
        ),
        "g7": "yes" if raw.flag in lists.flag_imo_audit else "no",
        "g8": _lookup(
            lists.ro_performance, raw.recognised_organisation, "low",
            ("low", "medium", "high"),
            ship=raw.ship, criterion="g8", lenient=lenient, warnings=warnings,
        ),
        "g9": "yes" if raw.recognised_organisation in lists.ro_recognised else "no",
    }
    return PerformanceRecord(ship=raw.ship, levels=levels), tuple(warnings)


def aggregate(
    perf: PerformanceRecord,
    value_functions: Mapping[str, ValueFunction],
    weights: WeightVector,
) -> ShipValue:
    """Weighted additive value; rule criteria contribute no value."""
    if set(value_functions) != set(weights.normalized):
        missing = set(value_functions) ^ set(weights.normalized)
        raise JudgmentError(
            "value functions and weights must cover the same criteria; "
            "mismatched: " + ", ".join(sorted(missing, key=natural_key))
        )
    contributions = {}
    for criterion in sorted(value_functions, key=natural_key):
        if criterion not in perf.levels:
            raise EvaluationError(
                f"ship {perf.ship}: missing performance on {criterion}"
            )
        score = evaluate(value_functions[criterion], perf.levels[criterion])
        contributions[criterion] = weights.normalized[criterion] * score
    return ShipValue(perf.ship, contributions, sum(contributions.values()))


def classify(
    value: ShipValue,
    perf: PerformanceRecord,
    policy: ClassificationPolicy,
) -> ClassificationResult:
    """Assign a category: g3-high override, then C1 rules, then the cutoff."""
    trace = []

    def result(category):
        return ClassificationResult(
            ship=value.ship,
            contributions=value.contributions,
            total=value.total,
            category=category,
            rule_trace=tuple(trace),
        )

    if policy.g3_high_override and perf.levels.get("g3") == "high":
        trace.append("override: g3=high (no inspection in window) forces C3")
        return result(C3)

    if policy.lambda_12 is not None:
        failures = []
        if not value.total > policy.lambda_12:
            failures.append(
                f"C1 needs total > {display(policy.lambda_12)}, "
                f"got {display(value.total)}"
            )
        for criterion in ("g7", "g9"):
            required = policy.c1_rules.get(criterion)
            if required is not None and perf.levels.get(criterion) != required:
                failures.append(
                    f"C1 rule {criterion}: requires {required}, "
                    f"got {perf.levels.get(criterion)}"
                )
        if not failures:
            trace.append(
                f"C1: total {display(value.total)} > "
                f"lambda_12 {display(policy.lambda_12)} and g7/g9 rules hold"
            )
            return result(C1)
        trace.extend(failures)
    else:
        failures = [
            f"C1 rule {criterion}: requires {required}, got {perf.levels.get(criterion)}"
            for criterion, required in policy.c1_rules.items()
            if perf.levels.get(criterion) != required
        ]
        if not failures:
            trace.append("C1: all rules satisfied")
            return result(C1)
        trace.extend(failures)

    if value.total > policy.lambda_23:
        trace.append(
            f"total {display(value.total)} > lambda_23 "
            f"{display(policy.lambda_23)}: C2"
        )
        return result(C2)
    trace.append(
        f"total {display(value.total)} <= lambda_23 "
        f"{display(policy.lambda_23)}: C3"
    )
    return result(C3)


def classify_batch(
    perfs: Sequence[PerformanceRecord],
    value_functions: Mapping[str, ValueFunction],
    weights: WeightVector,
    policy: ClassificationPolicy,
) -> BatchResult:
    """Classify every ship independently, preserving input order."""
    results = tuple(
        classify(aggregate(perf, value_functions, weights), perf, policy)
        for perf in perfs
    )
    counts = {category: 0 for category in CATEGORIES}
    for r in results:
        counts[r.category] += 1
    return BatchResult(results=results, counts=counts)
