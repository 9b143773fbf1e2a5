"""Request and response models for the HTTP service.

Every numeric quantity crosses the wire as an ``ExactNumber``: the exact
value as a ratio string plus a two-decimal display form.  Clients that only
render tables can use ``display``; clients that feed values back into the
service should round-trip ``exact``.
"""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class ExactNumber(BaseModel):
    exact: str
    display: str


class Violation(BaseModel):
    """One broken consistency triple: expected vs stated card count."""

    low: str
    mid: str
    high: str
    expected: int
    stated: int


class ErrorDetail(BaseModel):
    type: str
    message: str
    violations: List[Violation] = Field(default_factory=list)
    problems: List[str] = Field(default_factory=list)


class ErrorBody(BaseModel):
    error: ErrorDetail


# ---------------------------------------------------------------------------
# requests


class CreateSessionRequest(BaseModel):
    source: Literal["blank", "reference"] = "blank"
    document: Optional[Dict[str, Any]] = None


class DirectCardEntry(BaseModel):
    low: str
    high: str
    cards: int


class CardsRequest(BaseModel):
    revision: int
    adjacent_cards: List[int]
    direct_cards: Optional[List[DirectCardEntry]] = None


class ReferencesRequest(BaseModel):
    revision: int
    low_level: str
    high_level: str
    low_value: Union[int, str] = 0
    high_value: Union[int, str] = 100


class RankingRequest(BaseModel):
    revision: int
    groups: List[List[str]]


class ClosenessDirectEntry(BaseModel):
    worse: str
    better: str
    cards: int


class ClosenessRequest(BaseModel):
    """Closeness cards to the top-ranked criterion.

    ``direct_cards`` is a partial update: omitting the field keeps any
    stored direct judgments, supplying it (even empty) replaces them.
    """

    revision: int
    reference: str
    cards_to_reference: Dict[str, int]
    direct_cards: Optional[List[ClosenessDirectEntry]] = None

    model_config = ConfigDict(extra="forbid")


class ZRequest(BaseModel):
    revision: int
    kind: Literal["indifference", "explicit"]
    criterion: Optional[str] = None
    performance: Optional[Union[str, int, float]] = None
    value: Optional[Union[str, int, float]] = None


class PolicyRequest(BaseModel):
    revision: int
    lambda_23: Optional[Union[str, int, float]] = None
    lambda_12: Optional[Union[str, int, float]] = None
    clear_lambda_12: bool = False
    c1_rules: Optional[Dict[str, str]] = None
    g3_high_override: Optional[bool] = None


class FleetRequest(BaseModel):
    """Attach a fleet to the session.

    Exactly one of ``csv`` or ``source`` supplies the rows.  Raw fleets
    need reference lists before they can be classified, so ``lists`` is
    required for them: either the bundled lists or an inline document.
    """

    revision: int
    csv: Optional[str] = None
    source: Optional[Literal["bundled-raw", "bundled-performance"]] = None
    lists: Optional[Union[Literal["bundled"], Dict[str, Any]]] = None
    lenient: bool = False


class SweepRequest(BaseModel):
    lambda_values: Optional[List[Union[str, int, float]]] = None
    z_values: Optional[List[Union[str, int, float]]] = None
    baseline: Optional[Union[Literal["bundled"], Dict[str, str]]] = None


class StatelessClassifyRequest(BaseModel):
    """One-shot classification: nothing is stored on the server.

    ``fleet_label`` names the fleet in parse errors (a client passes the
    file path it read, so errors point at the real file and line).
    """

    session: Union[Literal["bundled"], Dict[str, Any]]
    fleet_csv: Optional[str] = None
    fleet_source: Optional[Literal["bundled-raw", "bundled-performance"]] = None
    fleet_label: Optional[str] = None
    lists: Optional[Union[Literal["bundled"], Dict[str, Any]]] = None
    lenient: bool = False
    lambda_23: Optional[Union[str, int, float]] = None
    lambda_12: Optional[Union[str, int, float]] = None
    z: Optional[Union[str, int, float]] = None


class StatelessSweepRequest(BaseModel):
    session: Union[Literal["bundled"], Dict[str, Any]]
    fleet_csv: Optional[str] = None
    fleet_source: Optional[Literal["bundled-raw", "bundled-performance"]] = None
    fleet_label: Optional[str] = None
    lists: Optional[Union[Literal["bundled"], Dict[str, Any]]] = None
    lenient: bool = False
    lambda_values: Optional[List[Union[str, int, float]]] = None
    z_values: Optional[List[Union[str, int, float]]] = None
    baseline: Optional[Union[Literal["bundled"], Dict[str, str]]] = None


class InspectRequest(BaseModel):
    """Validate and derive from a session document without storing it."""

    session: Union[Literal["bundled"], Dict[str, Any]]


# ---------------------------------------------------------------------------
# responses


class PointView(BaseModel):
    key: str
    value: ExactNumber


class ValueFunctionView(BaseModel):
    criterion: str
    kind: str
    direction: str
    alpha: ExactNumber
    points: List[PointView]


class SwingView(BaseModel):
    id: str
    criterion: str
    profile: Dict[str, ExactNumber]


class WeightsView(BaseModel):
    z: ExactNumber
    alpha_w: ExactNumber
    raw: Dict[str, ExactNumber]
    normalized: Dict[str, ExactNumber]


class DerivedView(BaseModel):
    complete: bool
    problems: List[str]
    value_functions: Dict[str, ValueFunctionView]
    swings: List[SwingView] = Field(default_factory=list)
    z: Optional[ExactNumber] = None
    weights: Optional[WeightsView] = None


class ConsistencyView(BaseModel):
    ok: bool
    violations: List[Violation] = Field(default_factory=list)


class ValidationView(BaseModel):
    ok: bool
    complete: bool
    tables: Dict[str, ConsistencyView]
    closeness: Optional[ConsistencyView] = None
    problems: List[str] = Field(default_factory=list)


class SessionEnvelope(BaseModel):
    id: str
    revision: int
    document: Dict[str, Any]
    derived: DerivedView
    validation: ValidationView


class SessionSummary(BaseModel):
    id: str
    revision: int
    complete: bool
    has_fleet: bool


class SessionList(BaseModel):
    sessions: List[SessionSummary]


class WarningView(BaseModel):
    ship: str
    criterion: str
    token: str
    assigned_level: str


class FleetView(BaseModel):
    mode: str
    ships: List[str]
    lenient: bool
    warnings: List[WarningView] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class FleetResponse(BaseModel):
    id: str
    revision: int
    fleet: FleetView


class ShipResultView(BaseModel):
    ship: str
    category: str
    total: ExactNumber
    contributions: Dict[str, ExactNumber]
    performance: Dict[str, str]
    trace: List[str]


class ExportsView(BaseModel):
    display_csv: str
    exact_json: str


class ClassificationResponse(BaseModel):
    counts: Dict[str, int]
    results: List[ShipResultView]
    warnings: List[WarningView] = Field(default_factory=list)
    overrides: Dict[str, str] = Field(default_factory=dict)
    exports: ExportsView
    revision: Optional[int] = None


class SweepCellView(BaseModel):
    z: str
    lambda_23: str
    counts: Dict[str, int]
    categories: Dict[str, str]


class SweepDiffCellView(BaseModel):
    z: str
    lambda_23: str
    flags: Dict[str, bool]
    count_deltas: Dict[str, int]


class SweepResponse(BaseModel):
    lambda_values: List[str]
    z_values: List[str]
    totals: Dict[str, Dict[str, ExactNumber]]
    cells: List[SweepCellView]
    diff: Optional[List[SweepDiffCellView]] = None
    exports: ExportsView
    revision: Optional[int] = None


class SaveResponse(BaseModel):
    id: str
    revision: int
    path: str
