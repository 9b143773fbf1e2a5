"""HTTP endpoints for elicitation sessions, classification and sweeps.

Mutations follow compare-and-set: the request carries the revision it was
based on, a mismatch is rejected with 409 and the session is left exactly
as it was.  Invalid judgments are rejected with 400 and the violated
consistency triples; the stored session never changes on a rejected call.
Derived artifacts (value functions, swings, z, weights) are recomputed
eagerly and returned with every envelope, so clients never see a stale
derivation.
"""

from typing import Any, Dict, List, Mapping, Optional, Tuple

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from .. import __version__, bundled
from ..dataio import (
    RAW_MODE,
    REFERENCE_LISTS_FORMAT,
    Fleet,
    canonical_json,
    exact_payload,
    fleet_performances,
    parse_fleet,
    parse_reference_lists,
    render_results_csv,
    render_results_json,
    render_sweep_csv,
    render_sweep_json,
)
from ..errors import (
    EvaluationError,
    IncompleteSessionError,
    JudgmentError,
    MissingReferenceError,
    ParseError,
    SchemaError,
    ShipRiskError,
)
from ..exact import as_fraction, format_ratio, natural_key
from ..riskmodel import (
    CATEGORIES,
    ClassificationPolicy,
    ReferenceLists,
    classify_batch,
)
from ..robustness import ScenarioGrid, compare_to_baseline, default_grid, sweep
from ..scale import ReferenceAssignment
from ..session import (
    Z_EXPLICIT,
    Z_INDIFFERENCE,
    SessionDocument,
    ZSource,
    derive,
    document_from_dict,
    document_to_dict,
    new_blank_document,
    validate_session,
    with_closeness,
    with_policy,
    with_ranking,
    with_references,
    with_table_cards,
    with_z_source,
)
from ..weights import compute_weights
from . import schemas
from .store import (
    FleetAttachment,
    SessionEntry,
    SessionStore,
    StaleRevisionError,
    UnknownSessionError,
)

_CATEGORY_ORDER = {category: i for i, category in enumerate(CATEGORIES)}


# ---------------------------------------------------------------------------
# views (dataclasses -> wire dicts)


def _violation_views(violations) -> List[dict]:
    return [
        {
            "low": v.low,
            "mid": v.mid,
            "high": v.high,
            "expected": v.expected,
            "stated": v.stated,
        }
        for v in violations
    ]


def _point_key(key) -> str:
    return key if isinstance(key, str) else format_ratio(key)


def _derived_view(derived) -> dict:
    value_functions = {}
    for cid in sorted(derived.value_functions, key=natural_key):
        vf = derived.value_functions[cid]
        value_functions[cid] = {
            "criterion": cid,
            "kind": vf.kind,
            "direction": vf.direction,
            "alpha": exact_payload(vf.alpha),
            "points": [
                {"key": _point_key(key), "value": exact_payload(value)}
                for key, value in vf.points
            ],
        }
    view: Dict[str, Any] = {
        "complete": derived.complete,
        "problems": list(derived.problems),
        "value_functions": value_functions,
        "swings": [],
        "z": None,
        "weights": None,
    }
    if derived.swings is not None:
        view["swings"] = [
            {
                "id": swing.id,
                "criterion": swing.criterion_id,
                "profile": {
                    cid: exact_payload(value)
                    for cid, value in sorted(
                        swing.value_profile.items(),
                        key=lambda kv: natural_key(kv[0]),
                    )
                },
            }
            for swing in derived.swings
        ]
    if derived.z is not None:
        view["z"] = exact_payload(derived.z)
    if derived.weights is not None:
        weights = derived.weights
        view["weights"] = {
            "z": exact_payload(weights.z),
            "alpha_w": exact_payload(weights.alpha_w),
            "raw": {cid: exact_payload(v) for cid, v in weights.raw.items()},
            "normalized": {
                cid: exact_payload(v) for cid, v in weights.normalized.items()
            },
        }
    return view


def _consistency_view(report) -> dict:
    return {"ok": report.ok, "violations": _violation_views(report.violations)}


def _validation_view(report) -> dict:
    return {
        "ok": report.ok,
        "complete": report.complete,
        "tables": {
            cid: _consistency_view(report.table_reports[cid])
            for cid in sorted(report.table_reports, key=natural_key)
        },
        "closeness": (
            None
            if report.closeness_report is None
            else _consistency_view(report.closeness_report)
        ),
        "problems": list(report.problems),
    }


def _envelope(entry: SessionEntry) -> dict:
    document = entry.document
    return {
        "id": entry.id,
        "revision": entry.revision,
        "document": document_to_dict(document),
        "derived": _derived_view(derive(document)),
        "validation": _validation_view(validate_session(document)),
    }


def _warning_views(warnings) -> List[dict]:
    return [
        {
            "ship": w.ship,
            "criterion": w.criterion,
            "token": w.token,
            "assigned_level": w.assigned_level,
        }
        for w in warnings
    ]


def _performance_cell(value) -> str:
    return format_ratio(value) if not isinstance(value, str) else value


# ---------------------------------------------------------------------------
# shared computation


def _require_complete(derived, purpose: str):
    if derived.weights is None:
        problems = list(derived.problems) or ["weights are not derivable yet"]
        error = IncompleteSessionError(
            f"session is not complete enough to {purpose}: " + "; ".join(problems)
        )
        error.problems = problems
        raise error


def _fleet_text(csv_text: Optional[str], source: Optional[str]) -> str:
    if (csv_text is None) == (source is None):
        raise JudgmentError("provide exactly one of csv text or a bundled source")
    if csv_text is not None:
        return csv_text
    name = {
        "bundled-raw": "fleet_raw.csv",
        "bundled-performance": "fleet_performance.csv",
    }[source]
    return bundled.data_text(name)


def _lists_text(value) -> Optional[str]:
    if value is None:
        return None
    if value == "bundled":
        return bundled.data_text("reference_lists.json")
    data = dict(value)
    data.setdefault("format", REFERENCE_LISTS_FORMAT)
    data.setdefault("version", 1)
    return canonical_json(data)


def _parse_lists(text: Optional[str]) -> Tuple[Optional[ReferenceLists], Tuple[str, ...]]:
    if text is None:
        return None, ()
    return parse_reference_lists(text, source="reference-lists")


def _resolve_document(value) -> SessionDocument:
    if value == "bundled":
        return bundled.reference_session()
    return document_from_dict(value)


def _resolve_baseline(value) -> Optional[Mapping[str, str]]:
    if value is None:
        return None
    if value == "bundled":
        return bundled.srp_baseline()
    return {str(ship): str(category) for ship, category in value.items()}


def _policy_with_overrides(
    policy: ClassificationPolicy,
    lambda_23,
    lambda_12,
    z,
    overrides: Dict[str, str],
) -> ClassificationPolicy:
    changes = {}
    if lambda_23 is not None:
        changes["lambda_23"] = as_fraction(lambda_23)
        overrides["lambda_23"] = format_ratio(changes["lambda_23"])
    if lambda_12 is not None:
        changes["lambda_12"] = as_fraction(lambda_12)
        overrides["lambda_12"] = format_ratio(changes["lambda_12"])
    if z is not None:
        overrides["z"] = format_ratio(as_fraction(z))
    return ClassificationPolicy(
        c1_rules=policy.c1_rules,
        lambda_23=changes.get("lambda_23", policy.lambda_23),
        lambda_12=changes.get("lambda_12", policy.lambda_12),
        g3_high_override=policy.g3_high_override,
    )


def _classify(
    document: SessionDocument,
    fleet: Fleet,
    lists: Optional[ReferenceLists],
    lenient: bool,
    lambda_23=None,
    lambda_12=None,
    z=None,
) -> dict:
    derived = derive(document)
    overrides: Dict[str, str] = {}
    policy = _policy_with_overrides(
        document.policy, lambda_23, lambda_12, z, overrides
    )
    if z is not None:
        if document.swing_ranking is None or document.closeness is None:
            raise JudgmentError(
                "overriding z needs the session's swing ranking and closeness cards"
            )
        weights = compute_weights(
            document.swing_ranking, document.closeness, as_fraction(z)
        )
    else:
        _require_complete(derived, "classify a fleet")
        weights = derived.weights
    valued = set(document.framework.valued_ids())
    if set(derived.value_functions) != valued:
        _require_complete(derived, "classify a fleet")
    if lenient:
        overrides["lenient"] = "true"
    perfs, warnings = fleet_performances(fleet, lists, lenient)
    batch = classify_batch(perfs, derived.value_functions, weights, policy)
    provenance = {"tool": f"shiprisk {__version__}"}
    provenance.update({f"override_{k}": v for k, v in overrides.items()})
    display_csv = render_results_csv(batch.results, perfs, document.framework)
    exact_json = render_results_json(
        batch.results,
        perfs,
        document.framework,
        policy=policy,
        weights=weights,
        provenance=provenance,
    )
    ordered = sorted(
        batch.results,
        key=lambda r: (_CATEGORY_ORDER[r.category], natural_key(r.ship)),
    )
    perf_by_ship = {p.ship: p for p in perfs}
    return {
        "counts": dict(batch.counts),
        "results": [
            {
                "ship": r.ship,
                "category": r.category,
                "total": exact_payload(r.total),
                "contributions": {
                    cid: exact_payload(v)
                    for cid, v in sorted(
                        r.contributions.items(), key=lambda kv: natural_key(kv[0])
                    )
                },
                "performance": {
                    cid: _performance_cell(v)
                    for cid, v in perf_by_ship[r.ship].levels.items()
                },
                "trace": list(r.rule_trace),
            }
            for r in ordered
        ],
        "warnings": _warning_views(warnings),
        "overrides": overrides,
        "exports": {"display_csv": display_csv, "exact_json": exact_json},
    }


def _sweep(
    document: SessionDocument,
    fleet: Fleet,
    lists: Optional[ReferenceLists],
    lenient: bool,
    lambda_values=None,
    z_values=None,
    baseline=None,
) -> dict:
    if document.swing_ranking is None or document.closeness is None:
        error = IncompleteSessionError(
            "a sweep needs the swing ranking and closeness cards"
        )
        error.problems = list(derive(document).problems)
        raise error
    derived = derive(document)
    valued = set(document.framework.valued_ids())
    if set(derived.value_functions) != valued:
        _require_complete(derived, "run a sweep")
    base = default_grid()
    grid = ScenarioGrid(
        lambda_values=(
            tuple(as_fraction(v) for v in lambda_values)
            if lambda_values
            else base.lambda_values
        ),
        z_values=(
            tuple(as_fraction(v) for v in z_values) if z_values else base.z_values
        ),
    )
    perfs, _warnings = fleet_performances(fleet, lists, lenient)
    result = sweep(
        perfs,
        derived.value_functions,
        document.swing_ranking,
        document.closeness,
        grid,
        document.policy,
    )
    diff = None
    if baseline is not None:
        comparison = compare_to_baseline(result, baseline)
        diff = [
            {
                "z": format_ratio(cell.z),
                "lambda_23": format_ratio(cell.lambda_23),
                "flags": dict(flags),
                "count_deltas": dict(deltas),
            }
            for cell, flags, deltas in zip(
                result.cells, comparison.flags, comparison.count_deltas
            )
        ]
    provenance = {"tool": f"shiprisk {__version__}"}
    display_csv = render_sweep_csv(result, baseline)
    exact_json = render_sweep_json(result, baseline, provenance)
    return {
        "lambda_values": [format_ratio(v) for v in grid.lambda_values],
        "z_values": [format_ratio(v) for v in grid.z_values],
        "totals": {
            format_ratio(z): {
                ship: exact_payload(total)
                for ship, total in sorted(
                    by_ship.items(), key=lambda kv: natural_key(kv[0])
                )
            }
            for z, by_ship in result.totals_by_z.items()
        },
        "cells": [
            {
                "z": format_ratio(cell.z),
                "lambda_23": format_ratio(cell.lambda_23),
                "counts": dict(cell.counts),
                "categories": {
                    ship: cell.categories[ship]
                    for ship in sorted(cell.categories, key=natural_key)
                },
            }
            for cell in result.cells
        ],
        "diff": diff,
        "exports": {"display_csv": display_csv, "exact_json": exact_json},
    }


def _session_fleet(entry: SessionEntry) -> Tuple[Fleet, Optional[ReferenceLists], bool]:
    attachment = entry.fleet
    if attachment is None:
        raise JudgmentError(
            f"session {entry.id} has no fleet; post one to /sessions/{entry.id}/fleet"
        )
    fleet = parse_fleet(
        attachment.text, source="fleet", framework=entry.document.framework
    )
    lists, _notes = _parse_lists(attachment.lists_text)
    return fleet, lists, attachment.lenient


# ---------------------------------------------------------------------------
# application


def create_app(
    data_dir=None, store: Optional[SessionStore] = None
) -> FastAPI:
    app = FastAPI(title="shiprisk", version=__version__)
    app.state.store = store if store is not None else SessionStore(data_dir)

    def _store() -> SessionStore:
        return app.state.store

    # -- error translation ------------------------------------------------

    def _error_response(status: int, kind: str, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={
                "error": {
                    "type": kind,
                    "message": str(exc),
                    "violations": _violation_views(
                        getattr(exc, "violations", ()) or ()
                    ),
                    "problems": [
                        str(p) for p in (getattr(exc, "problems", ()) or ())
                    ],
                }
            },
        )

    handlers = [
        (StaleRevisionError, 409, "stale-revision"),
        (UnknownSessionError, 404, "unknown-session"),
        (JudgmentError, 400, "judgment"),
        (IncompleteSessionError, 400, "incomplete-session"),
        (ParseError, 400, "parse"),
        (SchemaError, 400, "schema"),
        (EvaluationError, 400, "evaluation"),
        (MissingReferenceError, 400, "missing-reference"),
        (ShipRiskError, 400, "invalid"),
    ]
    for exc_type, status, kind in handlers:

        def _handler(request, exc, status=status, kind=kind):
            return _error_response(status, kind, exc)

        app.add_exception_handler(exc_type, _handler)

    # -- sessions ----------------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/sessions", status_code=201)
    def create_session(body: schemas.CreateSessionRequest):
        if body.document is not None:
            document = document_from_dict(body.document)
        elif body.source == "reference":
            document = bundled.reference_session()
        else:
            document = new_blank_document()
        return _envelope(_store().create(document))

    @app.get("/sessions")
    def list_sessions():
        return {
            "sessions": [
                {
                    "id": entry.id,
                    "revision": entry.revision,
                    "complete": derive(entry.document).complete,
                    "has_fleet": entry.fleet is not None,
                }
                for entry in _store().list_entries()
            ]
        }

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return _envelope(_store().get(sid))

    @app.get("/sessions/{sid}/document")
    def get_document(sid: str):
        return document_to_dict(_store().get(sid).document)

    @app.get("/sessions/{sid}/derived")
    def get_derived(sid: str):
        return _derived_view(derive(_store().get(sid).document))

    @app.get("/sessions/{sid}/validation")
    def get_validation(sid: str):
        return _validation_view(validate_session(_store().get(sid).document))

    # -- judgments -----------------------------------------------------------

    @app.put("/sessions/{sid}/tables/{criterion_id}/cards")
    def put_cards(sid: str, criterion_id: str, body: schemas.CardsRequest):
        direct = (
            None
            if body.direct_cards is None
            else {(e.low, e.high): e.cards for e in body.direct_cards}
        )
        entry = _store().mutate(
            sid,
            body.revision,
            lambda doc: with_table_cards(
                doc, criterion_id, body.adjacent_cards, direct
            ),
        )
        return _envelope(entry)

    @app.put("/sessions/{sid}/references/{criterion_id}")
    def put_references(sid: str, criterion_id: str, body: schemas.ReferencesRequest):
        assignment = ReferenceAssignment(
            low_level=body.low_level,
            high_level=body.high_level,
            low_value=as_fraction(body.low_value),
            high_value=as_fraction(body.high_value),
        )
        entry = _store().mutate(
            sid,
            body.revision,
            lambda doc: with_references(doc, criterion_id, assignment),
        )
        return _envelope(entry)

    @app.put("/sessions/{sid}/ranking")
    def put_ranking(sid: str, body: schemas.RankingRequest):
        entry = _store().mutate(
            sid, body.revision, lambda doc: with_ranking(doc, body.groups)
        )
        return _envelope(entry)

    @app.put("/sessions/{sid}/closeness")
    def put_closeness(sid: str, body: schemas.ClosenessRequest):
        if body.direct_cards is None:
            entry = _store().mutate(
                sid,
                body.revision,
                lambda doc: with_closeness(
                    doc, body.reference, body.cards_to_reference
                ),
            )
        else:
            direct = {(e.worse, e.better): e.cards for e in body.direct_cards}
            entry = _store().mutate(
                sid,
                body.revision,
                lambda doc: with_closeness(
                    doc, body.reference, body.cards_to_reference, direct
                ),
            )
        return _envelope(entry)

    @app.put("/sessions/{sid}/z")
    def put_z(sid: str, body: schemas.ZRequest):
        if body.kind == "indifference":
            source = ZSource(
                kind=Z_INDIFFERENCE,
                criterion=body.criterion,
                performance=(
                    None if body.performance is None else str(body.performance)
                ),
            )
        else:
            if body.value is None:
                raise JudgmentError("an explicit z statement needs a value")
            source = ZSource(kind=Z_EXPLICIT, value=as_fraction(body.value))
        entry = _store().mutate(
            sid, body.revision, lambda doc: with_z_source(doc, source)
        )
        return _envelope(entry)

    @app.put("/sessions/{sid}/policy")
    def put_policy(sid: str, body: schemas.PolicyRequest):
        changes: Dict[str, Any] = {}
        if body.lambda_23 is not None:
            changes["lambda_23"] = as_fraction(body.lambda_23)
        if body.clear_lambda_12:
            changes["lambda_12"] = None
        elif body.lambda_12 is not None:
            changes["lambda_12"] = as_fraction(body.lambda_12)
        if body.c1_rules is not None:
            changes["c1_rules"] = dict(body.c1_rules)
        if body.g3_high_override is not None:
            changes["g3_high_override"] = body.g3_high_override
        entry = _store().mutate(
            sid, body.revision, lambda doc: with_policy(doc, **changes)
        )
        return _envelope(entry)

    # -- fleets --------------------------------------------------------------

    @app.post("/sessions/{sid}/fleet")
    def post_fleet(sid: str, body: schemas.FleetRequest):
        entry = _store().get(sid)
        text = _fleet_text(body.csv, body.source)
        fleet = parse_fleet(text, source="fleet", framework=entry.document.framework)
        lists_text = _lists_text(body.lists)
        lists, notes = _parse_lists(lists_text)
        if fleet.mode == RAW_MODE and lists is None:
            raise JudgmentError(
                "a raw fleet needs reference lists; pass lists: \"bundled\" "
                "or an inline lists document"
            )
        _perfs, warnings = fleet_performances(fleet, lists, body.lenient)
        attachment = FleetAttachment(
            text=text, mode=fleet.mode, lenient=body.lenient, lists_text=lists_text
        )
        entry = _store().attach_fleet(sid, body.revision, attachment)
        return {
            "id": entry.id,
            "revision": entry.revision,
            "fleet": {
                "mode": fleet.mode,
                "ships": list(fleet.ship_ids()),
                "lenient": body.lenient,
                "warnings": _warning_views(warnings),
                "notes": list(notes),
            },
        }

    @app.get("/sessions/{sid}/fleet")
    def get_fleet(sid: str):
        entry = _store().get(sid)
        fleet, lists, lenient = _session_fleet(entry)
        _perfs, warnings = fleet_performances(fleet, lists, lenient)
        return {
            "mode": fleet.mode,
            "ships": list(fleet.ship_ids()),
            "lenient": lenient,
            "warnings": _warning_views(warnings),
            "notes": [],
        }

    # -- classification and sweeps --------------------------------------------

    @app.get("/sessions/{sid}/classification")
    def get_classification(
        sid: str,
        lambda23: Optional[str] = Query(default=None),
        lambda12: Optional[str] = Query(default=None),
        z: Optional[str] = Query(default=None),
        lenient: Optional[bool] = Query(default=None),
    ):
        entry = _store().get(sid)
        fleet, lists, stored_lenient = _session_fleet(entry)
        data = _classify(
            entry.document,
            fleet,
            lists,
            stored_lenient if lenient is None else lenient,
            lambda_23=lambda23,
            lambda_12=lambda12,
            z=z,
        )
        data["revision"] = entry.revision
        return data

    @app.post("/sessions/{sid}/sweep")
    def post_sweep(sid: str, body: schemas.SweepRequest):
        entry = _store().get(sid)
        fleet, lists, lenient = _session_fleet(entry)
        data = _sweep(
            entry.document,
            fleet,
            lists,
            lenient,
            lambda_values=body.lambda_values,
            z_values=body.z_values,
            baseline=_resolve_baseline(body.baseline),
        )
        data["revision"] = entry.revision
        return data

    @app.post("/sessions/{sid}/save")
    def save_session(sid: str):
        store = _store()
        entry = store.get(sid)
        with entry.lock:
            path = store.persist(entry)
        return {"id": entry.id, "revision": entry.revision, "path": str(path)}

    # -- stateless endpoints (nothing stored server-side) ----------------------

    @app.post("/classify")
    def classify_stateless(body: schemas.StatelessClassifyRequest):
        document = _resolve_document(body.session)
        text = _fleet_text(body.fleet_csv, body.fleet_source)
        fleet = parse_fleet(
            text, source=body.fleet_label or "fleet", framework=document.framework
        )
        lists, _notes = _parse_lists(_lists_text(body.lists))
        return _classify(
            document,
            fleet,
            lists,
            body.lenient,
            lambda_23=body.lambda_23,
            lambda_12=body.lambda_12,
            z=body.z,
        )

    @app.post("/sweep")
    def sweep_stateless(body: schemas.StatelessSweepRequest):
        document = _resolve_document(body.session)
        text = _fleet_text(body.fleet_csv, body.fleet_source)
        fleet = parse_fleet(
            text, source=body.fleet_label or "fleet", framework=document.framework
        )
        lists, _notes = _parse_lists(_lists_text(body.lists))
        return _sweep(
            document,
            fleet,
            lists,
            body.lenient,
            lambda_values=body.lambda_values,
            z_values=body.z_values,
            baseline=_resolve_baseline(body.baseline),
        )

    @app.post("/inspect")
    def inspect_stateless(body: schemas.InspectRequest):
        document = _resolve_document(body.session)
        return {
            "document": document_to_dict(document),
            "derived": _derived_view(derive(document)),
            "validation": _validation_view(validate_session(document)),
        }

    return app
