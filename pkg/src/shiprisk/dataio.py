"""Reading and writing the package's file formats.

Fleets travel as CSV (UTF-8, comma separated, quoted where needed) in one of
two shapes declared by the header row: raw inspection data or ready-made
scale levels.  Reference lists, baselines and session documents are JSON.
Every export comes in two flavours written side by side: a display CSV with
two-decimal numbers for spreadsheets, and an exact JSON carrying each number
both ways ("400/17" and "23.53").  Exports contain no timestamps, so equal
inputs produce byte-equal files.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence, Tuple, Union

import csv

from .errors import JudgmentError, ParseError, SchemaError
from .exact import as_fraction, display, format_ratio, natural_key
from .riskmodel import (
    CATEGORIES,
    VALUED,
    ClassificationPolicy,
    ClassificationResult,
    CriteriaFramework,
    MappingWarning,
    PerformanceRecord,
    RawShipRecord,
    ReferenceLists,
    default_framework,
    map_raw_to_performance,
    validate_performance,
)
from .robustness import SweepResult
from .session import SessionDocument, document_from_dict, document_to_dict
from .weights import WeightVector

RAW_MODE = "raw"
PERFORMANCE_MODE = "performance"

RAW_COLUMNS = (
    "ship",
    "type",
    "age",
    "deficiencies",
    "detentions",
    "company",
    "flag",
    "recognised_organisation",
)
NOT_ELIGIBLE_TOKEN = "NE"

REFERENCE_LISTS_FORMAT = "shiprisk-reference-lists"
BASELINE_FORMAT = "shiprisk-baseline"
RESULTS_FORMAT = "shiprisk-results"
SWEEP_FORMAT = "shiprisk-sweep"

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Fleet:
    mode: str
    raw: Tuple[RawShipRecord, ...] = ()
    performance: Tuple[PerformanceRecord, ...] = ()

    def ship_ids(self) -> Tuple[str, ...]:
        records = self.raw if self.mode == RAW_MODE else self.performance
        return tuple(r.ship for r in records)


def canonical_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def exact_payload(value: Fraction) -> dict:
    """One number, both ways: exact ratio plus two-decimal display."""
    return {"exact": format_ratio(value), "display": display(value)}


def compact_number(value: Fraction) -> str:
    """Decimal display without trailing zeros, for axis labels ("35", "3.25")."""
    text = display(value)
    return text.rstrip("0").rstrip(".") if "." in text else text


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ValueError(f"duplicate key {key!r}")
        seen[key] = value
    return seen


def _load_json(text: str, source: str):
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=source, line=exc.lineno, column=exc.colno) from exc
    except ValueError as exc:  # duplicate key
        raise ParseError(str(exc), source=source) from exc


def _check_format(data, expected: str, source: str) -> None:
    if not isinstance(data, Mapping):
        raise SchemaError(f"{source}: expected a JSON object")
    if data.get("format") != expected:
        raise SchemaError(
            f"{source}: not a {expected} file (format={data.get('format')!r})"
        )
    if data.get("version") != 1:
        raise SchemaError(
            f"{source}: unsupported version {data.get('version')!r}"
        )


# ---------------------------------------------------------------------------
# Fleet CSV


def _performance_columns(framework: CriteriaFramework) -> Tuple[str, ...]:
    return ("ship",) + tuple(c.id for c in framework.criteria)


def parse_fleet(
    text: str,
    source: str = "<fleet>",
    framework: Optional[CriteriaFramework] = None,
) -> Fleet:
    """Parse a fleet CSV; the header row declares which shape it is.

    Raw files carry inspection data (type, age, deficiency and detention
    counts, company, flag, recognised organisation); performance files carry
    one column per criterion with the level tokens themselves (the age column
    stays numeric).  Any other header is rejected, naming the unknown and
    missing columns.
    """
    framework = framework or default_framework()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty file, expected a header row", source=source, line=1)
    header = tuple(cell.strip() for cell in rows[0])
    perf_columns = _performance_columns(framework)
    if header == RAW_COLUMNS:
        mode = RAW_MODE
    elif header == perf_columns:
        mode = PERFORMANCE_MODE
    else:
        expected = min(
            (RAW_COLUMNS, perf_columns),
            key=lambda cols: len(set(cols) ^ set(header)),
        )
        unknown = [c for c in header if c not in expected]
        missing = [c for c in expected if c not in header]
        detail = []
        if unknown:
            detail.append("unknown columns: " + ", ".join(unknown))
        if missing:
            detail.append("missing columns: " + ", ".join(missing))
        if not detail:  # same names, wrong order
            detail.append("columns must appear in the order " + ", ".join(expected))
        raise ParseError("; ".join(detail), source=source, line=1)

    def cell_error(message, line, column):
        return ParseError(message, source=source, line=line, column=column)

    raw_records = []
    perf_records = []
    seen = {}
    for line_no, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(row)}",
                source=source,
                line=line_no,
            )
        cells = dict(zip(header, (cell.strip() for cell in row)))
        ship = cells["ship"]
        if not ship:
            raise cell_error("empty ship id", line_no, "ship")
        if ship in seen:
            raise cell_error(
                f"duplicate ship id {ship!r} (first seen on line {seen[ship]})",
                line_no,
                "ship",
            )
        seen[ship] = line_no

        if mode == RAW_MODE:
            raw_records.append(_parse_raw_row(cells, line_no, cell_error))
        else:
            perf_records.append(
                _parse_performance_row(cells, framework, line_no, cell_error)
            )

    if mode == RAW_MODE:
        return Fleet(mode=RAW_MODE, raw=tuple(raw_records))
    return Fleet(mode=PERFORMANCE_MODE, performance=tuple(perf_records))


def _parse_raw_row(cells, line_no, cell_error) -> RawShipRecord:
    try:
        age = as_fraction(cells["age"])
    except (ValueError, TypeError, ZeroDivisionError):
        raise cell_error(f"age {cells['age']!r} is not a number", line_no, "age")
    if age < 0:
        raise cell_error(f"age must be non-negative, got {cells['age']}", line_no, "age")

    deficiency_cell = cells["deficiencies"]
    if deficiency_cell.upper() == NOT_ELIGIBLE_TOKEN:
        not_eligible = True
        deficiencies = None
    else:
        not_eligible = False
        try:
            deficiencies = int(deficiency_cell)
        except ValueError:
            raise cell_error(
                f"deficiencies must be a count or {NOT_ELIGIBLE_TOKEN!r}, "
                f"got {deficiency_cell!r}",
                line_no,
                "deficiencies",
            )
        if deficiencies < 0:
            raise cell_error("deficiency count must be non-negative", line_no, "deficiencies")

    try:
        detentions = int(cells["detentions"])
    except ValueError:
        raise cell_error(
            f"detentions must be a count, got {cells['detentions']!r}",
            line_no,
            "detentions",
        )
    if detentions < 0:
        raise cell_error("detention count must be non-negative", line_no, "detentions")

    for column in ("type", "company", "flag", "recognised_organisation"):
        if not cells[column]:
            raise cell_error(f"empty {column}", line_no, column)

    return RawShipRecord(
        ship=cells["ship"],
        type=cells["type"],
        age=age,
        deficiencies=deficiencies,
        not_eligible=not_eligible,
        detentions=detentions,
        ism_company=cells["company"],
        flag=cells["flag"],
        recognised_organisation=cells["recognised_organisation"],
    )


def _parse_performance_row(cells, framework, line_no, cell_error) -> PerformanceRecord:
    levels = {}
    for criterion in framework.criteria:
        token = cells[criterion.id]
        if criterion.continuous:
            try:
                value = as_fraction(token)
            except (ValueError, TypeError, ZeroDivisionError):
                raise cell_error(
                    f"{criterion.id} {token!r} is not a number", line_no, criterion.id
                )
            if value < 0:
                raise cell_error(
                    f"{criterion.id} must be non-negative, got {token}",
                    line_no,
                    criterion.id,
                )
            levels[criterion.id] = value
        else:
            if token not in criterion.levels:
                raise cell_error(
                    f"unknown level {token!r} on {criterion.id}; expected one "
                    f"of: {', '.join(criterion.levels)}",
                    line_no,
                    criterion.id,
                )
            levels[criterion.id] = token
    return PerformanceRecord(ship=cells["ship"], levels=levels)


def fleet_performances(
    fleet: Fleet,
    lists: Optional[ReferenceLists] = None,
    lenient: bool = False,
) -> Tuple[Tuple[PerformanceRecord, ...], Tuple[MappingWarning, ...]]:
    """Scale levels for every ship, mapping raw records when needed."""
    if fleet.mode == PERFORMANCE_MODE:
        return fleet.performance, ()
    if lists is None:
        raise JudgmentError("a raw fleet needs reference lists to map levels")
    perfs = []
    warnings = []
    for record in fleet.raw:
        perf, ws = map_raw_to_performance(record, lists, lenient=lenient)
        perfs.append(perf)
        warnings.extend(ws)
    return tuple(perfs), tuple(warnings)


# ---------------------------------------------------------------------------
# Reference lists and baselines (JSON)

_PERFORMANCE_LEVELS = ("low", "medium", "high")
_FLAG_LEVELS = ("very low", "low", "medium", "high")


def _performance_map(data, key, allowed, folds, notes, source):
    try:
        raw_map = dict(data[key])
    except KeyError:
        raise SchemaError(f"{source}: missing {key!r}")
    out = {}
    for token, level in raw_map.items():
        level = str(level)
        if level in folds:
            folded = folds[level]
            notes.append(f"{key}[{token!r}]: level {level!r} folded into {folded!r}")
            level = folded
        if level not in allowed:
            raise SchemaError(
                f"{source}: {key}[{token!r}] has unknown level {level!r}; "
                f"expected one of: {', '.join(allowed)}"
            )
        out[str(token)] = level
    return out


def parse_reference_lists(
    text: str, source: str = "<reference-lists>"
) -> Tuple[ReferenceLists, Tuple[str, ...]]:
    """Load the lookup tables that turn raw fleet data into levels.

    Company and recognised-organisation scales have three levels, so a
    published "very low" rating folds into "low"; each fold is reported as a
    note.  Duplicate keys anywhere in the file are an error.
    """
    data = _load_json(text, source)
    _check_format(data, REFERENCE_LISTS_FORMAT, source)
    notes: list = []
    folds = {"very low": "low"}
    try:
        listed_types = frozenset(str(t) for t in data["listed_ship_types"])
        flag_audit = frozenset(str(f) for f in data["flag_imo_audit"])
        ro_recognised = frozenset(str(r) for r in data["ro_recognised"])
    except KeyError as exc:
        raise SchemaError(f"{source}: missing {exc.args[0]!r}") from exc
    lists = ReferenceLists(
        listed_ship_types=listed_types,
        company_performance=_performance_map(
            data, "company_performance", _PERFORMANCE_LEVELS, folds, notes, source
        ),
        flag_performance=_performance_map(
            data, "flag_performance", _FLAG_LEVELS, {}, notes, source
        ),
        flag_imo_audit=flag_audit,
        ro_performance=_performance_map(
            data, "ro_performance", _PERFORMANCE_LEVELS, folds, notes, source
        ),
        ro_recognised=ro_recognised,
    )
    return lists, tuple(notes)


def parse_baseline(text: str, source: str = "<baseline>") -> Mapping[str, str]:
    """External category labels to diff sweeps against."""
    data = _load_json(text, source)
    _check_format(data, BASELINE_FORMAT, source)
    try:
        categories = dict(data["categories"])
    except KeyError:
        raise SchemaError(f"{source}: missing 'categories'")
    for ship, category in categories.items():
        if category not in CATEGORIES:
            raise SchemaError(
                f"{source}: baseline assigns unknown category {category!r} to {ship}"
            )
    return {str(ship): str(category) for ship, category in categories.items()}


# ---------------------------------------------------------------------------
# Session documents


def dumps_session(document: SessionDocument) -> str:
    return canonical_json(document_to_dict(document))


def loads_session(text: str, source: str = "<session>") -> SessionDocument:
    return document_from_dict(_load_json(text, source))


def save_session(document: SessionDocument, path: PathLike) -> None:
    Path(path).write_text(dumps_session(document), encoding="utf-8")


def load_session(path: PathLike) -> SessionDocument:
    path = Path(path)
    return loads_session(path.read_text(encoding="utf-8"), source=str(path))


# ---------------------------------------------------------------------------
# Result exports


def _csv_text(rows: Sequence[Sequence[str]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    return out.getvalue()


def _ordered_results(results: Sequence[ClassificationResult]):
    order = {category: i for i, category in enumerate(CATEGORIES)}
    return sorted(results, key=lambda r: (order[r.category], natural_key(r.ship)))


def _performance_cell(value) -> str:
    return format_ratio(value) if isinstance(value, Fraction) else str(value)


def render_results_csv(
    results: Sequence[ClassificationResult],
    perfs: Sequence[PerformanceRecord],
    framework: Optional[CriteriaFramework] = None,
) -> str:
    """Classification table: one row per ship, grouped by category.

    Valued criteria show their weighted value contribution at two decimals;
    rule criteria show the level itself; the last column is the total.
    """
    framework = framework or default_framework()
    perf_by_ship = {p.ship: p for p in perfs}
    header = ["category", "ship"] + [c.id for c in framework.criteria] + ["total"]
    rows = [header]
    for result in _ordered_results(results):
        perf = perf_by_ship[result.ship]
        row = [result.category, result.ship]
        for criterion in framework.criteria:
            if criterion.kind == VALUED:
                row.append(display(result.contributions[criterion.id]))
            else:
                row.append(str(perf.levels[criterion.id]))
        row.append(display(result.total))
        rows.append(row)
    return _csv_text(rows)


def render_results_json(
    results: Sequence[ClassificationResult],
    perfs: Sequence[PerformanceRecord],
    framework: Optional[CriteriaFramework] = None,
    policy: Optional[ClassificationPolicy] = None,
    weights: Optional[WeightVector] = None,
    provenance: Optional[Mapping[str, str]] = None,
) -> str:
    framework = framework or default_framework()
    perf_by_ship = {p.ship: p for p in perfs}
    ships = []
    counts = {category: 0 for category in CATEGORIES}
    for result in _ordered_results(results):
        counts[result.category] += 1
        perf = perf_by_ship[result.ship]
        ships.append(
            {
                "ship": result.ship,
                "category": result.category,
                "total": exact_payload(result.total),
                "contributions": {
                    cid: exact_payload(v) for cid, v in result.contributions.items()
                },
                "performance": {
                    cid: _performance_cell(v) for cid, v in perf.levels.items()
                },
                "trace": list(result.rule_trace),
            }
        )
    data = {
        "format": RESULTS_FORMAT,
        "version": 1,
        "counts": counts,
        "ships": ships,
    }
    if policy is not None:
        data["policy"] = {
            "c1_rules": dict(policy.c1_rules),
            "lambda_23": format_ratio(policy.lambda_23),
            "lambda_12": (
                None if policy.lambda_12 is None else format_ratio(policy.lambda_12)
            ),
            "g3_high_override": policy.g3_high_override,
        }
    if weights is not None:
        data["weights"] = {
            "z": exact_payload(weights.z),
            "alpha_w": exact_payload(weights.alpha_w),
            "raw": {cid: exact_payload(v) for cid, v in weights.raw.items()},
            "normalized": {
                cid: exact_payload(v) for cid, v in weights.normalized.items()
            },
        }
    if provenance:
        data["provenance"] = {k: str(v) for k, v in sorted(provenance.items())}
    return canonical_json(data)


def export_results(
    results: Sequence[ClassificationResult],
    perfs: Sequence[PerformanceRecord],
    display_path: PathLike,
    exact_path: PathLike,
    framework: Optional[CriteriaFramework] = None,
    policy: Optional[ClassificationPolicy] = None,
    weights: Optional[WeightVector] = None,
    provenance: Optional[Mapping[str, str]] = None,
) -> Tuple[str, str]:
    """Write the display CSV and exact JSON; returns both texts."""
    display_text = render_results_csv(results, perfs, framework)
    exact_text = render_results_json(results, perfs, framework, policy, weights, provenance)
    Path(display_path).write_text(display_text, encoding="utf-8")
    Path(exact_path).write_text(exact_text, encoding="utf-8")
    return display_text, exact_text


# ---------------------------------------------------------------------------
# Sweep exports


def _sweep_ships(result: SweepResult) -> Tuple[str, ...]:
    if not result.cells:
        return ()
    return tuple(sorted(result.cells[0].categories, key=natural_key))


def render_sweep_csv(
    result: SweepResult, baseline: Optional[Mapping[str, str]] = None
) -> str:
    """Category matrix per ship: one row per (ship, z), one column per cutoff.

    With a baseline, a trailing ``*`` marks cells that disagree with it, the
    way a changed category is highlighted in print.
    """
    lambdas = result.grid.lambda_values
    header = ["ship", "z", "total"] + [compact_number(lam) for lam in lambdas]
    rows = [header]
    for ship in _sweep_ships(result):
        for z in result.grid.z_values:
            row = [ship, compact_number(z), display(result.totals_by_z[z][ship])]
            for lam in lambdas:
                category = result.cell(z, lam).categories[ship]
                if baseline is not None and ship in baseline and category != baseline[ship]:
                    category += "*"
                row.append(category)
            rows.append(row)
    return _csv_text(rows)


def render_sweep_json(
    result: SweepResult,
    baseline: Optional[Mapping[str, str]] = None,
    provenance: Optional[Mapping[str, str]] = None,
) -> str:
    cells = []
    for cell in result.cells:
        entry = {
            "z": format_ratio(cell.z),
            "lambda_23": format_ratio(cell.lambda_23),
            "categories": {
                ship: cell.categories[ship]
                for ship in sorted(cell.categories, key=natural_key)
            },
            "counts": dict(cell.counts),
        }
        cells.append(entry)
    data = {
        "format": SWEEP_FORMAT,
        "version": 1,
        "lambda_values": [format_ratio(v) for v in result.grid.lambda_values],
        "z_values": [format_ratio(v) for v in result.grid.z_values],
        "totals": {
            format_ratio(z): {
                ship: exact_payload(total)
                for ship, total in sorted(by_ship.items(), key=lambda kv: natural_key(kv[0]))
            }
            for z, by_ship in result.totals_by_z.items()
        },
        "cells": cells,
    }
    if baseline is not None:
        data["baseline"] = {
            ship: baseline[ship] for ship in sorted(baseline, key=natural_key)
        }
    if provenance:
        data["provenance"] = {k: str(v) for k, v in sorted(provenance.items())}
    return canonical_json(data)


def export_sweep(
    result: SweepResult,
    display_path: PathLike,
    exact_path: PathLike,
    baseline: Optional[Mapping[str, str]] = None,
    provenance: Optional[Mapping[str, str]] = None,
) -> Tuple[str, str]:
    display_text = render_sweep_csv(result, baseline)
    exact_text = render_sweep_json(result, baseline, provenance)
    Path(display_path).write_text(display_text, encoding="utf-8")
    Path(exact_path).write_text(exact_text, encoding="utf-8")
    return display_text, exact_text
