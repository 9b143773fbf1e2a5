"""Bundled reference data: a complete elicitation session, the ten-ship
sample fleet (raw and as scale levels), the lookup lists that connect them,
and the incumbent system's category labels.  Everything `reproduce-paper`
needs ships with the package."""

from __future__ import annotations

from importlib import resources
from typing import Mapping, Tuple

from ..dataio import (
    Fleet,
    parse_baseline,
    parse_fleet,
    parse_reference_lists,
    loads_session,
)
from ..riskmodel import ReferenceLists
from ..session import SessionDocument

_DATA = resources.files(__package__) / "data"


def data_text(name: str) -> str:
    return (_DATA / name).read_text(encoding="utf-8")


def reference_session() -> SessionDocument:
    return loads_session(data_text("session.json"), source="session.json")


def reference_fleet_raw() -> Fleet:
    return parse_fleet(data_text("fleet_raw.csv"), source="fleet_raw.csv")


def reference_fleet_performance() -> Fleet:
    return parse_fleet(
        data_text("fleet_performance.csv"), source="fleet_performance.csv"
    )


def reference_lists() -> Tuple[ReferenceLists, Tuple[str, ...]]:
    return parse_reference_lists(
        data_text("reference_lists.json"), source="reference_lists.json"
    )


def srp_baseline() -> Mapping[str, str]:
    return parse_baseline(data_text("srp_baseline.json"), source="srp_baseline.json")
