"""In-memory session store with optional directory persistence.

Each session is guarded by its own lock, so writers are serialized per
session while readers always see a consistent snapshot (documents and
fleets are replaced wholesale, never mutated in place).  When a data
directory is configured every accepted mutation is flushed to disk, so a
freshly started process picks up exactly where the previous one stopped.
"""

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from ..dataio import canonical_json, dumps_session, loads_session, parse_fleet
from ..errors import ShipRiskError
from ..riskmodel import ReferenceLists
from ..session import SessionDocument


class UnknownSessionError(ShipRiskError):
    """Raised when a session id does not exist."""


class StaleRevisionError(ShipRiskError):
    """Raised when a mutation carries an outdated revision."""

    def __init__(self, message: str, *, expected: int, stated: int):
        super().__init__(message)
        self.expected = expected
        self.stated = stated


@dataclass
class FleetAttachment:
    text: str
    mode: str
    lenient: bool
    lists_text: Optional[str] = None


@dataclass
class SessionEntry:
    id: str
    revision: int
    document: SessionDocument
    fleet: Optional[FleetAttachment] = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    def __init__(self, data_dir: Optional[Path] = None):
        self._lock = threading.Lock()
        self._entries: Dict[str, SessionEntry] = {}
        self._counter = 0
        self.data_dir = Path(data_dir) if data_dir is not None else None
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load_all()

    # -- persistence --------------------------------------------------

    def _session_dir(self, sid: str) -> Path:
        assert self.data_dir is not None
        return self.data_dir / sid

    def _load_all(self) -> None:
        assert self.data_dir is not None
        for meta_path in sorted(self.data_dir.glob("*/meta.json")):
            sid = meta_path.parent.name
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            document = loads_session(
                (meta_path.parent / "session.json").read_text(encoding="utf-8")
            )
            fleet = None
            fleet_path = meta_path.parent / "fleet.csv"
            if fleet_path.exists():
                lists_path = meta_path.parent / "reference_lists.json"
                fleet = FleetAttachment(
                    text=fleet_path.read_text(encoding="utf-8"),
                    mode=meta["fleet_mode"],
                    lenient=meta.get("fleet_lenient", False),
                    lists_text=(
                        lists_path.read_text(encoding="utf-8")
                        if lists_path.exists()
                        else None
                    ),
                )
            entry = SessionEntry(
                id=sid,
                revision=int(meta["revision"]),
                document=document,
                fleet=fleet,
            )
            self._entries[sid] = entry
            number = _trailing_number(sid)
            if number is not None:
                self._counter = max(self._counter, number)

    def persist(self, entry: SessionEntry) -> Path:
        if self.data_dir is None:
            raise ShipRiskError("no data directory configured")
        target = self._session_dir(entry.id)
        target.mkdir(parents=True, exist_ok=True)
        (target / "session.json").write_text(
            dumps_session(entry.document), encoding="utf-8"
        )
        meta = {"revision": entry.revision}
        fleet_path = target / "fleet.csv"
        lists_path = target / "reference_lists.json"
        if entry.fleet is not None:
            fleet_path.write_text(entry.fleet.text, encoding="utf-8")
            meta["fleet_mode"] = entry.fleet.mode
            meta["fleet_lenient"] = entry.fleet.lenient
            if entry.fleet.lists_text is not None:
                lists_path.write_text(entry.fleet.lists_text, encoding="utf-8")
            elif lists_path.exists():
                lists_path.unlink()
        else:
            for stale in (fleet_path, lists_path):
                if stale.exists():
                    stale.unlink()
        (target / "meta.json").write_text(
            canonical_json(meta), encoding="utf-8"
        )
        return target

    def _persist_if_configured(self, entry: SessionEntry) -> None:
        if self.data_dir is not None:
            self.persist(entry)

    # -- access -------------------------------------------------------

    def create(self, document: SessionDocument) -> SessionEntry:
        with self._lock:
            self._counter += 1
            sid = "s-%04d" % self._counter
            entry = SessionEntry(id=sid, revision=1, document=document)
            self._entries[sid] = entry
        self._persist_if_configured(entry)
        return entry

    def get(self, sid: str) -> SessionEntry:
        try:
            return self._entries[sid]
        except KeyError:
            raise UnknownSessionError("unknown session %r" % sid) from None

    def list_entries(self) -> List[SessionEntry]:
        with self._lock:
            entries = list(self._entries.values())
        return sorted(entries, key=lambda e: e.id)

    def _check_revision(self, entry: SessionEntry, stated: int) -> None:
        if stated != entry.revision:
            raise StaleRevisionError(
                "stale revision %d for session %s (current is %d)"
                % (stated, entry.id, entry.revision),
                expected=entry.revision,
                stated=stated,
            )

    def mutate(
        self,
        sid: str,
        stated_revision: int,
        transform: Callable[[SessionDocument], SessionDocument],
    ) -> SessionEntry:
        """Apply a document transform under the session lock.

        The transform either returns a full replacement document or
        raises; the stored state never reflects a partially applied
        change.
        """
        entry = self.get(sid)
        with entry.lock:
            self._check_revision(entry, stated_revision)
            entry.document = transform(entry.document)
            entry.revision += 1
            self._persist_if_configured(entry)
        return entry

    def attach_fleet(
        self, sid: str, stated_revision: int, fleet: FleetAttachment
    ) -> SessionEntry:
        entry = self.get(sid)
        with entry.lock:
            self._check_revision(entry, stated_revision)
            entry.fleet = fleet
            entry.revision += 1
            self._persist_if_configured(entry)
        return entry


def resolve_fleet(attachment: FleetAttachment, framework):
    return parse_fleet(attachment.text, source="fleet", framework=framework)


def resolve_lists(attachment: FleetAttachment) -> Optional[ReferenceLists]:
    from ..dataio import parse_reference_lists

    if attachment.lists_text is None:
        return None
    lists, _notes = parse_reference_lists(
        attachment.lists_text, source="reference-lists"
    )
    return lists


def _trailing_number(sid: str) -> Optional[int]:
    tail = sid.rsplit("-", 1)[-1]
    return int(tail) if tail.isdigit() else None
