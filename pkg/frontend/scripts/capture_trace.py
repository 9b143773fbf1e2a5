"""Record real gateway responses for the frontend test fixtures.

Replays the reference judgments step by step against an in-process service
instance and writes the ordered request/response trace to
tests/fixtures/replay_trace.json, plus two error-path fixtures (a stale
revision conflict and a closeness violation). The frontend tests mock
``fetch`` with these recordings, so every number they assert against came
from the real backend.

Run from the repository root with the shiprisk package installed:

    python3 frontend/scripts/capture_trace.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from shiprisk.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# The reference judgments, in the order the analyst enters them.
CARD_JUDGMENTS = [
    ("g2", [0, 2, 3, 3, 4]),
    ("g3", [2, 4]),
    ("g4", [3, 4]),
    ("g5", [2, 4]),
    ("g6", [2, 4, 6]),
    ("g8", [3, 3]),
]
RANKING = [["g3"], ["g4"], ["g6"], ["g1"], ["g8"], ["g5"], ["g2"]]
CLOSENESS = {"g3": 19, "g4": 17, "g6": 14, "g1": 11, "g8": 7, "g5": 4}


def record(trace, client, method, path, body=None):
    response = client.request(method, path, json=body)
    entry = {
        "method": method,
        "path": path,
        "status": response.status_code,
        "response": response.json(),
    }
    if body is not None:
        entry["body"] = body
    trace.append(entry)
    return entry["response"]


def main():
    trace = []
    with TestClient(create_app()) as client:
        envelope = record(trace, client, "POST", "/sessions", {"source": "blank"})
        sid = envelope["id"]
        revision = envelope["revision"]
        base = "/sessions/%s" % sid

        for criterion, cards in CARD_JUDGMENTS:
            envelope = record(
                trace,
                client,
                "PUT",
                "%s/tables/%s/cards" % (base, criterion),
                {"revision": revision, "adjacent_cards": cards},
            )
            revision = envelope["revision"]

        envelope = record(
            trace,
            client,
            "PUT",
            base + "/ranking",
            {"revision": revision, "groups": RANKING},
        )
        revision = envelope["revision"]

        envelope = record(
            trace,
            client,
            "PUT",
            base + "/closeness",
            {
                "revision": revision,
                "reference": "g2",
                "cards_to_reference": CLOSENESS,
            },
        )
        revision = envelope["revision"]

        envelope = record(
            trace,
            client,
            "PUT",
            base + "/z",
            {
                "revision": revision,
                "kind": "indifference",
                "criterion": "g2",
                "performance": "15",
            },
        )
        revision = envelope["revision"]
        assert envelope["derived"]["z"]["display"] == "4.25", envelope["derived"]["z"]

        fleet = record(
            trace,
            client,
            "POST",
            base + "/fleet",
            {"revision": revision, "source": "bundled-raw", "lists": "bundled"},
        )
        revision = fleet["revision"]

        classification = record(trace, client, "GET", base + "/classification")
        assert classification["counts"] == {"C1": 2, "C2": 7, "C3": 1}
        leader = classification["results"][0]
        assert (leader["ship"], leader["total"]["display"]) == ("a4", "83.60")

        swept = record(trace, client, "POST", base + "/sweep", {"baseline": "bundled"})
        assert len(swept["cells"]) == 55
        by_cell = {(c["z"], c["lambda_23"]): c for c in swept["cells"]}
        assert by_cell[("17/4", "40")]["categories"]["a6"] == "C3"
        assert by_cell[("17/4", "35")]["categories"]["a6"] == "C2"

        # Error paths, recorded separately so the happy trace stays linear.
        conflict = client.put(
            base + "/tables/g2/cards",
            json={"revision": 1, "adjacent_cards": [0, 2, 3, 3, 4]},
        )
        assert conflict.status_code == 409
        violation = client.put(
            base + "/closeness",
            json={
                "revision": revision,
                "reference": "g2",
                "cards_to_reference": dict(CLOSENESS, g5=8),
            },
        )
        assert violation.status_code == 400
        assert violation.json()["error"]["violations"]
        refreshed = client.get(base)
        assert refreshed.status_code == 200

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "replay_trace.json").write_text(
        json.dumps(trace, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (FIXTURES / "conflict.json").write_text(
        json.dumps(
            {
                "status": conflict.status_code,
                "response": conflict.json(),
                "refreshed": refreshed.json(),
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    (FIXTURES / "closeness_violation.json").write_text(
        json.dumps(
            {"status": violation.status_code, "response": violation.json()},
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    print("wrote %d trace steps to %s" % (len(trace), FIXTURES))


if __name__ == "__main__":
    main()
