import threading

import pytest
from fastapi.testclient import TestClient

from shiprisk.bundled import expected, reference_session
from shiprisk.errors import JudgmentError
from shiprisk.service import SessionStore, create_app
from shiprisk.service.store import StaleRevisionError
from shiprisk.session import document_to_dict, new_blank_document, with_policy

GOOD_CARDS = {"revision": 1, "adjacent_cards": [0, 2, 3, 3, 4]}


def make_reference(client) -> dict:
    response = client.post("/sessions", json={"source": "reference"})
    assert response.status_code == 201
    return response.json()


def test_health(service_client):
    body = service_client.get("/health").json()
    assert body["status"] == "ok" and body["version"]


def test_create_blank_session(service_client):
    response = service_client.post("/sessions", json={})
    assert response.status_code == 201
    body = response.json()
    assert body["id"] == "s-0001" and body["revision"] == 1
    assert body["derived"]["complete"] is False
    assert "no swing ranking" in body["validation"]["problems"]
    assert set(body["derived"]["value_functions"]) == {
        "g1", "g2", "g3", "g4", "g5", "g6", "g8",
    }


def test_create_reference_session(service_client):
    body = make_reference(service_client)
    derived = body["derived"]
    assert derived["complete"] is True
    assert derived["z"] == {"exact": "17/4", "display": "4.25"}
    normalized = derived["weights"]["normalized"]
    displays = {cid: payload["display"] for cid, payload in normalized.items()}
    assert displays == expected.NORMALIZED_WEIGHT_DISPLAYS
    raw = {cid: payload["exact"] for cid, payload in derived["weights"]["raw"].items()}
    assert raw == expected.RAW_WEIGHTS


def test_create_session_from_document(service_client):
    document = document_to_dict(reference_session())
    response = service_client.post("/sessions", json={"document": document})
    assert response.status_code == 201
    assert response.json()["document"] == document


def test_listing_and_subresources(service_client):
    body = make_reference(service_client)
    sid = body["id"]
    sessions = service_client.get("/sessions").json()["sessions"]
    assert sessions == [
        {"id": sid, "revision": 1, "complete": True, "has_fleet": False}
    ]
    assert service_client.get(f"/sessions/{sid}/document").json() == body["document"]
    assert service_client.get(f"/sessions/{sid}/derived").json() == body["derived"]
    validation = service_client.get(f"/sessions/{sid}/validation").json()
    assert validation["ok"] and validation["complete"]


def test_unknown_session_is_404(service_client):
    response = service_client.get("/sessions/s-9999")
    assert response.status_code == 404
    error = response.json()["error"]
    assert error["type"] == "unknown-session"
    assert "s-9999" in error["message"]


def test_put_cards_rederives_the_value_function(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(f"/sessions/{sid}/tables/g2/cards", json=GOOD_CARDS)
    assert response.status_code == 200
    body = response.json()
    assert body["revision"] == 2
    points = body["derived"]["value_functions"]["g2"]["points"]
    assert [p["value"]["display"] for p in points] == [
        "0.00", "5.88", "23.53", "47.06", "70.59", "100.00",
    ]
    assert [p["value"]["exact"] for p in points] == [
        "0", "100/17", "400/17", "800/17", "1200/17", "100",
    ]


def test_put_cards_on_a_rule_criterion_is_rejected(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/tables/g7/cards", json={"revision": 1, "adjacent_cards": [1]}
    )
    assert response.status_code == 400
    assert response.json()["error"]["type"] == "judgment"


def test_stale_revision_is_409_and_changes_nothing(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/tables/g2/cards",
        json={"revision": 7, "adjacent_cards": [0, 2, 3, 3, 4]},
    )
    assert response.status_code == 409
    error = response.json()["error"]
    assert error["type"] == "stale-revision"
    assert "current is 1" in error["message"]
    assert service_client.get(f"/sessions/{sid}").json()["revision"] == 1


def test_inconsistent_cards_are_rejected_with_violations(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/tables/g3/cards",
        json={
            "revision": 1,
            "adjacent_cards": [2, 4],
            "direct_cards": [{"low": "low", "high": "high", "cards": 9}],
        },
    )
    assert response.status_code == 400
    error = response.json()["error"]
    assert error["type"] == "judgment"
    assert error["violations"] == [
        {"low": "high", "mid": "medium", "high": "low", "expected": 7, "stated": 9}
    ]
    after = service_client.get(f"/sessions/{sid}").json()
    assert after["revision"] == 1
    assert "direct_cards" not in after["document"]["tables"]["g3"]


def test_put_references(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/references/g3",
        json={"revision": 1, "low_level": "high", "high_level": "medium"},
    )
    assert response.status_code == 200
    refs = response.json()["document"]["references"]["g3"]
    assert refs == {
        "low_level": "high",
        "high_level": "medium",
        "low_value": "0",
        "high_value": "100",
    }


def test_put_ranking(service_client):
    sid = make_reference(service_client)["id"]
    groups = [["g3"], ["g4"], ["g6"], ["g1"], ["g8"], ["g5"], ["g2"]]
    response = service_client.put(
        f"/sessions/{sid}/ranking", json={"revision": 1, "groups": groups}
    )
    assert response.status_code == 200
    assert response.json()["document"]["swing_ranking"] == groups
    response = service_client.put(
        f"/sessions/{sid}/ranking", json={"revision": 2, "groups": groups[:-1]}
    )
    assert response.status_code == 400
    assert "g2" in response.json()["error"]["message"]


def test_put_closeness_keeps_direct_judgments_unless_replaced(service_client):
    sid = make_reference(service_client)["id"]
    cards = {"g3": 19, "g4": 17, "g6": 14, "g1": 11, "g8": 7, "g5": 4}
    response = service_client.put(
        f"/sessions/{sid}/closeness",
        json={"revision": 1, "reference": "g2", "cards_to_reference": cards},
    )
    assert response.status_code == 200
    stored = response.json()["document"]["closeness"]
    assert len(stored["direct_cards"]) == 5  # kept from the session
    response = service_client.put(
        f"/sessions/{sid}/closeness",
        json={
            "revision": 2,
            "reference": "g2",
            "cards_to_reference": cards,
            "direct_cards": [],
        },
    )
    assert response.status_code == 200
    assert "direct_cards" not in response.json()["document"]["closeness"]


def test_closeness_violation_names_the_triple(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/closeness",
        json={
            "revision": 1,
            "reference": "g2",
            "cards_to_reference": {
                "g3": 19, "g4": 17, "g6": 14, "g1": 11, "g8": 8, "g5": 4,
            },
        },
    )
    assert response.status_code == 400
    error = response.json()["error"]
    assert {"low": "g3", "mid": "g4", "high": "g8", "expected": 11, "stated": 10} in (
        error["violations"]
    )
    after = service_client.get(f"/sessions/{sid}").json()
    assert after["revision"] == 1
    assert after["document"]["closeness"]["cards_to_reference"]["g8"] == 7


def test_put_z(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/z",
        json={"revision": 1, "kind": "explicit", "value": "7/2"},
    )
    assert response.status_code == 200
    assert response.json()["derived"]["z"] == {"exact": "7/2", "display": "3.50"}
    response = service_client.put(
        f"/sessions/{sid}/z",
        json={
            "revision": 2,
            "kind": "indifference",
            "criterion": "g2",
            "performance": "15",
        },
    )
    assert response.status_code == 200
    assert response.json()["derived"]["z"] == {"exact": "17/4", "display": "4.25"}
    response = service_client.put(
        f"/sessions/{sid}/z", json={"revision": 3, "kind": "explicit"}
    )
    assert response.status_code == 400


def test_put_policy(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/policy",
        json={"revision": 1, "lambda_23": "38", "lambda_12": "70"},
    )
    assert response.status_code == 200
    policy = response.json()["document"]["policy"]
    assert policy["lambda_23"] == "38" and policy["lambda_12"] == "70"
    response = service_client.put(
        f"/sessions/{sid}/policy", json={"revision": 2, "clear_lambda_12": True}
    )
    assert response.json()["document"]["policy"]["lambda_12"] is None
    response = service_client.put(
        f"/sessions/{sid}/policy", json={"revision": 3, "lambda_12": "30"}
    )
    assert response.status_code == 400
    assert response.json()["error"]["type"] == "judgment"


def attach_bundled_fleet(client, sid, revision=1):
    response = client.post(
        f"/sessions/{sid}/fleet",
        json={"revision": revision, "source": "bundled-raw", "lists": "bundled"},
    )
    assert response.status_code == 200, response.text
    return response.json()


def test_fleet_attachment_and_classification(service_client):
    sid = make_reference(service_client)["id"]
    body = attach_bundled_fleet(service_client, sid)
    assert body["fleet"]["mode"] == "raw"
    assert body["fleet"]["ships"] == [f"a{i}" for i in range(1, 11)]
    assert body["fleet"]["warnings"] == []
    fleet = service_client.get(f"/sessions/{sid}/fleet").json()
    assert fleet["mode"] == "raw" and len(fleet["ships"]) == 10

    response = service_client.get(f"/sessions/{sid}/classification")
    assert response.status_code == 200
    data = response.json()
    assert data["counts"] == expected.COUNTS
    assert data["overrides"] == {}
    first = data["results"][0]
    assert first["ship"] == "a4" and first["category"] == "C1"
    assert first["total"]["display"] == "83.60"
    for cid, cell in expected.CLASSIFICATION["a4"][1].items():
        assert first["contributions"][cid]["display"] == cell
    assert data["exports"]["display_csv"].startswith("category,ship,g1")
    assert '"override_' not in data["exports"]["exact_json"]


def test_classification_overrides(service_client):
    sid = make_reference(service_client)["id"]
    attach_bundled_fleet(service_client, sid)
    data = service_client.get(
        f"/sessions/{sid}/classification", params={"lambda12": "70"}
    ).json()
    assert data["counts"] == expected.LAMBDA12_COUNTS
    c1 = tuple(r["ship"] for r in data["results"] if r["category"] == "C1")
    assert c1 == expected.LAMBDA12_C1
    assert data["overrides"] == {"lambda_12": "70"}
    assert '"override_lambda_12": "70"' in data["exports"]["exact_json"]

    data = service_client.get(
        f"/sessions/{sid}/classification", params={"z": "13/4"}
    ).json()
    assert data["overrides"] == {"z": "13/4"}
    a6 = next(r for r in data["results"] if r["ship"] == "a6")
    assert a6["total"]["display"] == "40.27"


def test_classification_without_a_fleet_is_rejected(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.get(f"/sessions/{sid}/classification")
    assert response.status_code == 400
    assert "no fleet" in response.json()["error"]["message"]


def test_incomplete_session_cannot_classify(service_client):
    sid = service_client.post("/sessions", json={}).json()["id"]
    attach_bundled_fleet(service_client, sid)
    response = service_client.get(f"/sessions/{sid}/classification")
    assert response.status_code == 400
    error = response.json()["error"]
    assert error["type"] == "incomplete-session"
    assert "no swing ranking" in error["problems"]


def test_raw_fleet_requires_lists(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.post(
        f"/sessions/{sid}/fleet", json={"revision": 1, "source": "bundled-raw"}
    )
    assert response.status_code == 400
    assert "reference lists" in response.json()["error"]["message"]


def test_inline_fleet_with_lenient_warnings(service_client):
    sid = make_reference(service_client)["id"]
    csv_text = (
        "ship,type,age,deficiencies,detentions,company,flag,recognised_organisation\n"
        "b1,Bulk carrier,10,3,1,ISM 99,Panama,RINA\n"
    )
    lists = {
        "listed_ship_types": ["Bulk carrier"],
        "company_performance": {"ISM 1": "high"},
        "flag_performance": {"Panama": "medium"},
        "flag_imo_audit": ["Panama"],
        "ro_performance": {"RINA": "high"},
        "ro_recognised": ["RINA"],
    }
    response = service_client.post(
        f"/sessions/{sid}/fleet",
        json={"revision": 1, "csv": csv_text, "lists": lists, "lenient": True},
    )
    assert response.status_code == 200
    warnings = response.json()["fleet"]["warnings"]
    assert warnings == [
        {"ship": "b1", "criterion": "g5", "token": "ISM 99", "assigned_level": "low"}
    ]
    strict = service_client.post(
        f"/sessions/{sid}/fleet",
        json={"revision": 2, "csv": csv_text, "lists": lists},
    )
    assert strict.status_code == 400
    assert strict.json()["error"]["type"] == "missing-reference"


def test_session_sweep(service_client):
    sid = make_reference(service_client)["id"]
    attach_bundled_fleet(service_client, sid)
    response = service_client.post(
        f"/sessions/{sid}/sweep", json={"baseline": "bundled"}
    )
    assert response.status_code == 200
    data = response.json()
    assert data["lambda_values"] == expected.SCENARIO_LAMBDAS
    assert data["z_values"] == ["13/4", "15/4", "17/4", "19/4", "21/4"]
    assert len(data["cells"]) == 55
    assert data["totals"]["17/4"]["a6"]["display"] == "38.73"
    matrix = {z: [] for z in data["z_values"]}
    for cell in data["cells"]:
        matrix[cell["z"]].append(cell["categories"]["a6"])
    assert matrix == expected.SCENARIO_MATRIX
    assert data["diff"][0]["flags"] == {"a6": True}
    assert data["diff"][0]["count_deltas"] == {"C1": 0, "C2": 1, "C3": -1}
    assert data["exports"]["display_csv"].startswith("ship,z,total,35,")


def test_sweep_needs_ranking_and_closeness(service_client):
    sid = service_client.post("/sessions", json={}).json()["id"]
    attach_bundled_fleet(service_client, sid)
    response = service_client.post(f"/sessions/{sid}/sweep", json={})
    assert response.status_code == 400
    assert response.json()["error"]["type"] == "incomplete-session"


def test_stateless_classify_matches_the_stateful_route(service_client):
    sid = make_reference(service_client)["id"]
    attach_bundled_fleet(service_client, sid)
    stateful = service_client.get(f"/sessions/{sid}/classification").json()
    response = service_client.post(
        "/classify",
        json={"session": "bundled", "fleet_source": "bundled-raw", "lists": "bundled"},
    )
    assert response.status_code == 200
    stateless = response.json()
    assert stateless["counts"] == expected.COUNTS
    assert stateless["exports"] == stateful["exports"]


def test_stateless_sweep(service_client):
    response = service_client.post(
        "/sweep",
        json={
            "session": "bundled",
            "fleet_source": "bundled-raw",
            "lists": "bundled",
            "lambda_values": ["35", "40"],
            "z_values": ["17/4"],
        },
    )
    assert response.status_code == 200
    data = response.json()
    assert [c["categories"]["a6"] for c in data["cells"]] == ["C2", "C3"]
    assert data["diff"] is None


def test_stateless_parse_errors_use_the_given_label(service_client):
    response = service_client.post(
        "/classify",
        json={
            "session": "bundled",
            "fleet_csv": (
                "ship,g1,g2,g3,g4,g5,g6,g7,g8,g9\n"
                "c1,low,-2,low,no,medium,high,yes,high,yes\n"
            ),
            "fleet_label": "myfleet.csv",
        },
    )
    assert response.status_code == 400
    error = response.json()["error"]
    assert error["type"] == "parse"
    assert error["message"].startswith("myfleet.csv:2:g2:")


def test_inspect(service_client):
    response = service_client.post("/inspect", json={"session": "bundled"})
    assert response.status_code == 200
    data = response.json()
    assert data["derived"]["complete"] is True
    assert data["validation"]["ok"] is True
    blank = document_to_dict(new_blank_document())
    data = service_client.post("/inspect", json={"session": blank}).json()
    assert data["derived"]["complete"] is False


def test_malformed_body_is_a_validation_error(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.put(
        f"/sessions/{sid}/closeness",
        json={"revision": 1, "reference": "g2", "cards_to_reference": {}, "bogus": 1},
    )
    assert response.status_code == 422


def test_save_without_data_dir_is_rejected(service_client):
    sid = make_reference(service_client)["id"]
    response = service_client.post(f"/sessions/{sid}/save")
    assert response.status_code == 400
    assert "data directory" in response.json()["error"]["message"]


def test_store_survives_a_restart(tmp_path):
    data_dir = tmp_path / "store"
    with TestClient(create_app(data_dir=data_dir)) as client:
        sid = make_reference(client)["id"]
        client.put(
            f"/sessions/{sid}/policy", json={"revision": 1, "lambda_23": "38"}
        )
        attach_bundled_fleet(client, sid, revision=2)
        before = client.get(f"/sessions/{sid}/classification").json()
        envelope = client.get(f"/sessions/{sid}").json()

    with TestClient(create_app(data_dir=data_dir)) as client:
        assert client.get(f"/sessions/{sid}").json() == envelope
        after = client.get(f"/sessions/{sid}/classification").json()
        assert after == before
        new_id = client.post("/sessions", json={}).json()["id"]
        assert new_id == "s-0002"  # the counter continues past restored ids


def test_concurrent_mutations_apply_exactly_once():
    store = SessionStore()
    entry = store.create(new_blank_document())
    applied = []
    applied_lock = threading.Lock()

    def bump(worker: int):
        while True:
            stated = store.get(entry.id).revision

            def transform(doc, worker=worker):
                with applied_lock:
                    applied.append(worker)
                return with_policy(doc, lambda_23=40 + len(applied))

            try:
                store.mutate(entry.id, stated, transform)
                return
            except StaleRevisionError:
                continue

    threads = [threading.Thread(target=bump, args=(i,)) for i in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert store.get(entry.id).revision == 17
    assert sorted(applied) == list(range(16))


def test_failed_transform_leaves_the_entry_untouched():
    store = SessionStore()
    entry = store.create(reference_session())
    document = entry.document

    def explode(doc):
        raise JudgmentError("no")

    with pytest.raises(JudgmentError):
        store.mutate(entry.id, 1, explode)
    assert entry.revision == 1
    assert entry.document is document
