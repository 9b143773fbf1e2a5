import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from shiprisk.bundled import reference_session
from shiprisk.cli import main
from shiprisk.dataio import canonical_json
from shiprisk.service import create_app
from shiprisk.session import document_to_dict


@pytest.fixture()
def runner():
    return CliRunner()


BUNDLED_ARGS = ["--session", "bundled", "--fleet", "bundled-raw", "--lists", "bundled"]


def write_session(tmp_path, data, name="session.json"):
    path = tmp_path / name
    path.write_text(canonical_json(data), encoding="utf-8")
    return str(path)


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "shiprisk" in result.output


def test_classify_prints_category_counts(runner):
    result = runner.invoke(main, ["classify"] + BUNDLED_ARGS)
    assert result.exit_code == 0, result.output
    assert result.stdout == "C1 2\nC2 7\nC3 1\n"


def test_classify_with_a_value_cutoff_between_c1_and_c2(runner):
    result = runner.invoke(main, ["classify"] + BUNDLED_ARGS + ["--lambda12", "70"])
    assert result.exit_code == 0
    assert result.stdout == "C1 4\nC2 5\nC3 1\n"


def test_classify_missing_session_file_fails_cleanly(runner, tmp_path):
    result = runner.invoke(
        main,
        ["classify", "--session", str(tmp_path / "nope.json"), "--fleet", "bundled-raw"],
    )
    assert result.exit_code == 1
    assert result.stdout == ""  # no partial counts
    assert "cannot read session file" in result.stderr


def test_classify_exports_match_the_service_byte_for_byte(runner, tmp_path):
    display_path = tmp_path / "results.csv"
    exact_path = tmp_path / "results.json"
    result = runner.invoke(
        main,
        ["classify"] + BUNDLED_ARGS
        + ["--out-display", str(display_path), "--out-exact", str(exact_path)],
    )
    assert result.exit_code == 0
    assert "wrote %s" % display_path in result.stderr
    with TestClient(create_app()) as client:
        response = client.post(
            "/classify",
            json={"session": "bundled", "fleet_source": "bundled-raw", "lists": "bundled"},
        )
    exports = response.json()["exports"]
    assert display_path.read_text(encoding="utf-8") == exports["display_csv"]
    assert exact_path.read_text(encoding="utf-8") == exports["exact_json"]


def test_classify_lenient_warnings_go_to_stderr(runner, tmp_path):
    fleet = tmp_path / "fleet.csv"
    fleet.write_text(
        "ship,type,age,deficiencies,detentions,company,flag,recognised_organisation\n"
        "b1,Bulk carrier,10,3,1,ISM 99,Panama,RINA\n",
        encoding="utf-8",
    )
    lists = tmp_path / "lists.json"
    lists.write_text(
        canonical_json(
            {
                "listed_ship_types": ["Bulk carrier"],
                "company_performance": {"ISM 1": "high"},
                "flag_performance": {"Panama": "medium"},
                "flag_imo_audit": ["Panama"],
                "ro_performance": {"RINA": "high"},
                "ro_recognised": ["RINA"],
            }
        ),
        encoding="utf-8",
    )
    args = [
        "classify",
        "--session", "bundled",
        "--fleet", str(fleet),
        "--lists", str(lists),
    ]
    result = runner.invoke(main, args)
    assert result.exit_code == 1
    assert "ISM 99" in result.stderr
    result = runner.invoke(main, args + ["--lenient"])
    assert result.exit_code == 0, result.stderr
    assert "warning: ship b1: unknown g5 entry 'ISM 99' treated as low" in result.stderr
    counts = dict(line.split() for line in result.stdout.splitlines())
    assert set(counts) == {"C1", "C2", "C3"}
    assert sum(int(v) for v in counts.values()) == 1  # the lone ship is counted


def test_violations_are_rendered_as_card_triples(runner, tmp_path):
    # recomputing weights for an overridden z revalidates the closeness cards
    data = document_to_dict(reference_session())
    data["closeness"]["cards_to_reference"]["g8"] = 8
    result = runner.invoke(
        main,
        ["classify", "--session", write_session(tmp_path, data), "--fleet", "bundled-raw",
         "--lists", "bundled", "--z", "17/4"],
    )
    assert result.exit_code == 1
    assert "between g3 and g8 via g4: expected 11 cards, stated 10" in result.stderr


def test_sweep_prints_the_display_csv(runner):
    result = runner.invoke(
        main,
        ["sweep"] + BUNDLED_ARGS
        + ["--lambdas", "35,40", "--zs", "17/4", "--baseline", "bundled"],
    )
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "ship,z,total,35,40"
    a6 = next(line for line in lines if line.startswith("a6,"))
    assert a6 == "a6,4.25,38.73,C2*,C3"


def test_sweep_writes_exports_instead_when_asked(runner, tmp_path):
    out = tmp_path / "sweep.csv"
    result = runner.invoke(
        main,
        ["sweep"] + BUNDLED_ARGS + ["--zs", "17/4", "--out-display", str(out)],
    )
    assert result.exit_code == 0
    assert result.stdout == ""
    assert out.read_text(encoding="utf-8").startswith("ship,z,total,35,")


def test_session_validate_bundled(runner):
    result = runner.invoke(main, ["session", "validate", "bundled"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert "g2: ok" in lines
    assert "closeness: ok" in lines
    assert lines[-2:] == ["complete: yes", "ok"]


def test_session_validate_reports_violations_and_exits_nonzero(runner, tmp_path):
    data = document_to_dict(reference_session())
    data["tables"]["g3"]["direct_cards"] = [
        {"low": "high", "high": "low", "cards": 9}
    ]
    result = runner.invoke(
        main, ["session", "validate", write_session(tmp_path, data)]
    )
    assert result.exit_code == 1
    assert "g3: 1 violation(s)" in result.stdout
    assert "between high and low via medium: expected 7 cards, stated 9" in result.stdout
    assert result.stdout.splitlines()[-1] == "INCONSISTENT"


def test_session_show(runner):
    result = runner.invoke(main, ["session", "show", "bundled"])
    assert result.exit_code == 0
    out = result.stdout
    assert "ranking (worst swing first): g3 < g4 < g6 < g1 < g8 < g5 < g2" in out
    assert "z from indifference: g2 at 15" in out
    assert "policy: lambda23 40, lambda12 None, g3-high override True" in out
    assert "z = 4.25  alpha_w = 13/80" in out
    assert "  g2  17/4   0.25" in out


def test_reproduce_paper_default_checks_everything(runner):
    result = runner.invoke(main, ["reproduce-paper"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    for name in (
        "value functions",
        "weights",
        "performance mapping",
        "classification",
        "two-cutoff variant",
        "scenario sweep",
        "scenario totals",
        "incumbent comparison",
    ):
        assert any(line.startswith(name) and "PASS" in line for line in lines), name
    assert lines[-1].startswith("overall") and lines[-1].endswith("PASS")


def test_reproduce_paper_single_cell(runner):
    result = runner.invoke(main, ["reproduce-paper", "--lambda23", "45", "--z", "21/4"])
    assert result.exit_code == 0, result.output
    assert "lambda 45 -> C3" in result.stdout
    assert result.stdout.splitlines()[-1].endswith("PASS")


def test_reproduce_paper_off_grid_cell_has_no_figure(runner):
    result = runner.invoke(main, ["reproduce-paper", "--z", "6"])
    assert result.exit_code == 1
    assert "no published figure for z = 6" in result.stdout


def test_reproduce_paper_flags_a_perturbed_session(runner, tmp_path):
    data = document_to_dict(reference_session())
    data["tables"]["g2"]["adjacent_cards"] = [0, 3, 3, 3, 4]
    result = runner.invoke(
        main, ["reproduce-paper", "--session", write_session(tmp_path, data)]
    )
    assert result.exit_code == 1
    out = result.stdout
    assert (
        "value functions        FAIL  first mismatch: criterion g2, level 20: "
        "got 50/9, expected 100/17" in out
    )
    assert out.splitlines()[-1].endswith("FAIL")


def test_serve_precedence_flags_env_config(runner, tmp_path, monkeypatch):
    calls = {}

    def fake_run(app, host, port):
        calls["host"] = host
        calls["port"] = port
        calls["data_dir"] = getattr(app.state.store, "data_dir", None)

    monkeypatch.setattr("uvicorn.run", fake_run)
    config = tmp_path / "server.ini"
    persist = tmp_path / "persist"
    config.write_text(
        "[server]\nhost = 0.0.0.0\nport = 7000\ndata_dir = %s\n" % persist,
        encoding="utf-8",
    )
    result = runner.invoke(
        main,
        ["serve", "--config", str(config), "--host", "10.0.0.5"],
        env={"SHIPRISK_PORT": "9001"},
    )
    assert result.exit_code == 0, result.output
    assert calls == {"host": "10.0.0.5", "port": 9001, "data_dir": persist}
    assert persist.is_dir()


def test_serve_defaults(runner, monkeypatch):
    calls = {}
    monkeypatch.setattr(
        "uvicorn.run", lambda app, host, port: calls.update(host=host, port=port)
    )
    result = runner.invoke(main, ["serve"])
    assert result.exit_code == 0
    assert calls == {"host": "127.0.0.1", "port": 8000}
