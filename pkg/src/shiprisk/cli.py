"""Command line interface: a thin client over the HTTP service.

Every command talks to the service; by default an in-process instance,
with ``--server`` a running one.  The CLI itself never computes values or
categories, so its exports are byte-identical to what the HTTP API
returns.
"""

import configparser
import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .bundled import expected

CATEGORIES = ("C1", "C2", "C3")


class ServiceError(click.ClickException):
    @classmethod
    def from_response(cls, response) -> "ServiceError":
        try:
            error = response.json()["error"]
        except Exception:
            return cls(
                "service error %d: %s" % (response.status_code, response.text[:200])
            )
        lines = [error.get("message", "request failed")]
        for v in error.get("violations", ()):
            lines.append(
                "  between %s and %s via %s: expected %d cards, stated %d"
                % (v["low"], v["high"], v["mid"], v["expected"], v["stated"])
            )
        for problem in error.get("problems", ()):
            lines.append("  " + problem)
        return cls("\n".join(lines))


class ServiceClient:
    """HTTP client; without a server URL it hosts the app in-process."""

    def __init__(self, server: Optional[str] = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=60.0)
        else:
            import warnings

            with warnings.catch_warnings():
                # fastapi's testclient shim warns about its own import
                warnings.filterwarnings(
                    "ignore",
                    message="Using `httpx` with `starlette.testclient` is deprecated",
                )
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def call(self, method: str, path: str, **kwargs) -> dict:
        response = self._client.request(method, path, **kwargs)
        if response.status_code >= 400:
            raise ServiceError.from_response(response)
        return response.json()


def _read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(
            "cannot read %s %s: %s" % (what, path, exc.strerror or exc)
        )


def _read_json(path: str, what: str) -> dict:
    text = _read_text(path, what)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.ClickException(
            "%s:%d:%d: %s" % (path, exc.lineno, exc.colno, exc.msg)
        )


def _session_arg(value: str):
    return "bundled" if value == "bundled" else _read_json(value, "session file")


def _fleet_args(value: str) -> dict:
    if value in ("bundled-raw", "bundled-performance"):
        return {"fleet_source": value}
    return {"fleet_csv": _read_text(value, "fleet file"), "fleet_label": value}


def _lists_arg(value: Optional[str]):
    if value is None or value == "bundled":
        return value
    return _read_json(value, "reference lists file")


def _baseline_arg(value: Optional[str]):
    if value is None or value == "bundled":
        return value
    data = _read_json(value, "baseline file")
    return data.get("categories", data)


def _ratio(value) -> str:
    """Canonical ratio key for a number given as 45, "5.25" or "21/4"."""
    return str(Fraction(str(value)))


def _close(got_display: str, want_display: str) -> bool:
    # two-decimal figures may differ by one unit in the last digit
    return abs(Fraction(got_display) - Fraction(want_display)) <= Fraction(1, 100)


def _write_exports(data: dict, out_display: Optional[str], out_exact: Optional[str]):
    if out_display:
        Path(out_display).write_text(data["exports"]["display_csv"], encoding="utf-8")
        click.echo("wrote %s" % out_display, err=True)
    if out_exact:
        Path(out_exact).write_text(data["exports"]["exact_json"], encoding="utf-8")
        click.echo("wrote %s" % out_exact, err=True)


def _echo_warnings(data: dict) -> None:
    for w in data.get("warnings", ()):
        click.echo(
            "warning: ship %s: unknown %s entry %r treated as %s"
            % (w["ship"], w["criterion"], w["token"], w["assigned_level"]),
            err=True,
        )


@click.group()
@click.version_option(__version__, prog_name="shiprisk")
@click.option(
    "--server",
    envvar="SHIPRISK_SERVER",
    default=None,
    metavar="URL",
    help="Base URL of a running service; default is an in-process instance.",
)
@click.pass_context
def main(ctx, server):
    """Ship risk classification from blank-card judgments."""
    ctx.obj = server


# ---------------------------------------------------------------------------
# classify


@main.command()
@click.option("--session", "session_path", required=True, metavar="FILE|bundled",
              help="Session document with judgments and policy.")
@click.option("--fleet", "fleet_path", required=True,
              metavar="FILE|bundled-raw|bundled-performance",
              help="Fleet CSV (raw inspection data or scale levels).")
@click.option("--lists", "lists_path", default=None, metavar="FILE|bundled",
              help="Reference lists for mapping raw fleets.")
@click.option("--lambda23", default=None, metavar="VALUE",
              help="Override the C2/C3 cutoff.")
@click.option("--lambda12", default=None, metavar="VALUE",
              help="Use a C1/C2 cutoff instead of the C1 rules.")
@click.option("--z", default=None, metavar="VALUE",
              help="Override the top-to-bottom weight ratio.")
@click.option("--lenient", is_flag=True, default=False,
              help="Map unknown raw entries to the worst level, with a warning.")
@click.option("--out-display", default=None, type=click.Path(dir_okay=False),
              help="Write the classification table CSV here.")
@click.option("--out-exact", default=None, type=click.Path(dir_okay=False),
              help="Write the exact JSON results here.")
@click.pass_context
def classify(ctx, session_path, fleet_path, lists_path, lambda23, lambda12, z,
             lenient, out_display, out_exact):
    """Sort a fleet into C1/C2/C3 and print the category counts."""
    body = {"session": _session_arg(session_path), "lenient": lenient}
    body.update(_fleet_args(fleet_path))
    lists = _lists_arg(lists_path)
    if lists is not None:
        body["lists"] = lists
    if lambda23 is not None:
        body["lambda_23"] = lambda23
    if lambda12 is not None:
        body["lambda_12"] = lambda12
    if z is not None:
        body["z"] = z
    data = ServiceClient(ctx.obj).call("POST", "/classify", json=body)
    _echo_warnings(data)
    for category in CATEGORIES:
        click.echo("%s %d" % (category, data["counts"].get(category, 0)))
    _write_exports(data, out_display, out_exact)


# ---------------------------------------------------------------------------
# sweep


@main.command()
@click.option("--session", "session_path", required=True, metavar="FILE|bundled")
@click.option("--fleet", "fleet_path", required=True,
              metavar="FILE|bundled-raw|bundled-performance")
@click.option("--lists", "lists_path", default=None, metavar="FILE|bundled")
@click.option("--lambdas", default=None, metavar="V1,V2,...",
              help="Cutoff values to sweep (default 35..45 by 1).")
@click.option("--zs", default=None, metavar="V1,V2,...",
              help="Weight ratios to sweep (default 3.25..5.25 by 0.5).")
@click.option("--baseline", "baseline_path", default=None, metavar="FILE|bundled",
              help="External category labels to diff against.")
@click.option("--lenient", is_flag=True, default=False)
@click.option("--out-display", default=None, type=click.Path(dir_okay=False))
@click.option("--out-exact", default=None, type=click.Path(dir_okay=False))
@click.pass_context
def sweep(ctx, session_path, fleet_path, lists_path, lambdas, zs, baseline_path,
          lenient, out_display, out_exact):
    """Reclassify the fleet over a grid of cutoffs and weight ratios."""
    body = {"session": _session_arg(session_path), "lenient": lenient}
    body.update(_fleet_args(fleet_path))
    lists = _lists_arg(lists_path)
    if lists is not None:
        body["lists"] = lists
    if lambdas is not None:
        body["lambda_values"] = [v.strip() for v in lambdas.split(",") if v.strip()]
    if zs is not None:
        body["z_values"] = [v.strip() for v in zs.split(",") if v.strip()]
    baseline = _baseline_arg(baseline_path)
    if baseline is not None:
        body["baseline"] = baseline
    data = ServiceClient(ctx.obj).call("POST", "/sweep", json=body)
    if out_display or out_exact:
        _write_exports(data, out_display, out_exact)
    else:
        click.echo(data["exports"]["display_csv"], nl=False)


# ---------------------------------------------------------------------------
# session inspection


@main.group()
def session():
    """Inspect or validate a session document."""


@session.command()
@click.argument("file", metavar="FILE|bundled")
@click.pass_context
def validate(ctx, file):
    """Check every stored judgment for consistency; exit 1 on violations."""
    data = ServiceClient(ctx.obj).call(
        "POST", "/inspect", json={"session": _session_arg(file)}
    )
    report = data["validation"]
    for cid, table in report["tables"].items():
        _echo_consistency(cid, table)
    if report["closeness"] is not None:
        _echo_consistency("closeness", report["closeness"])
    for problem in report["problems"]:
        click.echo("note: %s" % problem)
    click.echo("complete: %s" % ("yes" if report["complete"] else "no"))
    click.echo("ok" if report["ok"] else "INCONSISTENT")
    if not report["ok"]:
        ctx.exit(1)


def _echo_consistency(label: str, report: dict) -> None:
    if report["ok"]:
        click.echo("%s: ok" % label)
        return
    click.echo("%s: %d violation(s)" % (label, len(report["violations"])))
    for v in report["violations"]:
        click.echo(
            "  between %s and %s via %s: expected %d cards, stated %d"
            % (v["low"], v["high"], v["mid"], v["expected"], v["stated"])
        )


@session.command()
@click.argument("file", metavar="FILE|bundled")
@click.pass_context
def show(ctx, file):
    """Print the judgments and everything derived from them."""
    data = ServiceClient(ctx.obj).call(
        "POST", "/inspect", json={"session": _session_arg(file)}
    )
    document = data["document"]
    derived = data["derived"]
    click.echo("criteria:")
    for entry in document["framework"]["criteria"]:
        cid = entry["id"]
        line = "  %s %s (%s)" % (cid, entry["code"], entry["kind"])
        table = document["tables"].get(cid)
        if table is not None:
            line += "  cards %s" % table["adjacent_cards"]
        click.echo(line)
    if document.get("swing_ranking"):
        groups = [
            "{%s}" % ",".join(group) if len(group) > 1 else group[0]
            for group in document["swing_ranking"]
        ]
        click.echo("ranking (worst swing first): %s" % " < ".join(groups))
    closeness = document.get("closeness")
    if closeness:
        cards = closeness["cards_to_reference"]
        click.echo(
            "closeness to %s: %s"
            % (
                closeness["reference"],
                "  ".join("%s=%s" % (k, cards[k]) for k in cards),
            )
        )
    z_source = document.get("z_source")
    if z_source:
        if z_source["kind"] == "indifference":
            click.echo(
                "z from indifference: %s at %s"
                % (z_source.get("criterion") or "top swing", z_source["performance"])
            )
        else:
            click.echo("z stated directly: %s" % z_source["value"])
    policy = document["policy"]
    click.echo(
        "policy: lambda23 %s, lambda12 %s, g3-high override %s"
        % (policy["lambda_23"], policy["lambda_12"], policy["g3_high_override"])
    )
    if derived["weights"] is None:
        click.echo("weights: not derivable yet")
        for problem in derived["problems"]:
            click.echo("  %s" % problem)
    else:
        weights = derived["weights"]
        click.echo(
            "z = %s  alpha_w = %s"
            % (weights["z"]["display"], weights["alpha_w"]["exact"])
        )
        click.echo("weights (raw, normalized):")
        for cid, raw in weights["raw"].items():
            click.echo(
                "  %s  %-6s %s"
                % (cid, raw["exact"], weights["normalized"][cid]["display"])
            )


# ---------------------------------------------------------------------------
# reproduce-paper


@main.command("reproduce-paper")
@click.option("--session", "session_path", default="bundled", metavar="FILE|bundled",
              help="Recompute from this session instead of the bundled one.")
@click.option("--lambda23", default=None, metavar="VALUE",
              help="Check only the published sweep column at this cutoff.")
@click.option("--z", default=None, metavar="VALUE",
              help="Check only the published sweep row at this ratio.")
@click.pass_context
def reproduce_paper(ctx, session_path, lambda23, z):
    """Recompute the published study figures and diff table by table."""
    client = ServiceClient(ctx.obj)
    doc = _session_arg(session_path)
    if lambda23 is None and z is None:
        checks = _full_reproduction(client, doc)
    else:
        checks = [_sweep_slice_check(client, doc, lambda23, z)]
    failed = False
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        failed = failed or not ok
        click.echo("%-22s %s  %s" % (name, status, detail))
    click.echo("%-22s %s" % ("overall", "FAIL" if failed else "PASS"))
    if failed:
        ctx.exit(1)


def _full_reproduction(client: ServiceClient, doc) -> list:
    checks = []
    inspect = client.call("POST", "/inspect", json={"session": doc})
    checks.append(_check_value_functions(inspect["derived"]))
    checks.append(_check_weights(inspect["derived"]))
    classify = client.call(
        "POST",
        "/classify",
        json={"session": doc, "fleet_source": "bundled-raw", "lists": "bundled"},
    )
    checks.append(_check_mapping(classify))
    checks.append(_check_classification(classify))
    two_cutoff = client.call(
        "POST",
        "/classify",
        json={
            "session": doc,
            "fleet_source": "bundled-raw",
            "lists": "bundled",
            "lambda_12": expected.LAMBDA12,
        },
    )
    checks.append(_check_two_cutoff(two_cutoff))
    sweep_data = client.call(
        "POST",
        "/sweep",
        json={
            "session": doc,
            "fleet_source": "bundled-raw",
            "lists": "bundled",
            "baseline": "bundled",
        },
    )
    checks.append(_check_sweep_matrix(sweep_data))
    checks.append(_check_sweep_totals(sweep_data))
    checks.append(_check_srp_diff(sweep_data))
    return checks


def _check_value_functions(derived) -> tuple:
    name = "value functions"
    points = 0
    for cid, want_points in expected.VALUE_POINTS.items():
        got = derived["value_functions"].get(cid)
        if got is None:
            return name, False, "criterion %s has no value function" % cid
        if len(got["points"]) != len(want_points):
            return (
                name,
                False,
                "criterion %s: %d points, expected %d"
                % (cid, len(got["points"]), len(want_points)),
            )
        for point, (want_key, want_value) in zip(got["points"], want_points):
            points += 1
            if point["key"] != want_key or Fraction(
                point["value"]["exact"]
            ) != Fraction(want_value):
                return (
                    name,
                    False,
                    "first mismatch: criterion %s, level %s: got %s, expected %s"
                    % (cid, want_key, point["value"]["exact"], want_value),
                )
    return name, True, "(%d criteria, %d points)" % (len(expected.VALUE_POINTS), points)


def _check_weights(derived) -> tuple:
    name = "weights"
    weights = derived["weights"]
    if weights is None:
        return name, False, "weights not derivable: " + "; ".join(derived["problems"])
    if Fraction(weights["z"]["exact"]) != Fraction(expected.Z):
        return name, False, "z: got %s, expected %s" % (weights["z"]["exact"], expected.Z)
    if Fraction(weights["alpha_w"]["exact"]) != Fraction(expected.ALPHA_W):
        return (
            name,
            False,
            "alpha_w: got %s, expected %s"
            % (weights["alpha_w"]["exact"], expected.ALPHA_W),
        )
    for cid, want in expected.RAW_WEIGHTS.items():
        got = weights["raw"][cid]["exact"]
        if Fraction(got) != Fraction(want):
            return (
                name,
                False,
                "first mismatch: raw weight %s: got %s, expected %s" % (cid, got, want),
            )
    for cid, want in expected.NORMALIZED_WEIGHT_DISPLAYS.items():
        got = weights["normalized"][cid]["display"]
        if not _close(got, want):
            return (
                name,
                False,
                "first mismatch: normalized weight %s: got %s, expected %s"
                % (cid, got, want),
            )
    return name, True, "(z = %s, alpha_w = %s)" % (expected.Z, expected.ALPHA_W)


def _check_mapping(classify) -> tuple:
    name = "performance mapping"
    by_ship = {r["ship"]: r["performance"] for r in classify["results"]}
    cells = 0
    for ship, want_levels in expected.PERFORMANCES.items():
        got_levels = by_ship.get(ship)
        if got_levels is None:
            return name, False, "ship %s missing from the results" % ship
        for cid, want in want_levels.items():
            cells += 1
            if got_levels.get(cid) != want:
                return (
                    name,
                    False,
                    "first mismatch: ship %s, criterion %s: got %s, expected %s"
                    % (ship, cid, got_levels.get(cid), want),
                )
    return name, True, "(%d ships x %d criteria)" % (
        len(expected.PERFORMANCES),
        cells // max(len(expected.PERFORMANCES), 1),
    )


def _check_classification(classify) -> tuple:
    name = "classification"
    by_ship = {r["ship"]: r for r in classify["results"]}
    for ship, (want_category, want_cells, want_total) in expected.CLASSIFICATION.items():
        got = by_ship.get(ship)
        if got is None:
            return name, False, "ship %s missing from the results" % ship
        if got["category"] != want_category:
            return (
                name,
                False,
                "first mismatch: ship %s: got %s, expected %s"
                % (ship, got["category"], want_category),
            )
        for cid, want in want_cells.items():
            got_display = got["contributions"][cid]["display"]
            if not _close(got_display, want):
                return (
                    name,
                    False,
                    "first mismatch: ship %s, column %s: got %s, expected %s"
                    % (ship, cid, got_display, want),
                )
        if not _close(got["total"]["display"], want_total):
            return (
                name,
                False,
                "first mismatch: ship %s total: got %s, expected %s"
                % (ship, got["total"]["display"], want_total),
            )
    if classify["counts"] != expected.COUNTS:
        return (
            name,
            False,
            "counts: got %s, expected %s" % (classify["counts"], expected.COUNTS),
        )
    return name, True, "(%s; %d ship rows)" % (
        " ".join("%s %d" % (c, expected.COUNTS[c]) for c in CATEGORIES),
        len(expected.CLASSIFICATION),
    )


def _check_two_cutoff(classify) -> tuple:
    name = "two-cutoff variant"
    got_c1 = tuple(
        sorted(r["ship"] for r in classify["results"] if r["category"] == "C1")
    )
    want_c1 = tuple(sorted(expected.LAMBDA12_C1))
    if got_c1 != want_c1:
        return (
            name,
            False,
            "C1 ships at lambda12 %s: got %s, expected %s"
            % (expected.LAMBDA12, ", ".join(got_c1), ", ".join(want_c1)),
        )
    if classify["counts"] != expected.LAMBDA12_COUNTS:
        return (
            name,
            False,
            "counts: got %s, expected %s"
            % (classify["counts"], expected.LAMBDA12_COUNTS),
        )
    return name, True, "(lambda12 %s: %s)" % (
        expected.LAMBDA12,
        " ".join("%s %d" % (c, expected.LAMBDA12_COUNTS[c]) for c in CATEGORIES),
    )


def _cell_lookup(sweep_data) -> dict:
    return {
        (cell["z"], cell["lambda_23"]): cell for cell in sweep_data["cells"]
    }


def _check_sweep_matrix(sweep_data) -> tuple:
    name = "scenario sweep"
    ship = expected.SCENARIO_SHIP
    cells = _cell_lookup(sweep_data)
    for z_key, row in expected.SCENARIO_MATRIX.items():
        for lam_key, want in zip(expected.SCENARIO_LAMBDAS, row):
            cell = cells.get((z_key, lam_key))
            if cell is None:
                return name, False, "cell z=%s, lambda23=%s missing" % (z_key, lam_key)
            got = cell["categories"][ship]
            if got != want:
                return (
                    name,
                    False,
                    "first mismatch: cell z=%s, lambda23=%s: got %s, expected %s"
                    % (z_key, lam_key, got, want),
                )
    return name, True, "(%d cells for %s)" % (len(cells), ship)


def _check_sweep_totals(sweep_data) -> tuple:
    name = "scenario totals"
    ship = expected.SCENARIO_SHIP
    for z_key, want in expected.SCENARIO_TOTALS.items():
        got = sweep_data["totals"][z_key][ship]["display"]
        if not _close(got, want):
            return (
                name,
                False,
                "first mismatch: total at z=%s: got %s, expected %s"
                % (z_key, got, want),
            )
    return name, True, "(%d weight ratios)" % len(expected.SCENARIO_TOTALS)


def _check_srp_diff(sweep_data) -> tuple:
    name = "incumbent comparison"
    ship = expected.SCENARIO_SHIP
    srp = expected.SRP_BASELINE[ship]
    if sweep_data["diff"] is None:
        return name, False, "sweep response carries no baseline diff"
    flags = {
        (entry["z"], entry["lambda_23"]): entry["flags"][ship]
        for entry in sweep_data["diff"]
    }
    for z_key, row in expected.SCENARIO_MATRIX.items():
        for lam_key, category in zip(expected.SCENARIO_LAMBDAS, row):
            want_flag = category != srp
            if flags[(z_key, lam_key)] != want_flag:
                return (
                    name,
                    False,
                    "cell z=%s, lambda23=%s: flagged %s, expected %s"
                    % (z_key, lam_key, flags[(z_key, lam_key)], want_flag),
                )
    return name, True, "(%s labeled %s by the incumbent system)" % (ship, srp)


def _sweep_slice_check(client: ServiceClient, doc, lambda23, z) -> tuple:
    name = "scenario sweep"
    body = {
        "session": doc,
        "fleet_source": "bundled-raw",
        "lists": "bundled",
    }
    if lambda23 is not None:
        body["lambda_values"] = [lambda23]
    if z is not None:
        body["z_values"] = [z]
    sweep_data = client.call("POST", "/sweep", json=body)
    ship = expected.SCENARIO_SHIP
    shown = []
    for cell in sweep_data["cells"]:
        z_key, lam_key = cell["z"], cell["lambda_23"]
        if z_key not in expected.SCENARIO_MATRIX:
            return name, False, "no published figure for z = %s" % z_key
        if lam_key not in expected.SCENARIO_LAMBDAS:
            return name, False, "no published figure for lambda23 = %s" % lam_key
        want = expected.SCENARIO_MATRIX[z_key][
            expected.SCENARIO_LAMBDAS.index(lam_key)
        ]
        got = cell["categories"][ship]
        if got != want:
            return (
                name,
                False,
                "first mismatch: cell z=%s, lambda23=%s: got %s, expected %s"
                % (z_key, lam_key, got, want),
            )
        shown.append("lambda %s -> %s" % (lam_key, got))
    return name, True, "(%s at z=%s: %s)" % (
        ship,
        ", ".join(sorted({c["z"] for c in sweep_data["cells"]})),
        "; ".join(shown),
    )


# ---------------------------------------------------------------------------
# serve


@main.command()
@click.option("--config", "config_path", envvar="SHIPRISK_CONFIG", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="INI file with a [server] section: host, port, data_dir.")
@click.option("--host", default=None, metavar="ADDR")
@click.option("--port", default=None, type=int)
@click.option("--data-dir", "data_dir", default=None, metavar="DIR",
              help="Persist sessions here; restores them on startup.")
def serve(config_path, host, port, data_dir):
    """Run the HTTP service (flags > environment > config file)."""
    settings = {"host": "127.0.0.1", "port": 8000, "data_dir": None}
    if config_path:
        parser = configparser.ConfigParser()
        parser.read(config_path)
        if parser.has_section("server"):
            section = parser["server"]
            settings["host"] = section.get("host", settings["host"])
            settings["port"] = section.getint("port", fallback=settings["port"])
            settings["data_dir"] = section.get("data_dir", fallback=None) or None
    for key, env in (
        ("host", "SHIPRISK_HOST"),
        ("port", "SHIPRISK_PORT"),
        ("data_dir", "SHIPRISK_DATA_DIR"),
    ):
        if os.environ.get(env):
            settings[key] = os.environ[env]
    if host is not None:
        settings["host"] = host
    if port is not None:
        settings["port"] = port
    if data_dir is not None:
        settings["data_dir"] = data_dir

    import uvicorn

    from .service import create_app

    app = create_app(data_dir=settings["data_dir"])
    uvicorn.run(app, host=settings["host"], port=int(settings["port"]))


if __name__ == "__main__":
    main()
