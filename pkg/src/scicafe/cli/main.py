"""Administration and simulation CLI; a thin client over the HTTP API.

Exit codes: 0 success, 1 domain error (server said no), 2 usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from scicafe.cli.simulate import ScriptError, run_script
from scicafe.service.config import load_config

DEFAULT_URL = "http://127.0.0.1:8000"


def make_client(url: str, token: str) -> httpx.Client:
    """HTTP client factory; tests swap this for an in-process transport."""
    return httpx.Client(base_url=url, headers={"Authorization": f"Bearer {token}"}, timeout=30.0)


def _request(ctx: click.Context, method: str, path: str, **kwargs):
    client = make_client(ctx.obj["url"], ctx.obj["token"])
    try:
        response = client.request(method, path, **kwargs)
    except httpx.HTTPError as exc:
        raise click.ClickException(f"cannot reach server: {exc}") from exc
    finally:
        client.close()
    if response.status_code >= 400:
        try:
            body = response.json()
            message = f"{body.get('error', response.status_code)}: {body.get('message', '')}"
        except ValueError:
            message = f"HTTP {response.status_code}"
        raise click.ClickException(message)
    return response


def _emit(ctx: click.Context, data, text: str | None = None) -> None:
    if ctx.obj.get("json"):
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(text if text is not None else json.dumps(data, indent=2, sort_keys=True))


@click.group()
@click.option("--url", envvar="SCICAFE_URL", default=DEFAULT_URL, show_default=True,
              help="Server base URL.")
@click.option("--token", envvar="SCICAFE_TOKEN", default="cli", show_default=True,
              help="Auth token (dev mode: doubles as the user id).")
@click.option("--json", "json_out", is_flag=True, help="Machine-readable output.")
@click.pass_context
def cli(ctx, url, token, json_out):
    """scicafe: run and steer deliberation sessions."""
    ctx.obj = {"url": url, "token": token, "json": json_out}


# --- session ---


@cli.group()
def session():
    """Create and inspect sessions."""


@session.command("create")
@click.option("--title", required=True)
@click.option("--tables", type=int, required=True)
@click.option("--rotation-minutes", type=int, default=20, show_default=True)
@click.option("--area", "areas", multiple=True, help="Blackboard areas (first must be 'unsorted').")
@click.option("--restricted-to", "members", multiple=True,
              help="Restrict the audience to these user ids.")
@click.option("--session-id", default=None)
@click.pass_context
def session_create(ctx, title, tables, rotation_minutes, areas, members, session_id):
    body = {"title": title, "tables": tables, "rotation_minutes": rotation_minutes}
    if areas:
        body["areas"] = list(areas)
    if members:
        body["privacy"] = {"kind": "restricted", "group": list(members)}
    if session_id:
        body["session_id"] = session_id
    data = _request(ctx, "POST", "/sessions", json=body).json()
    _emit(ctx, data, data["session_id"])


@session.command("list")
@click.pass_context
def session_list(ctx):
    data = _request(ctx, "GET", "/sessions").json()
    lines = [
        f"{s['session_id']}  {s['title']!r}  tables={s['tables']} "
        f"open={s['open_tables']} archived={s['archived']} seq={s['last_seq']}"
        for s in data["sessions"]
    ]
    _emit(ctx, data, "\n".join(lines) if lines else "no sessions")


@session.command("archive")
@click.argument("session_id")
@click.option("--show", is_flag=True, help="Fetch an existing archive instead of archiving.")
@click.pass_context
def session_archive(ctx, session_id, show):
    if show:
        data = _request(ctx, "GET", f"/sessions/{session_id}/archive").json()
        _emit(ctx, data)
        return
    data = _request(
        ctx,
        "POST",
        f"/sessions/{session_id}/commands",
        json={"type": "archive_session", "payload": {}},
    ).json()
    _emit(ctx, data, f"archived at seq {data['seq']}")


@session.command("metrics")
@click.argument("session_id")
@click.pass_context
def session_metrics_cmd(ctx, session_id):
    data = _request(ctx, "GET", f"/sessions/{session_id}/metrics").json()
    text = (
        f"notes={data['total_notes']} contributors={data['distinct_contributors']} "
        f"entropy={data['entropy_nats']:.4f} rotations={data['rotation_rounds']}"
    )
    _emit(ctx, data, text)


# --- delphi ---


def _parse_panel(panelists):
    panel = []
    for raw in panelists:
        panelist_id, _, category = raw.partition(":")
        panel.append({"id": panelist_id, "category": category or "citizen"})
    return panel


def _parse_statements(statements):
    parsed = []
    for raw in statements:
        statement_id, _, text = raw.partition("=")
        parsed.append({"id": statement_id, "text": text or statement_id})
    return parsed


@cli.group()
def delphi():
    """Run Delphi consensus rounds."""


@delphi.command("open")
@click.option("--process", "process_id", default=None,
              help="Open the next round of an existing process.")
@click.option("--title", default=None, help="Title when starting a new process.")
@click.option("--panelist", "panelists", multiple=True, metavar="ID[:CATEGORY]")
@click.option("--statement", "statements", multiple=True, metavar="ID[=TEXT]", required=True)
@click.option("--scale-max", type=int, default=9, show_default=True)
@click.pass_context
def delphi_open(ctx, process_id, title, panelists, statements, scale_max):
    if process_id:
        data = _request(
            ctx,
            "POST",
            f"/delphi/{process_id}/rounds",
            json={
                "statements": _parse_statements(statements),
                "panel": _parse_panel(panelists) if panelists else None,
                "scale_max": scale_max,
            },
        ).json()
        _emit(ctx, data, f"{process_id} round {data['round_id']} open")
        return
    if not title or not panelists:
        raise click.UsageError("--title and --panelist are required for a new process")
    data = _request(
        ctx,
        "POST",
        "/delphi",
        json={
            "title": title,
            "panel": _parse_panel(panelists),
            "statements": _parse_statements(statements),
            "scale_max": scale_max,
        },
    ).json()
    _emit(ctx, data, f"{data['id']} round r1 open")


@delphi.command("respond")
@click.option("--process", "process_id", required=True)
@click.option("--panelist", required=True)
@click.option("--statement", required=True)
@click.option("--rating", type=int, required=True)
@click.option("--comment", default=None)
@click.pass_context
def delphi_respond(ctx, process_id, panelist, statement, rating, comment):
    data = _request(
        ctx,
        "POST",
        f"/delphi/{process_id}/responses",
        json={"panelist": panelist, "statement": statement, "rating": rating, "comment": comment},
    ).json()
    _emit(ctx, data, f"recorded rating {data['rating']} (revision {data['revision']})")


@delphi.command("aggregate")
@click.option("--process", "process_id", required=True)
@click.option("--close", "close_first", is_flag=True, help="Close the round first.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.pass_context
def delphi_aggregate(ctx, process_id, close_first, fmt):
    response = _request(
        ctx,
        "POST",
        f"/delphi/{process_id}/aggregate",
        params={"close_first": close_first, "format": fmt},
    )
    if fmt == "csv":
        click.echo(response.text, nl=False)
        return
    _emit(ctx, response.json())


@delphi.command("carry")
@click.option("--process", "process_id", required=True)
@click.pass_context
def delphi_carry(ctx, process_id):
    data = _request(ctx, "POST", f"/delphi/{process_id}/carry-forward").json()
    _emit(ctx, data, f"round {data['round_id']}: carried {len(data['statements'])} statements")


@delphi.command("finish")
@click.option("--process", "process_id", required=True)
@click.pass_context
def delphi_finish(ctx, process_id):
    data = _request(ctx, "POST", f"/delphi/{process_id}/finish").json()
    _emit(ctx, data, f"{data['id']} {data['status']}")


@delphi.command("export")
@click.option("--process", "process_id", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.pass_context
def delphi_export(ctx, process_id, fmt):
    if fmt == "csv":
        response = _request(ctx, "GET", f"/delphi/{process_id}/export.csv")
        click.echo(response.text, nl=False)
        return
    data = _request(ctx, "GET", f"/delphi/{process_id}/recommendations").json()
    lines = [
        f"{r['statement']}  agreement={r['agreement_value']:.3f} median={r['median_value']}"
        for r in data["recommendations"]
    ]
    _emit(ctx, data, "\n".join(lines) if lines else "no consensus recommendations")


# --- catalog ---


@cli.group()
def catalog():
    """Classify platforms against the participation paradigms."""


@catalog.command("classify")
@click.option("--feature", "features", multiple=True, required=True,
              help="Subfunction, e.g. discuss, vote, share_goods.")
@click.pass_context
def catalog_classify(ctx, features):
    data = _request(ctx, "POST", "/catalog/classify", json={"features": list(features)}).json()
    dominant = ", ".join(data["dominant"])
    _emit(ctx, data, f"dominant: {dominant}")


@catalog.command("validate")
@click.argument("entries_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def catalog_validate(ctx, entries_file):
    entries = json.loads(Path(entries_file).read_text("utf-8"))
    data = _request(ctx, "POST", "/catalog/validate", json={"entries": entries}).json()
    if data["ok"]:
        _emit(ctx, data, "ok")
        return
    lines = [
        f"{entry_id}: {violation}"
        for entry_id, violations in sorted(data["violations"].items())
        for violation in violations
    ]
    _emit(ctx, data, "\n".join(lines))
    sys.exit(1)


# --- simulate / serve ---


@cli.command("simulate")
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def simulate_cmd(ctx, script):
    """Replay a scripted session on a virtual clock and check assertions."""
    text = Path(script).read_text("utf-8")
    try:
        transcript = run_script(text)
    except ScriptError as exc:
        click.echo(f"{script}:{exc}", err=True)
        sys.exit(2)
    payload = {
        "assertions": [
            {"line": a.lineno, "assertion": a.text, "passed": a.passed, "detail": a.detail}
            for a in transcript.assertions
        ],
        "commands": [
            {"line": e.lineno, "at": e.at, "actor": e.actor, "command": e.command, "outcome": out}
            for e, out in transcript.command_log
        ],
        "passed": transcript.passed,
    }
    if ctx.obj.get("json"):
        click.echo(json.dumps(payload, indent=2))
    else:
        for a in transcript.assertions:
            status = "PASS" if a.passed else "FAIL"
            suffix = "" if a.passed else f"  ({a.detail})"
            click.echo(f"{status}  {a.text}{suffix}")
        total = len(transcript.assertions)
        good = sum(1 for a in transcript.assertions if a.passed)
        click.echo(f"{good}/{total} assertions passed")
    if not transcript.passed:
        sys.exit(1)


@cli.command("serve")
@click.option("--config", "config_path", envvar="SCICAFE_CONFIG", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def serve_cmd(ctx, config_path):
    """Run the HTTP/WebSocket server."""
    import uvicorn

    from scicafe.service.app import create_app

    config = load_config(config_path)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


if __name__ == "__main__":
    cli()
