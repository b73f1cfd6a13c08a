import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

import scicafe.cli.main as cli_main
from scicafe.cli.main import cli
from scicafe.service import ServiceConfig, VirtualClock, create_app


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def server(tmp_path, monkeypatch):
    """Route CLI HTTP calls into an in-process app; counts requests."""
    config = ServiceConfig(storage_dir=str(tmp_path / "data"), rotation_tick_seconds=0)
    app = create_app(config, clock=VirtualClock(0))
    counter = {"requests": 0}

    def patched_make_client(url, token):
        client = TestClient(app)
        client.headers.update({"Authorization": f"Bearer {token}"})
        original = client.request

        def counting_request(method, path, **kwargs):
            counter["requests"] += 1
            return original(method, path, **kwargs)

        client.request = counting_request
        return client

    monkeypatch.setattr(cli_main, "make_client", patched_make_client)
    return counter


def test_session_create_prints_id(runner, server):
    result = runner.invoke(
        cli, ["session", "create", "--title", "Energy Futures", "--tables", "3"]
    )
    assert result.exit_code == 0, result.output
    assert result.output.strip()


def test_session_create_invalid_config_exits_1(runner, server):
    result = runner.invoke(cli, ["session", "create", "--title", "X", "--tables", "0"])
    assert result.exit_code == 1
    assert "INVALID_CONFIG" in result.output


def test_usage_error_exits_2(runner, server):
    result = runner.invoke(cli, ["session", "create", "--tables", "3"])
    assert result.exit_code == 2


def test_session_list_json_round_trip(runner, server):
    created = runner.invoke(
        cli,
        ["--json", "session", "create", "--title", "T", "--tables", "1",
         "--session-id", "fixed1"],
    )
    assert created.exit_code == 0
    body = json.loads(created.output)
    assert body["session_id"] == "fixed1"
    listed = runner.invoke(cli, ["--json", "session", "list"])
    data = json.loads(listed.output)
    assert [s["session_id"] for s in data["sessions"]] == ["fixed1"]


def test_session_metrics_and_archive(runner, server):
    assert runner.invoke(
        cli, ["--token", "org", "session", "create", "--title", "T", "--tables", "1",
              "--session-id", "m1"]
    ).exit_code == 0
    metrics = runner.invoke(cli, ["session", "metrics", "m1"])
    assert metrics.exit_code == 0
    assert "notes=0" in metrics.output
    archived = runner.invoke(cli, ["--token", "org", "session", "archive", "m1"])
    assert archived.exit_code == 0
    shown = runner.invoke(cli, ["--json", "session", "archive", "m1", "--show"])
    assert json.loads(shown.output)["task_title"] == "T"


def test_one_request_per_subcommand(runner, server):
    runner.invoke(cli, ["session", "create", "--title", "T", "--tables", "1"])
    assert server["requests"] == 1
    runner.invoke(cli, ["session", "list"])
    assert server["requests"] == 2
    runner.invoke(cli, ["catalog", "classify", "--feature", "discuss"])
    assert server["requests"] == 3


class TestDelphiCli:
    def _open(self, runner):
        panel = [f"--panelist=p{i}:citizen" for i in range(10)]
        statements = [f"--statement=s{i}=rec {i}" for i in range(1, 4)]
        result = runner.invoke(
            cli,
            ["--json", "delphi", "open", "--title", "Validation", *panel, *statements],
        )
        assert result.exit_code == 0, result.output
        return json.loads(result.output)["id"]

    def test_open_respond_aggregate_export(self, runner, server):
        process_id = self._open(runner)
        for statement in ("s1", "s2", "s3"):
            for i in range(10):
                result = runner.invoke(
                    cli,
                    ["delphi", "respond", "--process", process_id, "--panelist", f"p{i}",
                     "--statement", statement, "--rating", "7"],
                )
                assert result.exit_code == 0, result.output
        aggregated = runner.invoke(
            cli,
            ["delphi", "aggregate", "--process", process_id, "--close", "--format", "csv"],
        )
        assert aggregated.exit_code == 0, aggregated.output
        lines = aggregated.output.strip().splitlines()
        assert lines[0] == "statement,n,median,iqr,agreement,verdict"
        assert lines[1] == "s1,10,7,0,1,consensus"
        finished = runner.invoke(cli, ["delphi", "finish", "--process", process_id])
        assert finished.exit_code == 0
        exported = runner.invoke(
            cli, ["delphi", "export", "--process", process_id, "--format", "csv"]
        )
        assert exported.output.splitlines()[0] == "statement,n,median,iqr,agreement,verdict"
        assert len(exported.output.strip().splitlines()) == 4

    def test_rating_out_of_range_is_domain_error(self, runner, server):
        process_id = self._open(runner)
        result = runner.invoke(
            cli,
            ["delphi", "respond", "--process", process_id, "--panelist", "p0",
             "--statement", "s1", "--rating", "10"],
        )
        assert result.exit_code == 1
        assert "RATING_OUT_OF_RANGE" in result.output


class TestCatalogCli:
    def test_classify_discuss(self, runner, server):
        result = runner.invoke(cli, ["catalog", "classify", "--feature", "discuss"])
        assert result.exit_code == 0
        assert "CODI" in result.output

    def test_validate_reports_violations(self, runner, server, tmp_path):
        entries = [
            {"id": "m", "kind": "method", "functions": [], "references": []},
            {"id": "t", "kind": "tool", "functions": ["discuss"], "references": []},
        ]
        path = tmp_path / "entries.json"
        path.write_text(json.dumps(entries))
        result = runner.invoke(cli, ["catalog", "validate", str(path)])
        assert result.exit_code == 1
        assert "combine" in result.output
        ok_entries = [{"id": "t", "kind": "tool", "functions": ["discuss"], "references": []}]
        path.write_text(json.dumps(ok_entries))
        result = runner.invoke(cli, ["catalog", "validate", str(path)])
        assert result.exit_code == 0


ROTATION_SCRIPT = """
# 3 tables x 6 participants, three 20-minute rotations
at 0s org create_session {"title":"Energy Futures","tables":3,"rotation_minutes":20}
at 0s org assign_chair {"table":0,"user":"cA"}
at 0s org assign_chair {"table":1,"user":"cB"}
at 0s org assign_chair {"table":2,"user":"cC"}
at 0s cA open_table {"table":0,"external_url":"https://conf/0"}
at 0s cB open_table {"table":1,"external_url":"https://conf/1"}
at 0s cC open_table {"table":2,"external_url":"https://conf/2"}
at 1s u0 join_table {"table":0}
at 1s u1 join_table {"table":0}
at 1s u2 join_table {"table":1}
at 1s u3 join_table {"table":1}
at 1s u4 join_table {"table":2}
at 1s u5 join_table {"table":2}
at 61m org wait {}
expect event Rotated {"moves":[[0,1],[1,2],[2,0]]} at 20m
expect event Rotated {"moves":[[0,1],[1,2],[2,0]]} at 40m
expect event Rotated {"moves":[[0,1],[1,2],[2,0]]} at 60m
expect count Rotated 3
expect count ChairAssigned 3
"""

UNAUTHORIZED_SCRIPT = """
at 0s org create_session {"title":"T","tables":1}
at 0s org assign_chair {"table":0,"user":"cA"}
at 1s cA open_table {"table":0,"external_url":"u"}
at 2s lurker post_note {"table":0,"text":"hi"}
expect error UNAUTHORIZED
expect count NotePosted 0
"""

RESEND_SCRIPT = """
at 0s org create_session {"title":"T","tables":1}
at 0s org assign_chair {"table":0,"user":"cA"}
at 1s cA open_table {"table":0,"external_url":"u"}
at 2s cA post_note {"table":0,"text":"once","client_seq":5}
at 3s cA post_note {"table":0,"text":"once","client_seq":5}
at 4s cA post_note {"table":0,"text":"once","client_seq":5}
expect count NotePosted 1
"""


class TestSimulate:
    def _run(self, runner, tmp_path, script, args=()):
        path = tmp_path / "script.txt"
        path.write_text(script)
        return runner.invoke(cli, ["simulate", str(path), *args])

    def test_rotation_script_passes(self, runner, tmp_path):
        result = self._run(runner, tmp_path, ROTATION_SCRIPT)
        assert result.exit_code == 0, result.output
        assert "FAIL" not in result.output
        assert "6/6 assertions passed" in result.output

    def test_unauthorized_script_passes(self, runner, tmp_path):
        result = self._run(runner, tmp_path, UNAUTHORIZED_SCRIPT)
        assert result.exit_code == 0, result.output

    def test_resend_idempotence_script(self, runner, tmp_path):
        result = self._run(runner, tmp_path, RESEND_SCRIPT)
        assert result.exit_code == 0, result.output

    def test_failing_assertion_exits_1(self, runner, tmp_path):
        script = UNAUTHORIZED_SCRIPT.replace("expect count NotePosted 0",
                                             "expect count NotePosted 7")
        result = self._run(runner, tmp_path, script)
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_parse_error_exits_2_with_line(self, runner, tmp_path):
        bad = "at 0s org create_session {\"title\":\"T\",\"tables\":1}\nat zzz org wait {}\n"
        result = self._run(runner, tmp_path, bad)
        assert result.exit_code == 2
        assert "line 2" in result.output

    def test_json_output(self, runner, tmp_path):
        path = tmp_path / "script.txt"
        path.write_text(RESEND_SCRIPT)
        result = runner.invoke(cli, ["--json", "simulate", str(path)])
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["passed"] is True
        assert any(c["outcome"].startswith("ok") for c in data["commands"])
