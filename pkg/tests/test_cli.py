"""Command-line driver: subcommands, exit codes, output modes."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from helpers import GHZ_QASM, MAXCUT_TERMS, QAOA_EXPECTED_F64, QAOA_QASM
from qex.cli import main


@pytest.fixture
def ghz_file(tmp_path):
    path = tmp_path / "ghz.qasm"
    path.write_text(GHZ_QASM, encoding="utf-8")
    return str(path)


@pytest.fixture
def qaoa_file(tmp_path):
    path = tmp_path / "qaoa.qasm"
    path.write_text(QAOA_QASM, encoding="utf-8")
    return str(path)


@pytest.fixture
def observable_file(tmp_path):
    path = tmp_path / "maxcut.json"
    path.write_text(json.dumps(MAXCUT_TERMS), encoding="utf-8")
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_sample_emits_single_json_document(capsys, tmp_path, ghz_file):
    code, out, _ = run_cli(capsys, "sample", "--qasm", ghz_file, "--shots", "2000",
                           "--seed", "7", "--state-dir", str(tmp_path / "state"))
    assert code == 0
    document = json.loads(out)
    assert out.count("\n") == 1  # exactly one line on stdout
    assert document["shots"] == 2000
    assert set(document["counts"]) <= {"000", "111"}
    assert document["seed"] == 7


def test_sample_pretty_output(capsys, tmp_path, ghz_file):
    code, out, _ = run_cli(capsys, "sample", "--qasm", ghz_file, "--shots", "10",
                           "--seed", "1", "--output", "pretty",
                           "--state-dir", str(tmp_path / "state"))
    assert code == 0
    assert json.loads(out)["shots"] == 10
    assert "\n  " in out  # indented


def test_sample_domain_error_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.qasm"
    bad.write_text("qreg q[1];\nh q[0];", encoding="utf-8")
    code, out, _ = run_cli(capsys, "sample", "--qasm", str(bad), "--shots", "5",
                           "--state-dir", str(tmp_path / "state"))
    assert code == 1
    assert json.loads(out)["error"]["type"] == "NoMeasurementError"


def test_sample_queued_local_backend(capsys, tmp_path, ghz_file):
    code, out, _ = run_cli(capsys, "sample", "--qasm", ghz_file, "--shots", "50",
                           "--seed", "2", "--backend", "queued-local",
                           "--state-dir", str(tmp_path / "state"))
    assert code == 0
    assert sum(json.loads(out)["counts"].values()) == 50


def test_usage_error_exit_2(capsys, tmp_path, ghz_file):
    with pytest.raises(SystemExit) as excinfo:
        main(["sample", "--qasm", ghz_file, "--shots", "10", "--bogus-flag"])
    assert excinfo.value.code == 2


def test_missing_subcommand_exit_2(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


def test_estimate_analytic(capsys, tmp_path, qaoa_file, observable_file):
    code, out, _ = run_cli(capsys, "estimate", "--qasm", qaoa_file,
                           "--observable", observable_file,
                           "--state-dir", str(tmp_path / "state"))
    assert code == 0
    document = json.loads(out)
    assert document["expectation"] == pytest.approx(QAOA_EXPECTED_F64, abs=1e-12)
    assert list(document) == ["expectation"]


def test_estimate_inline_json_and_shots(capsys, tmp_path, qaoa_file):
    code, out, _ = run_cli(capsys, "estimate", "--qasm", qaoa_file,
                           "--observable-json", json.dumps(MAXCUT_TERMS),
                           "--shots", "1000", "--seed", "3",
                           "--state-dir", str(tmp_path / "state"))
    assert code == 0
    document = json.loads(out)
    assert set(document) == {"expectation", "shots", "std_error", "seed"}


def test_estimate_bad_observable_exit_1(capsys, tmp_path, qaoa_file):
    code, out, _ = run_cli(capsys, "estimate", "--qasm", qaoa_file,
                           "--observable-json", '[{"coeff": 1.0, "pauli": "Q0"}]',
                           "--state-dir", str(tmp_path / "state"))
    assert code == 1
    assert json.loads(out)["error"]["type"] == "ObservableParseError"


def test_remote_submit_result_and_jobs(capsys, tmp_path, ghz_file, emulator):
    state_dir = str(tmp_path / "state")
    code, out, _ = run_cli(capsys, "remote-submit", "--qasm", ghz_file, "--shots", "100",
                           "--seed", "5", "--machine", "H2-1E",
                           "--remote-url", emulator.url, "--state-dir", state_dir)
    assert code == 0
    submission = json.loads(out)
    assert submission["status"] == "queued"
    assert submission["machine"] == "H2-1E"
    job_id = submission["job_id"]

    # separate invocation reloads the persisted store
    code, out, _ = run_cli(capsys, "remote-result", "--job-id", job_id, "--wait",
                           "--timeout", "10", "--poll-interval", "0.05",
                           "--remote-url", emulator.url, "--state-dir", state_dir)
    assert code == 0
    result = json.loads(out)
    assert result["status"] == "completed"
    assert sum(result["counts"].values()) == 100

    code, out, _ = run_cli(capsys, "jobs", "--state-dir", state_dir)
    assert code == 0
    jobs = json.loads(out)["jobs"]
    assert [j["id"] for j in jobs] == [job_id]
    assert jobs[0]["status"] == "completed"


def test_remote_result_pending_without_wait(capsys, tmp_path, ghz_file, emulator_factory):
    from qex.remote.service import EmulatorConfig

    slow = emulator_factory(EmulatorConfig(delay=30.0, jitter=0.0))
    state_dir = str(tmp_path / "state")
    code, out, _ = run_cli(capsys, "remote-submit", "--qasm", ghz_file, "--shots", "10",
                           "--remote-url", slow.url, "--state-dir", state_dir)
    assert code == 0
    job_id = json.loads(out)["job_id"]
    # polling a pending job succeeds and reports its status
    code, out, _ = run_cli(capsys, "remote-result", "--job-id", job_id,
                           "--remote-url", slow.url, "--state-dir", state_dir)
    assert code == 0
    assert json.loads(out) == {"job_id": job_id, "status": "queued"}
    # with --wait, an expired timeout is a nonzero exit
    code, out, _ = run_cli(capsys, "remote-result", "--job-id", job_id, "--wait",
                           "--timeout", "0.3", "--poll-interval", "0.05",
                           "--remote-url", slow.url, "--state-dir", state_dir)
    assert code == 1
    assert json.loads(out)["status"] in ("queued", "running")


def test_remote_result_unknown_job(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "remote-result", "--job-id", "nope",
                           "--state-dir", str(tmp_path / "state"))
    assert code == 1
    assert json.loads(out)["error"]["type"] == "UnknownJobError"


def test_remote_submit_service_down(capsys, tmp_path, ghz_file):
    code, out, _ = run_cli(capsys, "remote-submit", "--qasm", ghz_file, "--shots", "10",
                           "--remote-url", "http://127.0.0.1:1",
                           "--state-dir", str(tmp_path / "state"))
    assert code == 1
    assert json.loads(out)["error"]["type"] == "BackendUnavailableError"


def test_missing_qasm_file_exit_2(capsys, tmp_path):
    code, _, err = run_cli(capsys, "sample", "--qasm", str(tmp_path / "absent.qasm"),
                           "--shots", "5", "--state-dir", str(tmp_path / "state"))
    assert code == 2
    assert "error" in err


def test_env_overrides(capsys, tmp_path, ghz_file, monkeypatch, emulator):
    monkeypatch.setenv("QEX_STATE_DIR", str(tmp_path / "env_state"))
    monkeypatch.setenv("QEX_REMOTE_URL", emulator.url)
    code, out, _ = run_cli(capsys, "remote-submit", "--qasm", ghz_file, "--shots", "20")
    assert code == 0
    assert (tmp_path / "env_state" / "jobs").exists()


def test_sample_plot_writes_figure(capsys, tmp_path, ghz_file):
    figure = tmp_path / "hist.png"
    code, out, err = run_cli(capsys, "sample", "--qasm", ghz_file, "--shots", "100",
                             "--seed", "4", "--plot", str(figure),
                             "--state-dir", str(tmp_path / "state"))
    assert code == 0
    json.loads(out)  # stdout still a single JSON document
    assert figure.exists() and figure.stat().st_size > 0
    assert str(figure) in err


def test_identical_counts_cli_vs_mcp_vs_remote(capsys, tmp_path, ghz_file, emulator):
    """One payload, three surfaces, identical counts (noise off, shared seed)."""
    state_dir = str(tmp_path / "state")
    code, out, _ = run_cli(capsys, "sample", "--qasm", ghz_file, "--shots", "300",
                           "--seed", "123", "--state-dir", state_dir)
    assert code == 0
    cli_counts = json.loads(out)["counts"]

    import json as json_mod

    from qex.jobs import Orchestrator
    from qex.mcp.server import McpServer
    from qex.remote.client import RemoteClient

    server = McpServer(Orchestrator(remote=RemoteClient(emulator.url), poll_interval=0.01))
    server.handle_line(json_mod.dumps(
        {"jsonrpc": "2.0", "id": 1, "method": "initialize", "params": {}}))
    response = json_mod.loads(server.handle_line(json_mod.dumps({
        "jsonrpc": "2.0", "id": 2, "method": "tools/call",
        "params": {"name": "sampler_qasm_sim",
                   "arguments": {"openqasm_code": GHZ_QASM, "shots": 300, "seed": 123}},
    })))
    mcp_counts = json_mod.loads(
        response["result"]["content"][0]["text"])["counts"]

    orchestrator = Orchestrator(remote=RemoteClient(emulator.url), poll_interval=0.01)
    job_id = orchestrator.submit(
        "sampler", {"openqasm_code": GHZ_QASM, "shots": 300, "seed": 123}, "remote")
    orchestrator.wait(job_id, timeout=10.0)
    remote_counts = orchestrator.fetch_result(job_id)["counts"]

    assert cli_counts == mcp_counts == remote_counts


def test_serve_subprocess_stdio_round_trip(tmp_path):
    """`qex serve` speaks newline-delimited JSON-RPC over real pipes."""
    requests_lines = [
        json.dumps({"jsonrpc": "2.0", "id": 1, "method": "initialize",
                    "params": {"protocolVersion": "2024-11-05"}}),
        json.dumps({"jsonrpc": "2.0", "method": "notifications/initialized"}),
        json.dumps({"jsonrpc": "2.0", "id": 2, "method": "tools/list"}),
    ]
    completed = subprocess.run(
        [sys.executable, "-m", "qex", "serve", "--state-dir", str(tmp_path / "state")],
        input="\n".join(requests_lines) + "\n",
        capture_output=True, text=True, timeout=60,
    )
    assert completed.returncode == 0
    lines = completed.stdout.splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["result"]["serverInfo"]["name"] == "qex"
    tools = json.loads(lines[1])["result"]["tools"]
    assert len(tools) == 4
