"""Command-line driver for every capability.

stdout carries data (one JSON document in ``--output json`` mode), stderr
carries diagnostics. Exit codes: 0 success, 1 domain error (the structured
error JSON is printed on stdout), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any

from .errors import QexError
from .jobs import JobStore, Orchestrator
from .remote.client import RemoteClient
from .remote.service import EmulatorConfig, make_server

DEFAULT_STATE_DIR = ".qex"
DEFAULT_REMOTE_URL = "http://127.0.0.1:8079"


def _default_state_dir() -> str:
    return os.environ.get("QEX_STATE_DIR", DEFAULT_STATE_DIR)


def _default_remote_url() -> str:
    return os.environ.get("QEX_REMOTE_URL", DEFAULT_REMOTE_URL)


def _print_doc(document: Any, mode: str) -> None:
    if mode == "pretty":
        print(json.dumps(document, indent=2))
    else:
        print(json.dumps(document))


def _read_qasm(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _add_common(parser: argparse.ArgumentParser, *, remote: bool = False) -> None:
    parser.add_argument("--state-dir", default=_default_state_dir(),
                        help="job store directory (env QEX_STATE_DIR)")
    parser.add_argument("--output", choices=["json", "pretty"], default="json",
                        help="stdout format")
    if remote:
        parser.add_argument("--remote-url", default=_default_remote_url(),
                            help="remote service base URL (env QEX_REMOTE_URL)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qex", description=__doc__)
    parser.add_argument("--log-level", default="WARNING",
                        help="logging level for stderr diagnostics")
    commands = parser.add_subparsers(dest="command", required=True)

    serve = commands.add_parser("serve", help="run the MCP tool server on stdio")
    serve.add_argument("--state-dir", default=_default_state_dir())
    serve.add_argument("--remote-url", default=_default_remote_url())
    serve.add_argument("--scheduler-delay", type=float, default=0.0,
                       help="simulated batch-scheduler delay for queued-local jobs (s)")
    serve.add_argument("--scheduler-jitter", type=float, default=0.0,
                       help="uniform jitter added to the scheduler delay (s)")

    remote_serve = commands.add_parser("remote-serve", help="run the cloud-queue emulator")
    remote_serve.add_argument("--bind", default="127.0.0.1:8079", help="host:port to listen on")
    remote_serve.add_argument("--flip-prob", type=float, default=0.0,
                              help="per-bit readout flip probability")
    remote_serve.add_argument("--delay", type=float, default=2.0,
                              help="simulated queue latency (s)")
    remote_serve.add_argument("--jitter", type=float, default=1.0,
                              help="uniform latency jitter (s)")
    remote_serve.add_argument("--queue-cap", type=int, default=1024)
    remote_serve.add_argument("--sampler-seed", type=int, default=None)
    remote_serve.add_argument("--noise-seed", type=int, default=None)
    remote_serve.add_argument("--latency-seed", type=int, default=None)

    sample = commands.add_parser("sample", help="run the sampler on a QASM file")
    sample.add_argument("--qasm", required=True, help="OpenQASM 2.0 file")
    sample.add_argument("--shots", type=int, required=True)
    sample.add_argument("--seed", type=int, default=None)
    sample.add_argument("--backend", choices=["inline", "queued-local"], default="inline")
    sample.add_argument("--scheduler-delay", type=float, default=0.0)
    sample.add_argument("--plot", default=None, metavar="FILE",
                        help="also render a counts histogram to FILE")
    _add_common(sample)

    estimate = commands.add_parser("estimate", help="expectation value of an observable")
    estimate.add_argument("--qasm", required=True, help="OpenQASM 2.0 file")
    group = estimate.add_mutually_exclusive_group(required=True)
    group.add_argument("--observable", help="JSON file with the observable term array")
    group.add_argument("--observable-json", help="observable term array as inline JSON")
    estimate.add_argument("--shots", type=int, default=None,
                          help="shot count for sampled estimation (analytic if omitted)")
    estimate.add_argument("--seed", type=int, default=None)
    _add_common(estimate)

    remote_submit = commands.add_parser("remote-submit",
                                        help="submit a circuit to the remote service")
    remote_submit.add_argument("--qasm", required=True)
    remote_submit.add_argument("--shots", type=int, required=True)
    remote_submit.add_argument("--machine", default="H2-1E")
    remote_submit.add_argument("--seed", type=int, default=None)
    _add_common(remote_submit, remote=True)

    remote_result = commands.add_parser("remote-result", help="fetch a submitted job's result")
    remote_result.add_argument("--job-id", required=True)
    remote_result.add_argument("--wait", action="store_true",
                               help="poll until the job is terminal")
    remote_result.add_argument("--timeout", type=float, default=60.0)
    remote_result.add_argument("--poll-interval", type=float, default=0.5)
    remote_result.add_argument("--plot", default=None, metavar="FILE")
    _add_common(remote_result, remote=True)

    jobs = commands.add_parser("jobs", help="list job summaries")
    _add_common(jobs)

    return parser


def _orchestrator(args: argparse.Namespace, *, remote: bool = False,
                  scheduler_delay: float = 0.0, scheduler_jitter: float = 0.0) -> Orchestrator:
    client = RemoteClient(args.remote_url) if remote else None
    poll = getattr(args, "poll_interval", 0.5)
    return Orchestrator(
        JobStore(args.state_dir),
        remote=client,
        scheduler_delay=scheduler_delay,
        scheduler_jitter=scheduler_jitter,
        poll_interval=poll,
    )


def _finish(body: dict[str, Any], failed: bool, args: argparse.Namespace) -> int:
    _print_doc(body, args.output)
    return 1 if failed else 0


def _maybe_plot(body: dict[str, Any], plot: str | None) -> None:
    if plot and "counts" in body:
        from .plotting import plot_counts

        shots = body.get("shots")
        plot_counts(body["counts"], plot, title=f"{shots} shots" if shots else None)
        print(f"wrote {plot}", file=sys.stderr)


# --- subcommand implementations ---------------------------------------------------


def _cmd_serve(args: argparse.Namespace) -> int:
    from .mcp.server import McpServer

    orchestrator = _orchestrator(args, remote=True,
                                 scheduler_delay=args.scheduler_delay,
                                 scheduler_jitter=args.scheduler_jitter)
    McpServer(orchestrator).serve(sys.stdin, sys.stdout)
    return 0


def _cmd_remote_serve(args: argparse.Namespace) -> int:
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --bind must be host:port, got {args.bind!r}", file=sys.stderr)
        return 2
    config = EmulatorConfig(
        flip_prob=args.flip_prob, delay=args.delay, jitter=args.jitter,
        queue_cap=args.queue_cap, sampler_seed=args.sampler_seed,
        noise_seed=args.noise_seed, latency_seed=args.latency_seed,
    )
    server = make_server(host, int(port_text), config)
    print(f"cloud-queue emulator listening on {server.url}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    orchestrator = _orchestrator(args, scheduler_delay=args.scheduler_delay)
    payload: dict[str, Any] = {"openqasm_code": _read_qasm(args.qasm), "shots": args.shots}
    if args.seed is not None:
        payload["seed"] = args.seed
    job_id = orchestrator.submit("sampler", payload, args.backend)
    orchestrator.wait(job_id)
    record = orchestrator.store.get(job_id)
    if record.status == "completed":
        assert record.result is not None
        _maybe_plot(record.result, args.plot)
        return _finish(record.result, False, args)
    return _finish({"error": record.error}, True, args)


def _cmd_estimate(args: argparse.Namespace) -> int:
    if args.observable is not None:
        terms = json.loads(Path(args.observable).read_text(encoding="utf-8"))
    else:
        terms = json.loads(args.observable_json)
    payload: dict[str, Any] = {
        "openqasm_code": _read_qasm(args.qasm),
        "observable_terms": terms,
    }
    if args.shots is not None:
        payload["shots"] = args.shots
    if args.seed is not None:
        payload["seed"] = args.seed
    orchestrator = _orchestrator(args)
    job_id = orchestrator.submit("estimator", payload, "inline")
    record = orchestrator.store.get(job_id)
    if record.status == "completed":
        assert record.result is not None
        return _finish(record.result, False, args)
    return _finish({"error": record.error}, True, args)


def _cmd_remote_submit(args: argparse.Namespace) -> int:
    orchestrator = _orchestrator(args, remote=True)
    payload: dict[str, Any] = {
        "openqasm_code": _read_qasm(args.qasm),
        "shots": args.shots,
        "machine": args.machine,
    }
    if args.seed is not None:
        payload["seed"] = args.seed
    job_id = orchestrator.submit("sampler", payload, "remote")
    record = orchestrator.store.get(job_id)
    if record.status == "failed":
        return _finish({"error": record.error}, True, args)
    return _finish(
        {"job_id": job_id, "status": record.status, "machine": args.machine}, False, args
    )


def _cmd_remote_result(args: argparse.Namespace) -> int:
    orchestrator = _orchestrator(args, remote=True)
    try:
        if args.wait:
            orchestrator.wait(args.job_id, timeout=args.timeout)
        body = orchestrator.fetch_result(args.job_id)
    except QexError as exc:
        return _finish({"error": exc.to_payload()}, True, args)
    status = body.get("status", "completed")
    if status == "failed":
        return _finish(body, True, args)
    if args.wait and status in ("queued", "running"):
        return _finish(body, True, args)  # timed out before completion
    _maybe_plot(body, args.plot)
    return _finish(body, False, args)


def _cmd_jobs(args: argparse.Namespace) -> int:
    orchestrator = Orchestrator(JobStore(args.state_dir))
    return _finish({"jobs": orchestrator.list_jobs()}, False, args)


_COMMANDS = {
    "serve": _cmd_serve,
    "remote-serve": _cmd_remote_serve,
    "sample": _cmd_sample,
    "estimate": _cmd_estimate,
    "remote-submit": _cmd_remote_submit,
    "remote-result": _cmd_remote_result,
    "jobs": _cmd_jobs,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except QexError as exc:
        print(json.dumps({"error": exc.to_payload()}))
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
