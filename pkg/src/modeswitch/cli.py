"""Command-line client for the optimization service.

By default requests are dispatched to the in-process ASGI app (no server
needed); pass --server to talk to a running instance instead. The CLI owns
all file I/O: artifacts returned by the service are written atomically
into the output directory.

Exit codes: 0 success (Converged/MaxIters), 1 validation failure or
unexpected error, 2 bad input (config/schedule), 3 run ended in an error
status (StepSizeUnderflow).
"""
from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path

import httpx

from .artifacts import atomic_write_text

OUTPUT_ENV = "MODESWITCH_OUT"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_INPUT = 2
EXIT_RUN_ERROR = 3

_OK_STATUSES = {"Converged", "MaxIters"}


def _request(method: str, path: str, payload: dict | None, server: str | None) -> dict:
    async def go() -> httpx.Response:
        if server is None:
            from .service import app  # imported lazily; pulls in the numeric stack
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://modeswitch",
                                         timeout=None) as client:
                return await client.request(method, path, json=payload)
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.request(method, path, json=payload)

    response = asyncio.run(go())
    body = response.json()
    if response.status_code >= 400:
        detail = body.get("detail", body)
        raise RuntimeError(f"service error {response.status_code}: {detail}")
    return body


def _output_dir(cli_value: str | None, config_value: str | None) -> Path:
    if cli_value:
        return Path(cli_value)
    env = os.environ.get(OUTPUT_ENV)
    if env:
        return Path(env)
    if config_value:
        return Path(config_value)
    return Path("modeswitch_out")


def _config_output_dir(config_text: str) -> str | None:
    # light parse: runner revalidates; here we only need [output] dir
    import configparser
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(config_text)
        return parser.get("output", "dir", fallback=None)
    except configparser.Error:
        return None


def _write_artifacts(directory: Path, artifacts: dict[str, str]) -> None:
    for name, text in artifacts.items():
        atomic_write_text(directory / name, text)


def cmd_run(args) -> int:
    config_path = Path(args.config)
    if not config_path.is_file():
        print(f"error: config file {config_path} not found", file=sys.stderr)
        return EXIT_BAD_INPUT
    config_text = config_path.read_text()
    try:
        body = _request("POST", "/run", {"config_text": config_text}, args.server)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    out_dir = _output_dir(args.out, _config_output_dir(config_text))
    _write_artifacts(out_dir, body["artifacts"])
    summary = body["summary"]
    print(f"status={body['status']} iterations={summary['iterations']} "
          f"J={summary['final_cost']!r} D_sigma={summary['final_d_sigma']!r}")
    print(f"artifacts written to {out_dir}")
    return EXIT_OK if body["status"] in _OK_STATUSES else EXIT_RUN_ERROR


def cmd_replay(args) -> int:
    schedule_path, config_path = Path(args.schedule), Path(args.config)
    for p in (schedule_path, config_path):
        if not p.is_file():
            print(f"error: {p} not found", file=sys.stderr)
            return EXIT_BAD_INPUT
    config_text = config_path.read_text()
    try:
        body = _request("POST", "/replay", {
            "config_text": config_text,
            "schedule_csv": schedule_path.read_text(),
        }, args.server)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    out_dir = _output_dir(args.out, _config_output_dir(config_text))
    _write_artifacts(out_dir, body["artifacts"])
    print(f"J={body['cost']!r} D_sigma={body['d_sigma']!r}")
    return EXIT_OK


def cmd_validate(args) -> int:
    body = _request("POST", "/validate", {"seed": args.seed}, args.server)
    out_dir = _output_dir(args.out, None)
    _write_artifacts(out_dir, body["artifacts"])
    for check in body["report"]["checks"]:
        flag = "PASS" if check["passed"] else "FAIL"
        print(f"[{flag}] {check['name']}: measured={check['measured']:.6g} "
              f"threshold={check['threshold']:.6g}")
    print(f"report written to {out_dir / 'validation_report.json'}")
    return EXIT_OK if body["all_pass"] else EXIT_FAILURE


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modeswitch",
        description="Optimal mode scheduling for switched dynamical systems")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="optimize a schedule from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_replay = sub.add_parser("replay",
                              help="re-simulate a saved schedule, print J and D_sigma")
    p_replay.add_argument("schedule")
    p_replay.add_argument("config")
    p_replay.add_argument("--out", default=None)
    p_replay.set_defaults(func=cmd_replay)

    p_val = sub.add_parser("validate", help="run the oracle cross-check suite")
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--out", default=None)
    p_val.set_defaults(func=cmd_validate)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8321)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: bad response from service: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
