"""Command-line client for the experiment service.

The CLI is a thin HTTP client: by default it mounts the FastAPI app
in-process (no network); ``--server URL`` talks to a remote instance.  The
service returns report contents; the CLI owns file output, written atomically
(write to a temp file, then rename).

Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 capacity.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Any

import httpx

from .config import parse_config_text
from .errors import ConfigurationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_CAPACITY = 4

_CODE_TO_EXIT = {"config": EXIT_CONFIG, "solver": EXIT_SOLVER, "capacity": EXIT_CAPACITY}

TASK_NAMES = ["spectrum", "gap", "condensate", "penalty-scan", "qlm-scan", "strong-coupling"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwinger-ed",
        description="Exact diagonalization experiments for the lattice Schwinger model",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    for task in TASK_NAMES:
        p = sub.add_parser(task, help=f"run the {task} task")
        p.add_argument("--config", help="path to a key=value config file")
        p.add_argument("--out", default=".", help="output directory for reports")
        p.add_argument("--seed", type=int, default=None, help="override solver.seed")
        p.add_argument("--workers", type=int, default=1, help="concurrent sweep points")
        p.add_argument("--server", default=None, help="remote service URL (default: in-process)")
    return parser


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process: mount the ASGI app behind a synchronous test client
    import warnings

    with warnings.catch_warnings():
        # starlette warns about the installed httpx major version
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _summary_text(payload: dict[str, Any]) -> str:
    lines = ["# effective configuration"]
    lines += payload["config_echo"].splitlines()
    lines.append("# results")
    for key, value in payload["summary"].items():
        if isinstance(value, float):
            lines.append(f"result.{key} = {value:.17g}")
        else:
            lines.append(f"result.{key} = {value}")
    return "\n".join(lines) + "\n"


def _fail(record: dict[str, Any], exit_code: int) -> int:
    print(json.dumps({"error": record}, sort_keys=True), file=sys.stderr)
    return exit_code


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    raw_config: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw_config = parse_config_text(fh.read())
        except OSError as exc:
            return _fail({"code": "config", "message": f"cannot read config: {exc}"}, EXIT_CONFIG)
        except ConfigurationError as exc:
            record = {"code": "config", "message": str(exc)}
            if exc.field:
                record["field"] = exc.field
            return _fail(record, EXIT_CONFIG)

    request = {"config": raw_config, "seed": args.seed, "workers": args.workers}
    try:
        with _client(args.server) as client:
            response = client.post(f"/run/{args.task}", json=request)
    except httpx.HTTPError as exc:
        return _fail({"code": "solver", "message": f"service unreachable: {exc}"}, EXIT_SOLVER)

    if response.status_code != 200:
        try:
            detail = response.json().get("detail", {})
        except ValueError:
            detail = {}
        if not isinstance(detail, dict):
            detail = {"message": str(detail)}
        code = detail.get("code", "solver")
        return _fail(detail or {"code": code, "message": response.text}, _CODE_TO_EXIT.get(code, EXIT_SOLVER))

    payload = response.json()
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, args.task)
    try:
        _atomic_write(base + ".csv", payload["csv"])
        _atomic_write(base + "_summary.txt", _summary_text(payload))
    except OSError as exc:
        return _fail({"code": "config", "message": f"cannot write output: {exc}"}, EXIT_CONFIG)
    print(f"wrote {base}.csv and {base}_summary.txt")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
