"""Command-line client for the simulation service.

The CLI is a thin HTTP client: every subcommand builds a request and
sends it to the service. By default the service app runs in-process (no
network); pass --server to talk to a remote instance started with
`dqmem serve`.

Exit codes: 0 success, 1 validation/parse errors, 2 runtime errors.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path

import httpx


def _fmt9(x: float | None) -> str:
    return "inf" if x is None else format(x, ".9g")


class _Parser(argparse.ArgumentParser):
    # usage mistakes are validation errors: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dqmem",
        description="Dissipative quantum memory simulator (service client).",
    )
    parser.add_argument(
        "--server",
        metavar="URL",
        default=None,
        help="base URL of a running service (default: run the service in-process)",
    )
    parser.add_argument(
        "--quiet", action="store_true", help="suppress informational output"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario and write its outputs")
    run.add_argument("config", type=Path, help="scenario config file")
    run.add_argument("--out", type=Path, default=Path("."), help="output directory")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument(
        "--seed",
        type=int,
        default=None,
        help="override every perturb seed (i-th perturb event gets seed + i)",
    )

    lifetimes = sub.add_parser("lifetimes", help="print the per-mode lifetime table")
    lifetimes.add_argument("config", type=Path, help="scenario config file")

    verify = sub.add_parser(
        "verify-oracle", help="run the truncated Fock validator suite"
    )
    verify.add_argument("--dim", type=int, default=64, help="Fock truncation depth")
    verify.add_argument(
        "--theta-max", type=float, default=1.2, help="largest squeeze angle checked"
    )

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    async def go() -> httpx.Response:
        if server is None:
            from .service.app import create_app

            transport = httpx.ASGITransport(app=create_app())
            client = httpx.AsyncClient(
                transport=transport, base_url="http://dqmem.internal", timeout=None
            )
        else:
            client = httpx.AsyncClient(base_url=server, timeout=300.0)
        async with client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _fail(response: httpx.Response) -> int:
    try:
        body = response.json()
    except ValueError:
        body = {}
    detail = body.get("detail") or body.get("error") or response.text
    print(f"error: {detail}", file=sys.stderr)
    if response.status_code in (400, 422) or body.get("category") == "validation":
        return 1
    return 2


def _read_config(path: Path) -> str | None:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return None


def _cmd_run(args) -> int:
    config_text = _read_config(args.config)
    if config_text is None:
        return 1
    payload = {"config": config_text, "format": args.format}
    if args.seed is not None:
        payload["seed"] = args.seed
    response = _post(args.server, "/run", payload)
    if response.status_code != 200:
        return _fail(response)
    body = response.json()
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        for entry in body["files"]:
            (args.out / entry["name"]).write_bytes(entry["content"].encode("utf-8"))
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        for entry in body["files"]:
            print(args.out / entry["name"])
        print(
            f"samples={body['sample_count']} events={body['event_count']} "
            f"alive={body['final_alive_count']} overprints={body['overprint_count']} "
            f"forgets={body['forget_count']}"
        )
    return 0


def _cmd_lifetimes(args) -> int:
    config_text = _read_config(args.config)
    if config_text is None:
        return 1
    response = _post(args.server, "/lifetimes", {"config": config_text})
    if response.status_code != 200:
        return _fail(response)
    body = response.json()
    print("k,domain_size,lifetime")
    for row in body["entries"]:
        print(f"{_fmt9(row['k'])},{_fmt9(row['domain_size'])},{_fmt9(row['lifetime'])}")
    return 0


def _cmd_verify_oracle(args) -> int:
    response = _post(
        args.server, "/verify-oracle", {"dim": args.dim, "theta_max": args.theta_max}
    )
    if response.status_code != 200:
        return _fail(response)
    body = response.json()
    for check in body["checks"]:
        verdict = "PASS" if check["passed"] else "FAIL"
        print(
            f"{check['name']}: max_error={check['max_error']:.3e} "
            f"tolerance={check['tolerance']:.0e} {verdict}"
        )
    if not args.quiet:
        overall = "all checks passed" if body["passed"] else "CHECKS FAILED"
        print(f"dim={body['dim']} theta_max={body['theta_max']}: {overall}")
    return 0 if body["passed"] else 2


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("dqmem.service.app:app", host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "lifetimes":
            return _cmd_lifetimes(args)
        if args.command == "verify-oracle":
            return _cmd_verify_oracle(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except httpx.HTTPError as exc:
        print(f"error: service unreachable: {exc}", file=sys.stderr)
        return 2
    parser.print_usage(sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
