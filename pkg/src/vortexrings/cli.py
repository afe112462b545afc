"""Command-line client for the service.

By default the requests run against the service in-process (ASGI transport),
so no server needs to be running; --url points the same client at a remote
instance.  Exit codes: 0 success, 2 certificate failure, 3 input error,
4 internal arithmetic inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from . import __version__

EXIT_OK = 0
EXIT_CERT_FAIL = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


def make_client(url: str | None = None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=300.0)
    from starlette.testclient import TestClient

    from .service import app
    return TestClient(app, raise_server_exceptions=False)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code in (400, 422):
        detail = resp.json().get("detail", resp.text)
        msg = detail.get("message") if isinstance(detail, dict) else str(detail)
        raise CliError(EXIT_INPUT, f"input error: {msg}")
    if resp.status_code == 500:
        detail = resp.json().get("detail", resp.text)
        if isinstance(detail, dict) and detail.get("status") == "internal-inconsistency":
            raise CliError(EXIT_INTERNAL, f"internal inconsistency: {detail['message']}")
        raise CliError(EXIT_INTERNAL, f"internal error: {detail}")
    resp.raise_for_status()
    return resp.json()


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _write_artifact(doc: dict, out: str | None) -> None:
    doc = {"tool": "vortexrings", "tool_version": __version__, **doc}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(header: list[str], rows: list[tuple], out: str | None) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args, client) -> int:
    doc = _post(client, "/generate", {"n": args.n, "route": args.route})
    _write_artifact(doc, args.out)
    return EXIT_OK


def cmd_pair(args, client) -> int:
    doc = _post(client, "/pair", {"n": args.n})
    _write_artifact(doc, args.out)
    return EXIT_OK


def cmd_certify(args, client) -> int:
    try:
        with open(args.pair_file) as fh:
            pair_doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INPUT, f"cannot read pair file: {exc}")
    payload = {
        "pair": {k: pair_doc[k] for k in ("m", "n", "P", "Q") if k in pair_doc},
        "preset": args.preset,
    }
    if args.tol is not None:
        payload["residual_tol"] = args.tol
    doc = _post(client, "/certify", payload)
    _write_artifact(doc, args.out)
    if not doc["passed"]:
        failed = sorted(k for k, v in doc["checks"].items() if not v["passed"])
        print("certificate failure: " + ", ".join(failed), file=sys.stderr)
        return EXIT_CERT_FAIL
    return EXIT_OK


def cmd_search(args, client) -> int:
    doc = _post(client, "/search", {
        "m": args.m, "n": args.n, "tries": args.tries,
        "seed": args.seed, "preset": args.preset,
        **({"tol": args.tol} if args.tol is not None else {}),
    })
    _write_artifact(doc, args.out)
    return EXIT_OK


def cmd_potential(args, client) -> int:
    a1, a2 = args.a
    doc = _post(client, "/potential/grid", {
        "a": [a1, a2],
        "x1": {"start": args.x1[0], "stop": args.x1[1], "count": int(args.x1[2])},
        "x2": {"start": args.x2[0], "stop": args.x2[1], "count": int(args.x2[2])},
    })
    if args.format == "csv":
        _write_csv(["x1", "x2", "A"], [tuple(r) for r in doc["rows"]], args.out)
    else:
        _write_artifact(doc, args.out)
    return EXIT_OK


def cmd_reduced(args, client) -> int:
    doc = _post(client, "/reduced", {
        "m": args.m, "n": args.n, "eps_list": args.eps, "c1": args.c1,
    })
    _write_artifact(doc, args.out)
    return EXIT_OK


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vortexrings",
        description="Generating polynomials, balanced vortex-ring "
                    "configurations and the ring potential.")
    parser.add_argument("--url", default=None,
                        help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate the polynomial sequence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--route", choices=["wronskian", "recurrence", "both"],
                   default="wronskian")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pair", help="normalized generating pair (P, Q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("certify", help="certify a pair file")
    p.add_argument("pair_file")
    p.add_argument("--preset", choices=["paper-balance", "pq-roots", "alpha0-form"],
                   default="pq-roots")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="seeded random search for configurations")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tries", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--preset", choices=["paper-balance", "pq-roots", "alpha0-form"],
                   default="pq-roots")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("potential", help="ring-potential grid export")
    p.add_argument("--a", type=float, nargs=2, required=True, metavar=("A1", "A2"))
    p.add_argument("--x1", type=float, nargs=3, required=True,
                   metavar=("START", "STOP", "COUNT"))
    p.add_argument("--x2", type=float, nargs=3, required=True,
                   metavar=("START", "STOP", "COUNT"))
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("reduced", help="reduced-problem residuals per eps")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_float_list, required=True,
                   help="comma-separated list, e.g. 1e-3,1e-5,1e-8")
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reduced)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with make_client(args.url) as client:
            return args.func(args, client)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
