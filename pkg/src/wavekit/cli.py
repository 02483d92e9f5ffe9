"""Command-line client for the wavekit service.

The CLI is a thin HTTP client: by default it mounts the FastAPI app
in-process (no server needed), and ``--url`` points it at a remote
``wavekit serve`` instance instead.  Exit codes: 0 verified wavelet set,
1 usage/parse error, 2 verified not a wavelet set, 3 indeterminate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import httpx


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 instead of argparse's 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wavekit", description=__doc__)
    parser.add_argument(
        "--url",
        default=os.environ.get("WAVEKIT_URL"),
        help="base URL of a running wavekit service (default: in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a wavelet-set region")
    c.add_argument("--type", required=True, choices=["scalar", "neg-scalar", "matrix"])
    c.add_argument("--dim", type=int, help="ambient dimension (scalar kinds)")
    c.add_argument("--d", help="dilation scalar, e.g. 2 or 3/2")
    c.add_argument("--k", type=int, default=1, help="satellite offset (scalar kind)")
    c.add_argument("--matrix", help='dilation matrix "a,b,c;d,e,f;g,h,i"')
    c.add_argument(
        "--transpose-given",
        action="store_true",
        help="the --matrix argument is the transpose A*",
    )
    c.add_argument("--q", help='refinement exponent, integer or "auto"')
    c.add_argument("--q-max", type=int, help="search cap for q (env WAVEKIT_QMAX)")
    c.add_argument("--unimodular", help="integer det-±1 matrix applied afterwards")
    c.add_argument("-o", "--output", help="region JSON path (default: stdout)")

    v = sub.add_parser("verify", help="verify a region file")
    v.add_argument("region", help="region JSON path")
    v.add_argument("--mode", choices=["exact", "mc", "both"], default="exact")
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument(
        "--tol",
        type=float,
        default=1e-9,
        help="boundary tolerance for float-dilation Monte Carlo mode",
    )
    v.add_argument("-o", "--output", help="write the report JSON here")

    i = sub.add_parser("info", help="dilation-matrix diagnostics")
    i.add_argument("--matrix", required=True)
    i.add_argument("--transpose-given", action="store_true")
    i.add_argument("--q-max", type=int)
    i.add_argument("--json", action="store_true", help="emit raw JSON")

    e = sub.add_parser("export", help="export a region to OFF/SVG/CSV")
    e.add_argument("region", help="region JSON path")
    e.add_argument("--format", required=True, choices=["off", "svg", "csv"])
    e.add_argument("--slice", help='slice spec for 3D SVG, e.g. "x3=0"')
    e.add_argument("--samples", type=int, default=20_000)
    e.add_argument("--seed", type=int, default=42)
    e.add_argument("-o", "--output", help="output path (default: region.<format>)")

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8077)
    return parser


class _InProcessTransport(httpx.BaseTransport):
    """Synchronous bridge onto the ASGI app, so the CLI needs no server."""

    def __init__(self, app):
        self._asgi = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        import asyncio

        async def _roundtrip() -> httpx.Response:
            response = await self._asgi.handle_async_request(request)
            body = b"".join([chunk async for chunk in response.stream])
            return httpx.Response(
                status_code=response.status_code,
                headers=response.headers,
                content=body,
            )

        return asyncio.run(_roundtrip())


def _client(url: Optional[str]) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=600.0)
    from .service.app import app

    return httpx.Client(
        transport=_InProcessTransport(app),
        base_url="http://wavekit.internal",
        timeout=600.0,
    )


def _fail(response: httpx.Response) -> int:
    try:
        detail = response.json().get("detail")
    except Exception:
        detail = response.text
    if isinstance(detail, dict):
        print(f"error: {detail.get('message', detail)}", file=sys.stderr)
        for attempt in detail.get("attempts", []):
            print(f"  q={attempt.get('q')}: {attempt.get('reason')}", file=sys.stderr)
    else:
        print(f"error: {detail}", file=sys.stderr)
    return 1


def _cmd_construct(args, client: httpx.Client) -> int:
    if args.q not in (None, "auto"):
        try:
            q = int(args.q)
        except ValueError:
            raise _UsageError(f'--q must be an integer or "auto", got {args.q!r}')
    else:
        q = None
    body = {
        "type": args.type,
        "dim": args.dim,
        "d": args.d,
        "k": args.k,
        "matrix": args.matrix,
        "transpose_given": args.transpose_given,
        "q": q,
        "q_max": args.q_max
        if args.q_max is not None
        else (int(os.environ["WAVEKIT_QMAX"]) if os.environ.get("WAVEKIT_QMAX") else None),
        "unimodular": args.unimodular,
    }
    resp = client.post("/construct", json=body)
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    region_json = json.dumps(data["region"], indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(region_json)
    else:
        sys.stdout.write(region_json)
    s = data["summary"]
    t = None if s.get("t") is None else "(" + ", ".join(s["t"]) + ")"
    k = None if s.get("k") is None else "(" + ", ".join(s["k"]) + ")"
    print(
        f"constructed {s['kind']} region: dim={s['dim']} cells={s['cells']} "
        f"volume={s['volume']} d={s.get('d')} t={t} k={k} q={s.get('q')}",
        file=sys.stderr if not args.output else sys.stdout,
    )
    return 0


def _load_region_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise _UsageError(f"region file not found: {path}")
    except json.JSONDecodeError as exc:
        raise _UsageError(f"invalid JSON in {path}: {exc}")


def _cmd_verify(args, client: httpx.Client) -> int:
    region = _load_region_file(args.region)
    body = {
        "region": region,
        "mode": args.mode,
        "samples": args.samples,
        "seed": args.seed,
        "tol": args.tol,
    }
    resp = client.post("/verify", json=body)
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    for side in ("translation", "dilation"):
        rep = data[side]
        extra = ""
        if rep.get("volume") is not None:
            extra = f" (volume {rep['volume']})"
        print(f"{side}: {rep['verdict']}{extra}")
        for off in rep.get("offenders", [])[:4]:
            print(f"  offender {off['label']}: {off.get('note', '')}")
    print(f"wavelet set: {'YES' if data['is_wavelet_set'] else 'no'}")
    return int(data["exit_code"])


def _cmd_info(args, client: httpx.Client) -> int:
    body = {
        "matrix": args.matrix,
        "transpose_given": args.transpose_given,
        "q_max": args.q_max,
    }
    resp = client.post("/info", json=body)
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    if args.json:
        print(json.dumps(data, indent=2))
        return 0
    print(f"dim: {data['dim']}")
    if data.get("power") is not None:
        print(f"scalar power: A^{data['power']} = {data['scalar']}*I")
    print(f"expansive: {data.get('expansive')}")
    sv = ", ".join(f"{v:.4f}" for v in data["singular_values"])
    print(f"singular values: [{sv}] (+-{data['singular_radius']:.2e})")
    print(
        f"min singular value > sqrt(n) ~ {data['sqrt_dim']:.4f}: "
        f"{data['min_singular_exceeds_sqrt_dim']}"
    )
    for note in data.get("notes", []):
        print(f"note: {note}")
    if data.get("accepted_q") is not None:
        print(f"q-search: accepted q={data['accepted_q']}")
    for at in data.get("q_trace", []):
        print(f"  q={at['q']}: {at['reason']}")
    return 0


def _cmd_export(args, client: httpx.Client) -> int:
    region = _load_region_file(args.region)
    body = {
        "region": region,
        "format": args.format,
        "slice": args.slice,
        "samples": args.samples,
        "seed": args.seed,
    }
    resp = client.post("/export", json=body)
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    out = args.output or data["filename"]
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(data["content"])
    if "<!-- empty section -->" in data["content"]:
        print("warning: slice plane misses the region; output is empty", file=sys.stderr)
    print(f"wrote {out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            return _cmd_serve(args)
        with _client(args.url) as client:
            if args.command == "construct":
                return _cmd_construct(args, client)
            if args.command == "verify":
                return _cmd_verify(args, client)
            if args.command == "info":
                return _cmd_info(args, client)
            if args.command == "export":
                return _cmd_export(args, client)
        return 1
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except httpx.HTTPError as exc:
        print(f"service error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
