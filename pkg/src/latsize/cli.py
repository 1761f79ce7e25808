"""Command-line client for the lattice-size service.

The CLI talks HTTP to the FastAPI app.  By default it mounts the app
in-process (no server needed); point it at a running server with --url or
the LATSIZE_URL environment variable.  Exit codes: 0 on success, 2 when a
precondition is violated (e.g. the slab method on a polytope of width two),
1 on other failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import httpx


def _client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=None)
    # mount the service in-process; same requests, no network
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _load_doc(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _range(text: str) -> tuple[int, int]:
    """Parse 'A..B' (or a single integer) into an inclusive range."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    v = int(text)
    return v, v


def _emit(payload: dict, quiet: bool) -> None:
    if quiet:
        print(payload["value"])
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _post(client: httpx.Client, path: str, payload: dict) -> tuple[int, dict]:
    resp = client.post(path, json=payload)
    try:
        body = resp.json()
    except ValueError:
        body = {"detail": resp.text}
    if resp.status_code == 422:
        detail = body.get("detail", body)
        print(f"precondition violated: {detail}", file=sys.stderr)
        return 2, body
    if resp.status_code != 200:
        print(f"error {resp.status_code}: {body}", file=sys.stderr)
        return 1, body
    return 0, body


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latsize",
        description="Exact lattice width and lattice size of lattice polytopes",
    )
    parser.add_argument(
        "--url",
        default=os.environ.get("LATSIZE_URL"),
        help="base URL of a running latsize server (default: in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_width = sub.add_parser("width", help="lattice width of a polytope file")
    p_width.add_argument("file")
    p_width.add_argument("--quiet", action="store_true")

    p_ls = sub.add_parser("ls", help="lattice size of a polytope file")
    p_ls.add_argument("file")
    p_ls.add_argument(
        "--method",
        default="auto",
        choices=["auto", "brute", "slab", "reduced", "interior", "2d"],
    )
    p_ls.add_argument("--quiet", action="store_true")

    p_red = sub.add_parser("reduce", help="width-norm reduced basis of a 3D polytope")
    p_red.add_argument("file")
    p_red.add_argument("--quiet", action="store_true")

    p_gen = sub.add_parser("gen", help="generate instances")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)

    g_white = gen_sub.add_parser("white", help="empty tetrahedron in normal form")
    g_white.add_argument("-p", type=int, required=True)
    g_white.add_argument("-q", type=int, required=True)

    g_w1 = gen_sub.add_parser("width-one", help="random hull of two layer polygons")
    g_w1.add_argument("--bound", type=int, default=7)
    g_w1.add_argument("--n0", type=_range, default=(5, 8), metavar="A..B")
    g_w1.add_argument("--n1", type=_range, default=(5, 8), metavar="A..B")
    g_w1.add_argument("--seed", type=int, default=0)
    g_w1.add_argument("--index", type=int, default=0)

    g_rand = gen_sub.add_parser("random", help="random full-dimensional polytope")
    g_rand.add_argument("--bound", type=int, default=7)
    g_rand.add_argument("--n", type=_range, default=(10, 15), metavar="A..B")
    g_rand.add_argument("--seed", type=int, default=0)
    g_rand.add_argument("--index", type=int, default=0)

    p_exp = sub.add_parser("experiment", help="run a stock experiment")
    p_exp.add_argument("id", type=int, choices=[1, 2, 3, 4])
    p_exp.add_argument("--trials", type=int, default=10)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--bound", type=int, default=None)
    p_exp.add_argument("--workers", type=int, default=1)
    p_exp.add_argument("--out", default=None, help="write the full report to a file")

    sub.add_parser(
        "verify-counterexample",
        help="re-check the stored facts about the reduction-gap polytope",
    )

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    with _client(args.url) as client:
        if args.command == "width":
            code, body = _post(client, "/width", _load_doc(args.file))
            if code == 0:
                _emit(body, args.quiet)
            return code

        if args.command == "ls":
            code, body = _post(
                client,
                "/ls",
                {"polytope": _load_doc(args.file), "method": args.method},
            )
            if code == 0:
                _emit(body, args.quiet)
            return code

        if args.command == "reduce":
            code, body = _post(client, "/reduce", _load_doc(args.file))
            if code == 0:
                _emit(body, args.quiet)
            return code

        if args.command == "gen":
            if args.kind == "white":
                code, body = _post(client, "/gen/white", {"p": args.p, "q": args.q})
            elif args.kind == "width-one":
                code, body = _post(
                    client,
                    "/gen/width-one",
                    {
                        "bound": args.bound,
                        "n0": list(args.n0),
                        "n1": list(args.n1),
                        "seed": args.seed,
                        "index": args.index,
                    },
                )
            else:
                code, body = _post(
                    client,
                    "/gen/random",
                    {
                        "bound": args.bound,
                        "n": list(args.n),
                        "seed": args.seed,
                        "index": args.index,
                    },
                )
            if code == 0:
                print(json.dumps(body, sort_keys=True))
            return code

        if args.command == "experiment":
            code, body = _post(
                client,
                "/experiment",
                {
                    "id": args.id,
                    "trials": args.trials,
                    "seed": args.seed,
                    "bound": args.bound,
                    "workers": args.workers,
                },
            )
            if code == 0:
                if args.out:
                    with open(args.out, "w", encoding="utf-8") as fh:
                        json.dump(body, fh, indent=2)
                    print(f"report written to {args.out}")
                print(json.dumps(body.get("summary", {}), indent=2, sort_keys=True))
            return code

        if args.command == "verify-counterexample":
            code, body = _post(client, "/verify-counterexample", {})
            if code != 0:
                return code
            for a in body["assertions"]:
                status = "ok" if a["passed"] else "FAILED"
                print(f"{a['name']}: {status} (expected {a['expected']}, got {a['actual']})")
            if not body["all_passed"]:
                print("counterexample verification FAILED", file=sys.stderr)
                return 1
            print("all checks passed")
            return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
