"""Thin command-line client for the compute service.

Each subcommand builds one request and posts it to the service.  Without
``--server`` the FastAPI app runs in-process over an ASGI transport, so no
daemon is needed for batch work; with ``--server URL`` the same request goes
to a remote instance.  Exit codes: 0 success, 2 validation error (the domain
error name is printed), 3 transport or runtime failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from . import __version__

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise SystemExit(_fail(f"RangeError: cannot parse number list {text!r}", EXIT_VALIDATION))


def _parse_grid(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 3:
        raise SystemExit(_fail(f"RangeError: grid {text!r} must be min:max:steps", EXIT_VALIDATION))
    try:
        return {"min": float(parts[0]), "max": float(parts[1]), "steps": int(parts[2])}
    except ValueError:
        raise SystemExit(_fail(f"RangeError: cannot parse grid {text!r}", EXIT_VALIDATION))


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def _system_block(args) -> dict:
    """Resolve --system (builtin name or JSON file) plus flag overrides."""
    block: dict = {}
    source = args.system
    if source and source not in ("paper-2d", "paper-3d"):
        path = Path(source)
        if not path.exists():
            raise SystemExit(
                _fail(f"RangeError: system file {source!r} not found", EXIT_VALIDATION)
            )
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SystemExit(
                _fail(f"RangeError: system file is not valid JSON ({exc})", EXIT_VALIDATION)
            )
        block["matrix"] = doc.get("matrix")
        if doc.get("b") is not None:
            block["b"] = doc["b"]
        if doc.get("C") is not None:
            block["c"] = doc["C"]
        if doc.get("n") is not None:
            block["n"] = doc["n"]
    elif source:
        block["name"] = source
    else:
        block["name"] = "paper-2d"

    if getattr(args, "b", None):
        block["b"] = _parse_floats(args.b)
    if getattr(args, "c", None) is not None:
        block["c"] = args.c if args.c == "auto" else float(args.c)
    if getattr(args, "n", None) is not None:
        block["n"] = args.n
    return block


def _request(args, path: str, payload: dict) -> httpx.Response:
    if args.server:
        with httpx.Client(base_url=args.server, timeout=600.0) as client:
            return client.post(path, json=payload)

    from .service import create_app

    async def _go():
        transport = httpx.ASGITransport(app=create_app(), raise_app_exceptions=False)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://hhl-lab", timeout=600.0
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(_go())


def _error_exit(resp: httpx.Response) -> int:
    try:
        doc = resp.json()
    except ValueError:
        doc = {}
    name = doc.get("error", "ValidationError" if resp.status_code == 422 else "RuntimeError")
    detail = doc.get("detail", resp.text)
    code = EXIT_VALIDATION if resp.status_code in (400, 404, 422) else EXIT_RUNTIME
    return _fail(f"{name}: {detail}", code)


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _table_command(args, endpoint: str, payload: dict) -> int:
    payload["format"] = args.format
    try:
        resp = _request(args, endpoint, payload)
    except httpx.HTTPError as exc:
        return _fail(f"TransportError: {exc}", EXIT_RUNTIME)
    if resp.status_code != 200:
        return _error_exit(resp)
    _write_output(resp.text, args.out)
    return EXIT_OK


def _fmt_pair(pair) -> str:
    re, im = pair
    return f"{re:.10g}" if abs(im) < 1e-14 else f"{re:.10g}{im:+.10g}j"


def cmd_solve(args) -> int:
    try:
        resp = _request(args, "/solve", {"system": _system_block(args)})
    except httpx.HTTPError as exc:
        return _fail(f"TransportError: {exc}", EXIT_RUNTIME)
    if resp.status_code != 200:
        return _error_exit(resp)
    doc = resp.json()
    if args.format == "json":
        _write_output(json.dumps(doc, indent=2), args.out)
        return EXIT_OK
    rep = doc["report"]
    lines = [
        f"x (classical) : {'  '.join(_fmt_pair(p) for p in doc['x_classical'])}",
        f"|x> amplitudes: {'  '.join(_fmt_pair(p) for p in doc['x_state'])}",
        f"success probability: {doc['sp']:.12g}",
        f"condition number   : {doc['kappa']:.12g}",
        f"C = {doc['c']:.12g}   n = {doc['n']}   lambdas = {doc['lambdas']}",
    ]
    if doc["trivial"]:
        lines.append("trivial instance: b lies in a single eigenspace; "
                     "entanglement meters vanish")
    lines.append("post-rotation resources:")
    lines.append(f"  ggm = {rep['ggm']:.12g}")
    lines.append("  ln  = " + "  ".join(f"{k}={v:.12g}" for k, v in rep["ln"].items()))
    lines.append(
        f"  coherence: global={rep['coherence_global']:.12g} "
        f"R={rep['coherence_R']:.12g} U={rep['coherence_U']:.12g}"
    )
    lines.append(
        "  purity: " + "  ".join(f"{k}={v:.12g}" for k, v in rep["purities"].items())
    )
    _write_output("\n".join(lines), args.out)
    return EXIT_OK


def cmd_sweep_b(args) -> int:
    payload = {
        "system": _system_block(args),
        "grids": [_parse_grid(g) for g in args.grid or []],
        "stage": args.stage,
        "seed": args.seed,
    }
    return _table_command(args, "/sweep/b", payload)


def cmd_sweep_kappa(args) -> int:
    payload = {
        "grid": _parse_grid(args.grid[0]) if args.grid else {"min": 2, "max": 10, "steps": 50},
        "b": _parse_floats(args.b) if args.b else [0.3],
        "c": args.c if args.c in (None, "auto") else float(args.c),
        "stage": args.stage,
        "seed": args.seed,
    }
    if payload["c"] is None:
        payload["c"] = "auto"
    return _table_command(args, "/sweep/kappa", payload)


def cmd_disorder(args) -> int:
    payload = {
        "system": _system_block(args),
        "grid": _parse_grid(args.grid[0]) if args.grid else {"min": 0, "max": 1, "steps": 21},
        "sigmas": _parse_floats(args.sigma) if args.sigma else [0.01, 0.05, 0.1],
        "realizations": args.realizations,
        "seed": args.seed,
    }
    return _table_command(args, "/disorder", payload)


def cmd_micro_ggm(args) -> int:
    try:
        resp = _request(args, "/micro-ggm", {"system": _system_block(args)})
    except httpx.HTTPError as exc:
        return _fail(f"TransportError: {exc}", EXIT_RUNTIME)
    if resp.status_code != 200:
        return _error_exit(resp)
    doc = resp.json()
    if args.format == "json":
        _write_output(json.dumps(doc, indent=2), args.out)
        return EXIT_OK
    lines = [
        f"micro ggm   : {doc['micro_ggm']:.12g}",
        f"analytic ggm: {doc['analytic_ggm']:.12g}",
        f"scaled eigenvalues: {doc['scaled_lambdas']} over n = {doc['n']} qubits",
    ]
    if doc["witness"]:
        lines.append(f"factorization witness: {doc['witness_text']}")
    _write_output("\n".join(lines), args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, *, system: bool = True) -> None:
    if system:
        p.add_argument("--system", help="builtin name (paper-2d, paper-3d) or JSON file")
        p.add_argument("--b", help="comma-separated constant vector (normalized)")
        p.add_argument("--c", help="rotation constant, a number or 'auto'")
        p.add_argument("--n", type=int, help="eigenvalue-register width in qubits")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--server", help="remote service URL; default runs in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhl-lab",
        description="Quantum linear-system resource laboratory",
    )
    parser.add_argument("--version", action="version", version=f"hhl-resource-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance and print its resource report")
    _add_common(p)
    p.set_defaults(func=cmd_solve, format="text")
    p.add_argument("--json", dest="format", action="store_const", const="json",
                   help="emit the full JSON payload")

    p = sub.add_parser("sweep-b", help="sweep the constant-vector simplex")
    _add_common(p)
    p.add_argument("--grid", action="append", help="axis as min:max:steps (repeatable)")
    p.add_argument("--stage", default="psi_2")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep_b)

    p = sub.add_parser("sweep-kappa", help="sweep the 2x2 eigenvalue-ratio family")
    p.add_argument("--b", help="fixed b (one value = b0, or a comma list)")
    p.add_argument("--c", help="rotation constant, a number or 'auto'")
    p.add_argument("--grid", action="append", help="kappa axis as min:max:steps")
    p.add_argument("--stage", default="psi_2")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, system=False)
    p.set_defaults(func=cmd_sweep_kappa)

    p = sub.add_parser("disorder", help="quenched averages under rotation disorder")
    _add_common(p)
    p.add_argument("--grid", action="append", help="b0^2 axis as min:max:steps")
    p.add_argument("--sigma", help="comma-separated disorder strengths")
    p.add_argument("--realizations", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_disorder)

    p = sub.add_parser("micro-ggm", help="bit-string level geometric measure and witness")
    _add_common(p)
    p.set_defaults(func=cmd_micro_ggm, format="text")
    p.add_argument("--json", dest="format", action="store_const", const="json")

    p = sub.add_parser("serve", help="run the compute service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve, server=None)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # transport/runtime failures map to exit 3
        return _fail(f"{type(exc).__name__}: {exc}", EXIT_RUNTIME)


if __name__ == "__main__":
    sys.exit(main())
