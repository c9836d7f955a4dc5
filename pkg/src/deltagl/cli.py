"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 an error (reported as
JSON ``{"error": code, "message": ...}`` on stdout).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional

from .errors import DeltaGLError, InvalidInput
from .inner import inner_obstruction_witness
from .lifts import christoffel, legendre_matrix, lift_from_json, lift_to_json, log_derivative
from .linalg import PMatrix
from .padic import PadicContext
from .solver import DeltaLinearProblem, equation_forms, solve
from .suites import SUITES, run_suite


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _context(args: argparse.Namespace, data: Optional[dict] = None) -> PadicContext:
    if data and "context" in data:
        return PadicContext.from_json(data["context"])
    return PadicContext(args.p, args.f, args.N)


def _read_input(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read input: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInput("input must be a JSON object")
    return data


def _require(data: dict, key: str) -> Any:
    if key not in data:
        raise InvalidInput(f"input is missing {key!r}")
    return data[key]


def _matrix_summary(m: PMatrix) -> dict:
    return {**m.to_json(), "signed": m.signed()}


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args: argparse.Namespace) -> tuple[int, dict]:
    data = _read_input(args.input)
    ctx = _context(args, data)
    point = PMatrix.from_json(ctx, _require(data, "point"))
    lift = lift_from_json(ctx, _require(data, "lift"), point.n)
    Phi = lift.evaluate(point)
    return 0, {
        "lift": lift_to_json(lift),
        "Phi": _matrix_summary(Phi),
        "Delta": _matrix_summary(christoffel(lift, point)),
        "ldelta": _matrix_summary(log_derivative(lift, point).mat),
        "context": ctx.to_json(),
    }


def cmd_verify(args: argparse.Namespace) -> tuple[int, dict]:
    ctx = _context(args)
    report = run_suite(args.suite, ctx, args.n, args.samples, args.seed, args.fault)
    return (0 if report["passed"] else 1), report


def cmd_solve(args: argparse.Namespace) -> tuple[int, dict]:
    data = _read_input(args.input)
    ctx = _context(args, data)
    seed = PMatrix.from_json(ctx, _require(data, "seed"))
    lift = lift_from_json(ctx, _require(data, "lift"), seed.n)
    alpha = PMatrix.from_json(ctx, data["alpha"]) if "alpha" in data else PMatrix.zeros(ctx, seed.n)
    prec = data.get("prec")
    problem = DeltaLinearProblem(lift, alpha, None if prec is None else int(prec))
    u = solve(problem, seed)
    return 0, {"u": _matrix_summary(u), "equation_forms": equation_forms(problem, u), "context": ctx.to_json()}


def cmd_witness(args: argparse.Namespace) -> tuple[int, dict]:
    data = _read_input(args.input)
    ctx = _context(args, data)
    point = data.get("point", args.point)
    if not isinstance(point, list) or len(point) != 4:
        raise InvalidInput("the witness point is four entries a, b, c, d")
    report = inner_obstruction_witness(ctx, point)
    return 0, {**report.to_json(), "point": [str(x) for x in point], "context": ctx.to_json()}


def cmd_legendre(args: argparse.Namespace) -> tuple[int, dict]:
    data = _read_input(args.input)
    ctx = _context(args, data)
    raw = data.get("q", args.q)
    if raw is None:
        raise InvalidInput("legendre needs a form q")
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"cannot parse q: {exc}") from exc
    if isinstance(raw, int):
        raw = [[raw]]
    q = PMatrix.from_json(ctx, raw)
    sign = -1 if data.get("sign", args.sign) in ("-", "-1", -1) else 1
    phi1 = legendre_matrix(q, sign)
    if phi1.n == 1:
        x = phi1.entry(0, 0)
        value: Any = [str(c) for c in x.coeffs()] if ctx.f > 1 else str(x.coeffs()[0])
        signed: Any = [str(c) for c in x.signed_coeffs()] if ctx.f > 1 else str(x.signed_coeffs()[0])
        return 0, {"Phi1": signed, "Phi1_canonical": value, "prec": x.prec, "context": ctx.to_json()}
    return 0, {"Phi1": _matrix_summary(phi1), "context": ctx.to_json()}


# ---------------------------------------------------------------------------
# text rendering


def _render_text(command: str, payload: dict) -> str:
    if "error" in payload:
        return f"error: {payload['error']}: {payload.get('message', '')}\n"
    if command == "verify":
        lines = [f"suite={payload['header']['suite']} seed={payload['header']['seed']} "
                 f"samples={payload['header']['samples']}"]
        for c in payload["checks"]:
            status = "skip" if c.get("skipped") else ("pass" if c["passed"] else "FAIL")
            extra = f" shortfall={c['max_shortfall']}" if c.get("max_shortfall") else ""
            lines.append(f"{status:4} {c['suite']}.{c['check']} ({c['samples']} samples){extra}")
        lines.append("all passed" if payload["passed"] else "FAILED")
        return "\n".join(lines) + "\n"
    return "".join(f"{k}: {json.dumps(v, sort_keys=True)}\n" for k, v in sorted(payload.items()))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltagl", description="Arithmetic Lie theory on GL_n at finite p-adic precision.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=5, help="odd prime")
    common.add_argument("--f", type=int, default=1, help="residue degree")
    common.add_argument("--N", type=int, default=10, help="working precision in p-adic digits")
    common.add_argument("--in", dest="input", help="input JSON file ('-' for stdin)")
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="evaluate a lift: Phi, Delta and l-delta at a point")
    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--n", type=int, default=2, help="matrix size")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--fault", type=int, default=None, help=argparse.SUPPRESS)
    sub.add_parser("solve", parents=[common], help="solve l-delta u = alpha from a residue seed")
    w = sub.add_parser("witness", parents=[common], help="valuation of the inner-involution obstruction")
    w.add_argument("--point", type=int, nargs=4, default=[1, 1, 1, 2], metavar=("A", "B", "C", "D"))
    leg = sub.add_parser("legendre", parents=[common], help="the matrix Legendre symbol Phi(1)")
    leg.add_argument("--q", help="form q as an integer or a JSON list of rows")
    leg.add_argument("--sign", default="+", help="+ for symmetric q, - for antisymmetric")
    return parser


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "solve": cmd_solve,
    "witness": cmd_witness,
    "legendre": cmd_legendre,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "samples", 1) < 1:
            raise InvalidInput("samples must be positive")
        code, payload = COMMANDS[args.command](args)
    except DeltaGLError as exc:
        code, payload = 2, {"error": exc.code, "message": str(exc)}
    except (KeyError, TypeError, ValueError) as exc:
        code, payload = 2, {"error": "InvalidInput", "message": str(exc)}
    text = dumps(payload) if args.format == "json" else _render_text(args.command, payload)
    if args.out and "error" not in payload:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
