"""``relloc`` command-line front end.

Exit codes: 0 success / verification passed, 1 verification failed,
2 usage, parse, domain or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import elementary as el
from . import localisation as lo
from . import obsexpr as ox
from . import verify
from .minkowski import inner, is_future_timelike
from .poincare import Hyperplane

SCHEMA = verify.SCHEMA


class UsageError(Exception):
    pass


def builtin_aliases(system: el.ElementarySystem) -> dict[str, ox.Expression]:
    """Generator, Pauli-Lubanski (lower index) and Newton-Wigner observables by name."""
    gens = el.generators(system)
    aliases = {f"P{mu}": gens[f"P{mu}"] for mu in range(4)}
    for name in ("J12", "J23", "J31", "J10", "J20", "J30"):
        aliases[name] = el.angular_expr(gens, int(name[1]), int(name[2]))
    aliases.update(lo.pauli_lubanski_expressions(system, gens))
    aliases.update(lo.nw_expressions(system, gens))
    return aliases


def load_state(path: str, c: float | None) -> tuple[el.ElementarySystem, el.State]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read state file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"state file {path!r} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("state file must hold a JSON object")
    return el.state_from_json(data, c)


def _scalar(value: float, fmt: str | None, extra: dict | None = None) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, "value": value, **(extra or {})})
    if fmt == "csv":
        keys = ["value"] + list(extra or {})
        vals = [repr(value)] + [str(v) for v in (extra or {}).values()]
        return ",".join(keys) + "\n" + ",".join(vals)
    out = repr(value)
    for v in (extra or {}).values():
        out += "\n" + str(v)
    return out


def cmd_eval(args) -> int:
    system, state = load_state(args.state, args.c)
    expr = ox.parse(args.expr, builtin_aliases(system))
    print(_scalar(el.evaluate_at(expr, system, state), args.format))
    return 0


def cmd_bracket(args) -> int:
    system, state = load_state(args.state, args.c)
    aliases = builtin_aliases(system)
    f = ox.parse(args.f, aliases)
    g = ox.parse(args.g, aliases)
    bracket = ox.poisson_bracket(f, g)
    extra = {"symbolic": ox.to_text(bracket)} if args.symbolic else None
    print(_scalar(el.evaluate_at(bracket, system, state), args.format, extra))
    return 0


def parse_tau(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--tau expects a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--tau expects a:b:n with real a, b and integer n, got {text!r}") from None
    if n < 1:
        raise UsageError("--tau needs n >= 1 points")
    return np.linspace(a, b, n)


def parse_frame(values) -> np.ndarray:
    u = np.array(values if values is not None else [1.0, 0.0, 0.0, 0.0], dtype=float)
    if not is_future_timelike(u):
        raise UsageError(f"--u must be timelike and future-directed, got {u.tolist()}")
    return u / np.sqrt(-inner(u, u))


def cmd_worldline(args) -> int:
    system, state = load_state(args.state, args.c)
    u = parse_frame(args.u)
    taus = parse_tau(args.tau)
    choice = lo.CHOICES[args.choice]
    mv = el.momenta(system, state)
    rows = [(float(t), *map(float, lo.ssc_position(mv, choice, Hyperplane(u, t)))) for t in taus]
    if args.format == "json":
        print(json.dumps({
            "schema": SCHEMA,
            "choice": args.choice,
            "u": u.tolist(),
            "rows": [dict(zip(("tau", "x0", "x1", "x2", "x3"), r)) for r in rows],
        }))
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["tau", "x0", "x1", "x2", "x3"])
        for r in rows:
            writer.writerow([repr(v) for v in r])
    return 0


def cmd_moller(args) -> int:
    system, state = load_state(args.state, args.c)
    mv = el.momenta(system, state)
    disc = lo.moller_disc(mv)
    W = disc.normal
    P = mv.P_vector
    diagnostics = {
        "W_dot_P": inner(W, P),
        "centre_on_hyperplane": inner(P / mv.mc, disc.centre),
        "ci_residual": float(np.abs(lo.ssc_worldline(mv, P).intersect(Hyperplane(P / mv.mc, 0.0)) - disc.centre).max()),
    }
    payload = {"schema": SCHEMA, **disc.to_json(), "diagnostics": diagnostics}
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["c0", "c1", "c2", "c3", "radius", "n0", "n1", "n2", "n3"])
        writer.writerow([repr(float(v)) for v in (*disc.centre, disc.radius, *W)])
    else:
        print(json.dumps(payload, indent=2))
    return 0


def parse_tolerances(items) -> dict[str, float]:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        try:
            out[name] = float(value)
        except ValueError:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}") from None
        if not sep or not name:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
    return out


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; available: {', '.join(verify.SUITES)}, all")
    try:
        cfg = verify.RunConfig(args.seed, args.samples, parse_tolerances(args.tol), args.format or "json")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    reports = [verify.run_suite(name, cfg) for name in names]
    out = verify.render(reports, cfg.fmt)
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", type=float, default=argparse.SUPPRESS, help="override the speed of light stored in the state file")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS, help="output format")

    parser = argparse.ArgumentParser(prog="relloc", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate an observable at a state")
    p.add_argument("state")
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bracket", parents=[common], help="Poisson bracket {f, g} at a state")
    p.add_argument("state")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--symbolic", action="store_true", help="also print the bracket expression")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("worldline", parents=[common], help="SSC positions along a family of hyperplanes")
    p.add_argument("state")
    p.add_argument("--choice", choices=tuple(lo.CHOICES), default="nw")
    p.add_argument("--u", type=float, nargs=4, metavar="U", default=None, help="hyperplane normal (default e0)")
    p.add_argument("--tau", default="0:1:2", help="a:b:n, n evenly spaced values from a to b")
    p.set_defaults(func=cmd_worldline)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", help=f"one of {', '.join(verify.SUITES)}, all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="tolerance override for a suite or a suite.check (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("moller", parents=[common], help="Moller disc on the hyperplane orthogonal to P")
    p.add_argument("state")
    p.set_defaults(func=cmd_moller)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("c", "format"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        return args.func(args)
    except (UsageError, ValueError, ArithmeticError) as exc:
        # ParseError, DomainError, ReconstructionError and LocalisationError are ValueErrors
        print(f"relloc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
