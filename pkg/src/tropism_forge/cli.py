"""Command-line front end.

Exit codes: 0 on success, 1 when the input is well formed but the
computation fails (no solution, singular matrix, ...), 2 on usage or syntax
errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, kernels
from .binomial import BinomialError, BinomialSystem, solve_binomial
from .cyclotomic import CyclotomicDomain
from .initial_solver import BACKENDS, InitialSolverError, SolverConfig, verify_point
from .laurent import (
    ParseError,
    PolySystem,
    builtin_system,
    coefficient_from_json,
    coefficient_to_json,
    format_polynomial,
    format_system,
    parse_system,
    system_to_json,
)
from .linalg import LinAlgError
from .polytopes import cyclic_shift, initial_form_system, orbit_group, pretropism_cones
from .puiseux import _is_cyclically_symmetric, develop_report, second_term
from .surfaces import (
    MonomialParametrization,
    ParametrizationError,
    backelin_set,
    degree_of_parametrization,
    orbit_expansion,
)

log = logging.getLogger("tropism_forge")


class UsageError(Exception):
    """Bad flag values detected after argparse."""


# ---------------------------------------------------------------- input


def load_system(spec: str, root_order: int | None = None) -> PolySystem:
    domain = CyclotomicDomain(root_order) if root_order else None
    if spec == "illus3" or spec.startswith("cyclic:"):
        try:
            return builtin_system(spec, domain)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no such file or builtin system: {spec}")
    text = path.read_text()
    if path.suffix == ".json":
        from .laurent import system_from_json

        try:
            return system_from_json(json.loads(text), domain)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise UsageError(f"{spec}: malformed system JSON ({exc})") from None
    return parse_system(text, domain)


def parse_vectors(text: str) -> list[tuple[int, ...]]:
    """``"1,0,0;0,1,0"`` -> [(1, 0, 0), (0, 1, 0)]."""
    try:
        out = [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError:
        raise UsageError(f"bad integer vector list {text!r}") from None
    if not out:
        raise UsageError("no vectors given")
    return out


def load_parametrization(spec: str) -> MonomialParametrization:
    if spec.startswith("backelin:"):
        try:
            m = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad representation {spec!r}") from None
        return backelin_set(m)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no such file or builtin representation: {spec}")
    try:
        data = json.loads(path.read_text())
        if "developments" in data:
            data = data["developments"][0]
        domain = CyclotomicDomain(int(data.get("root_order", 1)))
        coefs = tuple(coefficient_from_json(c["coef"], domain) for c in data["coords"])
        exps = tuple(tuple(Fraction(x) for x in c["exp"]) for c in data["coords"])
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise UsageError(f"{spec}: malformed parametrization JSON ({exc})") from None
    return MonomialParametrization(coefs, exps)


# ---------------------------------------------------------------- output


def emit(args, payload: dict, text: str):
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


# ---------------------------------------------------------------- subcommands


def cmd_parse(args):
    system = load_system(args.system, args.roots_order)
    emit(args, system_to_json(system), format_system(system))


def cmd_tropisms(args):
    system = load_system(args.system, args.roots_order)
    recs = pretropism_cones(system, args.dim, args.positive_first)
    orbits = []
    if recs and _is_cyclically_symmetric(system):
        orbits = orbit_group(recs, cyclic_shift(system.nvars, 1))
    payload = {
        "dim": args.dim,
        "cones": [r.to_json() for r in recs],
        "orbits": [
            {"representative": o.representative.cone.to_json()["rays"], "size": o.size} for o in orbits
        ],
    }
    lines = [f"{len(recs)} cones of pretropisms of dimension >= {args.dim}"]
    for r in recs:
        lines.append(f"  dim {r.dim}: " + " ".join(_vec(v) for v in r.rays))
    if orbits:
        lines.append(f"{len(orbits)} orbits under the cyclic shift")
        for o in orbits:
            lines.append(f"  size {o.size}: " + " ".join(_vec(v) for v in o.representative.rays))
    emit(args, payload, "\n".join(lines))


def cmd_initforms(args):
    system = load_system(args.system, args.roots_order)
    vs = parse_vectors(args.vectors)
    if any(len(v) != system.nvars for v in vs):
        raise UsageError(f"vectors must have {system.nvars} entries")
    init = initial_form_system(system, vs)
    emit(args, system_to_json(init), format_system(init))


def cmd_solve_binomial(args):
    system = load_system(args.system, args.roots_order)
    bs = BinomialSystem.from_polys(system.polys)
    sol = solve_binomial(bs)
    payload = sol.to_json()
    lines = [f"{len(sol.points)} point(s), {sol.d} parameter(s)", "M ="]
    lines += ["  " + " ".join(f"{str(x):>4}" for x in row) for row in sol.M]
    for p in sol.points:
        lines.append("  y = " + ", ".join(coefficient_to_json(x) for x in p))
    emit(args, payload, "\n".join(lines))


def _solver_config(args) -> SolverConfig:
    return SolverConfig(backend=args.backend, root_order=args.roots_order, max_grid=args.max_grid, seed=args.seed)


def cmd_puiseux(args):
    system = load_system(args.system, args.roots_order)
    cfg = _solver_config(args)
    report = develop_report(system, args.dim, cfg, args.positive_first, second=False)
    devs = [d if d.exact else second_term(system, d, cfg, args.second_mode) for d in report.developments]
    payload = {"developments": [d.to_json() for d in devs], "diagnostics": report.diagnostics}
    lines = [f"{len(devs)} development(s)"]
    for d in devs:
        lines.append(str(d))
    if args.expand_orbits:
        expanded = []
        if _is_cyclically_symmetric(system):
            for d in devs:
                if not d.exact:
                    continue
                try:
                    p = MonomialParametrization.from_development(d)
                except ParametrizationError:
                    continue
                orbit = orbit_expansion(p)
                expanded.append({"tropisms": [list(r) for r in d.tropisms.rows],
                                 "members": [q.to_json() for q in orbit]})
                lines.append(f"orbit of {len(orbit)} set(s) for tropisms {[list(r) for r in d.tropisms.rows]}")
        payload["orbits"] = expanded
    if report.diagnostics:
        lines.append(f"{len(report.diagnostics)} face(s) skipped")
    emit(args, payload, "\n".join(lines))


def cmd_verify(args):
    system = load_system(args.system, args.roots_order)
    if bool(args.point) == bool(args.rep):
        raise UsageError("give exactly one of --point or --rep")
    if args.point:
        domain = CyclotomicDomain(max(system.root_order, args.roots_order or 1))
        coords = [coefficient_from_json(s.strip(), domain) for s in args.point.split(",")]
        if len(coords) != system.nvars:
            raise UsageError(f"point needs {system.nvars} coordinates")
        rep = verify_point(system, coords)
        ok = rep.ok
        payload = {"kind": "point", "ok": ok, "residuals": [coefficient_to_json(v) for v in rep.values]}
        text = ("ok" if ok else "not a solution") + "\n" + "\n".join(
            f"  f{i}: {coefficient_to_json(v)}" for i, v in enumerate(rep.values))
    else:
        p = load_parametrization(args.rep)
        if p.n != system.nvars:
            raise UsageError(f"representation has {p.n} coordinates, system has {system.nvars}")
        res = [p.substitute(f) for f in system.polys]
        ok = all(not r.terms for r in res)
        names = tuple(f"t{i}" for i in range(p.d))
        payload = {"kind": "parametrization", "ok": ok,
                   "residuals": [format_polynomial(r, names) if r.terms else "0" for r in res]}
        text = ("ok: vanishes identically" if ok else "not identically zero") + "\n" + "\n".join(
            f"  f{i}: {s}" for i, s in enumerate(payload["residuals"]))
    emit(args, payload, text)
    return 0 if ok else 1


def cmd_degree(args):
    p = load_parametrization(args.rep)
    if args.system:
        system = load_system(args.system, args.roots_order)
        if p.n != system.nvars:
            raise UsageError(f"representation has {p.n} coordinates, system has {system.nvars}")
        if not p.satisfies(system):
            raise ParametrizationError("representation does not satisfy the system")
    deg = degree_of_parametrization(p, args.seed)
    emit(args, {"dim": p.d, "degree": deg}, str(deg))


def cmd_components(args):
    p = load_parametrization(args.rep)
    m = None
    if args.system:
        system = load_system(args.system, args.roots_order)
        if p.n != system.nvars:
            raise UsageError(f"representation has {p.n} coordinates, system has {system.nvars}")
    orbit = orbit_expansion(p, m, "identity" if args.identity_only else "all")
    degs = [degree_of_parametrization(q, args.seed) for q in orbit]
    payload = {"count": len(orbit), "components": [dict(q.to_json(), degree=k) for q, k in zip(orbit, degs)]}
    lines = [f"{len(orbit)} component(s)"]
    for q, k in zip(orbit, degs):
        lines.append(f"degree {k}: " + ", ".join(coefficient_to_json(c) for c in q.coefficients))
    emit(args, payload, "\n".join(lines))


# ---------------------------------------------------------------- parser


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--roots-order", type=_positive, default=None, metavar="M",
                        help="root order of the coefficient field and the grid backend")
    common.add_argument("-v", "--verbose", action="store_true")

    sysarg = argparse.ArgumentParser(add_help=False)
    sysarg.add_argument("--system", required=True, help="file path, cyclic:n or illus3")

    dims = argparse.ArgumentParser(add_help=False)
    dims.add_argument("--dim", type=_positive, default=1, metavar="D")
    dims.add_argument("--positive-first", action=argparse.BooleanOptionalAction, default=True)

    p = argparse.ArgumentParser(prog="tropism-forge", description="Polyhedral methods for positive dimensional solution sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", parents=[common, sysarg], help="echo the system in canonical form")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("tropisms", parents=[common, sysarg, dims], help="cones of pretropisms and their orbits")
    sp.set_defaults(func=cmd_tropisms)

    sp = sub.add_parser("initforms", parents=[common, sysarg], help="nested initial form system")
    sp.add_argument("--vectors", required=True, help="semicolon separated vectors, applied in order")
    sp.set_defaults(func=cmd_initforms)

    sp = sub.add_parser("solve-binomial", parents=[common, sysarg], help="solve a binomial system")
    sp.set_defaults(func=cmd_solve_binomial)

    sp = sub.add_parser("puiseux", parents=[common, sysarg, dims], help="leading and second terms of series")
    sp.add_argument("--max-grid", type=_positive, default=10**6, metavar="N")
    sp.add_argument("--backend", choices=BACKENDS, default="auto")
    sp.add_argument("--second-mode", choices=("auto", "curve", "full"), default="auto")
    sp.add_argument("--expand-orbits", action="store_true")
    sp.set_defaults(func=cmd_puiseux)

    sp = sub.add_parser("verify", parents=[common, sysarg], help="check a point or a parametrization")
    sp.add_argument("--point", help="comma separated coordinates, e.g. 1,u,u^2")
    sp.add_argument("--rep", help="backelin:m or a JSON parametrization")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("degree", parents=[common], help="degree of a monomial parametrization")
    sp.add_argument("--system", help="optional system the representation must satisfy")
    sp.add_argument("--rep", required=True, help="backelin:m or a JSON parametrization")
    sp.set_defaults(func=cmd_degree)

    sp = sub.add_parser("components", parents=[common], help="symmetry orbit of a parametrized set")
    sp.add_argument("--system", help="optional system, used to check the coordinate count")
    sp.add_argument("--rep", required=True, help="backelin:m or a JSON parametrization")
    sp.add_argument("--identity-only", action="store_true", help="skip the symmetry images")
    sp.set_defaults(func=cmd_components)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        rc = args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"tropism-forge {args.command}: {exc}", file=sys.stderr)
        return 2
    except (BinomialError, InitialSolverError, ParametrizationError, LinAlgError, ArithmeticError, ValueError) as exc:
        print(f"tropism-forge {args.command}: {exc}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
