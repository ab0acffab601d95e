"""Command line interface.

Subcommands build systems, profile their exponents, render plots, run the
independence rank experiment, and drive the successive minima oracle.  All
machine output goes to files in the output directory (flag --out, else the
PGNLAB_OUT environment variable, else the working directory), written
atomically; stdout carries one short line per written file.

Exit codes: 0 success, 2 invalid parameters or flags, 3 I/O problems,
4 oracle radius insufficiency, 5 failed mandatory checks.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .checks import check_profile, outcomes_to_json
from .exponents import (
    InsufficientDataError,
    profile_periodic,
    profile_sampled,
    write_division_csv,
)
from .families import (
    FamilyAParams,
    FamilyBParams,
    ParamError,
    build_family_a,
    build_family_a_infinite,
    build_family_b,
    crosscheck_printed_formulas,
    default_params_b,
)
from .rationals import INF, parse_extended, parse_fraction
from .systems import DomainError, PLSystem

__all__ = ["main", "entrypoint"]


def _write_json(path: Path, doc) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")
    os.replace(tmp, path)
    print(f"wrote {path}")


def _atomic_file(path: Path, writer, *args, **kwargs):
    tmp = path.with_name(path.name + ".tmp")
    result = writer(tmp, *args, **kwargs)
    os.replace(tmp, path)
    print(f"wrote {path}")
    return result


def _error(kind: str, detail: str) -> None:
    doc = {"schema": 1, "error": {"kind": kind, "detail": detail}}
    print(json.dumps(doc))


def _parse_weights(text: str) -> tuple[Fraction, ...]:
    items = [part.strip() for part in text.split(",")]
    if any(not item for item in items):
        raise ParamError([f"malformed weight list {text!r}"])
    return tuple(parse_fraction(item) for item in items)


def _family_source(args) -> tuple[str, object, PLSystem]:
    """Build (kind, params, system) from family flags."""
    if args.family == "A":
        missing = [
            flag
            for flag, value in (("--omega-hat", args.omega_hat), ("-a", args.a))
            if value is None
        ]
        if missing:
            raise ParamError([f"family A needs {flag}" for flag in missing])
        omega_hat = parse_extended(args.omega_hat)
        a = parse_fraction(args.a)
        q0 = parse_fraction(args.q0)
        if omega_hat is INF:
            system = build_family_a_infinite(
                args.n, a, q0=q0, periods=args.periods
            )
            return "A-infinite", (args.n, a, q0, args.periods), system
        params = FamilyAParams(n=args.n, omega_hat=omega_hat, a=a, q0=q0)
        return "A", params, build_family_a(params)
    if args.family == "B":
        if args.defaults:
            params = default_params_b(args.n)
        else:
            missing = [
                flag
                for flag, value in (("--factor", args.factor), ("--weights", args.weights))
                if value is None
            ]
            if missing:
                raise ParamError(
                    [f"family B needs {flag} (or --defaults)" for flag in missing]
                )
            params = FamilyBParams(
                n=args.n,
                C=parse_fraction(args.factor),
                A=_parse_weights(args.weights),
            )
        return "B", params, build_family_b(params)
    raise ParamError([f"unknown family {args.family!r}"])


def _system_source(args) -> tuple[str, object, PLSystem]:
    """System from --system FILE when given, else from family flags."""
    if getattr(args, "system", None):
        with open(args.system) as handle:
            doc = json.load(handle)
        system = PLSystem.from_json_dict(doc)
        report = system.validate()
        if not report.ok:
            raise ParamError(
                [f"loaded system invalid: [{v.code}] {v.where}: {v.detail}"
                 for v in report.violations]
            )
        return "file", None, system
    if args.family is None:
        raise ParamError(["need either --system FILE or family flags"])
    return _family_source(args)


def _add_family_flags(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--family", choices=("A", "B"), required=required)
    parser.add_argument("-n", type=int, default=None, help="dimension")
    parser.add_argument("--omega-hat", help="target top exponent, p/q or inf")
    parser.add_argument("-a", help="slope share, p/q")
    parser.add_argument("--q0", default="1", help="start point, p/q")
    parser.add_argument(
        "--periods", type=int, default=8,
        help="horizon periods for the unbounded variant",
    )
    parser.add_argument("--defaults", action="store_true",
                        help="family B reference parameters")
    parser.add_argument("--factor", help="family B dilation factor, p/q")
    parser.add_argument("--weights", help="family B weights, comma separated p/q")


def _require_n(args) -> None:
    if args.family is not None and args.n is None:
        raise ParamError(["family flags need -n"])


def cmd_build(args, out: Path) -> int:
    _require_n(args)
    kind, _, system = _family_source(args)
    _write_json(out / "system.json", system.to_json_dict())
    _write_json(out / "validation.json", system.validate().to_json_dict())
    print(f"built family {kind}: {len(system.division_points)} division points")
    return 0


def cmd_exponents(args, out: Path) -> int:
    _require_n(args)
    kind, params, system = _system_source(args)
    if system.is_dilation:
        profile = profile_periodic(system)
        profile_doc = {"mode": "periodic", **profile.to_json_dict()}
    else:
        sampled = profile_sampled(system)
        profile = sampled.headline
        profile_doc = {"mode": "sampled", **sampled.to_json_dict()}
    _write_json(out / "profile.json", profile_doc)
    outcomes = check_profile(profile)
    _write_json(out / "checks.json", outcomes_to_json(outcomes))
    _atomic_file(out / "division.csv", write_division_csv, system)
    if kind == "A" and params.omega_hat != params.n:
        _write_json(
            out / "crosscheck.json",
            crosscheck_printed_formulas("A", params).to_json_dict(),
        )
    elif kind == "B":
        _write_json(
            out / "crosscheck.json",
            crosscheck_printed_formulas("B", params).to_json_dict(),
        )
    failed = [o.name for o in outcomes if not o.holds]
    if failed:
        _error("check-failure", f"failed checks: {', '.join(failed)}")
        return 5
    return 0


def cmd_plot(args, out: Path) -> int:
    from .plotting import render_figure, write_polyline_csv

    _require_n(args)
    _, _, system = _system_source(args)
    periods = args.draw_periods
    if periods < 1:
        raise ParamError(["--draw-periods must be at least 1"])
    rows = _atomic_file(out / "plot.csv", write_polyline_csv, system, periods)
    figure = out / f"plot.{args.format}"
    _atomic_file(
        figure, render_figure, system, periods, title=args.title, fmt=args.format
    )
    print(f"plotted {rows} division points")
    return 0


def cmd_jacobian(args, out: Path) -> int:
    from .independence import ParamPoint, default_point, jacobian_rank

    if args.n is None:
        raise ParamError(["jacobian needs -n"])
    if args.defaults:
        point = default_point(args.n)
    else:
        if args.factor is None or args.weights is None:
            raise ParamError(
                ["jacobian needs --factor and --weights (or --defaults)"]
            )
        weights = _parse_weights(args.weights)
        if len(weights) == args.n + 1:
            weights = weights[1 : args.n]
        elif len(weights) != args.n - 1:
            raise ParamError(
                [f"expected {args.n - 1} middle weights or a full vector"]
            )
        point = ParamPoint(n=args.n, C=parse_fraction(args.factor), A_mid=weights)
    certificate = jacobian_rank(args.map, point, parse_fraction(args.h))
    _write_json(out / "jacobian.json", certificate.to_json_dict())
    print(f"rank {certificate.rank}")
    return 0


def cmd_oracle(args, out: Path) -> int:
    import csv

    from .minima import (
        DirectionVector,
        InsufficientRadiusError,
        compare_to_system,
        minkowski_sum_margin,
        trajectory,
    )

    if args.cf is not None:
        direction = DirectionVector.from_cf(args.cf)
    else:
        direction = DirectionVector.from_spec(args.components)
    if args.qmax <= 0:
        raise ParamError(["--qmax must be positive"])
    if args.qstep <= 0:
        raise ParamError(["--qstep must be positive"])
    grid = []
    q = args.qmin
    while q <= args.qmax + 1e-9:
        grid.append(q)
        q += args.qstep
    try:
        samples = trajectory(
            direction, grid, radius=args.radius, max_radius=args.max_radius
        )
    except InsufficientRadiusError as exc:
        _error("insufficient-radius", str(exc))
        return 4

    def write_trajectory(path) -> int:
        dim = direction.dim
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["q", "radius", "sufficient"]
                + [f"L_{d}" for d in range(1, dim + 1)]
                + [f"witness_{d}" for d in range(1, dim + 1)]
            )
            for s in samples:
                writer.writerow(
                    [s.q, s.radius, s.sufficient]
                    + [f"{v:.12f}" for v in s.L]
                    + [" ".join(str(c) for c in w) for w in s.witnesses]
                )
        return len(samples)

    _atomic_file(out / "trajectory.csv", write_trajectory)
    positive = [s for s in samples if s.q > 0]
    doc = {
        "schema": 1,
        "direction": {
            "u": list(direction.u),
            "provenance": direction.provenance,
        },
        "samples": len(samples),
        "minkowski_margin": minkowski_sum_margin(samples),
        "max_L1_over_q": max((s.L[0] / s.q for s in positive), default=None),
    }
    if args.compare is not None:
        with open(args.compare) as handle:
            system = PLSystem.from_json_dict(json.load(handle))
        report = compare_to_system(samples, system)
        doc["comparison"] = {
            "max_deviation": report.max_deviation,
            "argmax_q": report.argmax_q,
            "first_half_max": report.first_half_max,
            "second_half_max": report.second_half_max,
            "bounded": report.bounded,
            "compared": report.compared,
            "skipped": report.skipped,
        }
    _write_json(out / "oracle.json", doc)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgnlab",
        description="exact laboratory for generalized (n+1)-systems",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out", default=None,
        help="output directory (default: PGNLAB_OUT or the working directory)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", parents=[common],
                             help="construct and validate a system")
    _add_family_flags(p_build, required=True)
    p_build.set_defaults(handler=cmd_build)

    p_exp = sub.add_parser("exponents", parents=[common],
                           help="profile exponents and run checks")
    _add_family_flags(p_exp, required=False)
    p_exp.add_argument("--system", help="load a system JSON instead")
    p_exp.set_defaults(handler=cmd_exponents)

    p_plot = sub.add_parser("plot", parents=[common],
                            help="render components and export vertices")
    _add_family_flags(p_plot, required=False)
    p_plot.add_argument("--system", help="load a system JSON instead")
    p_plot.add_argument("--draw-periods", type=int, default=1,
                        help="periods to draw for dilation systems")
    p_plot.add_argument("--format", choices=("svg", "png"), default="svg")
    p_plot.add_argument("--title", default=None)
    p_plot.set_defaults(handler=cmd_plot)

    p_jac = sub.add_parser("jacobian", parents=[common],
                           help="rank of an exponent map")
    p_jac.add_argument("--map", choices=("W", "F"), required=True)
    p_jac.add_argument("-n", type=int, default=None)
    p_jac.add_argument("--defaults", action="store_true")
    p_jac.add_argument("--factor", help="family B dilation factor, p/q")
    p_jac.add_argument("--weights", help="weights, comma separated p/q")
    p_jac.add_argument("--h", default="1/1024", help="difference step, p/q")
    p_jac.set_defaults(handler=cmd_jacobian)

    p_oracle = sub.add_parser("oracle", parents=[common],
                              help="successive minima trajectory")
    group = p_oracle.add_mutually_exclusive_group(required=True)
    group.add_argument("--cf", help="continued fraction [a0;a1,...]")
    group.add_argument("--components", help="direction components or cf:[...]")
    p_oracle.add_argument("--qmin", type=float, default=0.0)
    p_oracle.add_argument("--qmax", type=float, required=True)
    p_oracle.add_argument("--qstep", type=float, default=0.5)
    p_oracle.add_argument("--radius", type=int, default=None)
    p_oracle.add_argument("--max-radius", type=int, default=None)
    p_oracle.add_argument("--compare", help="system JSON to compare against")
    p_oracle.set_defaults(handler=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    out_dir = Path(
        getattr(args, "out", None)
        or os.environ.get("PGNLAB_OUT")
        or "."
    )
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        return args.handler(args, out_dir)
    except ParamError as exc:
        _error("invalid-params", str(exc))
        return 2
    except (DomainError, InsufficientDataError) as exc:
        _error("invalid-params", str(exc))
        return 2
    except json.JSONDecodeError as exc:
        _error("io", f"malformed JSON: {exc}")
        return 3
    except OSError as exc:
        _error("io", str(exc))
        return 3
    except ValueError as exc:
        _error("invalid-params", str(exc))
        return 2


def entrypoint() -> None:
    sys.exit(main())
