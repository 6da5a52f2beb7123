"""Command-line front end.

Commands: validate, equilibrate, enumerate, poa, braess {classic|priced|pair},
price-curves. Exit codes: 0 success, 1 domain-level failure (invariant
violations, cap exceeded, non-convergence, bound violation), 2 usage/parse/I/O
error. All output is deterministic for fixed flags and seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from . import braess as braess_mod
from . import engine, oracle
from .model import (
    GameInstance,
    PathEnumerationError,
    ScenarioError,
    parse_scenario,
    prepare,
    serialize_scenario,
    validate_instance,
)
from .pricing import PRICE_FAMILIES, PriceSpec, eval_F, eval_u

FORMATS = ("table", "json", "csv")


def _fmt_float(v: float) -> str:
    return format(v, ".9g")


def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    items: list[tuple[str, object]] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            items.extend(_flatten(v, f"{prefix}{k}." if prefix else f"{k}."))
    elif isinstance(obj, (list, tuple)):
        items.append((prefix.rstrip("."), " ".join(str(x) for x in obj)))
    else:
        items.append((prefix.rstrip("."), obj))
    return items


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
        return
    rows = _flatten(report)
    if fmt == "csv":
        keys = ",".join(k for k, _ in rows)
        vals = ",".join(
            _fmt_float(v) if isinstance(v, float) else str(v) for _, v in rows
        )
        sys.stdout.write(keys + "\n" + vals + "\n")
        return
    width = max((len(k) for k, _ in rows), default=0)
    for k, v in rows:
        sys.stdout.write(f"{k.ljust(width)}  {v}\n")


def _read_scenario(path: str, strict: bool = True) -> GameInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read(), strict=strict)


def _profile_report(instance: GameInstance, profile: engine.StrategyProfile) -> dict:
    return {
        c.id: list(instance.paths[i][profile.choice[i]])
        for i, c in enumerate(instance.commodities)
    }


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args: argparse.Namespace) -> int:
    instance = _read_scenario(args.scenario, strict=False)
    report = validate_instance(instance)
    _emit(
        {
            "scenario": args.scenario,
            "valid": report.ok,
            "violations": list(report.violations),
        },
        args.format,
    )
    return 0 if report.ok else 1


def cmd_equilibrate(args: argparse.Namespace) -> int:
    instance = prepare(_read_scenario(args.scenario))
    k = len(instance.commodities)
    if args.seed is not None:
        rng = random.Random(args.seed)
        choice = tuple(rng.randrange(len(instance.paths[i])) for i in range(k))
    else:
        choice = (0,) * k
    result = engine.run_best_response_dynamics(
        instance,
        engine.StrategyProfile(choice),
        engine.DynamicsConfig(max_moves=args.max_moves, eps_improve=args.epsilon),
    )
    loads = engine.edge_loads(instance, result.final)
    costs = {
        c.id: engine.unit_path_cost(
            instance, loads, i, instance.paths[i][result.final.choice[i]]
        )
        for i, c in enumerate(instance.commodities)
    }
    _emit(
        {
            "converged": result.converged,
            "moves": len(result.moves),
            "final_profile": _profile_report(instance, result.final),
            "player_unit_costs": costs,
            "social_cost": engine.social_cost(instance, result.final),
            "potential": result.potential_trace[-1],
        },
        args.format,
    )
    return 0 if result.converged else 1


def _poa_report(instance: GameInstance, args: argparse.Namespace) -> dict:
    report = oracle.price_of_anarchy(
        instance, cap=args.cap, eps_improve=args.epsilon, workers=args.workers
    )
    return {
        "equilibrium_count": report.equilibrium_count,
        "optimal_social_cost": report.optimal_cost,
        "worst_equilibrium_social_cost": report.worst_equilibrium_cost,
        "poa": report.poa,
        "bound": report.bound,
        "within_bound": report.within_bound,
    }


def cmd_enumerate(args: argparse.Namespace) -> int:
    instance = prepare(_read_scenario(args.scenario))
    equilibria = oracle.find_all_equilibria(
        instance, cap=args.cap, eps_improve=args.epsilon, workers=args.workers
    )
    summary = _poa_report(instance, args)
    _emit(
        {
            "equilibria": [list(p.choice) for p in equilibria],
            "equilibrium_social_costs": [
                engine.social_cost(instance, p) for p in equilibria
            ],
            **summary,
        },
        args.format,
    )
    return 0 if summary["within_bound"] else 1


def cmd_poa(args: argparse.Namespace) -> int:
    instance = prepare(_read_scenario(args.scenario))
    summary = _poa_report(instance, args)
    _emit(summary, args.format)
    return 0 if summary["within_bound"] else 1


def _braess_price(args: argparse.Namespace) -> PriceSpec:
    params = {}
    if args.price == "saturating":
        params["beta"] = args.beta
    try:
        return PriceSpec(args.price, params)
    except ValueError as exc:
        raise SystemExit(_usage_error(str(exc)))


def _usage_error(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return 2


def cmd_braess(args: argparse.Namespace) -> int:
    if args.variant == "classic":
        before, after = braess_mod.build_classic_braess(args.n)
    elif args.variant == "priced":
        before, after = braess_mod.build_priced_braess(
            args.n, _braess_price(args), args.c1, args.c2
        )
    else:  # pair
        before = prepare(_read_scenario(args.before))
        after = prepare(_read_scenario(args.after))

    if getattr(args, "emit_scenario", None):
        for role, instance in (("before", before), ("after", after)):
            with open(f"{args.emit_scenario}-{role}.json", "w", encoding="utf-8") as fh:
                fh.write(serialize_scenario(instance))

    report = braess_mod.edge_addition_experiment(
        before,
        after,
        method=args.method,
        cap=args.cap,
        eps_improve=args.epsilon,
        max_moves=args.max_moves,
    )
    out = {
        "n_players": report.n_players,
        "before_cost": report.before_cost,
        "after_cost": report.after_cost,
        "rho": report.rho,
    }
    if report.formula_rho is not None:
        out["formula_rho"] = report.formula_rho
    if report.price_family is not None:
        out["price_family"] = report.price_family
    _emit(out, args.format)
    return 0


def cmd_price_curves(args: argparse.Namespace) -> int:
    families = [f.strip() for f in args.functions.split(",") if f.strip()]
    for fam in families:
        if fam not in PRICE_FAMILIES:
            return _usage_error(f"unknown price family {fam!r}")
    if args.samples < 2:
        return _usage_error("--samples must be at least 2")
    specs = {
        fam: PriceSpec(fam, {"beta": args.beta} if fam == "saturating" else {})
        for fam in families
    }
    header = ["x"]
    for fam in families:
        header += [f"{fam}_F", f"{fam}_u"]
    header.append("y_eq_x")
    sys.stdout.write(",".join(header) + "\n")
    for i in range(args.samples):
        x = args.x_max * (i + 1) / args.samples
        row = [_fmt_float(x)]
        for fam in families:
            row += [_fmt_float(eval_F(specs[fam], x)), _fmt_float(eval_u(specs[fam], x))]
        row.append(_fmt_float(x))
        sys.stdout.write(",".join(row) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--epsilon", type=float, default=engine.DEFAULT_EPS_IMPROVE)
    p.add_argument("--max-moves", type=int, default=engine.DEFAULT_MAX_MOVES)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_PROFILE_CAP)
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="routegame",
        description="Atomic selfish routing with bulk-discount edge pricing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file against all invariants")
    p.add_argument("scenario")
    _common_flags(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("equilibrate", help="run best-response dynamics")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int, default=None, help="random initial profile")
    _common_flags(p)
    p.set_defaults(func=cmd_equilibrate)

    p = sub.add_parser("enumerate", help="list all pure equilibria exhaustively")
    p.add_argument("scenario")
    _common_flags(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("poa", help="exhaustive Price of Anarchy report")
    p.add_argument("scenario")
    _common_flags(p)
    p.set_defaults(func=cmd_poa)

    p = sub.add_parser("braess", help="edge-addition experiments")
    bsub = p.add_subparsers(dest="variant", required=True)
    for variant in ("classic", "priced"):
        bp = bsub.add_parser(variant)
        bp.add_argument("--n", type=int, required=True, help="even number of players")
        if variant == "priced":
            bp.add_argument("--price", choices=PRICE_FAMILIES, required=True)
            bp.add_argument("--beta", type=float, default=1.0)
            bp.add_argument("--c1", type=float, default=0.5)
            bp.add_argument("--c2", type=float, default=0.5)
        bp.add_argument("--method", choices=("oracle", "dynamics"), default="oracle")
        bp.add_argument("--emit-scenario", metavar="PREFIX")
        _common_flags(bp)
        bp.set_defaults(func=cmd_braess, variant=variant)
    bp = bsub.add_parser("pair")
    bp.add_argument("before")
    bp.add_argument("after")
    bp.add_argument("--method", choices=("oracle", "dynamics"), default="oracle")
    _common_flags(bp)
    bp.set_defaults(func=cmd_braess, variant="pair")

    p = sub.add_parser("price-curves", help="emit CSV samples of the price catalog")
    p.add_argument("--functions", default=",".join(PRICE_FAMILIES))
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.set_defaults(func=cmd_price_curves)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (
        PathEnumerationError,
        oracle.ProfileCapError,
        oracle.NoEquilibriumError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
