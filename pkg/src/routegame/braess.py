"""The four-node edge-addition experiment: builders for the classic network and
its priced variant, the closed-form severity ratio, and before/after runs.

The diamond topology is s -> {v, w} -> t with variable edges s->v and w->t
(unit-slope congestion), constant edges v->t and s->w (cost 1), and an optional
zero-cost shortcut v->w whose addition raises the equilibrium cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import engine, oracle
from .model import Commodity, EdgeSpec, GameInstance, NORMALIZATION_TOL, prepare
from .pricing import PriceSpec, ZERO_PRICE, eval_u


@dataclass(frozen=True)
class BraessReport:
    before_cost: float            # worst-equilibrium per-unit cost, shortcut absent
    after_cost: float             # worst-equilibrium per-unit cost, shortcut present
    rho: float                    # after / before
    n_players: int
    formula_rho: Optional[float] = None
    price_family: Optional[str] = None


def rho_formula(u: float, c1: float, c2: float) -> float:
    """Closed-form severity ratio 4*(c1 + c2*u) / (2 + c1 + 2*c2*u).

    At c1 = c2 = 1/2 this is (4 + 4u)/(5 + 2u); at c2 = 0 it is 4/3; at c1 = 0
    and u = 1 the paradox vanishes (ratio 1)."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"unit price {u} outside [0, 1]")
    if not (0.0 <= c1 <= 1.0 and 0.0 <= c2 <= 1.0):
        raise ValueError("mixing coefficients outside [0, 1]")
    if abs(c1 + c2 - 1.0) > NORMALIZATION_TOL:
        raise ValueError("mixing coefficients not normalized")
    return 4.0 * (c1 + c2 * u) / (2.0 + c1 + 2.0 * c2 * u)


def _check_n(n: int) -> None:
    if n <= 0 or n % 2 != 0:
        raise ValueError(f"number of players must be even and positive, got {n}")


def _diamond(
    variable: tuple[PriceSpec, float, float],
    with_shortcut: bool,
    n: int,
    meta: dict,
) -> GameInstance:
    price, c1, c2 = variable
    edges = [
        EdgeSpec("sv", "s", "v", a=1.0, b=0.0, c1=c1, c2=c2, price=price),
        EdgeSpec("vt", "v", "t", a=0.0, b=1.0),
        EdgeSpec("sw", "s", "w", a=0.0, b=1.0),
        EdgeSpec("wt", "w", "t", a=1.0, b=0.0, c1=c1, c2=c2, price=price),
    ]
    if with_shortcut:
        edges.append(EdgeSpec("vw", "v", "w", a=0.0, b=0.0))
    commodities = tuple(
        Commodity(f"u{i + 1}", "s", "t", 1.0 / n) for i in range(n)
    )
    instance = GameInstance(
        ("s", "v", "w", "t"),
        tuple(edges),
        commodities,
        meta={**meta, "shortcut": with_shortcut},
    )
    return prepare(instance)


def build_classic_braess(n: int) -> tuple[GameInstance, GameInstance]:
    """Unpriced diamond (pure congestion) without and with the shortcut edge.

    n even players of demand 1/n each; the half-split equilibrium costs 3/2 per
    unit, the post-shortcut equilibrium costs 2."""
    _check_n(n)
    meta = {"construction": "classic", "n": n}
    variable = (ZERO_PRICE, 1.0, 0.0)
    return (
        _diamond(variable, False, n, meta),
        _diamond(variable, True, n, meta),
    )


def build_priced_braess(
    n: int,
    price: PriceSpec,
    c1: float = 0.5,
    c2: float = 0.5,
) -> tuple[GameInstance, GameInstance]:
    """Diamond whose variable edges mix congestion and per-unit price with
    weights c1/c2. With c2 = 0 the output is structurally identical to the
    classic construction."""
    _check_n(n)
    if abs(c1 + c2 - 1.0) > NORMALIZATION_TOL:
        raise ValueError("mixing coefficients not normalized")
    if not (0.0 <= c1 <= 1.0 and 0.0 <= c2 <= 1.0):
        raise ValueError("mixing coefficients outside [0, 1]")
    meta = {
        "construction": "priced",
        "n": n,
        "price": price,
        "c1": c1,
        "c2": c2,
    }
    if c2 == 0.0:
        variable = (ZERO_PRICE, 1.0, 0.0)  # price weight zero: drop the price spec
    else:
        variable = (price, c1, c2)
    return (
        _diamond(variable, False, n, meta),
        _diamond(variable, True, n, meta),
    )


def _worst_equilibrium_unit_cost(
    instance: GameInstance,
    method: str,
    cap: int,
    eps_improve: float,
    max_moves: int,
) -> float:
    """Max per-player unit cost at the worst equilibrium (by social cost)."""
    if method == "oracle":
        worst, _, _ = oracle.worst_equilibrium(instance, cap, eps_improve)
    elif method == "dynamics":
        initial = engine.StrategyProfile((0,) * len(instance.commodities))
        result = engine.run_best_response_dynamics(
            instance,
            initial,
            engine.DynamicsConfig(max_moves=max_moves, eps_improve=eps_improve),
        )
        if not result.converged:
            raise RuntimeError(f"dynamics did not converge within {max_moves} moves")
        worst = result.final
    else:
        raise ValueError(f"unknown method {method!r}")
    loads = engine.edge_loads(instance, worst)
    return max(
        engine.unit_path_cost(instance, loads, i, instance.paths[i][c])
        for i, c in enumerate(worst.choice)
    )


def _recognized_formula(before: GameInstance, after: GameInstance) -> Optional[dict]:
    mb, ma = dict(before.meta), dict(after.meta)
    if mb.pop("shortcut", None) is not False or ma.pop("shortcut", None) is not True:
        return None
    if mb != ma or mb.get("construction") not in ("classic", "priced"):
        return None
    return mb


def edge_addition_experiment(
    before: GameInstance,
    after: GameInstance,
    method: str = "oracle",
    cap: int = oracle.DEFAULT_PROFILE_CAP,
    eps_improve: float = engine.DEFAULT_EPS_IMPROVE,
    max_moves: int = engine.DEFAULT_MAX_MOVES,
) -> BraessReport:
    """Compare worst-equilibrium unit costs before and after an edge addition.

    method="oracle" uses exhaustive search (true worst equilibrium);
    method="dynamics" samples one equilibrium via best-response dynamics.
    The closed-form prediction is attached only for builder-produced pairs."""
    if before.commodities != after.commodities:
        raise ValueError("instances do not share commodities")
    before_cost = _worst_equilibrium_unit_cost(
        before, method, cap, eps_improve, max_moves
    )
    after_cost = _worst_equilibrium_unit_cost(
        after, method, cap, eps_improve, max_moves
    )

    formula = None
    family = None
    tag = _recognized_formula(before, after)
    if tag is not None:
        if tag["construction"] == "classic":
            formula = rho_formula(0.0, 1.0, 0.0)
        else:
            spec: PriceSpec = tag["price"]
            family = spec.fn
            u = eval_u(spec, 1.0 / tag["n"])
            formula = rho_formula(u, tag["c1"], tag["c2"])

    return BraessReport(
        before_cost=before_cost,
        after_cost=after_cost,
        rho=after_cost / before_cost,
        n_players=len(before.commodities),
        formula_rho=formula,
        price_family=family,
    )
