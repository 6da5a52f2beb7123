import itertools
import math

import pytest

from routegame.braess import (
    build_classic_braess,
    build_priced_braess,
    edge_addition_experiment,
    rho_formula,
)
from routegame.engine import StrategyProfile, is_equilibrium, social_cost
from routegame.model import serialize_scenario
from routegame.pricing import PriceSpec, eval_u

FAMILIES = [
    PriceSpec("identity"),
    PriceSpec("sin"),
    PriceSpec("log1p"),
    PriceSpec("saturating", {"beta": 1.0}),
]


def test_builders_reject_odd_or_nonpositive_n():
    for n in (3, 0, -2):
        with pytest.raises(ValueError):
            build_classic_braess(n)
        with pytest.raises(ValueError):
            build_priced_braess(n, PriceSpec("identity"))


def test_priced_builder_rejects_unnormalized_mixing():
    with pytest.raises(ValueError):
        build_priced_braess(2, PriceSpec("identity"), c1=0.6, c2=0.5)


def test_classic_experiment(classic_pair_10):
    before, after = classic_pair_10
    report = edge_addition_experiment(before, after)
    assert report.before_cost == pytest.approx(1.5, abs=1e-12)
    assert report.after_cost == pytest.approx(2.0, abs=1e-12)
    assert report.rho == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert report.formula_rho == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert report.n_players == 10


def test_priced_identity_experiment(priced_identity_pair_10):
    before, after = priced_identity_pair_10
    report = edge_addition_experiment(before, after)
    assert report.before_cost == pytest.approx(1.75, abs=1e-12)
    assert report.after_cost == pytest.approx(2.0, abs=1e-12)
    assert report.rho == pytest.approx(8.0 / 7.0, abs=1e-12)
    assert report.price_family == "identity"


def test_zero_price_weight_reduces_to_classic():
    cb, ca = build_classic_braess(4)
    pb, pa = build_priced_braess(4, PriceSpec("identity"), c1=1.0, c2=0.0)
    assert serialize_scenario(pb) == serialize_scenario(cb)
    assert serialize_scenario(pa) == serialize_scenario(ca)


def test_rho_formula_endpoints():
    assert rho_formula(1.0, 0.5, 0.5) == pytest.approx(8.0 / 7.0, abs=1e-15)
    assert rho_formula(0.3, 1.0, 0.0) == pytest.approx(4.0 / 3.0, abs=1e-15)
    assert rho_formula(1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_rho_formula_matches_symmetric_special_case():
    for u in [i / 50 for i in range(51)]:
        assert rho_formula(u, 0.5, 0.5) == pytest.approx(
            (4 + 4 * u) / (5 + 2 * u), rel=1e-14
        )


def test_rho_formula_monotone_in_unit_price():
    values = [rho_formula(i / 200, 0.5, 0.5) for i in range(201)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_rho_formula_rejects_out_of_range():
    with pytest.raises(ValueError):
        rho_formula(1.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        rho_formula(0.5, 0.7, 0.5)
    with pytest.raises(ValueError):
        rho_formula(0.5, 1.2, -0.2)


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: s.fn)
@pytest.mark.parametrize("n", [2, 4, 10])
def test_simulation_matches_formula(spec, n):
    before, after = build_priced_braess(n, spec)
    report = edge_addition_experiment(before, after)
    expected = rho_formula(eval_u(spec, 1.0 / n), 0.5, 0.5)
    assert report.rho == pytest.approx(expected, abs=1e-9)
    assert report.formula_rho == pytest.approx(expected, abs=1e-15)


def test_log1p_n4_value():
    # brute-force value cross-checked against the closed form at u = ln(1.25)/0.25
    before, after = build_priced_braess(4, PriceSpec("log1p"))
    report = edge_addition_experiment(before, after)
    u = math.log(1.25) / 0.25
    assert report.rho == pytest.approx((4 + 4 * u) / (5 + 2 * u), abs=1e-9)


def test_classic_rho_independent_of_n():
    for n in (2, 4, 10):
        report = edge_addition_experiment(*build_classic_braess(n))
        assert report.rho == pytest.approx(4.0 / 3.0, abs=1e-12)
        priced = edge_addition_experiment(
            *build_priced_braess(n, PriceSpec("identity"))
        )
        assert priced.rho == pytest.approx(8.0 / 7.0, abs=1e-12)


def test_dynamics_method_on_classic(classic_pair_10):
    before, after = classic_pair_10
    report = edge_addition_experiment(before, after, method="dynamics")
    # dynamics samples one equilibrium per instance; before is the half-split
    assert report.before_cost == pytest.approx(1.5, abs=1e-12)
    assert report.rho >= 1.0


def test_formula_absent_for_unrecognized_pairs(classic_pair_10):
    import dataclasses

    before, after = classic_pair_10
    stripped = (
        dataclasses.replace(before, meta={}),
        dataclasses.replace(after, meta={}),
    )
    report = edge_addition_experiment(*stripped)
    assert report.formula_rho is None


def test_mismatched_commodities_rejected(classic_pair_10, classic_pair_2):
    with pytest.raises(ValueError, match="commodities"):
        edge_addition_experiment(classic_pair_10[0], classic_pair_2[1])
