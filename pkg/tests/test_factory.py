from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from dp1 import factory
from dp1.examples import load_fixture
from dp1.geometry import PointConfiguration, general_position

RECOVERED = {
    "ex7lines": (F(-1, 3), F(-1, 6), F(1, 2), F(-1)),
    "ex7lines2": (F(-17, 9), F(1883, 780), F(51, 52), F(-1)),
    "ex6lines": (F(11), F(-1), F(123), F(31)),
}


@pytest.mark.parametrize("name", sorted(RECOVERED))
def test_recover_and_regenerate(name):
    fx = load_fixture(name)
    p = factory.recover_params(fx.points)
    assert (p["c"], p["u"], p["v"], p["m"]) == RECOVERED[name]
    assert factory.derive_ab(*RECOVERED[name]) == (p["a"], p["b"])
    pc = factory.ParamConfig.from_cuvm(*RECOVERED[name])
    assert pc.points() == fx.points
    gen = factory.generate_configuration(pc)
    assert gen.concurrent


@pytest.mark.parametrize("bad", [(2, 3, 5, 1), (2, 3, 5, 0), (5, 3, 5, 2), (0, 3, 5, 2)])
def test_rejected_parameters(bad):
    with pytest.raises(factory.ParameterError):
        factory.ParamConfig.from_cuvm(*bad)


def test_recover_rejects_other_configurations():
    pts = list(load_fixture("ex7lines").points)
    pts[0], pts[2] = pts[2], pts[0]
    with pytest.raises(factory.ParameterError):
        factory.recover_params(pts)


rat = st.fractions(min_value=-30, max_value=30, max_denominator=12).filter(bool)


@settings(max_examples=60, deadline=None)
@given(rat, rat, rat, rat)
def test_normal_form_forces_concurrency(c, u, v, m):
    pc = factory._admissible(c, u, v, m)
    assume(pc is not None)
    trial = factory.check_params(pc)
    assert trial.six_concurrent and trial.c56_misses_p
    assert all(e["breaks_general_position"] for e in trial.excluded)


def test_excluded_values_break_general_position():
    c, u, v, m = RECOVERED["ex7lines"]
    for c_ex in factory.excluded_c_values(u, v, m):
        if c_ex is None:
            continue
        try:
            a, b = factory.derive_ab(c_ex, u, v, m)
            pts = factory.normal_form_points(a, b, c_ex, u, v, m)
        except (factory.ParameterError, ValueError):
            continue
        assert not general_position(pts)


def test_normal_form_check_small():
    r = factory.normal_form_check(trials=10, seed=3)
    assert r["trials"] == 10 and r["failures"] == 0


def test_small_rationals_order():
    vals = list(factory.small_rationals(2))
    assert vals == [F(-1), F(1), F(-1, 2), F(1, 2), F(-2), F(2)]
    assert len(set(factory.small_rationals(6))) == len(list(factory.small_rationals(6)))


def test_seventh_curve_candidates():
    labs = factory.seventh_curve_labels()
    assert len(labs) == 56 and "Q:2,6,7" in labs
    assert not set(factory.SIX_CURVES) & set(factory.seventh_curve_labels(("Line", "Cubic")))


@pytest.mark.parametrize("name", ["ex7lines", "ex7lines2"])
def test_search_finds_known_seventh_curve(name):
    c, u, v, m = RECOVERED[name]
    r = factory.search_seventh_curve(budget=None, max_candidates=1,
                                     fixed={"c": c, "u": u, "v": v, "m": m})
    assert r["tried"] == 1
    hit = [h for h in r["hits"] if h["curve"] == "Q:2,6,7"]
    assert len(hit) == 1
    assert hit[0]["verdict"]["verdict"] == "non-torsion"
    assert hit[0]["verdict"]["all_concurrent"]


def test_search_respects_budget():
    r = factory.search_seventh_curve(height=20, budget=0.0, seed=1)
    assert r["tried"] == 0 and r["hits"] == []
