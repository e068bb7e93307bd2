from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from dp1 import fiber
from dp1.fiber import ECPoint, INFINITY, WeierstrassCurve, ec_add, ec_mul, ec_neg
from dp1.geometry import PlaneCurve, PointConfiguration, ProjPoint

EX28 = PointConfiguration([(0, 1, 1), (0, 14, 13), (1, 0, 1), (21, 0, 13), (1, 1, 1),
                           (6, 6, -1), (-2, 2, 1), (-3, 3, -1)])
EX210 = PointConfiguration([(0, 1, 1), (0, 3861, 1957), (1, 0, 1), (1188, 0, -19), (1, 1, 1),
                            (780, 780, 1883), (-52, 52, 51), (-9, 9, -17)])
Q = ProjPoint(0, 0, 1)
CUSPLESS = PlaneCurve.parse("y^2z - x^3 - z^3")  # y^2 = x^3 + 1


def test_pencil_and_ninth_base_point():
    pen = fiber.cubic_pencil(EX28)
    b = fiber.ninth_base_point(pen, EX28)
    assert b == ProjPoint(27, 68, 109)
    assert pen.F(b) == 0 and pen.G(b) == 0
    for p in EX28.points:
        assert pen.F(p) == 0 and pen.G(p) == 0


def test_fiber_through_point():
    fib = fiber.fiber_cubic(EX28, Q)
    assert fib(Q) == 0 and all(fib(p) == 0 for p in EX28.points)
    assert fib((27, 68, 109)) == 0
    assert fiber.is_nonsingular(fib)
    with pytest.raises(fiber.FiberError):
        fiber.fiber_cubic(EX28, EX28.points[0])
    with pytest.raises(fiber.FiberError):
        fiber.fiber_cubic(EX28, ProjPoint(27, 68, 109))


def test_singularity_detection():
    assert not fiber.is_nonsingular(PlaneCurve.parse("y^2z - x^3 - x^2z"))
    assert not fiber.is_nonsingular(PlaneCurve.parse("y^2z - x^3"))
    assert fiber.is_nonsingular(CUSPLESS)
    assert not fiber.is_nonsingular(CUSPLESS, modulus=3)
    assert fiber.is_nonsingular(CUSPLESS, modulus=5)


def test_known_discriminant_and_torsion():
    e37 = WeierstrassCurve(0, 0, 1, -1, 0)
    assert e37.discriminant == 37
    assert fiber.torsion_order(e37, ECPoint(Fraction(0), Fraction(0))) is None
    e = WeierstrassCurve(0, 0, 0, 0, 1)
    assert e.discriminant == -432
    assert fiber.torsion_order(e, ECPoint(Fraction(2), Fraction(3))) == 6
    assert fiber.torsion_order(e, ECPoint(Fraction(0), Fraction(1))) == 3
    p2 = ECPoint(Fraction(-1), Fraction(0))
    assert fiber.torsion_order(e, p2) == 2 and fiber.two_torsion_test(e, p2)
    assert not fiber.two_torsion_test(e, ECPoint(Fraction(2), Fraction(3)))
    with pytest.raises(ValueError):
        fiber.torsion_order(e, ECPoint(Fraction(1), Fraction(1)))


@st.composite
def curve_with_point(draw):
    a1, a2, a3, a4 = (Fraction(draw(st.integers(-4, 4))) for _ in range(4))
    x0, y0 = (Fraction(draw(st.integers(-5, 5))) for _ in range(2))
    a6 = y0 * y0 + a1 * x0 * y0 + a3 * y0 - x0 ** 3 - a2 * x0 * x0 - a4 * x0
    c = WeierstrassCurve(a1, a2, a3, a4, a6)
    assume(c.discriminant != 0)
    return c, ECPoint(x0, y0)


@settings(max_examples=1000, deadline=None)
@given(curve_with_point(), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_group_law_axioms(cp, i, j, k):
    c, p = cp
    a, b, d = ec_mul(c, i, p), ec_mul(c, j, p), ec_mul(c, k, p)
    for x in (a, b, d):
        assert c.contains(x)
    assert ec_add(c, ec_add(c, a, b), d) == ec_add(c, a, ec_add(c, b, d))
    assert ec_add(c, a, b) == ec_add(c, b, a)
    assert ec_add(c, a, INFINITY) == a
    assert ec_add(c, a, ec_neg(c, a)) == INFINITY
    assert ec_add(c, a, b) == ec_mul(c, i + j, p)


@settings(max_examples=200, deadline=None)
@given(curve_with_point(), st.fractions(min_value=-20, max_value=20, max_denominator=9))
def test_scaling_preserves_j_and_points(cp, u):
    c, p = cp
    assume(u != 0)
    s = c.scaled(u)
    assert s.j_invariant == c.j_invariant
    assert s.contains(fiber.scale_point(p, u))
    m, v = c.integral_model()
    assert m.j_invariant == c.j_invariant and m.is_integral


def test_plane_cubic_chords():
    # on y^2 = x^3 + 1 with the flex origin (0:1:0), (2,3) has order 6
    o = ProjPoint(0, 1, 0)
    t = fiber.third_point(CUSPLESS, (2, 3, 1), (2, 3, 1))
    assert fiber._cross(tuple(t), (0, -1, 1)) == (0, 0, 0)  # tangent y = 2x - 1 meets at (0, -1)
    assert fiber.plane_torsion_order(CUSPLESS, o, (2, 3, 1)) == 6
    assert fiber.plane_multiple(CUSPLESS, o, (2, 3, 1), 6) == o


@pytest.mark.parametrize("origin", [(0, 1, 0), (2, 3, 1), (-1, 0, 1), (0, 1, 1)])
def test_weierstrass_model_is_a_homomorphism(origin):
    pts = [(0, 1, 0), (2, 3, 1), (2, -3, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)]
    model = fiber.to_weierstrass(CUSPLESS, origin, seeds=pts)
    assert model.curve.j_invariant == 0
    for p in pts:
        img = model.map_point(p)
        assert model.curve.contains(img)
        assert fiber.torsion_order(model.curve, img) == fiber.plane_torsion_order(CUSPLESS, origin, p)
        for q in pts:
            r = fiber.chord_add(CUSPLESS, origin, p, q)
            assert ec_add(model.curve, img, model.map_point(q)) == model.map_point(r)


def test_first_example_model_homomorphism():
    pen = fiber.cubic_pencil(EX28)
    b = fiber.ninth_base_point(pen, EX28)
    fib = fiber.fiber_cubic(EX28, Q, pen)
    model = fiber.to_weierstrass(fib, b, seeds=EX28.points)
    assert not model.flex
    pts = list(EX28.points) + [Q]
    for p in pts:
        for q in pts[:4]:
            r = fiber.chord_add(fib, b, p, q)
            assert ec_add(model.curve, model.map_point(p), model.map_point(q)) == model.map_point(r)


@pytest.mark.parametrize("cfg", [EX28, EX210])
def test_examples_are_non_torsion(cfg):
    v = fiber.torsion_verdict(cfg, Q, ["L:1,2", "C:3,4", "Q:2,6,7"])
    assert v.general_position and v.fiber_nonsingular
    assert v.torsion_order is None and v.verdict == "non-torsion"
    assert all(c["through_point"] for c in v.concurrent_curves)
    assert v.weierstrass.discriminant != 0


def test_multiple_of_torsion_point():
    e = WeierstrassCurve(0, 0, 0, 0, 1)
    assert fiber.torsion_order(e, ec_mul(e, 5, ECPoint(Fraction(2), Fraction(3)))) == 6
    assert fiber.torsion_order(e, ec_mul(e, 2, ECPoint(Fraction(2), Fraction(3)))) == 3


def test_verdict_outside_general_position():
    cfg = PointConfiguration([(0, 0, 1), (1, 1, 1), (2, 2, 1), (5, 1, 1), (1, 5, 2), (3, 7, 1),
                              (2, 9, 5), (4, 1, 3)])
    v = fiber.torsion_verdict(cfg, ProjPoint(1, 2, 3))
    assert not v.general_position and v.verdict == "not-general-position"


def test_bad_primes_common_to_both_examples():
    a = set(fiber.bad_primes(EX28, Q)["all"])
    b = set(fiber.bad_primes(EX210, Q)["all"])
    assert a & b == {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}
