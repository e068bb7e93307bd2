"""The fiber through a point: pencil of cubics, ninth base point, Weierstrass model.

The fiber of Q on the elliptic surface is the cubic of the pencil through Q,
with origin the ninth base point B. It is brought to long Weierstrass form
over Q by a Riemann-Roch construction:

* origin not a flex: T is the tangent at O, O' its third point, l the
  tangent at O'. Then x = l/T has poles 2O, and y = Q/T^2 has poles 3O when
  the conic Q passes through O and is tangent to the cubic at O';
* origin a flex: x = l/T for a line l through O, y = l'/T for l' missing O.

The relation among 1, x, y, x^2, xy, y^2, x^3 modulo the cubic is found by
linear algebra and scaled to a monic model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import sympy

from .geometry import (PlaneCurve, PointConfiguration, ProjPoint, concurrent_at, curve_through,
                       general_position, monomials, solve_system)
from .rational import RationalMatrix, rational_kernel, rank

MAZUR_ORDERS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12)


class FiberError(ValueError):
    pass


class SingularFiber(FiberError):
    """The cubic through the point is singular, so the fiber is not elliptic."""


# -- homogeneous polynomials as {exponent: Fraction} ----------------------------

Poly = dict


def _poly(curve: PlaneCurve) -> Poly:
    return {e: Fraction(c) for e, c in zip(monomials(curve.degree), curve.coeffs) if c}


def _linear(v: Sequence) -> Poly:
    return {e: Fraction(c) for e, c in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), v) if c}


def _from_vector(d: int, v: Sequence) -> Poly:
    return {e: Fraction(c) for e, c in zip(monomials(d), v) if c}


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _pow(a: Poly, k: int) -> Poly:
    out: Poly = {(0, 0, 0): Fraction(1)}
    for _ in range(k):
        out = _mul(out, a)
    return out


def _eval(a: Poly, p) -> Fraction:
    x, y, z = (Fraction(c) for c in p)
    return sum((c * x ** e[0] * y ** e[1] * z ** e[2] for e, c in a.items()), Fraction(0))


def _degree(a: Poly) -> int:
    return sum(next(iter(a))) if a else 0


# -- pencil and base point -----------------------------------------------------

@dataclass(frozen=True)
class CubicPencil:
    F: PlaneCurve
    G: PlaneCurve

    def member(self, lam, mu) -> PlaneCurve:
        return PlaneCurve(3, [Fraction(lam) * f + Fraction(mu) * g
                              for f, g in zip(self.F.coeffs, self.G.coeffs)])


def cubic_pencil(cfg: PointConfiguration) -> CubicPencil:
    ker = solve_system(3, [(p, 1) for p in cfg.points])
    if len(ker) != 2:
        raise FiberError(f"cubics through the points form a space of dimension {len(ker)}, not 2")
    return CubicPencil(PlaneCurve(3, ker[0]), PlaneCurve(3, ker[1]))


# unimodular charts tried in turn; the first one that isolates B is used
_CHARTS = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (1, 1, 1)),
    ((1, 2, 0), (0, 1, 0), (1, 3, 1)),
    ((1, 0, 3), (2, 1, 0), (1, 1, 1)),
    ((1, 5, 0), (0, 1, 7), (2, 0, 1)),
    ((3, 1, 1), (1, 4, 1), (1, 1, 5)),
)


def _apply(m, p) -> tuple:
    return tuple(sum(Fraction(m[i][j]) * Fraction(p[j]) for j in range(3)) for i in range(3))


def _inverse3(m):
    a = sympy.Matrix(m).inv()
    return [[Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in a.row(i)]
            for i in range(3)]


def ninth_base_point(pencil: CubicPencil, cfg: PointConfiguration) -> ProjPoint:
    """The base point of the pencil other than the eight configuration points.

    Resultant in an affine chart: divide the degree-9 eliminant by the known
    x-roots, take the remaining linear factor, then the gcd in y.
    """
    x, y = sympy.symbols("x y")
    pts = list(cfg.points)
    for m in _CHARTS:
        minv = _inverse3(m)
        # new coordinates X = m * P; a form f(P) becomes f(minv * X)
        new_pts = [_apply(m, p) for p in pts]
        if any(q[2] == 0 for q in new_pts):
            continue
        xs = [q[0] / q[2] for q in new_pts]
        if len(set(xs)) != len(xs):
            continue
        polys = []
        for curve in (pencil.F, pencil.G):
            X = [sum(sympy.Rational(minv[i][j].numerator, minv[i][j].denominator) * v
                     for j, v in enumerate((x, y, 1))) for i in range(3)]
            expr = sum(c * X[0] ** e[0] * X[1] ** e[1] * X[2] ** e[2]
                       for e, c in zip(monomials(3), curve.coeffs) if c)
            polys.append(sympy.Poly(sympy.expand(expr), x, y, domain="QQ"))
        res = sympy.Poly(sympy.resultant(polys[0], polys[1], y), x, domain="QQ")
        if res.degree() != 9:
            continue
        known = sympy.Poly(1, x, domain="QQ")
        for xi in xs:
            known = known * sympy.Poly(x - sympy.Rational(xi.numerator, xi.denominator), x,
                                       domain="QQ")
        q, r = sympy.div(res, known)
        if not r.is_zero or q.degree() != 1:
            continue
        c1, c0 = q.all_coeffs()
        xb = -c0 / c1
        fy = [sympy.Poly(p.as_expr().subs(x, xb), y, domain="QQ") for p in polys]
        g = sympy.gcd(fy[0], fy[1])
        if g.degree() != 1:
            continue
        g1, g0 = g.all_coeffs()
        yb = -g0 / g1
        xf = Fraction(int(sympy.fraction(xb)[0]), int(sympy.fraction(xb)[1]))
        yf = Fraction(int(sympy.fraction(yb)[0]), int(sympy.fraction(yb)[1]))
        b = ProjPoint(*_apply(minv, (xf, yf, 1)))
        if b in pts or pencil.F(b) != 0 or pencil.G(b) != 0:
            continue
        return b
    raise FiberError("no chart isolates a rational ninth base point")


def fiber_cubic(cfg: PointConfiguration, q: ProjPoint, pencil: CubicPencil | None = None
                ) -> PlaneCurve:
    if q in cfg.points:
        raise FiberError("the point is one of the blown-up points")
    pencil = pencil or cubic_pencil(cfg)
    fq, gq = pencil.F(q), pencil.G(q)
    if fq == 0 and gq == 0:
        raise FiberError("the point is the ninth base point: every member passes through it")
    return pencil.member(gq, -fq)


def is_nonsingular(curve: PlaneCurve, modulus: int | None = None) -> bool:
    """No common zero of the three partials over the algebraic closure."""
    x, y, z = sympy.symbols("x y z")
    f = sum(c * x ** e[0] * y ** e[1] * z ** e[2]
            for e, c in zip(monomials(curve.degree), curve.coeffs) if c)
    parts = [sympy.diff(f, v) for v in (x, y, z)]
    if modulus is not None:
        parts = [sympy.Poly(p, x, y, z, modulus=modulus) for p in parts]
        parts = [p for p in parts if not p.is_zero]
        if not parts:
            return False
        gb = sympy.groebner(parts, x, y, z, modulus=modulus, order="grevlex")
    else:
        gb = sympy.groebner(parts, x, y, z, order="grevlex")
    # the partials have no common projective zero iff the ideal contains a power
    # of each variable (the saturated ideal is the unit ideal)
    lead = [sympy.Poly(g, x, y, z).monoms(order="grevlex")[0] for g in gb.exprs]
    for k in range(3):
        if not any(sum(mon) == mon[k] and mon[k] > 0 for mon in lead):
            return False
    return True


# -- Weierstrass curves and the group law ---------------------------------------

@dataclass(frozen=True)
class ECPoint:
    x: Fraction | None = None
    y: Fraction | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_json(self):
        return "infinity" if self.is_infinity else [str(self.x), str(self.y)]


INFINITY = ECPoint()


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for k in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, k, Fraction(getattr(self, k)))

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction | None:
        b2, b4, _, _ = self.b_invariants
        c4 = b2 * b2 - 24 * b4
        d = self.discriminant
        return c4 ** 3 / d if d else None

    def contains(self, p: ECPoint) -> bool:
        if p.is_infinity:
            return True
        x, y = p.x, p.y
        return (y * y + self.a1 * x * y + self.a3 * y
                == x ** 3 + self.a2 * x * x + self.a4 * x + self.a6)

    def scaled(self, u) -> "WeierstrassCurve":
        """The isomorphic model with a_i multiplied by u^i; points go (x, y) -> (u^2 x, u^3 y)."""
        u = Fraction(u)
        return WeierstrassCurve(self.a1 * u, self.a2 * u ** 2, self.a3 * u ** 3,
                                self.a4 * u ** 4, self.a6 * u ** 6)

    def integral_scale(self, small: int = 1000) -> Fraction:
        """A scale u shrinking the model at primes below ``small``.

        Exponents are chosen minimally so that the a_i are p-integral at those
        primes. Denominators with larger prime factors are left alone, so the
        result is integral exactly when every denominator is ``small``-smooth.
        """
        coeffs = [(i, a) for i, a in ((1, self.a1), (2, self.a2), (3, self.a3),
                                      (4, self.a4), (6, self.a6)) if a]
        u = Fraction(1)
        for p in sympy.primerange(2, small):
            e = max(-(_val(a, p) // i) for i, a in coeffs)
            if e:
                u *= Fraction(p) ** e
        return u

    @property
    def is_integral(self) -> bool:
        return all(getattr(self, k).denominator == 1 for k in ("a1", "a2", "a3", "a4", "a6"))

    def integral_model(self) -> tuple["WeierstrassCurve", Fraction]:
        u = self.integral_scale()
        return self.scaled(u), u

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("a1", "a2", "a3", "a4", "a6")} | {
            "discriminant": str(self.discriminant), "integral": self.is_integral}


def _val(a: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    v, n, d = 0, a.numerator, a.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def scale_point(p: ECPoint, u) -> ECPoint:
    if p.is_infinity:
        return p
    u = Fraction(u)
    return ECPoint(p.x * u * u, p.y * u ** 3)


def ec_neg(c: WeierstrassCurve, p: ECPoint) -> ECPoint:
    if p.is_infinity:
        return p
    return ECPoint(p.x, -p.y - c.a1 * p.x - c.a3)


def ec_add(c: WeierstrassCurve, p: ECPoint, q: ECPoint) -> ECPoint:
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    if p.x == q.x:
        if p.y + q.y + c.a1 * q.x + c.a3 == 0:
            return INFINITY
        lam = ((3 * p.x * p.x + 2 * c.a2 * p.x + c.a4 - c.a1 * p.y)
               / (2 * p.y + c.a1 * p.x + c.a3))
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    nu = p.y - lam * p.x
    x3 = lam * lam + c.a1 * lam - c.a2 - p.x - q.x
    y3 = -(lam + c.a1) * x3 - nu - c.a3
    return ECPoint(x3, y3)


def ec_mul(c: WeierstrassCurve, n: int, p: ECPoint) -> ECPoint:
    if n < 0:
        return ec_mul(c, -n, ec_neg(c, p))
    out, base = INFINITY, p
    while n:
        if n & 1:
            out = ec_add(c, out, base)
        base = ec_add(c, base, base)
        n >>= 1
    return out


def torsion_order(c: WeierstrassCurve, p: ECPoint) -> int | None:
    """Order of p if finite, else None.

    Over Q a torsion point has order in {1..10, 12} (Mazur), so checking
    multiples up to 12 decides torsion.
    """
    if not c.contains(p):
        raise ValueError("point is not on the curve")
    acc = INFINITY
    for n in range(1, 13):
        acc = ec_add(c, acc, p)
        if acc.is_infinity:
            if n not in MAZUR_ORDERS:
                raise AssertionError(f"order {n} is impossible over Q")
            return n
    return None


def two_torsion_test(c: WeierstrassCurve, p: ECPoint) -> bool:
    """2y + a1 x + a3 = 0, i.e. p = -p; cross-checked with doubling."""
    if p.is_infinity:
        return True
    flag = 2 * p.y + c.a1 * p.x + c.a3 == 0
    if flag != ec_add(c, p, p).is_infinity:
        raise AssertionError("tangent criterion disagrees with doubling")
    return flag


# -- plane cubic to Weierstrass --------------------------------------------------

def _line_param(F: PlaneCurve, p, w) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Coefficients of F(l p + m w) = A l^3 + B l^2 m + C l m^2 + D m^3."""
    def at(l, m):
        return F(tuple(l * Fraction(a) + m * Fraction(b) for a, b in zip(p, w)))
    A, D = at(1, 0), at(0, 1)
    s, t = at(1, 1), at(1, -1)
    B = (s - t) / 2 - D
    C = (s + t) / 2 - A
    return A, B, C, D


def third_point(F: PlaneCurve, p, q) -> ProjPoint:
    """Third intersection of the line pq (tangent if p = q) with the cubic."""
    p, q = ProjPoint(*p), ProjPoint(*q)
    if p == q:
        g = F.gradient(p)
        w = _other_point_on_line(g, p)
        A, B, C, D = _line_param(F, p, w)
        # A = B = 0 at a point of tangency: m^2 (C l + D m), third point l:m = (-D : C)
        if A or B:
            raise FiberError("point is not a smooth point of the curve")
        if C == 0 and D == 0:
            raise FiberError("tangent line is a component of the curve")
        return ProjPoint(*[-D * Fraction(a) + C * Fraction(b) for a, b in zip(p, w)])
    A, B, C, D = _line_param(F, p, q)
    if A or D:
        raise FiberError("points are not on the curve")
    if B == 0 and C == 0:
        raise FiberError("line is a component of the curve")
    # l m (B l + C m): third root (l:m) = (-C : B)
    return ProjPoint(*[-C * Fraction(a) + B * Fraction(b) for a, b in zip(p, q)])


def _other_point_on_line(line: Sequence, p) -> tuple:
    """A point on the line (given by its coefficients) different from p."""
    a, b, c = (Fraction(t) for t in line)
    for w in ((b, -a, 0), (c, 0, -a), (0, c, -b)):
        if any(w) and ProjPoint(*w) != ProjPoint(*p):
            return w
    raise FiberError("degenerate line")


def chord_add(F: PlaneCurve, origin, p, q) -> ProjPoint:
    """Group law on the plane cubic with the given origin."""
    r = third_point(F, p, q)
    return third_point(F, origin, r)


def plane_multiple(F: PlaneCurve, origin, p, n: int) -> ProjPoint:
    origin, acc = ProjPoint(*origin), ProjPoint(*origin)
    for _ in range(n):
        acc = chord_add(F, origin, acc, p)
    return acc


def plane_torsion_order(F: PlaneCurve, origin, p) -> int | None:
    """Order of p on the plane cubic with the given origin, by chords and tangents only."""
    origin, p = ProjPoint(*origin), ProjPoint(*p)
    acc = origin
    for n in range(1, 13):
        acc = chord_add(F, origin, acc, p)
        if acc == origin:
            return n
    return None


@dataclass
class WeierstrassModel:
    curve: WeierstrassCurve
    cubic: PlaneCurve
    origin: ProjPoint
    flex: bool
    _to: Callable

    def map_point(self, p) -> ECPoint:
        return self._to(ProjPoint(*p))


def _linear_relation(F: Poly, numerators: list[Poly]) -> list[Fraction]:
    """Coefficients c with sum c_k N_k = F * h for some form h."""
    d = _degree(numerators[0])
    hd = d - 3
    cols = [numerators[k] for k in range(len(numerators))]
    cols += [_mul(F, {e: Fraction(-1)}) for e in monomials(hd)]
    mons = monomials(d)
    rows = [[col.get(e, Fraction(0)) for col in cols] for e in mons]
    ker = rational_kernel(RationalMatrix.from_rows(rows))
    rel = [v[:len(numerators)] for v in ker if any(v[:len(numerators)])]
    if len(rel) != 1:
        raise FiberError(f"expected one Weierstrass relation, found {len(rel)}")
    return rel[0]


def to_weierstrass(cubic: PlaneCurve, origin: ProjPoint, seeds: Sequence = ()) -> WeierstrassModel:
    if cubic.degree != 3:
        raise ValueError("not a cubic")
    origin = ProjPoint(*origin)
    if cubic(origin) != 0:
        raise FiberError("origin is not on the cubic")
    grad = cubic.gradient(origin)
    if not any(grad):
        raise SingularFiber("cubic is singular at the origin")
    Fp = _poly(cubic)
    T = _linear(grad)
    o1 = third_point(cubic, origin, origin)
    flex = o1 == origin
    if flex:
        # l through the origin but not the tangent; l' not through the origin
        for cand in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            l_vec = _cross(origin, cand)
            if any(l_vec) and rank(RationalMatrix.from_rows([list(l_vec), list(grad)])) == 2:
                break
        l = _linear(l_vec)
        lp_vec = next(e for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
                      if sum(Fraction(a) * b for a, b in zip(e, origin)) != 0)
        lp = _linear(lp_vec)
        X_num, X_den = l, T
        Y_num, Y_den = lp, T
        nums = [_pow(T, 3), _mul(l, _pow(T, 2)), _mul(lp, _pow(T, 2)), _mul(_pow(l, 2), T),
                _mul(_mul(l, lp), T), _mul(_pow(lp, 2), T), _pow(l, 3)]
    else:
        g1 = cubic.gradient(o1)
        if not any(g1):
            raise SingularFiber("cubic is singular at the tangent point")
        l = _linear(g1)
        t_dir = _other_point_on_line(g1, o1)
        # conics Q with Q(O)=0, Q(O')=0 and Q tangent to the cubic at O'
        rows = [[Fraction(_eval({e: Fraction(1)}, origin)) for e in monomials(2)],
                [Fraction(_eval({e: Fraction(1)}, o1)) for e in monomials(2)],
                [sum(Fraction(t) * _eval(_d({e: Fraction(1)}, k), o1) for k, t in enumerate(t_dir))
                 for e in monomials(2)]]
        space = rational_kernel(RationalMatrix.from_rows(rows))
        T2 = _pow(T, 2)
        Tl = _mul(T, l)
        known = [[T2.get(e, Fraction(0)) for e in monomials(2)],
                 [Tl.get(e, Fraction(0)) for e in monomials(2)]]
        Q = None
        for v in space:
            if rank(RationalMatrix.from_rows(known + [list(v)])) == 3:
                Q = _from_vector(2, v)
                break
        if Q is None:
            raise FiberError("no suitable conic for the y-coordinate")
        X_num, X_den = l, T
        Y_num, Y_den = Q, T2
        nums = [_pow(T, 6), _mul(l, _pow(T, 5)), _mul(Q, _pow(T, 4)), _mul(_pow(l, 2), _pow(T, 4)),
                _mul(_mul(l, Q), _pow(T, 3)), _mul(_pow(Q, 2), _pow(T, 2)), _mul(_pow(l, 3), _pow(T, 3))]
    c0, c1, c2, c3, c4, c5, c6 = _linear_relation(Fp, nums)
    if c5 == 0 or c6 == 0:
        raise SingularFiber("degenerate relation: the cubic is not a smooth genus-one curve")
    # y^2 + A xy + C y = D x^3 + E x^2 + F x + G
    A, C = c4 / c5, c2 / c5
    D, E, Fc, G = -c6 / c5, -c3 / c5, -c1 / c5, -c0 / c5
    monic = WeierstrassCurve(A, E, C * D, Fc * D, G * D * D)
    if monic.discriminant == 0:
        raise SingularFiber("Weierstrass model has zero discriminant")
    curve, u = monic.integral_model()

    def raw(p):
        pt = ECPoint(D * _eval(X_num, p) / _eval(X_den, p), D * _eval(Y_num, p) / _eval(Y_den, p))
        return scale_point(pt, u)

    def to(p: ProjPoint) -> ECPoint:
        if cubic(p) != 0:
            raise ValueError(f"{p} is not on the cubic")
        if p == origin:
            return INFINITY
        if _eval(T, p) != 0:
            return raw(p)
        # p is the tangent point O'; on its tangent line 2O' + O'' = O', so O' = -O''
        o2 = third_point(cubic, o1, o1)
        if o2 != o1:
            return ec_neg(curve, to(o2))
        # O' is a flex: translate by an auxiliary rational point X, O' = (O' + X) - X
        for s in seeds:
            s = ProjPoint(*s)
            if s in (origin, o1) or cubic(s) != 0:
                continue
            shifted = chord_add(cubic, origin, p, s)
            if shifted != o1:
                return ec_add(curve, to(shifted), ec_neg(curve, to(s)))
        raise FiberError("tangent point is a flex and no auxiliary point was given")

    return WeierstrassModel(curve, cubic, origin, flex, to)


def _d(a: Poly, k: int) -> Poly:
    out: Poly = {}
    for e, c in a.items():
        if e[k]:
            f = list(e)
            f[k] -= 1
            out[tuple(f)] = out.get(tuple(f), 0) + c * e[k]
    return out


def _cross(a, b) -> tuple:
    a = [Fraction(t) for t in a]
    b = [Fraction(t) for t in b]
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


# -- end to end ------------------------------------------------------------------

@dataclass
class TorsionVerdict:
    general_position: bool
    concurrent_curves: list | None
    ninth_base_point: ProjPoint | None
    fiber: PlaneCurve | None
    fiber_nonsingular: bool | None
    weierstrass: WeierstrassCurve | None
    image: ECPoint | None
    torsion_order: int | None
    two_torsion: bool | None
    note: str = ""

    @property
    def verdict(self) -> str:
        if not self.general_position:
            return "not-general-position"
        if not self.fiber_nonsingular:
            return "singular-fiber"
        return "non-torsion" if self.torsion_order is None else f"torsion-{self.torsion_order}"

    def to_json(self) -> dict:
        return {
            "general_position": self.general_position,
            "concurrent_curves": self.concurrent_curves,
            "ninth_base_point": self.ninth_base_point.to_json() if self.ninth_base_point else None,
            "fiber": self.fiber.to_json() if self.fiber else None,
            "fiber_nonsingular": self.fiber_nonsingular,
            "weierstrass": self.weierstrass.to_json() if self.weierstrass else None,
            "point_image": self.image.to_json() if self.image else None,
            "torsion_order": self.torsion_order if self.torsion_order is not None else "non-torsion",
            "two_torsion": self.two_torsion,
            "verdict": self.verdict,
            "note": self.note or None,
        }


def torsion_verdict(cfg: PointConfiguration, q: ProjPoint, labels: Sequence[str] | None = None
                    ) -> TorsionVerdict:
    q = ProjPoint(*q)
    gp = general_position(cfg)
    concurrent = None
    if labels:
        concurrent = [{"curve": lab, "through_point": curve_through(lab, cfg)(q) == 0}
                      for lab in labels] if gp else None
    if not gp:
        return TorsionVerdict(False, concurrent, None, None, None, None, None, None, None, gp.reason)
    pencil = cubic_pencil(cfg)
    b = ninth_base_point(pencil, cfg)
    fib = fiber_cubic(cfg, q, pencil)
    if not is_nonsingular(fib):
        return TorsionVerdict(True, concurrent, b, fib, False, None, None, None, None)
    model = to_weierstrass(fib, b, seeds=cfg.points)
    img = model.map_point(q)
    order = torsion_order(model.curve, img)
    # independent route: the group law on the plane cubic itself
    if plane_torsion_order(fib, b, q) != order:
        raise AssertionError("plane and Weierstrass torsion orders disagree")
    return TorsionVerdict(True, concurrent, b, fib, True, model.curve, img, order,
                          two_torsion_test(model.curve, img))


def verify_configuration(cfg: PointConfiguration, q: ProjPoint, labels: Sequence[str]) -> dict:
    v = torsion_verdict(cfg, q, labels)
    out = v.to_json()
    out["all_concurrent"] = bool(v.concurrent_curves) and all(
        c["through_point"] for c in v.concurrent_curves)
    return out


def sample_points(cubic: PlaneCurve, seeds: Sequence[ProjPoint], limit: int = 12) -> list[ProjPoint]:
    """Rational points on the cubic obtained from seeds by chords and tangents."""
    pts = list(dict.fromkeys(ProjPoint(*p) for p in seeds))
    i = 0
    while len(pts) < limit and i < len(pts) ** 2:
        a, b = pts[i % len(pts)], pts[(i * 7 + 3) % len(pts)]
        i += 1
        try:
            r = third_point(cubic, a, b)
        except FiberError:
            continue
        if r not in pts:
            pts.append(r)
    return pts


def bad_primes(cfg: PointConfiguration, q: ProjPoint, limit: int = 10 ** 7) -> dict:
    """Primes where the points leave general position or the fiber is singular.

    Candidates are the primes dividing the general-position determinants and
    the discriminant of the Weierstrass model; each candidate is then decided
    by reducing the plane data mod p. Factors above ``limit`` are not split.
    """
    from itertools import combinations
    from .geometry import integral_coords
    pts = [integral_coords(p) for p in cfg.points]
    dets = []
    for s in combinations(range(8), 3):
        dets.append(sympy.Matrix([pts[i] for i in s]).det())
    for s in combinations(range(8), 6):
        rows = [[a * a, a * b, a * c, b * b, b * c, c * c] for a, b, c in (pts[i] for i in s)]
        dets.append(sympy.Matrix(rows).det())
    for i in range(8):
        rows = []
        for k, p in enumerate(pts):
            for r in (multiplicity_rows(p, 2) if k == i else multiplicity_rows(p, 1)):
                rows.append(r)
        dets.append(sympy.Matrix(rows).det() if len(rows) == 10 else 0)
    gp_primes: set = set()
    for d in dets:
        if d:
            gp_primes |= set(sympy.factorint(abs(int(d)), limit=limit))
    v = torsion_verdict(cfg, q)
    cand = set()
    if v.weierstrass is not None:
        disc = v.weierstrass.discriminant
        for part in (disc.numerator, disc.denominator):
            cand |= set(sympy.factorint(abs(part), limit=limit))
    cand |= {2, 3}
    fib = v.fiber
    sing = sorted(p for p in cand if sympy.isprime(p) and fib is not None
                  and not is_nonsingular(fib, modulus=p))
    gp = sorted(p for p in gp_primes if sympy.isprime(p))
    return {"general_position_fails": gp, "fiber_singular": sing,
            "all": sorted(set(gp) | set(sing))}


def multiplicity_rows(p, mult):
    from .geometry import multiplicity_conditions
    return [[int(x) for x in row] for row in multiplicity_conditions(3, p, mult)]
