"""Exact plane geometry over Q: points, forms, linear systems, general position.

Forms of degree d are coefficient vectors over the monomials x^i y^j z^k
(i+j+k = d) in graded-lex order with x > y > z, e.g. for cubics
x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, gcd, prod
from typing import Iterable, Sequence

from .e8 import CurveLabel
from .rational import RationalMatrix, as_rat, primitive, rank, rational_kernel


class CurveSystemError(ValueError):
    """A linear system of curves does not have the expected dimension."""


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    return tuple((i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1))


def _normalize(values: Sequence) -> tuple[int, ...]:
    v = primitive([as_rat(x) for x in values])
    for x in v:
        if x:
            if x < 0:
                v = [-y for y in v]
            break
    return tuple(v)


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, int, int]

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = tuple(coords[0])
        if len(coords) != 3:
            raise ValueError("a point of P^2 has three coordinates")
        if not any(as_rat(c) for c in coords):
            raise ValueError("(0:0:0) is not a point")
        object.__setattr__(self, "coords", _normalize(coords))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def __str__(self) -> str:
        return "({}:{}:{})".format(*self.coords)

    @classmethod
    def parse(cls, text: str) -> "ProjPoint":
        parts = re.split(r"[:,\s]+", text.strip().strip("()"))
        return cls(*[Fraction(p) for p in parts if p])

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def _mono_value(e, p) -> Fraction:
    return prod((Fraction(c) ** k for c, k in zip(p, e)), start=Fraction(1))


def _derivative_row(d: int, alpha: tuple[int, int, int], p) -> list[Fraction]:
    """Row expressing (d^alpha F)(p) in the coefficients of F."""
    row = []
    for e in monomials(d):
        if any(a > k for a, k in zip(alpha, e)):
            row.append(Fraction(0))
            continue
        f = prod(factorial(k) // factorial(k - a) for a, k in zip(alpha, e))
        rest = tuple(k - a for a, k in zip(alpha, e))
        row.append(f * _mono_value(rest, p))
    return row


def multiplicity_conditions(d: int, p, mult: int) -> list[list[Fraction]]:
    """Linear conditions for a degree-d form to vanish to order mult at p.

    In characteristic 0 the Euler relation makes the (mult-1)-th partials
    enough: 1 condition for a simple point, 3 for a double, 6 for a triple.
    """
    if mult <= 0:
        return []
    k = mult - 1
    return [_derivative_row(d, alpha, p) for alpha in monomials(k)]


@dataclass(frozen=True)
class PlaneCurve:
    degree: int
    coeffs: tuple[int, ...]

    def __init__(self, degree: int, coeffs: Sequence):
        if len(coeffs) != comb(degree + 2, 2):
            raise ValueError("coefficient vector has the wrong length")
        if not any(as_rat(c) for c in coeffs):
            raise ValueError("the zero form is not a curve")
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "coeffs", _normalize(coeffs))

    def __call__(self, p) -> Fraction:
        return sum((c * _mono_value(e, p) for c, e in zip(self.coeffs, monomials(self.degree))
                    if c), Fraction(0))

    def vanishes_at(self, p, mult: int = 1) -> bool:
        return all(sum((a * c for a, c in zip(row, self.coeffs)), Fraction(0)) == 0
                   for row in multiplicity_conditions(self.degree, p, mult))

    def gradient(self, p) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(sum((a * c for a, c in zip(_derivative_row(self.degree, alpha, p),
                                                   self.coeffs)), Fraction(0))
                     for alpha in monomials(1))

    def terms(self) -> dict:
        return {e: c for e, c in zip(monomials(self.degree), self.coeffs) if c}

    def __str__(self) -> str:
        out = []
        for e, c in self.terms().items():
            mono = "".join(v + (f"^{k}" if k > 1 else "") for v, k in zip("xyz", e) if k)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = mono if mag == 1 and mono else f"{mag}{mono}"
            out.append((sign, body))
        s = "".join(f" {sg} {b}" for sg, b in out).strip()
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [str(c) for c in self.coeffs], "text": str(self)}

    @classmethod
    def parse(cls, text: str) -> "PlaneCurve":
        """Parse a homogeneous polynomial such as ``26x^3 + 42x^2y - 9xyz``."""
        s = text.replace(" ", "").replace("*", "").split("=")[0]
        terms = re.findall(r"([+-]?)(\d*)((?:[xyz](?:\^\d+)?)*)", s)
        acc: dict = {}
        for sign, num, mono in terms:
            if not num and not mono:
                continue
            e = [0, 0, 0]
            for v, k in re.findall(r"([xyz])(?:\^(\d+))?", mono):
                e["xyz".index(v)] += int(k or 1)
            c = int(num or 1) * (-1 if sign == "-" else 1)
            acc[tuple(e)] = acc.get(tuple(e), 0) + c
        degrees = {sum(e) for e in acc}
        if len(degrees) != 1:
            raise ValueError("polynomial is not homogeneous")
        d = degrees.pop()
        return cls(d, [acc.get(e, 0) for e in monomials(d)])


def line_through(p, q) -> PlaneCurve:
    a, b = list(p), list(q)
    return PlaneCurve(1, [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                          a[0] * b[1] - a[1] * b[0]])


def solve_system(d: int, conditions: Sequence[tuple]) -> list[list[Fraction]]:
    """Basis of forms of degree d satisfying (point, multiplicity) conditions."""
    rows = []
    for p, mult in conditions:
        rows += multiplicity_conditions(d, p, mult)
    n = comb(d + 2, 2)
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return rational_kernel(RationalMatrix.from_rows(rows))


@dataclass(frozen=True)
class PointConfiguration:
    points: tuple[ProjPoint, ...]

    def __init__(self, points: Iterable):
        pts = tuple(p if isinstance(p, ProjPoint) else ProjPoint(*p) for p in points)
        if len(set(pts)) != len(pts):
            raise ValueError("configuration points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> ProjPoint:
        return self.points[i]

    def to_json(self) -> list:
        return [p.to_json() for p in self.points]


@dataclass(frozen=True)
class GeneralPosition:
    ok: bool
    reason: str = ""
    subset: tuple[int, ...] = ()
    curve: PlaneCurve | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"general_position": self.ok, "reason": self.reason or None,
                "subset": [i + 1 for i in self.subset],
                "curve": self.curve.to_json() if self.curve else None}


def _det3(a, b, c) -> Fraction:
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def general_position(cfg: PointConfiguration | Sequence) -> GeneralPosition:
    """No 3 on a line, no 6 on a conic, no 8 on a cubic singular at one of them."""
    pts = list(cfg.points if isinstance(cfg, PointConfiguration) else cfg)
    pts = [p if isinstance(p, ProjPoint) else ProjPoint(*p) for p in pts]
    if len(set(pts)) != len(pts):
        i, j = next((i, j) for i, j in combinations(range(len(pts)), 2) if pts[i] == pts[j])
        return GeneralPosition(False, "coincident points", (i, j))
    for s in combinations(range(len(pts)), 3):
        if _det3(*(pts[i] for i in s)) == 0:
            return GeneralPosition(False, "three points on a line", s,
                                   line_through(pts[s[0]], pts[s[1]]))
    if len(pts) >= 6:
        for s in combinations(range(len(pts)), 6):
            ker = solve_system(2, [(pts[i], 1) for i in s])
            if ker:
                return GeneralPosition(False, "six points on a conic", s, PlaneCurve(2, ker[0]))
    if len(pts) == 8:
        for i in range(8):
            ker = solve_system(3, [(p, 2 if k == i else 1) for k, p in enumerate(pts)])
            if ker:
                return GeneralPosition(False, "eight points on a cubic singular at one of them",
                                       tuple(range(8)), PlaneCurve(3, ker[0]))
    return GeneralPosition(True)


def curve_conditions(label: CurveLabel | str, cfg: PointConfiguration) -> tuple[int, list]:
    if isinstance(label, str):
        label = CurveLabel.parse(label)
    d, mult = label.multiplicities()
    return d, [(cfg[i], m) for i, m in enumerate(mult) if m > 0]


def curve_through(label: CurveLabel | str, cfg: PointConfiguration) -> PlaneCurve:
    """The plane model of an exceptional curve for the configuration."""
    d, conds = curve_conditions(label, cfg)
    if d == 0:
        raise ValueError("the classes E_i are not plane curves")
    ker = solve_system(d, conds)
    if len(ker) != 1:
        raise CurveSystemError(f"{label}: solution space has dimension {len(ker)}, expected 1")
    return PlaneCurve(d, ker[0])


def concurrent_at(curves: Iterable[PlaneCurve], p) -> bool:
    return all(c(p) == 0 for c in curves)


def proportional(a: PlaneCurve, b: PlaneCurve) -> bool:
    """Equality up to a scalar (normalized coefficient vectors agree up to sign)."""
    if a.degree != b.degree:
        return False
    return a.coeffs == b.coeffs or a.coeffs == tuple(-c for c in b.coeffs)


def transform(cfg_points: Sequence[ProjPoint], m: Sequence[Sequence[int]]) -> list[ProjPoint]:
    """Apply an invertible 3x3 matrix to every point."""
    return [ProjPoint(*[sum(Fraction(m[i][j]) * p.coords[j] for j in range(3))
                        for i in range(3)]) for p in cfg_points]


def is_invertible(m) -> bool:
    return rank(RationalMatrix.from_rows(m)) == 3


def integral_coords(p: ProjPoint) -> tuple[int, int, int]:
    g = 0
    for c in p.coords:
        g = gcd(g, int(c))
    return tuple(int(c) // g for c in p.coords)


def prop45_numeric_check(params=None, trials: int = 100, seed: int = 0, height: int = 50):
    """Randomized check that C_{5,6} misses P=(0:0:1) in the six-curve normal form.

    Thin wrapper so callers of plane-geometry need not know the factory.
    """
    from .factory import normal_form_check
    return normal_form_check(params=params, trials=trials, seed=seed, height=height)
