"""Parametrized configurations with six exceptional curves through (0:0:1).

Normal form: P1=(0:1:1), P2=(0:1:a), P3=(1:0:1), P4=(1:0:b), P5=(1:1:1),
P6=(1:1:u), P7=(m:1:v), P8=(m:1:c). Then L_{1,2}, L_{3,4}, L_{5,6}, L_{7,8}
are x=0, y=0, x=y, x=my, and choosing a, b as below puts C_{1,2} and C_{3,4}
through P=(0:0:1) as well.
"""

from __future__ import annotations

import random
import time
from itertools import product
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import e8
from .geometry import (CurveSystemError, PointConfiguration, ProjPoint, concurrent_at,
                       curve_through, general_position)

ORIGIN = ProjPoint(0, 0, 1)
SIX_CURVES = ("L:1,2", "L:3,4", "L:5,6", "L:7,8", "C:1,2", "C:3,4")


class ParameterError(ValueError):
    pass


def inequalities(c, u, v, m) -> dict[str, Fraction]:
    """The five quantities that must be nonzero for C_{5,6} to be forced off P."""
    return {
        "uvm-um-v^2-vm+2v+m-1": u * v * m - u * m - v * v - v * m + 2 * v + m - 1,
        "b-denominator": c * v - c * m - c + u * m * m - v * m - v - m * m + 2 * m + 1,
        "a-denominator": c * v - c * m - c + u - v * m - v + m * m + 2 * m - 1,
        "v-m-1": v - m - 1,
        "uv-u-3v+m+3": u * v - u - 3 * v + m + 3,
    }


def derive_ab(c, u, v, m) -> tuple[Fraction, Fraction]:
    c, u, v, m = (Fraction(x) for x in (c, u, v, m))
    bden = c * v - c * m - c + u * m * m - v * m - v - m * m + 2 * m + 1
    aden = c * v - c * m - c + u - v * m - v + m * m + 2 * m - 1
    if bden == 0 or aden == 0:
        raise ParameterError("a or b is undefined for these parameters (zero denominator)")
    b = -(-c * u * v + c * u + 2 * c * v - 2 * c + u * v - u - 2 * v + 2) / bden
    a = -(-c * u * v + c * u * m + 2 * c * v - 2 * c * m + u * v * m - u * m * m
          - 2 * v * m + 2 * m * m) / aden
    return a, b


def excluded_c_values(u, v, m) -> tuple[Fraction | None, Fraction | None]:
    """The two values of c for which C_{5,6} would pass through P."""
    u, v, m = (Fraction(x) for x in (u, v, m))
    d1 = v - m - 1
    d2 = u * v - u - 3 * v + m + 3
    c1 = -(u * m - v * m - v + m * m + 1) / d1 if d1 else None
    c2 = -(-u * v - u * m * m + u + v * m + 3 * v + m * m - 2 * m - 3) / d2 if d2 else None
    return c1, c2


@dataclass(frozen=True)
class ParamConfig:
    c: Fraction
    u: Fraction
    v: Fraction
    m: Fraction
    a: Fraction
    b: Fraction

    @classmethod
    def from_cuvm(cls, c, u, v, m) -> "ParamConfig":
        c, u, v, m = (Fraction(x) for x in (c, u, v, m))
        if m in (0, 1):
            raise ParameterError("m must differ from 0 and 1 (else L_{7,8} repeats a line"
                                 " or P5, P6, P7 are aligned)")
        if 0 in (c, u, v):
            raise ParameterError("c, u, v must be nonzero")
        if c == v:
            raise ParameterError("c = v makes P7 = P8")
        a, b = derive_ab(c, u, v, m)
        if a == 0 or b == 0:
            raise ParameterError("derived a or b is zero")
        return cls(c, u, v, m, a, b)

    def points(self) -> list[ProjPoint]:
        return normal_form_points(self.a, self.b, self.c, self.u, self.v, self.m)

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("c", "u", "v", "m", "a", "b")}


def normal_form_points(a, b, c, u, v, m) -> list[ProjPoint]:
    return [ProjPoint(0, 1, 1), ProjPoint(0, 1, a), ProjPoint(1, 0, 1), ProjPoint(1, 0, b),
            ProjPoint(1, 1, 1), ProjPoint(1, 1, u), ProjPoint(m, 1, v), ProjPoint(m, 1, c)]


def recover_params(points: Sequence[ProjPoint]) -> dict[str, Fraction]:
    """Read a, b, c, u, v, m off a configuration already in normal form."""
    p = [q if isinstance(q, ProjPoint) else ProjPoint(*q) for q in points]
    fixed = {0: ProjPoint(0, 1, 1), 2: ProjPoint(1, 0, 1), 4: ProjPoint(1, 1, 1)}
    for i, q in fixed.items():
        if p[i] != q:
            raise ParameterError(f"P{i + 1} is {p[i]}, not {q}: not in normal form")
    x = [tuple(Fraction(t) for t in q.coords) for q in p]
    if x[1][0] or x[3][1] or x[5][0] != x[5][1] or x[6][1] == 0 or x[7][1] == 0:
        raise ParameterError("configuration is not in normal form")
    m = x[6][0] / x[6][1]
    if x[7][0] / x[7][1] != m:
        raise ParameterError("P7 and P8 are not on one line through (0:0:1)")
    return {"a": x[1][2] / x[1][1], "b": x[3][2] / x[3][0], "u": x[5][2] / x[5][0],
            "m": m, "v": x[6][2] / x[6][1], "c": x[7][2] / x[7][1]}


@dataclass
class GeneratedConfiguration:
    params: ParamConfig
    config: PointConfiguration
    concurrent: bool

    def to_json(self) -> dict:
        return {"params": self.params.to_json(), "points": self.config.to_json(),
                "six_curves_concurrent": self.concurrent}


def generate_configuration(params: ParamConfig) -> GeneratedConfiguration:
    pts = params.points()
    gp = general_position(pts)
    if not gp:
        raise ParameterError(f"not in general position: {gp.reason} "
                             f"(points {[i + 1 for i in gp.subset]})")
    cfg = PointConfiguration(pts)
    curves = [curve_through(lab, cfg) for lab in SIX_CURVES]
    return GeneratedConfiguration(params, cfg, concurrent_at(curves, ORIGIN))


def passes_through(label: str, cfg: PointConfiguration, p: ProjPoint = ORIGIN) -> bool:
    """Whether the (unique) curve of this label passes through p."""
    return curve_through(label, cfg)(p) == 0


def small_rationals(height: int) -> Iterator[Fraction]:
    """Nonzero rationals p/q in order of height max(|p|, q), then size."""
    seen = set()
    for h in range(1, height + 1):
        batch = []
        for q in range(1, h + 1):
            for p in range(-h, h + 1):
                if max(abs(p), q) != h or p == 0:
                    continue
                f = Fraction(p, q)
                if f not in seen:
                    seen.add(f)
                    batch.append(f)
        yield from sorted(batch, key=lambda f: (abs(f), f))


def random_rational(rng: random.Random, height: int) -> Fraction:
    while True:
        f = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if f:
            return f


def _admissible(c, u, v, m) -> ParamConfig | None:
    if any(x == 0 for x in inequalities(c, u, v, m).values()):
        return None
    try:
        pc = ParamConfig.from_cuvm(c, u, v, m)
    except ParameterError:
        return None
    if not general_position(pc.points()):
        return None
    return pc


@dataclass
class NormalFormTrial:
    params: ParamConfig
    six_concurrent: bool
    c56_misses_p: bool
    excluded: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.six_concurrent and self.c56_misses_p
                and all(e["breaks_general_position"] for e in self.excluded))

    def to_json(self) -> dict:
        return {"params": self.params.to_json(), "six_concurrent": self.six_concurrent,
                "c56_misses_p": self.c56_misses_p, "excluded": self.excluded, "ok": self.ok}


def _excluded_record(c_ex, u, v, m) -> dict:
    rec = {"c": str(c_ex) if c_ex is not None else None}
    if c_ex is None:
        rec.update(breaks_general_position=True, reason="value undefined")
        return rec
    try:
        a, b = derive_ab(c_ex, u, v, m)
    except ParameterError:
        rec.update(breaks_general_position=True, reason="a or b undefined")
        return rec
    try:
        pts = normal_form_points(a, b, c_ex, u, v, m)
    except ValueError:
        rec.update(breaks_general_position=True, reason="degenerate point")
        return rec
    gp = general_position(pts)
    rec.update(breaks_general_position=not gp.ok, reason=gp.reason,
               subset=[i + 1 for i in gp.subset])
    return rec


def check_params(pc: ParamConfig) -> NormalFormTrial:
    cfg = PointConfiguration(pc.points())
    six = concurrent_at([curve_through(lab, cfg) for lab in SIX_CURVES], ORIGIN)
    misses = curve_through("C:5,6", cfg)(ORIGIN) != 0
    excl = [_excluded_record(c_ex, pc.u, pc.v, pc.m) for c_ex in excluded_c_values(pc.u, pc.v, pc.m)]
    return NormalFormTrial(pc, six, misses, excl)


def normal_form_check(params=None, trials: int = 100, seed: int = 0, height: int = 50) -> dict:
    """Random admissible draws: six curves meet at P, C_{5,6} misses P,
    and both excluded values of c break general position."""
    out = []
    rejected = 0
    if params is not None:
        pc = _admissible(*[Fraction(x) for x in params])
        if pc is None:
            raise ParameterError("parameters violate a precondition")
        out.append(check_params(pc))
    else:
        rng = random.Random(seed)
        while len(out) < trials:
            c, u, v, m = (random_rational(rng, height) for _ in range(4))
            pc = _admissible(c, u, v, m)
            if pc is None:
                rejected += 1
                continue
            out.append(check_params(pc))
    return {"trials": len(out), "rejected_draws": rejected,
            "failures": sum(not t.ok for t in out),
            "c56_through_p": sum(not t.c56_misses_p for t in out),
            "excluded_kept_general_position": sum(
                not e["breaks_general_position"] for t in out for e in t.excluded),
            "records": [t.to_json() for t in out]}


def seventh_curve_labels(families: Sequence[str] = ("Quartic",)) -> list[str]:
    skip = set(SIX_CURVES)
    out = []
    for lab in e8.labels():
        if lab.family in families and lab.key not in skip:
            out.append(lab.key)
    return out


@dataclass
class SearchHit:
    params: ParamConfig
    label: str
    verdict: dict

    def to_json(self) -> dict:
        return {"params": self.params.to_json(), "curve": self.label, "verdict": self.verdict}


def _candidates(height: int, seed: int | None) -> Iterator[tuple]:
    if seed is None:
        vals = list(small_rationals(height))
        # 4-tuples by the largest index used, so small heights come first
        for top in range(len(vals)):
            for tup in product(range(top + 1), repeat=4):
                if max(tup) == top:
                    yield tuple(vals[i] for i in tup)
    else:
        rng = random.Random(seed)
        while True:
            yield tuple(random_rational(rng, height) for _ in range(4))


def search_seventh_curve(height: int = 200, budget: float | None = 60.0, seed: int | None = 0,
                         families: Sequence[str] = ("Quartic",), max_candidates: int | None = None,
                         fixed: dict | None = None, verify: bool = True) -> dict:
    """Look for parameters where a seventh exceptional curve passes through P.

    seed=None walks parameters in height order; an integer seed draws at
    random. ``fixed`` pins some of c, u, v, m. Every hit is re-verified and
    gets a torsion verdict for P on its fiber.
    """
    from .fiber import verify_configuration
    start = time.monotonic()
    labels = seventh_curve_labels(families)
    hits, tried = [], 0
    fixed = {k: Fraction(v) for k, v in (fixed or {}).items()}
    for cand in _candidates(height, seed):
        if budget is not None and time.monotonic() - start > budget:
            break
        if max_candidates is not None and tried >= max_candidates:
            break
        c, u, v, m = (fixed.get(k, x) for k, x in zip("cuvm", cand))
        pc = _admissible(c, u, v, m)
        if pc is None:
            continue
        tried += 1
        cfg = PointConfiguration(pc.points())
        for lab in labels:
            try:
                through = passes_through(lab, cfg)
            except CurveSystemError:
                continue
            if through:
                verdict = verify_configuration(cfg, ORIGIN, list(SIX_CURVES) + [lab]) if verify else {}
                hits.append(SearchHit(pc, lab, verdict))
    hits.sort(key=lambda h: (h.label, h.params.to_json()["c"], str(h.params)))
    return {"tried": tried, "elapsed": round(time.monotonic() - start, 3),
            "hits": [h.to_json() for h in hits]}
