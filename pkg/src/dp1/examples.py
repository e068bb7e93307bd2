"""Bundled example configurations and their stage-by-stage verification."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources

from . import fiber
from .geometry import (CurveSystemError, PlaneCurve, PointConfiguration, ProjPoint, curve_through,
                       general_position, proportional)

FIXTURES = ("ex7lines", "ex7lines2", "ex6lines")
REPORT_SCHEMA = "dp1-verify-example/1"


@dataclass
class ExampleFixture:
    name: str
    title: str
    points: list[ProjPoint]
    query_point: ProjPoint
    curve_labels: list[str]
    printed_curves: dict[str, PlaneCurve]
    expected: dict

    @classmethod
    def from_json(cls, data: dict) -> "ExampleFixture":
        pts = [ProjPoint(*[int(c) for c in p]) for p in data["points"]]
        if len(pts) != 8:
            raise ValueError("a fixture has exactly 8 points")
        return cls(data["name"], data.get("title", ""), pts,
                   ProjPoint(*[int(c) for c in data["query_point"]]),
                   list(data["curve_labels"]),
                   {k: PlaneCurve.parse(v) for k, v in data.get("printed_curves", {}).items()},
                   dict(data["expected"]))

    @property
    def config(self) -> PointConfiguration:
        return PointConfiguration(self.points)


def load_fixture(name_or_path: str) -> ExampleFixture:
    if name_or_path in FIXTURES:
        text = resources.files("dp1").joinpath("data", f"{name_or_path}.json").read_text()
    else:
        with open(name_or_path) as fh:
            text = fh.read()
    return ExampleFixture.from_json(json.loads(text))


@dataclass
class Stage:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"stage": self.name, "ok": self.ok} | self.detail


@dataclass
class ExampleReport:
    fixture: str
    stages: list[Stage]
    seconds: float

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.stages)

    def to_json(self) -> dict:
        return {"schema": REPORT_SCHEMA, "fixture": self.fixture, "ok": self.ok,
                "seconds": round(self.seconds, 3), "stages": [s.to_json() for s in self.stages]}


def verify_example(fx: ExampleFixture) -> ExampleReport:
    """general position, curve fits, concurrency, pencil, base point, fiber, torsion."""
    t0 = time.monotonic()
    exp = fx.expected
    stages = []
    cfg = fx.config
    gp = general_position(cfg)
    stages.append(Stage("general_position", bool(gp) == exp["general_position"],
                        {"value": bool(gp), "reason": gp.reason or None}))
    if not gp:
        return ExampleReport(fx.name, stages, time.monotonic() - t0)

    fits, through = {}, {}
    for lab in fx.curve_labels:
        try:
            c = curve_through(lab, cfg)
        except CurveSystemError as exc:
            fits[lab] = str(exc)
            continue
        fits[lab] = c
        through[lab] = c(fx.query_point) == 0
    printed = {lab: isinstance(fits.get(lab), PlaneCurve) and proportional(fits[lab], p)
               for lab, p in fx.printed_curves.items()}
    stages.append(Stage("curve_fits", all(printed.values())
                        and all(isinstance(c, PlaneCurve) for c in fits.values()),
                        {"fitted": {k: (str(v) if isinstance(v, PlaneCurve) else v)
                                    for k, v in fits.items()},
                         "matches_printed": printed}))
    want = set(exp["concurrent_curve_labels"])
    got = {lab for lab, ok in through.items() if ok}
    stages.append(Stage("concurrency", got == want,
                        {"point": fx.query_point.to_json(), "through_point": sorted(got)}))

    try:
        pencil = fiber.cubic_pencil(cfg)
        stages.append(Stage("pencil", True, {"F": str(pencil.F), "G": str(pencil.G)}))
        b = fiber.ninth_base_point(pencil, cfg)
    except fiber.FiberError as exc:
        stages.append(Stage("pencil", False, {"error": str(exc)}))
        return ExampleReport(fx.name, stages, time.monotonic() - t0)
    want_b = exp.get("base_point")
    stages.append(Stage("base_point", want_b is None or b == ProjPoint(*[int(c) for c in want_b]),
                        {"value": b.to_json(), "expected": want_b}))

    fib = fiber.fiber_cubic(cfg, fx.query_point, pencil)
    smooth = fiber.is_nonsingular(fib)
    stages.append(Stage("fiber", smooth, {"cubic": str(fib), "nonsingular": smooth}))
    if not smooth:
        return ExampleReport(fx.name, stages, time.monotonic() - t0)

    model = fiber.to_weierstrass(fib, b, seeds=cfg.points)
    img = model.map_point(fx.query_point)
    order = fiber.torsion_order(model.curve, img)
    plane_order = fiber.plane_torsion_order(fib, b, fx.query_point)
    verdict = "non-torsion" if order is None else f"torsion-{order}"
    want_v = exp.get("torsion_verdict")
    stages.append(Stage("torsion", (want_v is None or verdict == want_v) and plane_order == order,
                        {"verdict": verdict, "expected": want_v,
                         "plane_route_agrees": plane_order == order,
                         "weierstrass": model.curve.to_json(), "point_image": img.to_json()}))
    return ExampleReport(fx.name, stages, time.monotonic() - t0)
