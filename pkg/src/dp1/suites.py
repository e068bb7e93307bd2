"""Named check suites with machine-readable pass/fail reports."""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import e8, relations, weyl
from .cliques import common_neighbors, count_cliques, default_anchor

SUITES = ("counts", "kernels", "orbits", "examples", "properties")
REPORT_SCHEMA = "dp1-suite/1"

# figure numbers whose cliques force torsion
FORCING_TYPES = frozenset({9, 16, 17, 18, 20, 21, 22, 23} | set(range(24, 48)))

TABLE_KERNEL_DIMS = {**{f"alpha{i}": (2 if i <= 5 else 1) for i in range(1, 12)},
                     **{f"beta{i}": 2 for i in range(1, 7)}, "gamma": 4}


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"check": self.name, "passed": self.passed, "seconds": round(self.seconds, 3),
                "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"schema": REPORT_SCHEMA, "suite": self.suite, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


def _timed(name: str, fn: Callable[[], tuple[bool, dict]]) -> Check:
    t = time.monotonic()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failed check
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return Check(name, bool(ok), detail, time.monotonic() - t)


# -- counts --------------------------------------------------------------------

def check_class_counts():
    hist = e8.family_sizes()
    got = tuple(hist[f] for f in e8.FAMILIES[:7])
    return len(e8.classes()) == 240 and got == (8, 28, 56, 56, 56, 28, 8), {
        "classes": len(e8.classes()), "histogram": hist}


def check_neighbor_count():
    n = len(common_neighbors(default_anchor(), (1, 2)))
    return n == 136, {"common_neighbors": n}


def check_clique_count(threads=None):
    n = count_cliques((1, 2), 8, default_anchor(), threads)
    return n == 8963624, {"anchored_size8_cliques": n}


# -- kernels -------------------------------------------------------------------

def _maximal_reps(cache={}):
    if "reps" not in cache:
        from .orbits import classify_maximal_cliques
        cache["reps"] = classify_maximal_cliques(9)
    return cache["reps"]


def check_maximal_orbits():
    reps = _maximal_reps()
    hist = dict(sorted(Counter(o.size for o in reps).items()))
    return len(reps) == 18 and hist == {9: 11, 10: 6, 12: 1}, {
        "orbits": len(reps), "size_histogram": hist}


def check_kernel_table():
    reps = _maximal_reps()
    assign = relations.table_assignment([o.representative for o in reps])
    rows, ok = [], len(assign) == len(reps) == 18
    for i, o in enumerate(reps):
        name = assign[i]
        basis = relations.kernel_lattice(o.representative).basis
        pi = relations.match_lattice_up_to_permutation(basis, relations.TABLE1[name])
        good = pi is not None and len(basis) == TABLE_KERNEL_DIMS[name]
        ok &= good
        rows.append({"representative": i + 1, "row": name, "kernel_rank": len(basis),
                     "permutation": list(pi) if pi else None})
    ok &= sorted(assign.values()) == sorted(TABLE_KERNEL_DIMS)
    return ok, {"matches": rows}


def check_subset_forcing():
    fails, cases = [], 0
    from math import comb
    for o in _maximal_reps():
        n = o.size
        cases += sum(comb(n, k) for k in range(9, n + 1))
        fails += relations.subsets_forcing_failures(o.representative, 9)
    return not fails, {"subsets": cases, "failures": len(fails)}


# -- orbits --------------------------------------------------------------------

def _size8(cache={}, **kw):
    key = tuple(sorted(kw.items()))
    if key not in cache:
        from .orbits import classify_size8_orbits
        cache[key] = classify_size8_orbits(**kw)
    return cache[key]


def check_size8_orbits(checkpoint=None, resume=False, threads=None):
    res = _size8(checkpoint=checkpoint, resume=resume, threads=threads)
    return (res.status == "complete" and len(res.orbits) == 47 and res.type_count == 45
            and res.buckets >= 45), {"orbits": len(res.orbits), "types": res.type_count,
                                     "invariant_buckets": res.buckets}


def check_forcing_split(checkpoint=None, resume=False, threads=None):
    res = _size8(checkpoint=checkpoint, resume=resume, threads=threads)
    succeed = {o.figure_id for o in res.orbits
               if relations.torsion_forcing_vector(o.representative) is not None}
    fail = {o.figure_id for o in res.orbits} - succeed
    ok = succeed == FORCING_TYPES and fail == set(range(1, 48)) - FORCING_TYPES
    return ok, {"forcing": sorted(succeed), "not_forcing": sorted(fail)}


def check_ngon_identity(checkpoint=None, resume=False, threads=None):
    res = _size8(checkpoint=checkpoint, resume=resume, threads=threads)
    reps = [o.representative for o in res.orbits] + [o.representative for o in _maximal_reps()]
    with_ngon, lengths = 0, Counter()
    for r in reps:
        try:
            n = relations.ngon_relation(r)  # asserts the zero self-pairing
        except relations.NoNGonError:
            continue
        with_ngon += 1
        lengths[n] += 1
    return with_ngon > 0, {"representatives": len(reps), "with_ngon": with_ngon,
                           "ngon_lengths": dict(sorted(lengths.items()))}


# -- examples ------------------------------------------------------------------

def check_fixture(name):
    from .examples import load_fixture, verify_example
    rep = verify_example(load_fixture(name))
    return rep.ok, rep.to_json()


def check_normal_form(trials=100, seed=0):
    from .factory import normal_form_check
    r = normal_form_check(trials=trials, seed=seed)
    return (r["trials"] == trials and r["c56_through_p"] == 0
            and r["excluded_kept_general_position"] == 0), {
        k: v for k, v in r.items() if k != "records"}


# -- properties ----------------------------------------------------------------

def check_group_law(cases=1000, seed=0):
    """Associativity, commutativity, identity and inverses on multiples of a generator.

    The curve y^2 + y = x^3 - x has rank 1 with generator (0, 0).
    """
    from .fiber import INFINITY, ECPoint, WeierstrassCurve, ec_add, ec_mul, ec_neg
    rng = random.Random(seed)
    c = WeierstrassCurve(0, 0, 1, -1, 0)
    g = ECPoint(Fraction(0), Fraction(0))
    bad = 0
    for _ in range(cases):
        a, b, d = (ec_mul(c, rng.randint(-6, 6), g) for _ in range(3))
        lhs = ec_add(c, ec_add(c, a, b), d)
        rhs = ec_add(c, a, ec_add(c, b, d))
        ok = (lhs == rhs and ec_add(c, a, b) == ec_add(c, b, a) and ec_add(c, a, INFINITY) == a
              and ec_add(c, a, ec_neg(c, a)).is_infinity and c.contains(lhs))
        bad += not ok
    return bad == 0, {"cases": cases, "failures": bad}


def check_lattice_roundtrips(cases=300, seed=0):
    from .rational import RationalMatrix, hermite_normal_form, integer_kernel, lattice_equal
    rng = random.Random(seed)
    bad = 0
    for _ in range(cases):
        r, n = rng.randint(1, 5), rng.randint(2, 7)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(r)]
        k = integer_kernel(RationalMatrix.from_rows(rows))
        h = hermite_normal_form(k.basis, n)
        ok = lattice_equal(h.basis, k.basis, n) and hermite_normal_form(h.basis, n).basis == h.basis
        ok &= all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows for v in k.basis)
        bad += not ok
    return bad == 0, {"cases": cases, "failures": bad}


def check_weyl_weights(cases=1000, seed=0):
    import numpy as np
    rng = random.Random(seed)
    t = e8.intersection_table()
    gens = weyl.weyl_generators()
    bad = 0
    for _ in range(cases):
        sub = rng.sample(range(240), rng.randint(2, 12))
        g = gens[rng.randrange(len(gens))]
        img = [int(g[i]) for i in sub]
        bad += not np.array_equal(t[np.ix_(sub, sub)], t[np.ix_(img, img)])
    return bad == 0, {"cases": cases, "failures": bad}


def run_suite(name: str, **opts) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    orb = {k: opts.get(k) for k in ("checkpoint", "resume", "threads")}
    orb["resume"] = bool(orb["resume"])
    table: dict[str, list[tuple[str, Callable]]] = {
        "counts": [("class_counts", check_class_counts),
                   ("neighbor_count", check_neighbor_count),
                   ("clique_count", lambda: check_clique_count(opts.get("threads")))],
        "kernels": [("maximal_orbits", check_maximal_orbits),
                    ("kernel_table", check_kernel_table),
                    ("subset_forcing", check_subset_forcing)],
        "orbits": [("size8_orbits", lambda: check_size8_orbits(**orb)),
                   ("forcing_split", lambda: check_forcing_split(**orb)),
                   ("ngon_identity", lambda: check_ngon_identity(**orb))],
        "examples": [(f"fixture_{n}", (lambda n=n: check_fixture(n)))
                     for n in ("ex7lines", "ex7lines2", "ex6lines")]
                    + [("normal_form", check_normal_form)],
        "properties": [("group_law", check_group_law),
                       ("lattice_roundtrips", check_lattice_roundtrips),
                       ("weyl_weights", check_weyl_weights)],
    }
    return SuiteReport(name, [_timed(n, fn) for n, fn in table[name]])
