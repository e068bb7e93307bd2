"""The 240 exceptional classes of a degree-1 del Pezzo surface and their pairings.

A class ``d*L - sum(m_i * E_i)`` is stored as ``PicClass(d, m)``.  The
enumeration order is fixed::

    E_1..E_8                       (indices   0..7)
    lines   L_{i,j},  i<j          (indices   8..35)
    conics  through 5 points       (indices  36..91, by the 5-subset)
    cubics  C_{i,j},  i != j       (indices  92..147, double at i, missing j)
    quartics Q_{i,j,k}             (indices 148..203, double at i,j,k)
    quintics                        (indices 204..231, by the two simple points)
    sextics                         (indices 232..239, by the triple point)

with lexicographic order inside each family.  Point labels are 1-based, as
in the usual notation; Python indices of classes are 0-based.

Roots of E8 are represented by their owner class e (root = e + K).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

FAMILIES = ("E", "Line", "Conic", "Cubic", "Quartic", "Quintic", "Sextic")
POINTS = range(1, 9)


@dataclass(frozen=True)
class CurveLabel:
    family: str
    indices: tuple

    def __str__(self) -> str:
        short = {"E": "E", "Line": "L", "Conic": "Con", "Cubic": "C",
                 "Quartic": "Q", "Quintic": "Qui", "Sextic": "S"}[self.family]
        return f"{short}_{{{','.join(map(str, self.indices))}}}"

    @property
    def key(self) -> str:
        """Short parseable form such as ``C:1,2``."""
        short = {"E": "E", "Line": "L", "Conic": "Con", "Cubic": "C",
                 "Quartic": "Q", "Quintic": "Qui", "Sextic": "S"}[self.family]
        return f"{short}:{','.join(map(str, self.indices))}"

    def multiplicities(self) -> tuple[int, tuple[int, ...]]:
        """Degree and the multiplicity at each of the 8 points."""
        f, idx = self.family, self.indices
        if f == "E":
            return 0, tuple(-1 if p == idx[0] else 0 for p in POINTS)
        if f == "Line":
            return 1, tuple(int(p in idx) for p in POINTS)
        if f == "Conic":
            return 2, tuple(int(p in idx) for p in POINTS)
        if f == "Cubic":
            i, j = idx
            return 3, tuple(2 if p == i else 0 if p == j else 1 for p in POINTS)
        if f == "Quartic":
            return 4, tuple(2 if p in idx else 1 for p in POINTS)
        if f == "Quintic":
            return 5, tuple(1 if p in idx else 2 for p in POINTS)
        if f == "Sextic":
            return 6, tuple(3 if p == idx[0] else 2 for p in POINTS)
        raise ValueError(f"unknown family {f!r}")

    @classmethod
    def parse(cls, text: str) -> "CurveLabel":
        """Parse ``"C:1,2"``, ``"L:5,6"``, ``"E:3"``, ``"Q:2,6,7"`` and the like."""
        head, _, tail = text.partition(":")
        aliases = {"E": "E", "L": "Line", "LINE": "Line", "CON": "Conic",
                   "CONIC": "Conic", "C": "Cubic", "CUBIC": "Cubic",
                   "Q": "Quartic", "QUARTIC": "Quartic", "QUI": "Quintic",
                   "QUINTIC": "Quintic", "S": "Sextic", "SEXTIC": "Sextic"}
        fam = aliases.get(head.strip().upper())
        if fam is None:
            raise ValueError(f"unknown curve family in {text!r}")
        idx = tuple(int(t) for t in tail.split(",") if t.strip())
        label = cls(fam, idx)
        if label not in label_index():
            raise ValueError(f"no exceptional curve {text!r}")
        return label


@dataclass(frozen=True)
class PicClass:
    d: int
    m: tuple

    def vector(self) -> tuple[int, ...]:
        return (self.d, *self.m)

    def __add__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.d - other.d, tuple(a - b for a, b in zip(self.m, other.m)))

    def scale(self, k: int) -> "PicClass":
        return PicClass(k * self.d, tuple(k * a for a in self.m))


CANONICAL = PicClass(-3, (-1,) * 8)


def intersect(a: PicClass, b: PicClass) -> int:
    return a.d * b.d - sum(x * y for x, y in zip(a.m, b.m))


def pairing(a: PicClass, b: PicClass) -> int:
    """Negated intersection pairing; the E8 inner product on K-perp."""
    return -intersect(a, b)


def _labels() -> list[CurveLabel]:
    out = [CurveLabel("E", (i,)) for i in POINTS]
    out += [CurveLabel("Line", c) for c in combinations(POINTS, 2)]
    out += [CurveLabel("Conic", c) for c in combinations(POINTS, 5)]
    out += [CurveLabel("Cubic", c) for c in permutations(POINTS, 2)]
    out += [CurveLabel("Quartic", c) for c in combinations(POINTS, 3)]
    out += [CurveLabel("Quintic", c) for c in combinations(POINTS, 2)]
    out += [CurveLabel("Sextic", (i,)) for i in POINTS]
    return out


@lru_cache(maxsize=None)
def _table():
    labels = _labels()
    classes = []
    for lab in labels:
        d, mult = lab.multiplicities()
        classes.append(PicClass(d, mult))
    return tuple(labels), tuple(classes)


def enumerate_exceptional_classes() -> list[tuple[PicClass, CurveLabel]]:
    labels, classes = _table()
    return list(zip(classes, labels))


def classes() -> tuple[PicClass, ...]:
    return _table()[1]


def labels() -> tuple[CurveLabel, ...]:
    return _table()[0]


@lru_cache(maxsize=None)
def label_index() -> dict:
    return {lab: i for i, lab in enumerate(labels())}


@lru_cache(maxsize=None)
def class_index() -> dict:
    return {c.vector(): i for i, c in enumerate(classes())}


def index_of(label: CurveLabel | str) -> int:
    if isinstance(label, str):
        label = CurveLabel.parse(label)
    return label_index()[label]


def family_sizes() -> dict[str, int]:
    sizes = dict.fromkeys(FAMILIES, 0)
    for lab in labels():
        sizes[lab.family] += 1
    return sizes


@lru_cache(maxsize=None)
def intersection_table() -> np.ndarray:
    """240x240 int8 matrix of intersection numbers (diagonal -1)."""
    v = np.array([c.vector() for c in classes()], dtype=np.int64)
    form = np.diag([1] + [-1] * 8)
    t = v @ form @ v.T
    t.setflags(write=False)
    return t.astype(np.int8)


def root_vector(i: int) -> tuple[int, ...]:
    """Owner class of index i plus K, as a Pic vector."""
    return (classes()[i] + CANONICAL).vector()


def root_dot(a: int, b: int) -> int:
    if a == b:
        return 2
    return 1 - int(intersection_table()[a, b])


def weight_matrix(members: Sequence[int]) -> np.ndarray:
    members = list(members)
    for i in members:
        if not 0 <= i < 240:
            raise IndexError(f"class index {i} out of range")
    t = intersection_table()
    return t[np.ix_(members, members)].astype(np.int64)


def describe(members: Iterable[int]) -> list[str]:
    labs = labels()
    return [str(labs[i]) for i in members]
