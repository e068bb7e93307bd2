"""W(E8) acting on the 240 exceptional classes.

Group elements are permutations of class indices stored as numpy index
arrays: ``p[i]`` is the image of class ``i``.  Composition ``compose(g, h)``
means "apply g, then h".
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import e8

N = 240
IDENTITY = np.arange(N, dtype=np.intp)
IDENTITY.setflags(write=False)


def compose(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    return h[g]


def inverse(g: np.ndarray) -> np.ndarray:
    inv = np.empty_like(g)
    inv[g] = IDENTITY
    return inv


def is_identity(g: np.ndarray) -> bool:
    return bool(np.array_equal(g, IDENTITY))


def preserves_weights(g: np.ndarray) -> bool:
    t = e8.intersection_table()
    return bool(np.array_equal(t[np.ix_(g, g)], t))


@lru_cache(maxsize=None)
def _class_vectors() -> np.ndarray:
    return np.array([c.vector() for c in e8.classes()], dtype=np.int64)


_FORM = np.diag([1] + [-1] * 8)


def reflection(root: Sequence[int]) -> np.ndarray:
    """Permutation induced by x -> x - <x, r> r, with <,> the negated intersection form.

    ``root`` is a Pic vector (d, m_1..m_8) of norm 2 orthogonal to K.
    """
    r = np.asarray(root, dtype=np.int64)
    if int(r @ _FORM @ r) != -2 or int(r @ _FORM @ np.array([-3] + [-1] * 8)) != 0:
        raise ValueError(f"{tuple(root)} is not a root")
    v = _class_vectors()
    images = v + np.outer(v @ _FORM @ r, r)
    lookup = e8.class_index()
    perm = np.fromiter((lookup[tuple(int(x) for x in row)] for row in images),
                       dtype=np.intp, count=N)
    return perm


@lru_cache(maxsize=None)
def _root_reflection(owner: int) -> np.ndarray:
    p = reflection(e8.root_vector(owner))
    p.setflags(write=False)
    return p


def root_reflection(owner: int) -> np.ndarray:
    """Reflection in the root e + K of class ``owner``."""
    return _root_reflection(owner)


SIMPLE_ROOTS = tuple(
    [(0,) + tuple(-1 if k == i else 1 if k == i + 1 else 0 for k in range(8)) for i in range(7)]
    + [(1, 1, 1, 1, 0, 0, 0, 0, 0)]
)
"""E_i - E_{i+1} for i = 1..7 and L - E_1 - E_2 - E_3, as Pic vectors."""


def weyl_generators() -> list[np.ndarray]:
    return [reflection(r) for r in SIMPLE_ROOTS]


def difference_root_owner(a: int, b: int) -> int:
    """Owner of the root (e_a + K) - (e_b + K); needs e_a . e_b = 0."""
    va, vb = _class_vectors()[a], _class_vectors()[b]
    diff = va - vb
    owner = tuple(int(x) for x in diff - np.array(e8.CANONICAL.vector()))
    return e8.class_index()[owner]


def _walk(src: int, dst: int, allowed: np.ndarray) -> list[int]:
    """Roots of a reflection word carrying class src to dst.

    Steps go between classes of weight 0 (root dot 1); the reflection in the
    difference root swaps them.  Only classes flagged in ``allowed`` are used,
    so the word fixes anything orthogonal to all of them.
    """
    if src == dst:
        return []
    t = e8.intersection_table()
    prev = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in np.flatnonzero((t[x] == 0) & allowed):
            y = int(y)
            if y in prev:
                continue
            prev[y] = x
            if y == dst:
                path = [y]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                path.reverse()
                return [difference_root_owner(p, q) for p, q in zip(path, path[1:])]
            queue.append(y)
    raise ValueError(f"no reflection walk from {src} to {dst}")


def word_element(word: Iterable[int]) -> np.ndarray:
    g = IDENTITY.copy()
    for owner in word:
        g = compose(g, root_reflection(owner))
    return g


def transporter(src: Sequence[int], dst: Sequence[int]) -> list[int]:
    """Reflection word mapping the ordered tuple src onto dst (length 1 or 2).

    For pairs, both must have the same intersection number; the second step
    only uses reflections in roots orthogonal to the first target, so it
    keeps it fixed.
    """
    if len(src) != len(dst) or not 1 <= len(src) <= 2:
        raise ValueError("transporter handles single classes and pairs")
    t = e8.intersection_table()
    everything = np.ones(N, dtype=bool)
    word = _walk(src[0], dst[0], everything)
    if len(src) == 1:
        return word
    if t[src[0], src[1]] != t[dst[0], dst[1]]:
        raise ValueError("pairs with different intersection numbers are not conjugate")
    g = word_element(word)
    y = int(g[src[1]])
    # classes whose roots are orthogonal to the root of dst[0]: weight 1
    allowed = t[dst[0]] == 1
    if y != dst[1]:
        word += _walk(y, dst[1], allowed)
    return word


@dataclass
class StabilizerChain:
    """Base and strong generating set with explicit transversals."""

    base: list = field(default_factory=list)
    gens: list = field(default_factory=list)
    # per level: dict point -> coset representative u with u[base[i]] = point
    transversals: list = field(default_factory=list)

    def level_gens(self, i: int) -> list[np.ndarray]:
        pts = self.base[:i]
        return [g for g in self.gens if all(g[b] == b for b in pts)]

    def _orbit(self, i: int) -> dict:
        b = self.base[i]
        gens = self.level_gens(i)
        reps = {b: IDENTITY}
        queue = deque([b])
        while queue:
            x = queue.popleft()
            u = reps[x]
            for s in gens:
                y = int(s[x])
                if y not in reps:
                    reps[y] = compose(u, s)
                    queue.append(y)
        return reps

    def rebuild(self, start: int = 0) -> None:
        del self.transversals[start:]
        for i in range(start, len(self.base)):
            self.transversals.append(self._orbit(i))

    def sift(self, g: np.ndarray) -> tuple[np.ndarray, int]:
        for i, b in enumerate(self.base):
            p = int(g[b])
            u = self.transversals[i].get(p)
            if u is None:
                return g, i
            g = compose(g, inverse(u))
        return g, len(self.base)

    def contains(self, g: np.ndarray) -> bool:
        h, level = self.sift(g)
        return level == len(self.base) and is_identity(h)

    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def orbit_sizes(self) -> list[int]:
        return [len(t) for t in self.transversals]

    def _add(self, h: np.ndarray, level: int) -> None:
        if level == len(self.base):
            moved = np.flatnonzero(h != IDENTITY)
            self.base.append(int(moved[0]))
        self.gens.append(h)
        self.rebuild(0)

    def _schreier_failure(self):
        for i in range(len(self.base) - 1, -1, -1):
            gens = self.level_gens(i)
            for p, u in self.transversals[i].items():
                for s in gens:
                    us = compose(u, s)
                    v = self.transversals[i][int(us[self.base[i]])]
                    schreier = compose(us, inverse(v))
                    h, level = self.sift(schreier)
                    if not (level == len(self.base) and is_identity(h)):
                        return h, level
        return None


def stabilizer_chain(generators: Sequence[np.ndarray], seed: int = 0,
                     base: Sequence[int] = (), quiet_rounds: int = 30) -> StabilizerChain:
    """Schreier-Sims: randomized build, then a deterministic Schreier-generator check.

    The final check sifts every Schreier generator at every level, so the
    returned chain (and its order) is exact, not probabilistic.
    """
    gens = [np.asarray(g, dtype=np.intp) for g in generators if not is_identity(g)]
    chain = StabilizerChain(base=list(base))
    if not gens:
        chain.rebuild()
        return chain
    for g in gens:
        h, level = chain.sift(g)
        if not is_identity(h):
            chain._add(h, level)
    rng = random.Random(seed)
    pool = [g.copy() for g in gens] + [g.copy() for g in gens[:max(0, 10 - len(gens))]]
    acc = IDENTITY.copy()
    quiet = 0
    while quiet < quiet_rounds:
        i, j = rng.sample(range(len(pool)), 2) if len(pool) > 1 else (0, 0)
        pool[i] = compose(pool[i], pool[j])
        acc = compose(acc, pool[i])
        h, level = chain.sift(acc)
        if is_identity(h):
            quiet += 1
        else:
            quiet = 0
            chain._add(h, level)
    while True:
        bad = chain._schreier_failure()
        if bad is None:
            return chain
        chain._add(*bad)


@lru_cache(maxsize=None)
def weyl_chain() -> StabilizerChain:
    return stabilizer_chain(weyl_generators())


WEYL_ORDER = 696729600
