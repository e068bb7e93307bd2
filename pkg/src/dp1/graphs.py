"""Canonical forms of small simple graphs (up to a dozen vertices).

Colour refinement, then individualization of vertices in the first
non-singleton cell.  Twins inside a cell are interchangeable by an
automorphism that respects the current partition, so only one twin per cell
is branched on.  The canonical form is the lexicographically smallest
adjacency code over the surviving leaves, so two graphs get equal forms
exactly when they are isomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


@dataclass(frozen=True)
class CanonicalGraph:
    order: int
    edges: tuple  # sorted (i, j) pairs, i < j, in canonical labels

    @property
    def code(self) -> int:
        edges = set(self.edges)
        out = 0
        for k, pair in enumerate(combinations(range(self.order), 2)):
            if pair in edges:
                out |= 1 << k
        return out

    def degree_sequence(self) -> tuple[int, ...]:
        deg = [0] * self.order
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(sorted(deg, reverse=True))


def _refine(adj: list[int], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition (deterministic split order)."""
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        out = []
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            keyed = {}
            for v in c:
                key = tuple((adj[v] & m).bit_count() for m in masks)
                keyed.setdefault(key, []).append(v)
            if len(keyed) > 1:
                changed = True
                for key in sorted(keyed):
                    out.append(sorted(keyed[key]))
            else:
                out.append(c)
        cells = out
    return cells


def _leaf_code(adj: list[int], order: list[int]) -> int:
    n = len(order)
    code = 0
    bit = 0
    for a in range(n):
        va = order[a]
        for b in range(a + 1, n):
            if adj[va] >> order[b] & 1:
                code |= 1 << (n * (n - 1) // 2 - 1 - bit)
            bit += 1
    return code


def canonical_form(n: int, edges: Iterable[Sequence[int]]) -> CanonicalGraph:
    adj = [0] * n
    for i, j in edges:
        if i == j:
            raise ValueError("loops are not allowed")
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    if n == 0:
        return CanonicalGraph(0, ())
    best = [None, None]

    def visit(cells):
        cells = _refine(adj, cells)
        target = next((k for k, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            code = _leaf_code(adj, order)
            if best[0] is None or code > best[0]:
                best[0], best[1] = code, order
            return
        cell = cells[target]
        tried = []
        for v in cell:
            if any(_twins(adj, v, w) for w in tried):
                continue
            tried.append(v)
            rest = [w for w in cell if w != v]
            visit(cells[:target] + [[v], rest] + cells[target + 1:])

    visit([list(range(n))])
    order = best[1]
    pos = {v: k for k, v in enumerate(order)}
    canon = sorted(tuple(sorted((pos[i], pos[j]))) for i, j in
                   {tuple(sorted(e)) for e in edges})
    return CanonicalGraph(n, tuple(canon))


def _twins(adj: list[int], u: int, w: int) -> bool:
    mu = adj[u] & ~(1 << w)
    mw = adj[w] & ~(1 << u)
    return mu == mw


def is_isomorphic(n1: int, e1, n2: int, e2) -> bool:
    return n1 == n2 and canonical_form(n1, e1) == canonical_form(n2, e2)


# Weight-2 graphs of the 47 W(E8)-orbits of size-8 cliques with weights
# {1, 2}, in the standard numbering.  Entries 40/41 and 44/45 share a graph.
# Vertices are 0..7; each entry lists the weight-2 edges.
CLIQUE_TYPE_CATALOGUE: dict[int, tuple] = {
    1: ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)),
    2: ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)),
    3: ((0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)),
    4: ((0, 1), (1, 2), (4, 5), (5, 6)),
    5: ((0, 1), (1, 2), (2, 3), (3, 4), (5, 6)),
    6: ((0, 1), (2, 3), (4, 5), (6, 7)),
    7: (),
    8: ((0, 1), (1, 2), (1, 7), (2, 3), (3, 4), (4, 5), (5, 6)),
    9: ((0, 1), (1, 2), (2, 3), (3, 4), (3, 7), (4, 5), (5, 6)),
    10: ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (4, 7), (5, 6)),
    11: ((0, 1), (1, 2), (1, 7), (2, 3), (4, 5), (5, 6)),
    12: ((0, 1), (1, 2), (2, 3), (2, 7), (3, 4), (5, 6)),
    13: ((0, 1), (1, 2), (2, 3), (3, 4), (3, 7), (4, 5)),
    14: ((0, 1), (1, 2), (2, 3), (3, 4), (3, 7)),
    15: ((0, 1), (1, 2), (1, 7)),
    16: ((0, 1), (1, 2), (1, 6), (2, 3), (3, 4), (4, 5), (4, 7)),
    17: ((0, 1), (1, 2), (1, 6), (2, 3), (3, 4), (3, 7)),
    18: ((0, 1), (1, 2), (1, 6), (2, 3), (2, 7), (4, 5)),
    19: ((0, 1), (1, 2), (1, 6), (3, 4), (4, 5), (4, 7)),
    20: ((0, 1), (1, 2), (1, 6), (2, 3), (2, 7)),
    21: ((0, 1), (1, 2), (2, 3), (2, 6), (3, 4), (6, 7)),
    22: ((0, 1), (1, 2), (1, 6), (1, 7)),
    23: ((0, 1), (1, 2), (1, 5), (1, 6), (3, 4), (3, 7)),
    24: ((0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (5, 7), (6, 7)),
    25: ((0, 1), (1, 2), (2, 3), (5, 6), (5, 7), (6, 7)),
    26: ((0, 1), (1, 2), (5, 6), (5, 7), (6, 7)),
    27: ((0, 1), (2, 3), (5, 6), (5, 7), (6, 7)),
    28: ((0, 1), (1, 2), (2, 3), (2, 4), (5, 6), (5, 7), (6, 7)),
    29: ((0, 1), (1, 2), (1, 3), (1, 4), (5, 6), (5, 7), (6, 7)),
    30: ((0, 1), (1, 2), (2, 3), (4, 5), (4, 6), (5, 7), (6, 7)),
    31: ((0, 1), (1, 2), (4, 5), (4, 6), (5, 7), (6, 7)),
    32: ((0, 1), (4, 5), (4, 6), (5, 7), (6, 7)),
    33: ((4, 5), (4, 6), (5, 7), (6, 7)),
    34: ((0, 1), (1, 2), (1, 3), (4, 5), (4, 6), (5, 7), (6, 7)),
    35: ((0, 1), (1, 2), (3, 4), (3, 7), (4, 5), (5, 6), (6, 7)),
    36: ((0, 1), (3, 4), (3, 7), (4, 5), (5, 6), (6, 7)),
    37: ((0, 1), (2, 3), (2, 7), (3, 4), (4, 5), (5, 6), (6, 7)),
    38: ((2, 3), (2, 7), (3, 4), (4, 5), (5, 6), (6, 7)),
    39: ((1, 2), (1, 7), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)),
    40: ((0, 1), (0, 7), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)),
    41: ((0, 1), (0, 7), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)),
    42: ((0, 1), (2, 3), (2, 4), (3, 4), (5, 6), (5, 7), (6, 7)),
    43: ((2, 3), (2, 4), (3, 4), (5, 6), (5, 7), (6, 7)),
    44: ((0, 1), (0, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 7), (6, 7)),
    45: ((0, 1), (0, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 7), (6, 7)),
    46: ((1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 7), (6, 7)),
    47: ((0, 1), (0, 2), (1, 2), (3, 4), (3, 7), (4, 5), (5, 6), (6, 7)),
}

# Entries 4, 19 and 23 as drawn in the standard figure, before correction.
# As drawn, no size-8 orbit has these graphs; one edge edit each turns them
# into the three orbit graphs left unmatched otherwise (see the README).
AS_DRAWN = {
    4: ((0, 1), (1, 2), (2, 3), (4, 5), (5, 6)),
    19: ((0, 1), (1, 2), (2, 6), (3, 4), (4, 5), (4, 7)),
    23: ((0, 1), (1, 2), (1, 5), (1, 6), (2, 3), (3, 4), (3, 7)),
}

# (numbers of) orbit types that share one weight-2 graph
SHARED_TYPES = ((40, 41), (44, 45))


def _catalogue_forms() -> dict[int, CanonicalGraph]:
    return {k: canonical_form(8, e) for k, e in CLIQUE_TYPE_CATALOGUE.items()}


_FORMS: dict | None = None


def catalogue_ids(form: CanonicalGraph) -> tuple[int, ...]:
    """Catalogue numbers whose weight-2 graph equals ``form`` (empty if none)."""
    global _FORMS
    if _FORMS is None:
        _FORMS = _catalogue_forms()
    return tuple(k for k, f in _FORMS.items() if f == form)
