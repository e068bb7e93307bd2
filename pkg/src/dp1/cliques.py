"""Cliques in the weighted intersection graph G on the 240 exceptional classes."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import e8
from .graphs import CanonicalGraph, canonical_form, catalogue_ids

ANCHOR_LABELS = ("L:1,2", "L:3,4")


def default_anchor() -> tuple[int, int]:
    return tuple(e8.index_of(x) for x in ANCHOR_LABELS)


@dataclass(frozen=True)
class WeightedClique:
    members: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.members)
        if any(a >= b for a, b in zip(m, m[1:])):
            m = tuple(sorted(set(m)))
        object.__setattr__(self, "members", m)

    @cached_property
    def weights(self) -> np.ndarray:
        return e8.weight_matrix(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def labels(self) -> list[str]:
        return e8.describe(self.members)

    def weight_set(self) -> set[int]:
        w = self.weights
        n = len(self.members)
        return {int(w[i, j]) for i in range(n) for j in range(i + 1, n)}


@dataclass(frozen=True)
class CliqueType:
    size: int
    mult2_graph: CanonicalGraph
    figure_id: tuple = ()


def _mask(allowed: Iterable[int]) -> np.ndarray:
    allowed = set(int(a) for a in allowed)
    if not allowed <= {0, 1, 2, 3}:
        raise ValueError(f"weights must lie in {{0,1,2,3}}, got {sorted(allowed)}")
    t = e8.intersection_table()
    ok = np.zeros(t.shape, dtype=bool)
    for a in allowed:
        ok |= t == a
    np.fill_diagonal(ok, False)
    return ok


def neighbors_with_weights(e: int, allowed: Iterable[int]) -> list[int]:
    return [int(i) for i in np.flatnonzero(_mask(allowed)[e])]


def common_neighbors(anchor: Sequence[int], allowed: Iterable[int]) -> list[int]:
    ok = _mask(allowed)
    keep = np.ones(240, dtype=bool)
    for a in anchor:
        keep &= ok[a]
    keep[list(anchor)] = False
    return [int(i) for i in np.flatnonzero(keep)]


class _Graph:
    """Vertex subset of G with bitset adjacency, as numpy uint64 words."""

    def __init__(self, vertices: Sequence[int], allowed: Iterable[int]):
        self.vertices = np.asarray(vertices, dtype=np.intp)
        n = len(vertices)
        self.n = n
        self.words = max(1, (n + 63) // 64)
        sub = _mask(allowed)[np.ix_(self.vertices, self.vertices)]
        self.adj_bool = sub
        self.adj = self._pack(sub)
        upper = np.triu(np.ones((n, n), dtype=bool), 1)
        self.higher = self._pack(upper)
        self.higher_adj = self.adj & self.higher

    def _pack(self, rows: np.ndarray) -> np.ndarray:
        pad = self.words * 64 - rows.shape[1]
        padded = np.pad(rows, ((0, 0), (0, pad)))
        return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).copy()

    def unpack(self, cand: np.ndarray) -> np.ndarray:
        bits = np.unpackbits(cand.view(np.uint8), axis=1, bitorder="little")
        return bits[:, :self.n].astype(bool)


def _expand(g: _Graph, prefix: np.ndarray, cand: np.ndarray, chunk: int = 1 << 17):
    """All one-vertex extensions, in lexicographic order."""
    out_p, out_c = [], []
    for s in range(0, len(prefix), chunk):
        p, c = prefix[s:s + chunk], cand[s:s + chunk]
        rows, v = np.nonzero(g.unpack(c))
        out_p.append(np.concatenate([p[rows], v[:, None].astype(p.dtype)], axis=1))
        out_c.append(c[rows] & g.higher_adj[v])
    if not out_p:
        return prefix[:0], cand[:0]
    return np.concatenate(out_p), np.concatenate(out_c)


def _block(g: _Graph, first: int, depth: int, count_only: bool):
    """Cliques of the local graph with smallest vertex ``first``."""
    prefix = np.array([[first]], dtype=np.int16)
    cand = g.higher_adj[first:first + 1].copy()
    for _ in range(depth - 1):
        if count_only and prefix.shape[1] == depth - 1:
            return int(np.bitwise_count(cand).sum())
        prefix, cand = _expand(g, prefix, cand)
        if not len(prefix):
            break
    if count_only:
        return len(prefix) if prefix.shape[1] == depth else 0
    return prefix if prefix.shape[1] == depth else prefix[:0].reshape(0, depth)


def _worker(args):
    vertices, allowed, first_list, depth, count_only = args
    g = _Graph(vertices, allowed)
    return [_block(g, f, depth, count_only) for f in first_list]


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("DP1_THREADS", "1"))
    return max(1, threads)


def _local_setup(allowed, size, anchor):
    anchor = tuple(sorted(int(a) for a in (anchor or ())))
    if size < 1:
        raise ValueError("clique size must be at least 1")
    if len(anchor) > size:
        raise ValueError("anchor larger than the requested size")
    ok = _mask(allowed)
    for a, b in combinations(anchor, 2):
        if not ok[a, b]:
            raise ValueError("anchor is not a clique for these weights")
    vertices = common_neighbors(anchor, allowed) if anchor else list(range(240))
    return anchor, vertices, size - len(anchor)


def _run_blocks(vertices, allowed, depth, count_only, threads):
    firsts = list(range(len(vertices)))
    threads = _threads(threads)
    if threads == 1 or len(firsts) < 2:
        return _worker((vertices, tuple(allowed), firsts, depth, count_only))
    # round-robin split keeps block sizes balanced; results are reassembled in order
    parts = [firsts[k::threads] for k in range(threads)]
    with ProcessPoolExecutor(threads) as pool:
        results = list(pool.map(_worker, [(vertices, tuple(allowed), p, depth, count_only)
                                          for p in parts]))
    out = [None] * len(firsts)
    for part, res in zip(parts, results):
        for f, r in zip(part, res):
            out[f] = r
    return out


def count_cliques(allowed: Iterable[int], size: int, anchor: Sequence[int] | None = None,
                  threads: int | None = None) -> int:
    allowed = tuple(sorted(set(allowed)))
    anchor, vertices, depth = _local_setup(allowed, size, anchor)
    if depth == 0:
        return 1
    return int(sum(_run_blocks(vertices, allowed, depth, True, threads)))


def clique_array(allowed: Iterable[int], size: int, anchor: Sequence[int] | None = None,
                 threads: int | None = None) -> np.ndarray:
    """All cliques as an (N, size) uint8 array of sorted class indices.

    Rows come in lexicographic order of the non-anchor members.
    """
    allowed = tuple(sorted(set(allowed)))
    anchor, vertices, depth = _local_setup(allowed, size, anchor)
    if depth == 0:
        return np.array([anchor], dtype=np.uint8)
    vmap = np.asarray(vertices, dtype=np.uint8)
    blocks = [vmap[b] for b in _run_blocks(vertices, allowed, depth, False, threads)
              if len(b)]
    if not blocks:
        return np.zeros((0, size), dtype=np.uint8)
    local = np.concatenate(blocks)
    if anchor:
        full = np.concatenate(
            [np.broadcast_to(np.array(anchor, dtype=np.uint8), (len(local), len(anchor))),
             local], axis=1)
        full.sort(axis=1)
        return full
    return local


def enumerate_cliques(allowed: Iterable[int], size: int,
                      anchor: Sequence[int] | None = None) -> Iterator[WeightedClique]:
    """Stream every clique of the given size exactly once."""
    allowed = tuple(sorted(set(allowed)))
    anchor, vertices, depth = _local_setup(allowed, size, anchor)
    if depth == 0:
        yield WeightedClique(anchor)
        return
    g = _Graph(vertices, allowed)
    vmap = np.asarray(vertices)
    for f in range(len(vertices)):
        block = _block(g, f, depth, False)
        for row in vmap[block]:
            yield WeightedClique(tuple(anchor) + tuple(int(x) for x in row))


def is_clique(members: Sequence[int], allowed: Iterable[int]) -> bool:
    ok = _mask(allowed)
    return all(ok[a, b] for a, b in combinations(members, 2))


def is_maximal(members: Sequence[int], allowed: Iterable[int]) -> bool:
    ok = _mask(allowed)
    mem = list(members)
    ext = np.ones(240, dtype=bool)
    for a in mem:
        ext &= ok[a]
    ext[mem] = False
    return not ext.any()


def maximal_cliques(vertices: Sequence[int], allowed: Iterable[int],
                    min_size: int = 1) -> list[tuple[int, ...]]:
    """Bron-Kerbosch with Tomita pivoting over a vertex subset of G."""
    vertices = list(vertices)
    ok = _mask(allowed)
    n = len(vertices)
    adj = [0] * n
    for i in range(n):
        row = ok[vertices[i], vertices]
        for j in np.flatnonzero(row):
            adj[i] |= 1 << int(j)
    out = []

    def bk(r, p, x):
        if not p and not x:
            if len(r) >= min_size:
                out.append(tuple(sorted(vertices[i] for i in r)))
            return
        if len(r) + p.bit_count() < min_size:
            return
        px = p | x
        pivot, best = -1, -1
        while px:
            low = px & -px
            u = low.bit_length() - 1
            px ^= low
            c = (p & adj[u]).bit_count()
            if c > best:
                pivot, best = u, c
        rest = p & ~adj[pivot]
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            bk(r + [v], p & adj[v], x & adj[v])
            p &= ~low
            x |= low

    bk([], (1 << n) - 1, 0)
    out.sort()
    return out


def weight2_edges(members: Sequence[int]) -> list[tuple[int, int]]:
    w = e8.weight_matrix(members)
    n = len(members)
    return [(i, j) for i in range(n) for j in range(i + 1, n) if w[i, j] == 2]


def clique_type(c: WeightedClique | Sequence[int]) -> CliqueType:
    members = c.members if isinstance(c, WeightedClique) else tuple(sorted(c))
    w = e8.weight_matrix(members)
    n = len(members)
    bad = {int(w[i, j]) for i in range(n) for j in range(i + 1, n)} - {1, 2}
    if bad:
        raise ValueError(f"clique has edges of weight {sorted(bad)}; only 1 and 2 allowed")
    form = canonical_form(n, weight2_edges(members))
    return CliqueType(n, form, catalogue_ids(form) if n == 8 else ())


def pair_masks(cliques: np.ndarray) -> np.ndarray:
    """Packed weight-2 pattern per row: bit k (little-endian) is the k-th member pair."""
    t = e8.intersection_table()
    size = cliques.shape[1]
    pairs = list(combinations(range(size), 2))
    bits = np.empty((len(cliques), len(pairs)), dtype=bool)
    for k, (i, j) in enumerate(pairs):
        bits[:, k] = t[cliques[:, i], cliques[:, j]] == 2
    return np.packbits(bits, axis=1, bitorder="little")


def mask_form(size: int, mask) -> CanonicalGraph:
    """Canonical weight-2 graph from a packed row of pair_masks (or an int bitmask)."""
    if not isinstance(mask, (int, np.integer)):
        mask = int.from_bytes(bytes(np.asarray(mask, dtype=np.uint8)), "little")
    mask = int(mask)
    edges = [p for k, p in enumerate(combinations(range(size), 2)) if mask >> k & 1]
    return canonical_form(size, edges)
