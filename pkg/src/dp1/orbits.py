"""W8-orbit classification of anchored cliques.

Every clique containing a weight-1 pair is W8-conjugate to one containing
the fixed anchor pair, since W8 is transitive on such pairs. So an orbit
is determined by its anchored members, and the classification runs on
those only:

1. label components under the setwise stabilizer H of the anchor pair,
   by applying generators of H to the whole clique array at once;
2. for one clique per H-component and every other weight-1 pair in it,
   move that pair onto the anchor with an explicit reflection word and merge
   the two components (union-find, each merge keeps its word as witness).

The orbit size follows by double counting (clique, weight-1 pair) incidences:
``|O| * k1 = 15120 * |O meets anchored|``, where k1 is the number of
weight-1 pairs in one clique and 15120 the number of weight-1 pairs in G.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from . import e8, weyl
from .cliques import (clique_array, common_neighbors, default_anchor,
                      maximal_cliques)
from .graphs import CanonicalGraph, canonical_form, catalogue_ids
from . import relations

log = logging.getLogger(__name__)

WEIGHT1_PAIRS = 240 * 126 // 2
CHECKPOINT_FORMAT = "dp1-orbit-checkpoint"
CHECKPOINT_VERSION = 2


class BudgetExhausted(RuntimeError):
    pass


@dataclass
class Budget:
    """Wall-clock allowance in seconds; None means unlimited."""

    seconds: float | None = None
    start: float = field(default_factory=time.monotonic)

    def left(self) -> float:
        if self.seconds is None:
            return float("inf")
        return self.seconds - (time.monotonic() - self.start)

    def check(self, stage: str) -> None:
        if self.left() <= 0:
            raise BudgetExhausted(stage)


# -- anchor stabilizer ---------------------------------------------------------

@lru_cache(maxsize=8)
def _anchor_stabilizer(anchor: tuple[int, int]) -> tuple:
    e1, e2 = anchor
    t = e8.intersection_table()
    if t[e1, e2] != 1:
        raise ValueError("anchor classes must meet with weight 1")
    # roots orthogonal to both anchor roots: weight 1 to both
    owners = [int(x) for x in np.flatnonzero((t[e1] == 1) & (t[e2] == 1))]
    chosen, order = [], 1
    for x in owners:
        r = weyl.root_reflection(x)
        if any(np.array_equal(r, weyl.root_reflection(y)) for y in chosen):
            continue
        trial = chosen + [x]
        o = weyl.stabilizer_chain([weyl.root_reflection(y) for y in trial]).order()
        if o > order:
            chosen, order = trial, o
    gens = [weyl.root_reflection(y) for y in chosen]
    swap = weyl.word_element(weyl.transporter((e1, e2), (e2, e1)))
    gens += [swap, weyl.inverse(swap)]
    chain = weyl.stabilizer_chain(gens)
    return tuple(gens), order, chain.order()


def anchor_stabilizer(anchor: Sequence[int] | None = None) -> list[np.ndarray]:
    """Generators of the setwise stabilizer of the anchor pair, closed under inverses."""
    gens, _, _ = _anchor_stabilizer(tuple(anchor or default_anchor()))
    return list(gens)


def anchor_stabilizer_order(anchor: Sequence[int] | None = None) -> tuple[int, int]:
    """(pointwise order, setwise order) of the anchor stabilizer."""
    _, point, full = _anchor_stabilizer(tuple(anchor or default_anchor()))
    return point, full


# -- row keys ------------------------------------------------------------------

def row_keys(rows: np.ndarray) -> np.ndarray:
    """Keys whose order is the lexicographic order of the uint8 rows."""
    rows = np.ascontiguousarray(rows, dtype=np.uint8)
    n, k = rows.shape
    if k <= 8:
        padded = np.zeros((n, 8), dtype=np.uint8)
        padded[:, :k] = rows
        return padded.view(">u8").ravel().astype(np.uint64)
    return rows.view(np.dtype((np.void, k))).ravel()


def sort_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = row_keys(rows)
    order = np.argsort(keys, kind="stable")
    return rows[order], keys[order]


def image_indices(rows: np.ndarray, keys: np.ndarray, g: np.ndarray,
                  chunk: int = 1 << 20) -> np.ndarray:
    """Index of g(row) for every row; raises if an image falls outside the set."""
    perm = np.asarray(g, dtype=np.uint8)
    out = np.empty(len(rows), dtype=np.int64)
    for s in range(0, len(rows), chunk):
        img = perm[rows[s:s + chunk]]
        img.sort(axis=1)
        k = row_keys(img)
        idx = np.searchsorted(keys, k)
        idx[idx == len(keys)] = 0
        if not np.array_equal(keys[idx], k):
            raise AssertionError("clique set is not closed under the group element")
        out[s:s + chunk] = idx
    return out


def h_component_labels(rows, keys, gens, budget: Budget | None = None,
                       labels: np.ndarray | None = None) -> np.ndarray:
    """Smallest row index in each component of the graph spanned by gens.

    A partial result (after a budget stop) is still sound: every row is
    labelled by a row reachable from it.
    """
    budget = budget or Budget()
    images = [image_indices(rows, keys, g) for g in gens]
    lab = np.arange(len(rows), dtype=np.int64) if labels is None else labels.copy()
    while True:
        budget.check("h-labels")
        new = lab
        for img in images:
            new = np.minimum(new, lab[img])
        # pointer jumping
        while True:
            jumped = new[new]
            if np.array_equal(jumped, new):
                break
            new = jumped
        if np.array_equal(new, lab):
            return lab
        lab = new


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass
class OrbitRecord:
    index: int
    representative: tuple[int, ...]
    anchored_count: int
    orbit_size: int
    stabilizer_order: int
    form: CanonicalGraph
    figure_ids: tuple[int, ...] = ()
    invariants: dict = field(default_factory=dict)
    figure_id: int | None = None

    @property
    def size(self) -> int:
        return len(self.representative)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "size": self.size,
            "representative": list(self.representative),
            "labels": e8.describe(self.representative),
            "anchored_count": self.anchored_count,
            "orbit_size": str(self.orbit_size),
            "stabilizer_order": str(self.stabilizer_order),
            "weight2_graph": {"order": self.form.order, "edges": [list(e) for e in self.form.edges]},
            "figure_ids": list(self.figure_ids),
            "figure_id": self.figure_id,
            "invariants": self.invariants,
        }


@dataclass
class Classification:
    status: str
    stage: str
    total: int
    orbits: list[OrbitRecord] = field(default_factory=list)
    buckets: int = 0
    witnesses: list = field(default_factory=list)
    partial_classes: int | None = None

    @property
    def type_count(self) -> int | None:
        """Distinct weight-2 graph types among the orbit representatives."""
        if self.status != "complete":
            return None
        return len({o.form for o in self.orbits})

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "stage": self.stage,
            "anchored_cliques": self.total,
            "orbit_count": len(self.orbits) if self.status == "complete" else None,
            "partial_classes": self.partial_classes,
            "invariant_buckets": self.buckets,
            "type_lower_bound": self.buckets,
            "type_count": self.type_count,
            "orbits": [o.to_json() for o in self.orbits],
            "merges": len(self.witnesses),
        }


def weight1_pairs(members: Sequence[int]) -> list[tuple[int, int]]:
    t = e8.intersection_table()
    return [(a, b) for a, b in combinations(members, 2) if t[a, b] == 1]


def orbit_invariants(members: Sequence[int]) -> dict:
    """Cheap orbit invariants read off one clique."""
    basis = relations.kernel_lattice(members).basis
    fv = relations.torsion_forcing_vector(members)
    gram = relations.gram_array(members)
    return {
        "kernel_rank": len(basis),
        "forcing_sum": sum(fv) if fv else 0,
        "root_span_rank": int(np.linalg.matrix_rank(np.array([e8.root_vector(i) for i in members]))),
        "root_saturation_index": relations.root_saturation_index(members),
        "gram_invariant_factors": list(relations.smith_invariants(gram.tolist())),
        "root_sum_norm": relations.root_sum_norm(members),
    }


# -- checkpoints ---------------------------------------------------------------

class Checkpoint:
    """Stage files plus a versioned manifest in one directory."""

    def __init__(self, path: str | None, meta: dict, resume: bool):
        self.path = path
        self.meta = meta
        self.stages: dict = {}
        if path is None:
            return
        os.makedirs(path, exist_ok=True)
        man = os.path.join(path, "manifest.json")
        if resume and os.path.exists(man):
            with open(man) as fh:
                data = json.load(fh)
            if data.get("format") != CHECKPOINT_FORMAT or data.get("version") != CHECKPOINT_VERSION:
                raise ValueError(f"{man}: unsupported checkpoint format")
            if data.get("meta") != meta:
                raise ValueError(f"{man}: checkpoint belongs to a different run")
            self.stages = data.get("stages", {})

    def has(self, stage: str) -> bool:
        return stage in self.stages

    def _file(self, name: str) -> str:
        return os.path.join(self.path, name)

    def save_array(self, stage: str, name: str, arr: np.ndarray, extra=None) -> None:
        if self.path is None:
            return
        np.save(self._file(name), arr)
        self.stages[stage] = {"file": name, "extra": extra}
        self._write()

    def load_array(self, stage: str) -> np.ndarray:
        return np.load(self._file(self.stages[stage]["file"]))

    def extra(self, stage: str):
        return self.stages[stage].get("extra")

    def drop(self, stage: str) -> None:
        self.stages.pop(stage, None)
        self._write()

    def _write(self) -> None:
        if self.path is None:
            return
        tmp = self._file("manifest.json.tmp")
        with open(tmp, "w") as fh:
            json.dump({"format": CHECKPOINT_FORMAT, "version": CHECKPOINT_VERSION,
                       "meta": self.meta, "stages": self.stages}, fh, indent=1)
        os.replace(tmp, self._file("manifest.json"))


# -- driver --------------------------------------------------------------------

def _mask_codes(adj: np.ndarray) -> np.ndarray:
    """Sorted per-vertex invariants of a stack of adjacency matrices.

    Per vertex: degree, sum of neighbour degrees, triangles, vertices at
    distance exactly 2, and the sum over neighbours of their neighbour-degree
    sums. The sorted multiset is invariant under relabeling.
    """
    k = adj.shape[1]
    idx = np.arange(k)
    deg = adj.sum(axis=2)
    a2 = np.einsum("nij,njk->nik", adj, adj)
    nsum = np.einsum("nij,nj->ni", adj, deg)
    tri = np.einsum("nij,nji->ni", a2, adj) // 2
    reach = (a2 > 0) | (adj > 0)
    reach[:, idx, idx] = False
    d2 = reach.sum(axis=2) - deg
    n2 = np.einsum("nij,nj->ni", adj, nsum)
    codes = (deg.astype(np.int64) | nsum.astype(np.int64) << 6 | tri.astype(np.int64) << 14
             | d2.astype(np.int64) << 22 | n2.astype(np.int64) << 28)
    codes.sort(axis=1)
    return codes


def type_signatures(rows: np.ndarray, chunk: int = 1 << 20) -> np.ndarray:
    """Bucket id per row from an isomorphism invariant of the weight-2 graph.

    The invariant is evaluated once per distinct weight-2 edge pattern.
    Distinct buckets are non-isomorphic, so the bucket count is a lower
    bound on the number of graph types.
    """
    t = e8.intersection_table()
    n, k = rows.shape
    pairs = list(combinations(range(k), 2))
    pi = np.array([p[0] for p in pairs])
    pj = np.array([p[1] for p in pairs])
    width = (len(pairs) + 7) // 8
    packed = np.empty((n, width), dtype=np.uint8)
    for s in range(0, n, chunk):
        r = rows[s:s + chunk]
        packed[s:s + chunk] = np.packbits(t[r[:, pi], r[:, pj]] == 2, axis=1)
    view = np.ascontiguousarray(packed).view(np.dtype((np.void, width))).ravel()
    uniq, back = np.unique(view, return_inverse=True)
    bits = np.unpackbits(np.frombuffer(uniq.tobytes(), dtype=np.uint8).reshape(len(uniq), width),
                         axis=1)[:, :len(pairs)].astype(np.int64)
    adj = np.zeros((len(uniq), k, k), dtype=np.int64)
    adj[:, pi, pj] = bits
    adj[:, pj, pi] = bits
    codes = _mask_codes(adj)
    view = np.ascontiguousarray(codes).view(np.dtype((np.void, 8 * k))).ravel()
    _, inverse = np.unique(view, return_inverse=True)
    return inverse.ravel()[back.ravel()].astype(np.int32)


def _form_of(members) -> CanonicalGraph:
    t = e8.intersection_table()
    edges = [(i, j) for i, j in combinations(range(len(members)), 2)
             if t[members[i], members[j]] == 2]
    return canonical_form(len(members), edges)


def classify(rows: np.ndarray, anchor: Sequence[int] | None = None,
             budget: float | Budget | None = None, checkpoint: str | None = None,
             resume: bool = False, tag: str = "custom", invariants: bool = True
             ) -> Classification:
    """Classify uint8 clique rows (all containing the anchor) into W8-orbits."""
    anchor = tuple(anchor or default_anchor())
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    rows, keys = sort_rows(np.asarray(rows, dtype=np.uint8))
    if len(rows) and not all((rows == a).any(axis=1).all() for a in anchor):
        raise ValueError("every clique must contain the anchor pair")
    meta = {"tag": tag, "anchor": list(anchor), "count": int(len(rows)),
            "size": int(rows.shape[1]) if rows.ndim == 2 else 0}
    ck = Checkpoint(checkpoint, meta, resume)
    result = Classification("budget-exhausted", "types", len(rows))
    try:
        # the bucketing pass always runs: it is cheap and gives the type lower bound
        if ck.has("types"):
            type_ids = ck.load_array("types")
        else:
            type_ids = type_signatures(rows)
            ck.save_array("types", "types.npy", type_ids)
        result.buckets = int(type_ids.max()) + 1 if len(type_ids) else 0
        log.info("%d cliques in %d invariant buckets", len(rows), result.buckets)

        result.stage = "h-labels"
        if ck.has("h-labels"):
            hl = ck.load_array("h-labels")
        else:
            start = ck.load_array("h-partial") if ck.has("h-partial") else None
            try:
                hl = h_component_labels(rows, keys, anchor_stabilizer(anchor), budget, start)
            except BudgetExhausted:
                raise
            ck.save_array("h-labels", "hlabels.npy", hl)
        reps = np.unique(hl)
        result.partial_classes = len(reps)
        if not np.array_equal(type_ids, type_ids[hl]):
            raise AssertionError("an H-component mixes weight-2 types")
        log.info("%d H-components", len(reps))

        result.stage = "merge"
        uf = _UnionFind()
        done = 0
        if ck.has("merge"):
            state = ck.extra("merge")
            for a, b, w in state["witnesses"]:
                uf.union(a, b)
                result.witnesses.append((a, b, w))
            done = state["done"]
        cache: dict = {}
        for n, r in enumerate(reps[done:], start=done):
            if n % 64 == 0:
                try:
                    budget.check("merge")
                except BudgetExhausted:
                    ck.save_array("merge", "merge-progress.npy", np.zeros(0),
                                  {"done": n, "witnesses": result.witnesses})
                    result.partial_classes = len({uf.find(int(x)) for x in reps})
                    raise
            members = tuple(int(x) for x in rows[r])
            for pair in weight1_pairs(members):
                if set(pair) == set(anchor):
                    continue
                word = cache.get(pair)
                if word is None:
                    word = cache[pair] = weyl.transporter(pair, anchor)
                g = weyl.word_element(word)
                img = np.sort(np.asarray(g, dtype=np.uint8)[rows[r]])[None, :]
                j = int(image_indices(img, keys, weyl.IDENTITY)[0])
                if uf.union(int(r), int(hl[j])):
                    result.witnesses.append((int(r), int(hl[j]), [int(x) for x in word]))
        ck.save_array("merge", "merge-progress.npy", np.zeros(0),
                      {"done": len(reps), "witnesses": result.witnesses})
        final = np.array([uf.find(int(x)) for x in reps])
        lookup = dict(zip(reps.tolist(), final.tolist()))
        olab = np.vectorize(lookup.__getitem__, otypes=[np.int64])(hl)
        if not np.array_equal(type_ids, type_ids[olab]):
            raise AssertionError("an orbit mixes weight-2 types")

        result.stage = "records"
        labels, counts = np.unique(olab, return_counts=True)
        records = []
        for lab, cnt in zip(labels.tolist(), counts.tolist()):
            members = tuple(int(x) for x in rows[lab])
            k1 = len(weight1_pairs(members))
            num = WEIGHT1_PAIRS * cnt
            if num % k1:
                raise AssertionError("orbit size is not an integer")
            osize = num // k1
            if weyl.WEYL_ORDER % osize:
                raise AssertionError("orbit size does not divide |W8|")
            form = _form_of(members)
            records.append(OrbitRecord(0, members, cnt, osize, weyl.WEYL_ORDER // osize, form,
                                       catalogue_ids(form) if len(members) == 8 else (),
                                       orbit_invariants(members) if invariants else {}))
        assign_figure_ids(records)
        records.sort(key=lambda o: (o.figure_id or 99, -o.stabilizer_order, o.form.code,
                                    o.representative))
        for i, o in enumerate(records, 1):
            o.index = i
        result.orbits = records
        result.status = "complete"
        result.stage = "done"
        result.partial_classes = len(records)
    except BudgetExhausted as exc:
        result.status = "budget-exhausted"
        result.stage = str(exc)
    return result


def assign_figure_ids(records: Sequence[OrbitRecord]) -> None:
    """Pick one catalogue number per orbit.

    Orbits sharing a drawing get its numbers in order of decreasing
    stabilizer order; the stabilizer order separates each such pair.
    """
    groups: dict = {}
    for o in records:
        if o.figure_ids:
            groups.setdefault(o.figure_ids, []).append(o)
    for ids, members in groups.items():
        members.sort(key=lambda o: (-o.stabilizer_order, o.representative))
        for fid, o in zip(ids, members):
            o.figure_id = fid


def size8_cliques(threads: int | None = None) -> np.ndarray:
    """All anchored {1,2}-cliques of size 8."""
    return clique_array((1, 2), 8, default_anchor(), threads)


def classify_size8_orbits(budget=None, checkpoint=None, resume=False, threads=None,
                          invariants=True) -> Classification:
    rows = None
    if checkpoint and resume and os.path.exists(os.path.join(checkpoint, "cliques.npy")):
        rows = np.load(os.path.join(checkpoint, "cliques.npy"))
    if rows is None:
        rows = size8_cliques(threads)
        if checkpoint:
            os.makedirs(checkpoint, exist_ok=True)
            np.save(os.path.join(checkpoint, "cliques.npy"), rows)
    return classify(rows, budget=budget, checkpoint=checkpoint, resume=resume, tag="size8",
                    invariants=invariants)


def anchored_maximal_cliques(min_size: int = 9) -> list[tuple[int, ...]]:
    """Maximal {1,2}-cliques of G that contain the anchor pair."""
    anchor = default_anchor()
    rest = maximal_cliques(common_neighbors(anchor, (1, 2)), (1, 2), max(0, min_size - 2))
    return sorted(tuple(sorted(anchor + r)) for r in rest)


def classify_maximal_cliques(min_size: int = 9, budget=None) -> list[OrbitRecord]:
    """Orbit representatives of maximal {1,2}-cliques of size >= min_size."""
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    by_size: dict[int, list] = {}
    for c in anchored_maximal_cliques(min_size):
        by_size.setdefault(len(c), []).append(c)
    out = []
    for size in sorted(by_size):
        res = classify(np.array(by_size[size], dtype=np.uint8), budget=budget,
                       tag=f"maximal{size}")
        if res.status != "complete":
            raise BudgetExhausted(res.stage)
        out.extend(res.orbits)
    out.sort(key=lambda o: (o.size, -o.stabilizer_order, o.form.code))
    for i, o in enumerate(out, 1):
        o.index = i
    return out
