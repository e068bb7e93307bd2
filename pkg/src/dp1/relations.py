"""Height-pairing Gram matrices of cliques and the relations they force.

For sections coming from exceptional classes the height pairing is
``<C_i, C_j> = 1 - C_i . C_j`` (2 on the diagonal), the E8 root pairing.
An integer kernel vector ``a`` of the Gram matrix is a relation
``sum a_i C_i = 0`` in the Mordell-Weil group; if the curves meet in a point
P, it specializes to ``(sum a_i) P = 0`` on the fiber of P.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from . import e8
from .cliques import WeightedClique
from .rational import (IntegerLattice, RationalMatrix, determinant,
                       integer_kernel, rank, smith_invariants)


class NoNGonError(ValueError):
    pass


@dataclass(frozen=True)
class GramReport:
    clique: WeightedClique
    gram: RationalMatrix
    kernel: IntegerLattice
    forcing_vector: tuple | None

    def to_json(self) -> dict:
        n = len(self.clique)
        return {
            "members": list(self.clique.members),
            "labels": self.clique.labels(),
            "gram": [[int(self.gram[i, j]) for j in range(n)] for i in range(n)],
            "kernel_basis": self.kernel.tolist(),
            "forcing_vector": list(self.forcing_vector) if self.forcing_vector else None,
            "forcing_sum": sum(self.forcing_vector) if self.forcing_vector else None,
        }


def _members(c) -> tuple:
    return c.members if isinstance(c, WeightedClique) else tuple(c)


def gram_array(c) -> np.ndarray:
    return 1 - e8.weight_matrix(_members(c))


def gram_matrix(c) -> RationalMatrix:
    g = gram_array(c)
    return RationalMatrix.from_rows(g.tolist())


def kernel_lattice(c) -> IntegerLattice:
    return integer_kernel(gram_matrix(c))


def torsion_forcing_vector(c) -> tuple | None:
    """Kernel vector whose coordinate sum is the positive generator of the sum's image.

    The sum functional vanishes on the kernel lattice iff it vanishes on a
    basis, in which case there is no forcing vector.
    """
    basis = kernel_lattice(c).basis
    sums = [sum(b) for b in basis]
    if not any(sums):
        return None
    # extended gcd over the basis sums
    coeffs = [0] * len(basis)
    g = 0
    for k, s in enumerate(sums):
        if s == 0:
            continue
        if g == 0:
            g, coeffs[k] = abs(s), (1 if s > 0 else -1)
            continue
        d, x, y = _xgcd(g, s)
        coeffs = [x * a for a in coeffs]
        coeffs[k] = y
        g = d
    n = len(basis[0])
    v = [sum(a * b[i] for a, b in zip(coeffs, basis)) for i in range(n)]
    assert sum(v) == g
    return tuple(v)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gram_report(c) -> GramReport:
    clique = c if isinstance(c, WeightedClique) else WeightedClique(tuple(c))
    return GramReport(clique, gram_matrix(clique), kernel_lattice(clique),
                      torsion_forcing_vector(clique))


def shortest_weight2_cycle(c) -> list[int] | None:
    """Positions (into the member list) of a shortest cycle of weight-2 edges.

    A shortest cycle has no chords, so non-consecutive members meet with
    weight 1.
    """
    w = e8.weight_matrix(_members(c))
    n = len(w)
    adj = [[j for j in range(n) if j != i and w[i, j] == 2] for i in range(n)]
    best = None
    for s in range(n):
        dist = {s: 0}
        parent = {s: None}
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    q.append(y)
                elif parent[x] != y and dist[y] >= dist[x]:
                    cyc = _join(parent, x, y)
                    if best is None or len(cyc) < len(best):
                        best = cyc
    return best


def _join(parent, x, y):
    def up(v):
        path = []
        while v is not None:
            path.append(v)
            v = parent[v]
        return path
    px, py = up(x), up(y)
    on_y = set(py)
    cut = next(i for i, v in enumerate(px) if v in on_y)
    lca = px[cut]
    return px[:cut + 1] + py[:py.index(lca)][::-1]


def ngon_relation(c) -> int:
    """Length n of a chordless weight-2 cycle; its sections sum to zero."""
    cyc = shortest_weight2_cycle(c)
    if cyc is None:
        raise NoNGonError("no n-gon in this clique")
    g = gram_array(c)
    idx = np.array(cyc)
    if int(g[np.ix_(idx, idx)].sum()) != 0:
        raise AssertionError("sum of an n-gon does not have height zero")
    return len(cyc)


def root_saturation_index(c) -> int:
    """Index of the Z-span of the clique's roots inside its saturation in Pic."""
    rows = [e8.root_vector(i) for i in _members(c)]
    out = 1
    for d in smith_invariants(rows):
        out *= d
    return out


def root_sum_norm(c) -> int:
    return int(gram_array(c).sum())


# Kernel bases of the 18 orbit types of maximal {1,2}-cliques of size >= 9.
TABLE1: dict[str, tuple] = {
    "alpha1": ((1, 1, 0, 0, 0, 0, 1, 0, 1), (0, 0, 1, 1, 1, 1, 0, 2, 0)),
    "alpha2": ((1, 0, 1, 0, 0, 1, 0, 0, 1), (0, 0, 0, 1, 1, 0, 1, 0, 0)),
    "alpha3": ((1, 1, 1, 0, 0, 1, 0, 0, 1), (0, 0, 0, 1, 1, 0, 1, 1, 0)),
    "alpha4": ((1, 1, 0, 1, 0, 0, 1, 0, 1), (0, 0, 1, 0, 0, 1, 0, 1, 0)),
    "alpha5": ((2, 1, 1, 0, 2, 0, 0, 1, 1), (0, 0, 0, 1, 0, 1, 1, 0, 0)),
    "alpha6": ((1, 1, 1, 1, 1, 1, 1, 1, 1),),
    "alpha7": ((1, 1, 1, 0, 1, 1, 1, 1, 1),),
    "alpha8": ((0, 1, 1, 2, 2, 2, 1, 1, 0),),
    "alpha9": ((2, 1, 1, 1, 1, 2, 2, 2, 2),),
    "alpha10": ((2, 2, 0, 3, 1, 4, 2, 3, 1),),
    "alpha11": ((6, 3, 1, 4, 4, 2, 2, 5, 3),),
    "beta1": ((1, 0, 1, 0, 0, 2, 1, 0, 0, 1), (0, 1, 0, 1, 2, 0, 0, 1, 1, 0)),
    "beta2": ((1, 1, 0, 0, 0, 0, 0, 0, 1, 1), (0, 0, 0, 0, 1, 1, 1, 1, 0, 0)),
    "beta3": ((1, 1, 0, 1, 0, 0, 0, 1, 0, 1), (0, 0, 1, 0, 1, 1, 1, 0, 1, 0)),
    "beta4": ((1, 1, 0, 1, 0, 1, 0, 0, 1, 1), (0, 0, 0, 0, 1, 0, 1, 1, 0, 0)),
    "beta5": ((1, 1, 0, 0, 0, 0, 0, 0, 1, 1), (0, 0, 1, 1, 1, 1, 2, 2, 0, 0)),
    "beta6": ((2, 1, 3, 0, 2, 0, 2, 0, 1, 1), (0, 0, 0, 1, 0, 1, 0, 1, 0, 0)),
    "gamma": ((1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1), (0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0),
              (0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0), (0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0)),
}


def match_lattice_up_to_permutation(basis: Sequence[Sequence[int]], target: Sequence[Sequence[int]]
                                    ) -> tuple[int, ...] | None:
    """A coordinate permutation pi with pi(span basis) = span target, or None.

    ``pi[j]`` is the target coordinate that source coordinate j moves to.
    Solve U * B[:, I] = T[:, J] for a fixed independent column set J of T
    and every injective column choice I of B; accept when U is unimodular
    and U * B reproduces the column multiset of T.
    """
    B = [list(map(int, b)) for b in basis]
    T = [list(map(int, t)) for t in target]
    if len(B) != len(T) or (B and len(B[0]) != len(T[0])):
        return None
    r = len(T)
    if r == 0:
        return tuple(range(len(basis[0]) if basis else 0))
    n = len(T[0])
    tcols = [tuple(T[i][j] for i in range(r)) for j in range(n)]
    bcols = [tuple(B[i][j] for i in range(r)) for j in range(n)]
    J = _independent_columns(T)
    TJ = RationalMatrix.from_rows([[T[i][j] for j in J] for i in range(r)])
    target_multiset = sorted(tcols)
    for I in permutations(range(n), r):
        BI = RationalMatrix.from_rows([[B[i][j] for j in I] for i in range(r)])
        d = determinant(BI)
        if d == 0:
            continue
        U = _matmul(TJ, _inverse(BI))
        if not U.is_integral() or abs(determinant(U)) != 1:
            continue
        images = [tuple(int(x) for x in U.apply(col)) for col in bcols]
        if sorted(images) != target_multiset:
            continue
        free = {}
        for j, col in enumerate(tcols):
            free.setdefault(col, []).append(j)
        return tuple(free[img].pop(0) for img in images)
    return None


def _independent_columns(rows) -> list[int]:
    chosen = []
    r = len(rows)
    for j in range(len(rows[0])):
        trial = chosen + [j]
        m = RationalMatrix.from_rows([[rows[i][k] for k in trial] for i in range(r)])
        if rank(m) == len(trial):
            chosen = trial
        if len(chosen) == r:
            break
    return chosen


def _inverse(m: RationalMatrix) -> RationalMatrix:
    n = m.rows
    a = [list(m.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c])
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return RationalMatrix.from_rows([row[n:] for row in a])


def _matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return RationalMatrix.from_rows(
        [[sum((a[i, k] * b[k, j] for k in range(a.cols)), Fraction(0)) for j in range(b.cols)]
         for i in range(a.rows)])


def subsets_forcing_failures(members: Sequence[int], min_size: int = 9) -> list[tuple]:
    """Sub-cliques of size >= min_size that admit no forcing vector."""
    out = []
    for k in range(min_size, len(members) + 1):
        for sub in combinations(members, k):
            if torsion_forcing_vector(sub) is None:
                out.append(sub)
    return out


def match_table(members: Sequence[int]) -> tuple[str, tuple[int, ...]] | None:
    """First tabulated kernel basis equal to this clique's kernel up to reordering."""
    basis = kernel_lattice(members).basis
    for name, rows in TABLE1.items():
        if len(rows) != len(basis) or len(rows[0]) != len(members):
            continue
        pi = match_lattice_up_to_permutation(basis, rows)
        if pi is not None:
            return name, pi
    return None


def table_assignment(representatives: Sequence[Sequence[int]]) -> dict[int, str]:
    """Bijection representative index -> table row, or raise if none exists."""
    options = []
    for members in representatives:
        basis = kernel_lattice(members).basis
        opts = [name for name, rows in TABLE1.items()
                if len(rows) == len(basis) and len(rows[0]) == len(members)
                and match_lattice_up_to_permutation(basis, rows) is not None]
        options.append(opts)
    used: dict[str, int] = {}

    def augment(i, seen):
        for name in options[i]:
            if name in seen:
                continue
            seen.add(name)
            if name not in used or augment(used[name], seen):
                used[name] = i
                return True
        return False

    for i in range(len(representatives)):
        if not augment(i, set()):
            raise ValueError(f"representative {i} matches no free table row: {options[i]}")
    return {i: name for name, i in used.items()}
