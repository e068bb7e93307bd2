"""Exact linear algebra over Q and Z.

Rationals are :class:`fractions.Fraction`; matrices are immutable row-major
tuples.  Everything here is small and dense: the largest matrices are the
28-column linear systems for plane sextics and the 12x12 Gram matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Rat = Fraction


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(as_rat(x) for r in rows for x in r))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def apply(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(self.row(i), v)), Fraction(0))
                for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)


@dataclass(frozen=True)
class IntegerLattice:
    """A sublattice of Z^dim, stored by its row Hermite normal form basis."""

    dim: int
    basis: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        """Membership test by reduction against the echelon basis."""
        w = [int(x) for x in v]
        if len(w) != self.dim:
            raise ValueError("dimension mismatch")
        for b in self.basis:
            p = _pivot(b)
            if w[p] % b[p]:
                return False
            q = w[p] // b[p]
            if q:
                w = [x - q * y for x, y in zip(w, b)]
        return not any(w)

    def tolist(self) -> list[list[int]]:
        return [list(b) for b in self.basis]


def _pivot(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1


def _integer_rows(m: RationalMatrix) -> list[list[int]]:
    """Rows scaled by the lcm of their denominators; same row space, same kernel."""
    out = []
    for i in range(m.rows):
        r = m.row(i)
        d = 1
        for x in r:
            d = lcm(d, x.denominator)
        out.append([int(x * d) for x in r])
    return out


def rank(m: RationalMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            ai[c] = 0
            for j in range(c + 1, ncols):
                ai[j] = (p * ai[j] - f * a[r][j]) // prev
        prev = p
        r += 1
    return r


def rref(m: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns (first nonzero pivoting)."""
    a = [list(m.row(i)) for i in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a[:r], pivots


def rational_kernel(m: RationalMatrix) -> list[list[Fraction]]:
    """A basis of the right kernel over Q, one vector per free column."""
    reduced, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def primitive(v: Sequence) -> list[int]:
    """Clear denominators, divide by the content, make the first nonzero entry positive."""
    v = [as_rat(x) for x in v]
    d = 1
    for x in v:
        d = lcm(d, x.denominator)
    w = [int(x * d) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    w = [x // g for x in w]
    if w[_pivot(w)] < 0:
        w = [-x for x in w]
    return w


def hermite_normal_form(vectors: Iterable[Sequence[int]], dim: int | None = None) -> IntegerLattice:
    """Row HNF of the Z-span: positive pivots, entries above a pivot reduced mod it."""
    rows = [[int(x) for x in v] for v in vectors]
    if dim is None:
        if not rows:
            raise ValueError("dimension unknown for an empty basis")
        dim = len(rows[0])
    rows = [r for r in rows if any(r)]
    for r in rows:
        if len(r) != dim:
            raise ValueError("vectors of different dimensions")
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        # Euclid on column `col` until a single row carries it.
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            head = nz[0]
            nxt = [head]
            for r in nz[1:]:
                q = r[col] // head[col]
                r = [x - q * y for x, y in zip(r, head)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        head = nz[0]
        if head[col] < 0:
            head = [-x for x in head]
        basis.append(head)
        rows = rest
        col += 1
    for i, b in enumerate(basis):
        p = _pivot(b)
        for k in range(i):
            q = basis[k][p] // b[p]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], b)]
    return IntegerLattice(dim, tuple(tuple(b) for b in basis))


def integer_kernel(m: RationalMatrix) -> IntegerLattice:
    """Saturated lattice {v in Z^n : m v = 0}, in HNF.

    Row-reduce the transpose of the integer-scaled matrix alongside an
    identity block; the transform is unimodular, so the identity rows that end
    up paired with zero rows span the whole integer kernel.
    """
    a = _integer_rows(m)
    n = m.cols
    aug = [[a[i][j] for i in range(m.rows)] + [int(k == j) for k in range(n)]
           for j in range(n)]
    width = m.rows
    done = 0
    for c in range(width):
        live = [r for r in aug[done:] if r[c]]
        dead = [r for r in aug[done:] if not r[c]]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            head = live[0]
            nxt = [head]
            for r in live[1:]:
                q = r[c] // head[c]
                r = [x - q * y for x, y in zip(r, head)]
                (nxt if r[c] else dead).append(r)
            live = nxt
        aug = aug[:done] + live + dead
        done += 1
    kernel = [r[width:] for r in aug[done:]]
    return hermite_normal_form(kernel, dim=n)


def lattice_equal(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]], dim: int) -> bool:
    return hermite_normal_form(a, dim) == hermite_normal_form(b, dim)


def determinant(m: RationalMatrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("square matrix required")
    a = [list(m.row(i)) for i in range(m.rows)]
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] * inv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def solve(m: RationalMatrix, rhs: Sequence) -> list[Fraction] | None:
    """One solution of m x = rhs, or None if inconsistent."""
    aug = RationalMatrix.from_rows(
        [list(m.row(i)) + [as_rat(rhs[i])] for i in range(m.rows)], m.cols + 1)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return x


def smith_invariants(rows: Iterable[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [[int(x) for x in r] for r in rows]
    if not a:
        return ()
    n, m = len(a), len(a[0])
    out = []
    t = 0
    while t < min(n, m):
        entries = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, m) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, m):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                # the pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest nonzero of row/column t to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, n) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, m) if a[t][j]]
            _, i, j = min(cands)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        out.append(abs(a[t][t]))
        t += 1
    return tuple(out)
