import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dp1 import e8, relations
from dp1.cliques import clique_array, default_anchor


def _labels(*names):
    return [e8.index_of(n) for n in names]


K1 = _labels("L:1,2", "L:3,4", "L:5,6", "L:7,8", "C:1,2", "C:3,4", "C:5,6", "C:7,8")
K2 = _labels("L:1,2", "L:3,4", "L:5,6", "L:7,8", "C:1,2", "C:3,4", "C:5,6", "Q:2,4,7")


def test_gram_entries():
    g = relations.gram_array(K2)
    assert (np.diag(g) == 2).all()
    w = e8.weight_matrix(sorted(K2))
    off = ~np.eye(8, dtype=bool)
    assert ((1 - w)[off] == g[off]).all()


def test_all_weight_one_clique_has_trivial_kernel():
    assert relations.kernel_lattice(K1).rank == 0
    assert relations.torsion_forcing_vector(K1) is None


def test_forcing_vector_is_kernel_vector_with_gcd_sum():
    rows = clique_array((1, 2), 8, default_anchor())
    rng = random.Random(3)
    found = 0
    for k in rng.sample(range(len(rows)), 400):
        m = [int(x) for x in rows[k]]
        v = relations.torsion_forcing_vector(m)
        basis = relations.kernel_lattice(m).basis
        sums = [sum(b) for b in basis]
        if v is None:
            assert not any(sums)
            continue
        found += 1
        g = relations.gram_array(m)
        assert not (g @ np.array(v)).any()
        from math import gcd
        d = 0
        for s in sums:
            d = gcd(d, s)
        assert sum(v) == d > 0
    assert found > 0


def test_ngon_relation_on_a_cycle():
    rows = clique_array((1, 2), 6, default_anchor())
    done = 0
    for r in rows[:5000]:
        m = [int(x) for x in r]
        cyc = relations.shortest_weight2_cycle(m)
        if cyc is None:
            with pytest.raises(relations.NoNGonError):
                relations.ngon_relation(m)
            continue
        n = relations.ngon_relation(m)
        assert n == len(cyc) >= 3
        g = relations.gram_array(m)
        idx = np.array(cyc)
        assert int(g[np.ix_(idx, idx)].sum()) == 0
        done += 1
    assert done > 0


def test_root_saturation_index_of_single_root():
    assert relations.root_saturation_index([0]) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(relations.TABLE1)), st.randoms(use_true_random=False))
def test_table_match_recovers_hidden_permutation(name, rnd):
    rows = relations.TABLE1[name]
    n = len(rows[0])
    perm = list(range(n))
    rnd.shuffle(perm)
    # source coordinate j holds target coordinate perm[j]
    src = [[row[perm[j]] for j in range(n)] for row in rows]
    if len(src) == 2:
        src = [src[0], [a + b for a, b in zip(src[0], src[1])]]
    pi = relations.match_lattice_up_to_permutation(src, rows)
    assert pi is not None
    moved = [[0] * n for _ in src]
    for i, row in enumerate(src):
        for j, x in enumerate(row):
            moved[i][pi[j]] = x
    from dp1.rational import lattice_equal
    assert lattice_equal(moved, rows, n)


def test_table_rows_do_not_match_each_other_by_accident():
    names = sorted(relations.TABLE1)
    for a in names:
        for b in names:
            if a == b:
                continue
            ra, rb = relations.TABLE1[a], relations.TABLE1[b]
            if len(ra) == len(rb) and len(ra[0]) == len(rb[0]):
                assert relations.match_lattice_up_to_permutation(ra, rb) is None, (a, b)


def test_gram_report_json():
    rep = relations.gram_report(K2).to_json()
    assert rep["labels"] and len(rep["gram"]) == 8
    assert rep["forcing_vector"] is None or rep["forcing_sum"] > 0
