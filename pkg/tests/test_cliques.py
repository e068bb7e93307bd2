from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dp1 import cliques as cl
from dp1 import e8, weyl


def test_anchor_and_neighbors():
    anchor = cl.default_anchor()
    assert [e8.labels()[i].key for i in anchor] == ["L:1,2", "L:3,4"]
    assert len(cl.common_neighbors(anchor, (1, 2))) == 136


def test_small_counts_agree_with_listing():
    anchor = cl.default_anchor()
    for size in (3, 4, 5):
        rows = cl.clique_array((1, 2), size, anchor)
        assert cl.count_cliques((1, 2), size, anchor) == len(rows)
        assert len({tuple(r) for r in rows.tolist()}) == len(rows)
        for r in rows[:: max(1, len(rows) // 50)]:
            assert cl.is_clique(r.tolist(), (1, 2))


def test_streaming_matches_array():
    anchor = cl.default_anchor()
    streamed = sorted(c.members for c in cl.enumerate_cliques((1, 2), 4, anchor))
    arr = sorted(tuple(int(x) for x in r) for r in cl.clique_array((1, 2), 4, anchor))
    assert streamed == arr


def test_thread_count_does_not_change_count():
    anchor = cl.default_anchor()
    assert cl.count_cliques((1, 2), 5, anchor, threads=1) == \
        cl.count_cliques((1, 2), 5, anchor, threads=2)


def test_maximal_cliques_are_maximal():
    anchor = cl.default_anchor()
    verts = cl.common_neighbors(anchor, (1, 2))
    found = cl.maximal_cliques(verts, (1, 2), 10)
    assert found
    for rest in found[:20]:
        assert cl.is_maximal(tuple(anchor) + tuple(rest), (1, 2))


def test_clique_type_rejects_other_weights():
    t = e8.intersection_table()
    a = 0
    b = int(np.flatnonzero(t[a] == 0)[0])
    with pytest.raises(ValueError):
        cl.clique_type([a, b])


def test_remark_cliques_types():
    # the first has only weight-1 pairs, the second exactly one weight-2 claw
    k1 = [e8.index_of(s) for s in ("L:1,2", "L:3,4", "L:5,6", "L:7,8", "C:1,2", "C:3,4",
                                    "C:5,6", "C:7,8")]
    k2 = [e8.index_of(s) for s in ("L:1,2", "L:3,4", "L:5,6", "L:7,8", "C:1,2", "C:3,4",
                                    "C:5,6", "Q:2,4,7")]
    assert cl.clique_type(k1).figure_id == (7,)
    assert cl.clique_type(k2).figure_id == (15,)


@lru_cache(maxsize=None)
def _rows6():
    return cl.clique_array((1, 2), 6, cl.default_anchor())


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.lists(st.integers(0, 7), min_size=1, max_size=6))
def test_clique_type_is_weyl_invariant(k, word_idx):
    rows = _rows6()
    members = [int(x) for x in rows[k % len(rows)]]
    gens = weyl.weyl_generators()
    g = weyl.IDENTITY
    for i in word_idx:
        g = weyl.compose(g, gens[i])
    img = sorted(int(g[m]) for m in members)
    assert cl.clique_type(members).mult2_graph == cl.clique_type(img).mult2_graph


def test_pair_masks_roundtrip():
    rows = _rows6()[:200]
    masks = cl.pair_masks(rows)
    for r, m in zip(rows, masks):
        assert cl.mask_form(6, m) == cl.clique_type(r.tolist()).mult2_graph
