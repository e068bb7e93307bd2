import json
import os

import numpy as np
import pytest

from dp1 import orbits as ob
from dp1 import weyl
from dp1.cliques import clique_array, count_cliques, default_anchor


@pytest.mark.parametrize("size", [3, 4, 5])
def test_orbit_sizes_account_for_every_clique(size):
    """Sum of orbit sizes = cliques of G with at least one weight-1 pair."""
    res = ob.classify(clique_array((1, 2), size, default_anchor()), tag=f"t{size}")
    assert res.status == "complete"
    total = sum(o.orbit_size for o in res.orbits)
    expected = count_cliques((1, 2), size, ()) - count_cliques((2,), size, ())
    assert total == expected
    for o in res.orbits:
        assert o.orbit_size * o.stabilizer_order == weyl.WEYL_ORDER


def test_size3_orbits_by_weight_pattern():
    res = ob.classify(clique_array((1, 2), 3, default_anchor()), tag="t3")
    # the third class meets the anchor pair with weights (1,1), (1,2)/(2,1) or (2,2)
    assert sorted(len(o.form.edges) for o in res.orbits) == [0, 1, 2]


def test_budget_exhaustion_reports_lower_bound():
    rows = clique_array((1, 2), 6, default_anchor())
    res = ob.classify(rows, budget=0.0, tag="b6")
    assert res.status == "budget-exhausted"
    assert res.buckets >= 1 and res.type_count is None
    data = res.to_json()
    assert data["orbit_count"] is None and data["type_lower_bound"] == res.buckets


def test_checkpoint_resume_gives_same_result(tmp_path):
    rows = clique_array((1, 2), 6, default_anchor())
    ck = str(tmp_path / "ck")
    first = ob.classify(rows, budget=0.0, checkpoint=ck, tag="c6")
    assert first.status == "budget-exhausted"
    with open(os.path.join(ck, "manifest.json")) as fh:
        man = json.load(fh)
    assert man["format"] == ob.CHECKPOINT_FORMAT and man["version"] == ob.CHECKPOINT_VERSION
    assert "types" in man["stages"]
    resumed = ob.classify(rows, checkpoint=ck, resume=True, tag="c6")
    fresh = ob.classify(rows, tag="c6")
    assert resumed.status == fresh.status == "complete"
    assert [o.representative for o in resumed.orbits] == [o.representative for o in fresh.orbits]


def test_checkpoint_refuses_other_runs(tmp_path):
    ck = str(tmp_path / "ck")
    ob.classify(clique_array((1, 2), 4, default_anchor()), checkpoint=ck, tag="x")
    with pytest.raises(ValueError):
        ob.classify(clique_array((1, 2), 5, default_anchor()), checkpoint=ck, resume=True,
                    tag="x")


def test_rows_must_contain_anchor():
    with pytest.raises(ValueError):
        ob.classify(np.array([[0, 1, 2]], dtype=np.uint8))


def test_type_signatures_separate_by_graph():
    rows = clique_array((1, 2), 6, default_anchor())
    ids = ob.type_signatures(rows)
    res = ob.classify(rows, tag="s6", invariants=False)
    # cliques in one orbit share a bucket; buckets never exceed distinct graphs
    assert ids.max() + 1 <= len({o.form for o in res.orbits})


def test_size8_classification(size8_classification):
    res = size8_classification
    assert res.status == "complete"
    assert len(res.orbits) == 47 and res.type_count == 45
    assert res.total == 8963624
    assert sorted(o.figure_id for o in res.orbits) == list(range(1, 48))
    stab = {o.figure_id: o.stabilizer_order for o in res.orbits}
    assert stab[7] == 1344 and stab[44] == 512 and stab[45] == 128
    assert stab[40] == 32 and stab[41] == 16
    assert len(set(stab.values())) == 20
    assert sum(o.anchored_count for o in res.orbits) == res.total
    for o in res.orbits:
        assert o.figure_id in o.figure_ids


def test_shared_drawings_separated_by_saturation(size8_classification):
    by = {o.figure_id: o for o in size8_classification.orbits}
    for a, b in ((40, 41), (44, 45)):
        assert by[a].form == by[b].form
        assert by[a].invariants["root_saturation_index"] == 2
        assert by[b].invariants["root_saturation_index"] == 1


def test_maximal_orbits(maximal_orbits):
    sizes = [o.size for o in maximal_orbits]
    assert sizes.count(9) == 11 and sizes.count(10) == 6 and sizes.count(12) == 1
    assert [o.stabilizer_order for o in maximal_orbits] == [
        64, 48, 40, 30, 24, 18, 16, 8, 4, 2, 1, 192, 128, 100, 36, 32, 18, 3888]
