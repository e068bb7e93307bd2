import pytest

from dp1 import suites


def test_properties_suite():
    rep = suites.run_suite("properties")
    assert rep.passed, rep.to_json()
    assert [c.name for c in rep.checks] == ["group_law", "lattice_roundtrips", "weyl_weights"]


def test_examples_suite():
    rep = suites.run_suite("examples")
    assert rep.passed, rep.to_json()
    assert rep.to_json()["schema"] == suites.REPORT_SCHEMA


def test_crashing_check_is_a_failure():
    def boom():
        raise RuntimeError("x")
    c = suites._timed("boom", boom)
    assert not c.passed and "RuntimeError" in c.detail["error"]


def test_unknown_suite():
    with pytest.raises(ValueError):
        suites.run_suite("nope")
