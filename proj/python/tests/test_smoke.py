import json

import pytest

import cpbaer


def test_version_and_suites():
    assert cpbaer.__version__ == cpbaer.version()
    assert "poly-transfer" in cpbaer.suite_names()
    assert cpbaer.canonical_suite("thm12-poly") == "poly-transfer"
    assert cpbaer.canonical_suite("nope") is None
    assert len(cpbaer.flag_names()) == 15


def test_ring_tables():
    r = cpbaer.Ring("zmod 6")
    assert len(r) == 6
    assert r.mul(2, 3) == 0
    assert r.add(4, 5) == 3
    assert r.neg(1) == 5
    assert r.idempotents() == [0, 1, 3, 4]
    assert r.right_annihilator([3]) == [0, 2, 4]
    assert r.right_ideal([4]) == [0, 2, 4]
    with pytest.raises(IndexError):
        r.mul(6, 1)


def test_classify_report():
    rep = cpbaer.classify("zmod 6")
    assert rep["status"] == "pass"
    props = rep["properties"][0]
    assert props["flags"]["baer"] == "true"
    assert props["flags"]["prime"] == "false"
    assert props["idempotents"] == [0, 1, 3, 4]
    assert cpbaer.Ring("zmod 6").classify()["flags"] == props["flags"]


def test_suite_with_bounds():
    rep = cpbaer.verify("thm12-poly", "ring: upper_triangular 2 (zmod 2)\nalpha: identity\n", bound_n=2, bound_d=3)
    assert rep["status"] == "pass"
    assert rep["bounds"]["N"] == 2
    assert rep["bounds"]["D"] == 3


def test_shift_example_without_spec():
    rep = cpbaer.verify("example13")
    names = [c["name"] for c in rep["checks"]]
    assert "not alpha-compatible" in names


def test_mine():
    rep = cpbaer.mine("zmod", "abelian", max_order=12)
    assert len(rep["matches"]) == 11


def test_errors():
    with pytest.raises(cpbaer.SpecError) as err:
        cpbaer.Ring("zmod")
    assert "column 5" in str(err.value)
    assert isinstance(err.value, ValueError)
    with pytest.raises(cpbaer.InputError):
        cpbaer.verify("thm99", "zmod 6")
    with pytest.raises(cpbaer.CapExceeded):
        cpbaer.Ring("matrix 3 (zmod 2)", order_cap=100)


def test_canonical_spec_round_trip():
    text = "ring:  product (zmod 2)(zmod 3)   # comment\nalpha: identity\n"
    canon = cpbaer.canonical_spec(text)
    assert cpbaer.canonical_spec(canon) == canon


def test_cache_dir(tmp_path):
    first = cpbaer.classify("zmod 10", cache_dir=str(tmp_path))
    second = cpbaer.classify("zmod 10", cache_dir=str(tmp_path))
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
    assert len(list(tmp_path.iterdir())) == 1
