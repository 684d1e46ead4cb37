import pytest

import lq

N = r"(\y:(o->o).\x:o. y (y x))"
EXAMPLE = rf"(\y:(o->o). {N} ({N} ({N} y)) (a e)) a"


def test_parse():
    info = lq.parse(EXAMPLE)
    assert info["sort"] == "o"
    assert info["complexity"] == 2
    assert info["homogeneous"] and info["closed"]
    assert lq.parse("e")["complexity"] == 0


def test_errors():
    with pytest.raises(lq.SortError):
        lq.parse("a a")
    with pytest.raises(lq.ParseError):
        lq.parse("(a e")
    with pytest.raises(ValueError):
        lq.det_value_and_flag(r"\x:o. x")
    with pytest.raises(lq.CapacityError):
        lq.max_nd_value(EXAMPLE, 2, caps="max_m=1")


def test_normalize():
    assert lq.normalize(r"(\x:o. x) e", "oi") == ("e", 1)
    tree = lq.normal_tree(EXAMPLE)
    assert lq.count_a(tree) == 9
    assert lq.max_branch_a(tree) == 9


def test_tree_metrics():
    assert lq.build_An(1) == "a(e,e)"
    assert [lq.embed_depth(lq.build_An(n)) for n in range(6)] == list(range(6))
    assert lq.max_branch_a("b(a(e),a(a(e)))") == 2


def test_det():
    assert lq.det_value_and_flag("e") == ("np", 0)
    assert lq.det_value_and_flag("b (a e) e") == ("pr", 1)
    assert lq.det_value_and_flag(EXAMPLE) == ("pr", 5)


def test_nondet():
    assert lq.max_nd_value("e", 0) == 0
    assert lq.max_nd_value("a e", 0) == 1
    assert lq.max_nd_value(EXAMPLE, 2) == 5
    assert lq.max_nd_value("e", 1) is None


def test_analyze_report():
    report = lq.analyze(EXAMPLE, "nondet", m=2, derivation=True)
    assert report["maxValue"] == 5
    assert report["oracle"]["max_branch_a"] == 9
    assert all(report["verdicts"].values())
    assert len(report["derivation"]["kValues"]) == 3


def test_family():
    run = lq.family("example1", 4)
    assert [r["value"] for r in run["records"]] == [3, 4, 5, 6]
    assert [r["count_a"] for r in run["records"]] == [3, 5, 9, 17]
    assert run["verdict"] == "both increase"


def test_selftest_deterministic():
    first = lq.selftest(seed=3, count=20)
    assert first["ok"]
    assert first == lq.selftest(seed=3, count=20)
