import math

import pytest

import torq_py as tq


def test_counts():
    assert tq.count_classical(8) == 92
    assert tq.count_toroidal(7) == 28
    assert tq.count_toroidal(6) == 0
    assert tq.monsky(7) == 7
    assert tq.monsky(8) == 6


def test_ones_membership():
    assert tq.check_lattice(tq.ones(5))["in_lattice"]
    v = tq.check_lattice(tq.ones(6))
    assert not v["in_lattice"]
    assert v["condition"] == "b"
    for n in range(4, 12):
        assert tq.check_lattice(tq.ones(n))["in_lattice"] == tq.hnf_oracle(tq.ones(n))


def test_schema_errors():
    with pytest.raises(ValueError, match="/n"):
        tq.check_lattice({"n": -3, "entries": []})
    with pytest.raises(ValueError, match="/entries/0/coord"):
        tq.check_lattice({"n": 5, "entries": [{"part": "X", "coord": 7, "weight": 1}]})


def test_config_is_neutral():
    c = tq.make_config(13, 1, 2, 3, 4)
    assert c["valid"]
    assert len(c["plus"]) == 4 and len(c["minus"]) == 4


def test_decompose_ones():
    r = tq.decompose(tq.ones(31))
    assert r["size"] > 0
    assert r["target"]["n"] == 31


def test_greedy():
    t = tq.greedy(101, seed=3)
    assert t["Q"][0] == 101 * 101
    assert t["dmin"][0] == t["dmax"][0] == 101
    k = len(t["matching"])
    assert len(t["Q"]) == k + 1
    # a run may dead-end before the target
    assert k == t["target"] or t["Q"][k] == 0
    est = t["normalized_estimate"]
    assert abs(est - (math.log(101) - 3)) < 1.0


def test_knuth_small():
    k = tq.knuth(5, 5000, seed=1)
    assert abs(k["estimate"] - 1200) / 1200 < 0.15
    with pytest.raises(ValueError):
        tq.knuth(5, 0)


def test_wset_and_extend():
    w = tq.build_wset(40)
    assert w["case"] == "even-3ndiv"
    assert len(w["removed"]) == 48
    assert tq.verify_wset(w)["in_lattice"]
    p = tq.extend(40, timeout=20, seed=1)
    assert p is not None
    assert len(p["queens"]) == 40
    assert tq.verify_placement(p) == []
    with pytest.raises(tq.Unsupported):
        tq.build_wset(129)
