from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flaskchem.dist import Distribution, empirical, join, sample, tv_distance, unit
from flaskchem.rng import Stream

half, quarter = Fraction(1, 2), Fraction(1, 4)


@st.composite
def dists(draw, atoms=st.integers(0, 9)):
    states = draw(st.lists(atoms, min_size=1, max_size=8, unique=True))
    raw = draw(st.lists(st.integers(1, 20), min_size=len(states), max_size=len(states)))
    z = sum(raw)
    return Distribution({s: Fraction(w, z) for s, w in zip(states, raw)})


def test_unit():
    d = unit("s")
    assert d["s"] == 1 and d["t"] == 0 and len(d) == 1
    assert unit("s").map(str.upper) == unit("S")


def test_map_examples():
    d = Distribution({"x": half, "y": half})
    assert d.map(lambda _: "c") == unit("c")
    assert d.map(str.upper) == Distribution({"X": half, "Y": half})
    f = {"x": "z", "y": "z", "w": "w"}.__getitem__
    assert Distribution({"x": quarter, "y": quarter, "w": half}).map(f) == Distribution({"z": half, "w": half})


def test_join_examples():
    inner = Distribution({"x": half, "y": half})
    dd = Distribution({inner: half, unit("x"): half})
    assert join(dd) == Distribution({"x": Fraction(3, 4), "y": quarter})


def test_tv_examples():
    d = Distribution({"a": half, "b": half})
    assert tv_distance(d, d) == 0
    assert tv_distance(unit("a"), unit("b")) == 1
    assert tv_distance(d, Distribution({"a": quarter, "b": Fraction(3, 4)})) == quarter


def test_validation():
    with pytest.raises(ValueError):
        Distribution({"a": half})
    with pytest.raises(ValueError):
        Distribution({"a": Fraction(3, 2), "b": -half})
    d = Distribution({"a": 1, "b": 0})
    assert d.support() == ["a"]


def test_sample_unit_any_seed():
    for seed in range(20):
        assert sample(unit("s"), Stream(seed)) == "s"


def test_sample_deterministic():
    d = Distribution({c: Fraction(1, 4) for c in "abcd"})
    a = [sample(d, Stream(99)) for _ in range(1)]
    r1, r2 = Stream(5), Stream(5)
    assert [sample(d, r1) for _ in range(50)] == [sample(d, r2) for _ in range(50)]
    assert a == [sample(d, Stream(99))]


def test_sample_frequency():
    d = Distribution({"a": half, "b": half})
    rng = Stream(11)
    freq = sum(sample(d, rng) == "a" for _ in range(100_000)) / 100_000
    assert 0.49 <= freq <= 0.51


def test_json_round_trip():
    d = Distribution({"a": Fraction(1, 3), "b": Fraction(2, 3)})
    text = json.dumps(d.to_json())
    assert json.loads(text) == [{"state": "a", "num": "1", "den": "3"}, {"state": "b", "num": "2", "den": "3"}]
    assert Distribution.from_json(json.loads(text)) == d


def test_empirical():
    e = empirical(["a", "b", "a", "a"])
    assert e == Distribution({"a": Fraction(3, 4), "b": quarter})


@given(dists())
def test_left_unit(d):
    assert join(unit(d)) == d


@given(dists())
def test_right_unit(d):
    assert join(d.map(unit)) == d


@given(st.lists(dists(), min_size=1, max_size=4), st.data())
def test_associativity(inner, data):
    outer = [data.draw(dists(st.sampled_from(inner))) for _ in range(3)]
    ddd = data.draw(dists(st.sampled_from(outer)))
    assert join(join(ddd)) == join(ddd.map(join))


@given(dists(), st.functions(like=lambda x: 0, returns=st.integers(0, 3), pure=True))
def test_map_preserves_mass_and_shrinks_support(d, f):
    m = d.map(f)
    assert sum(w for _, w in m.items()) == 1
    assert all(w > 0 for _, w in m.items())
    assert len(m) <= len(d)


@given(dists(), dists())
def test_tv_is_a_metric_bound(d1, d2):
    t = tv_distance(d1, d2)
    assert 0 <= t <= 1 and t == tv_distance(d2, d1)
