"""Ranking construction, errors-in-sequence, accuracy and spread."""

from __future__ import annotations

import math
import random

import pytest
from scipy.stats import kendalltau

from meshcalm import (
    InvalidArgumentError,
    Ranking,
    eis,
    moa,
    rank_by_metric,
    round_moa,
    spread,
)


def ranking(names) -> Ranking:
    return Ranking(tuple(names), "test", "larger")


def test_rank_smaller_is_better():
    result = rank_by_metric({"a": 10.0, "b": 5.0}, "smaller")
    assert result.names == ("a", "b")


def test_rank_larger_is_better():
    result = rank_by_metric({"a": 3.1, "b": 3.9}, "larger")
    assert result.names == ("a", "b")


def test_rank_flags_ties():
    result = rank_by_metric({"a": 1.0, "b": 1.0}, "larger")
    assert result.names == ("a", "b")
    assert result.ties == (("a", "b"),)


def test_rank_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        rank_by_metric({}, "larger")
    with pytest.raises(InvalidArgumentError):
        rank_by_metric({"a": 1.0}, "larger")
    with pytest.raises(InvalidArgumentError):
        rank_by_metric({"a": 1.0, "b": 2.0}, "bigger")


def test_eis_eleven_item_sequence():
    reference = ranking([f"CA{i}" for i in range(1, 12)])
    predicted = ranking(
        ["CA1", "CA4", "CA2", "CA5", "CA6", "CA3", "CA7", "CA8", "CA10", "CA9", "CA11"]
    )
    assert eis(predicted, reference) == 5


def test_eis_identical_rankings():
    r = ranking(["a", "b", "c"])
    assert eis(r, r) == 0


def test_eis_full_reversal():
    assert eis(ranking(["d", "c", "b", "a"]), ranking(["a", "b", "c", "d"])) == 6


def test_eis_rejects_mismatched_names():
    with pytest.raises(InvalidArgumentError):
        eis(ranking(["a", "b"]), ranking(["a", "c"]))


def test_eis_is_a_metric_on_permutations():
    rng = random.Random(89)
    names = [f"ca{i}" for i in range(8)]
    for _ in range(30):
        p1, p2, p3 = (rng.sample(names, len(names)) for _ in range(3))
        d12 = eis(ranking(p1), ranking(p2))
        d21 = eis(ranking(p2), ranking(p1))
        assert d12 == d21
        assert (d12 == 0) == (p1 == p2)
        d13 = eis(ranking(p1), ranking(p3))
        d23 = eis(ranking(p2), ranking(p3))
        assert d13 <= d12 + d23


def test_eis_matches_kendall_tau():
    rng = random.Random(97)
    names = [f"ca{i}" for i in range(7)]
    pairs = math.comb(len(names), 2)
    for _ in range(20):
        p1 = rng.sample(names, len(names))
        p2 = rng.sample(names, len(names))
        pos1 = {n: i for i, n in enumerate(p1)}
        pos2 = {n: i for i, n in enumerate(p2)}
        tau, _ = kendalltau([pos1[n] for n in names], [pos2[n] for n in names])
        expected = round((1.0 - tau) * pairs / 2.0)
        assert eis(ranking(p1), ranking(p2)) == expected


def test_moa_examples():
    assert round_moa(moa(5, 11)) == 91
    assert round_moa(moa(17, 11)) == 69
    assert round_moa(moa(9, 11)) == 84
    assert round_moa(moa(8, 11)) == 85
    assert moa(0, 7) == 100.0


def test_moa_identity():
    for n in range(2, 12):
        pairs = math.comb(n, 2)
        for e in range(pairs + 1):
            assert moa(e, n) + 100.0 * e / pairs == pytest.approx(100.0, abs=1e-12)


def test_moa_range_checks():
    with pytest.raises(InvalidArgumentError):
        moa(-1, 5)
    with pytest.raises(InvalidArgumentError):
        moa(11, 5)
    with pytest.raises(InvalidArgumentError):
        moa(0, 1)


def test_spread_examples():
    assert spread(38.9, 38.8) == pytest.approx(0.2577, abs=5e-4)
    assert spread(12.0, 12.0) == 0.0
    assert spread(6.4, 7.1) == pytest.approx(-9.859, abs=5e-3)


def test_spread_rejects_nonpositive_observed():
    with pytest.raises(InvalidArgumentError):
        spread(1.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        spread(1.0, -2.0)
