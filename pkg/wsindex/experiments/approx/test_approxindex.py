"""Approximate index testing.
"""

import pytest

from wsindex.core.errors import IndexLoadError, WSeqValidationError
from wsindex.core.oracles import match_probability, naive_weighted_occurrences, solid_occurrence_set
from wsindex.core.probability import DELTA_CMP, at_least
from wsindex.approx.approxindex import ApproxIndex, approx_report, build_approx_index
from wsindex.index.weightedindex import build_weighted_index
from wsindex.rand.sampling import RandomizedConfig
from wsindex.experiments.helpers import make_rng, random_sequence


def above(x, pattern, bound):
    """Positions where the pattern's probability reaches a bound, up to slack.

    Windows running past the end have probability 0.
    """
    found = set()
    for i in range(1, x.n + 1):
        p = match_probability(x, pattern, i) if i + len(pattern) - 1 <= x.n else 0.0
        if at_least(p, bound):
            found.add(i)
    return found


def check_sandwich(index, x, zprimes):
    patterns = sorted({p for p, _ in solid_occurrence_set(x, 1 / index.eps)})
    for pattern in patterns:
        for zprime in zprimes:
            found = set(approx_report(index, pattern, zprime))
            assert set(naive_weighted_occurrences(x, zprime, pattern)) <= found
            assert found <= above(x, pattern, 1 / zprime - index.eps)


def test_profile_queries(profile):
    index = build_approx_index(profile, 0.25)
    assert index.z == 4 and index.k == 4
    assert index.min_count(2) == 2
    assert approx_report(index, "A", 2) == [1, 2, 3, 4, 5]
    assert approx_report(index, "AAB", 4) == [3, 4]
    assert approx_report(index, "BAB", 4) == []


def test_profile_sandwich(profile):
    check_sandwich(build_approx_index(profile, 0.25), profile, [1, 2, 4])


def test_trivial_threshold(profile):
    index = build_approx_index(profile, 0.25)
    assert approx_report(index, "BBBB", 8) == [1, 2, 3, 4, 5, 6]


def test_deterministic_eps_one():
    x = random_sequence(make_rng(3), 5, 2, sharp=1.0)
    index = build_approx_index(x, 1.0)
    assert index.k == 1
    string = x.alphabet.decode([x.heavy_rank(k) for k in range(x.n)])
    assert approx_report(index, string, 1) == [1]


@pytest.mark.parametrize("eps", [0, -0.5, 1.5])
def test_rejects_eps(profile, eps):
    with pytest.raises(WSeqValidationError):
        build_approx_index(profile, eps)


def test_rejects_zprime(profile):
    index = build_approx_index(profile, 0.25)
    with pytest.raises(WSeqValidationError):
        approx_report(index, "A", 0.5)


def test_needs_eps(profile):
    with pytest.raises(WSeqValidationError):
        ApproxIndex(build_weighted_index(profile, 4))


@pytest.mark.parametrize("eps", [1, 0.5, 0.25, 0.1])
def test_random_sandwich(eps):
    rng = make_rng(int(eps * 100))
    for _ in range(15):
        x = random_sequence(rng, int(rng.integers(1, 21)), int(rng.integers(1, 4)))
        index = build_approx_index(x, eps)
        check_sandwich(index, x, sorted({1, 2, 1 / eps, 0.5 / eps + 0.5}))


def test_monotone_in_zprime():
    rng = make_rng(77)
    for _ in range(10):
        x = random_sequence(rng, 16, 2)
        index = build_approx_index(x, 0.1)
        for pattern in sorted({p for p, _ in solid_occurrence_set(x, 10)}):
            previous = set()
            for zprime in [1, 1.5, 2, 3, 5, 8, 10]:
                found = set(approx_report(index, pattern, zprime))
                assert previous <= found
                previous = found


def test_never_reports_absent_positions(profile):
    index = build_approx_index(profile, 0.25)
    for zprime in [1, 2, 3, 4]:
        assert approx_report(index, "BB", zprime) == ([5] if zprime >= 8 / 3 else [])


# ----------
# Randomized
# ----------

def test_randomized_index(profile):
    index = build_approx_index(profile, 0.5, RandomizedConfig(seed=4))
    assert index.randomized
    assert index.k == 40
    assert index.min_count(2) == 1
    assert index.min_count(1) == 21
    found = approx_report(index, "A", 1)
    assert 1 in found and 6 not in found


def test_randomized_min_count_bounds(profile):
    index = build_approx_index(profile, 0.25, RandomizedConfig(seed=1))
    for zprime in [1, 2, 3, 4]:
        ell = index.min_count(zprime)
        assert ell / index.k > 1 / zprime - index.eps
        assert (ell - 1) / index.k <= 1 / zprime - index.eps + DELTA_CMP


# -------------
# Serialization
# -------------

def test_save_load(tmp_path, profile):
    index = build_approx_index(profile, 0.25)
    path = str(tmp_path / "x.awix")
    index.save(path)

    loaded = ApproxIndex.load(path)
    assert loaded.eps == 0.25
    assert approx_report(loaded, "A", 2) == [1, 2, 3, 4, 5]
    assert ApproxIndex.from_bytes(index.to_bytes()).k == 4


def test_load_exact_index(tmp_path, profile):
    path = str(tmp_path / "x.wix")
    build_weighted_index(profile, 4).save(path)
    with pytest.raises(IndexLoadError):
        ApproxIndex.load(path)
