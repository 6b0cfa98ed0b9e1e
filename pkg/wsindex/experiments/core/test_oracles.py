"""Brute-force oracle testing on the six-position example sequence.
"""

from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings

from wsindex.core.oracles import (enumerate_multiset, enumerate_solid_factors, estimate_bounds,
                                  factor_counts, greedy_compatibility_matching, is_compatible,
                                  match_probability, naive_property_occurrences,
                                  naive_weighted_occurrences, solid_occurrence_set)
from wsindex.core.probability import family_size
from wsindex.experiments.helpers import random_sequences, weighted_sequences

# Multisets of factors for z = 4, positions 1..6
PROFILE_MULTISETS = {
    1: Counter({"AA": 1, "AAAA": 1, "AB": 1, "ABAA": 1}),
    2: Counter({"A": 1, "AAA": 1, "B": 1, "BAA": 1}),
    3: Counter({"A": 1, "AAA": 1, "AAB": 1, "B": 1}),
    4: Counter({"": 1, "A": 1, "AAB": 1, "ABB": 1}),
    5: Counter({"A": 1, "AB": 1, "B": 1, "BB": 1}),
    6: Counter({"A": 1, "B": 3}),
}


# -------------------
# Match Probabilities
# -------------------

@pytest.mark.parametrize("pattern, i, p", [
    ("AA", 3, 0.6),
    ("", 4, 1.0),
    ("AB", 1, 0.5),
    ("BB", 5, 0.375),
    ("B", 1, 0.0),
    ("AC", 2, 0.0),
])
def test_match_probability(profile, pattern, i, p):
    assert match_probability(profile, pattern, i) == pytest.approx(p)


def test_match_probability_log(profile):
    assert match_probability(profile, "AB", 1, log=True) == pytest.approx(-1.0)


@pytest.mark.parametrize("pattern, i", [("AA", 6), ("A", 0), ("", 8)])
def test_match_probability_range(profile, pattern, i):
    with pytest.raises(IndexError):
        match_probability(profile, pattern, i)


def test_factor_counts(profile):
    assert factor_counts(profile, 4, "AA", 3)[0] == 2
    assert factor_counts(profile, 4, "B", 3) == (1, 1)
    assert factor_counts(profile, 4, "AA", 3) == (2, 0)
    assert all(factor_counts(profile, 4, "", i)[0] == 4 for i in range(1, 7))
    # Extensions past the end count as zero
    assert factor_counts(profile, 4, "B", 6) == (3, 3)


def test_match_probability_extension():
    for x in random_sequences(40, 7, 3, seed=5):
        patterns = ["".join(p) for length in range(4) for p in product(x.alphabet, repeat=length)]
        for pattern in patterns:
            for i in range(1, x.n - len(pattern) + 1):
                row = x.probs[i + len(pattern) - 1]
                for c in x.alphabet:
                    expected = match_probability(x, pattern, i) * row[x.alphabet.rank(c)]
                    assert match_probability(x, pattern + c, i) == pytest.approx(expected)


def test_estimate_bounds():
    assert estimate_bounds(2, 4) == (0.5, 0.75)


# --------------------
# Solid Factor Oracles
# --------------------

@pytest.mark.parametrize("i", range(1, 7))
def test_enumerate_multiset_profile(profile, i):
    assert enumerate_multiset(profile, 4, i) == PROFILE_MULTISETS[i]


def test_enumerate_multiset_past_end(profile):
    assert enumerate_multiset(profile, 4, 7) == Counter({"": 4})
    with pytest.raises(IndexError):
        enumerate_multiset(profile, 4, 8)


def test_enumerate_multiset_z1(profile):
    assert enumerate_multiset(profile, 1, 1) == Counter({"A": 1})
    assert enumerate_multiset(profile, 1, 2) == Counter({"": 1})


@settings(max_examples=60, deadline=None)
@given(weighted_sequences(max_n=6, max_sigma=3))
def test_multiset_has_floor_z_members(x):
    for z in (1, 2.5, 4, 6):
        for i in range(1, x.n + 2):
            multiset = enumerate_multiset(x, z, i)
            assert sum(multiset.values()) == family_size(z)


def test_enumerate_solid_factors(profile):
    assert enumerate_solid_factors(profile, 4, 3) == {"", "A", "AA", "AAA", "AAB", "B"}


def test_solid_occurrence_set(profile):
    solid = solid_occurrence_set(profile, 4)
    assert ("AAB", 3) in solid
    assert ("AB", 3) not in solid
    assert all(pattern for pattern, _ in solid)


@pytest.mark.parametrize("pattern, expected", [
    ("AA", [1, 2, 3, 4]),
    ("BAB", []),
    ("BB", [5]),
    ("A", [1, 2, 3, 4, 5, 6]),
    ("C", []),
])
def test_naive_weighted_occurrences(profile, pattern, expected):
    assert naive_weighted_occurrences(profile, 4, pattern) == expected


def test_naive_property_occurrences():
    assert naive_property_occurrences("AAAAAA", [2, 2, 3, 4, 5, 6], "AA") == [1]
    assert naive_property_occurrences("ABBBBB", [2, 2, 3, 3, 5, 6], "BB") == []
    assert naive_property_occurrences("ABAABB", [4, 4, 5, 6, 6, 6], "BB") == [5]
    with pytest.raises(ValueError):
        naive_property_occurrences("AB", [2], "A")


# ---------------------
# Compatibility Oracles
# ---------------------

@pytest.mark.parametrize("current, following, expected", [
    ("", "AB", True),
    ("A", "", True),
    ("BA", "AB", True),
    ("BAB", "AB", True),
    ("BABA", "AB", False),
    ("BB", "AB", False),
])
def test_is_compatible(current, following, expected):
    assert is_compatible(current, following) == expected


@pytest.mark.parametrize("i", range(1, 6))
def test_greedy_matching_profile(i):
    following = sorted(PROFILE_MULTISETS[i + 1].elements())
    current = sorted(PROFILE_MULTISETS[i].elements())

    pairs = greedy_compatibility_matching(following, current)
    assert pairs is not None
    assert Counter(p for _, p in pairs) == PROFILE_MULTISETS[i]
    assert all(is_compatible(p, q) for q, p in pairs)


def test_greedy_matching_failure():
    assert greedy_compatibility_matching(["A"], ["BB"]) is None


def test_greedy_matching_random():
    for x in random_sequences(300, 8, 3, seed=11):
        for z in (1, 2, 3.5, 6, 9):
            for i in range(1, x.n + 1):
                expected = enumerate_multiset(x, z, i)
                following = sorted(enumerate_multiset(x, z, i + 1).elements(),
                                   key=lambda s: (-len(s), s))

                pairs = greedy_compatibility_matching(following, list(expected.elements()))
                assert pairs is not None
                assert Counter(p for _, p in pairs) == expected
                assert all(is_compatible(p, q) for q, p in pairs)
