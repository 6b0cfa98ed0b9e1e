"""Property suffix tree testing.
"""

import numpy as np
import pytest
from hypothesis import given, settings

from wsindex.core.errors import IndexLoadError, WSeqValidationError
from wsindex.core.oracles import naive_property_occurrences
from wsindex.sufstruct.propertytree import (PropertySuffixTree, build_property_suffix_tree,
                                            pst_count, pst_locate, pst_report)
from wsindex.experiments.helpers import (make_rng, overwrite_tree_word, random_property, random_text,
                                         substrings, texts_with_properties)


def check_against_naive(tree, text, pi, patterns):
    for pattern in patterns:
        expected = naive_property_occurrences(text, pi, pattern)
        assert pst_report(tree, pattern) == expected
        assert pst_count(tree, pattern) == len(expected)
        assert (pst_locate(tree, pattern) is not None) == bool(expected)


def test_example():
    tree = build_property_suffix_tree("AAAAAB", [4, 4, 5, 6, 6, 6])
    assert pst_report(tree, "AAB") == [4]
    assert pst_report(tree, "AAAA") == [1]
    assert pst_count(tree, "B") == 1
    assert pst_report(tree, "AAAAA") == []


def test_family_strings(family4):
    for j in range(1, 5):
        text, pi = family4.string(j), family4.pi[j - 1].tolist()
        tree = build_property_suffix_tree(text, pi, "AB")
        check_against_naive(tree, text, pi, substrings(text, 6))

    tree = build_property_suffix_tree("ABBBBB", [2, 2, 3, 3, 5, 6])
    assert pst_report(tree, "BB") == []


def test_terminals():
    text, pi = "ABAABB", [4, 4, 5, 6, 6, 6]
    tree = build_property_suffix_tree(text, pi)

    expected = {}
    for i in range(1, 7):
        expected.setdefault(text[i - 1:pi[i - 1]], []).append(i)
    assert tree.terminals() == expected


def test_locus_depths():
    tree = build_property_suffix_tree("ABAB", [4, 4, 4, 4])
    locus = tree.locate("A")
    assert locus.depth == 1
    assert tree.depth[locus.node] >= 1
    assert tree.label(locus.node).startswith("A")
    assert tree.locate("ABX") is None


def test_full_property_is_suffix_tree():
    text = "MISSISSIPPI"
    tree = build_property_suffix_tree(text, [len(text)] * len(text))
    check_against_naive(tree, text, [len(text)] * len(text), substrings(text, len(text)))
    assert "locus_steps" in tree.stats


def test_empty_property():
    tree = build_property_suffix_tree("ABC", [0, 1, 2])
    assert pst_report(tree, "A") == []
    assert pst_count(tree, "B") == 0


def test_random_instances():
    rng = make_rng(64)
    for _ in range(200):
        n = int(rng.integers(1, 65))
        sigma = int(rng.integers(1, 5))
        text, pi = random_text(rng, n, sigma), random_property(rng, n)
        tree = build_property_suffix_tree(text, pi, "ABCD")

        others = [random_text(rng, int(rng.integers(1, 6)), 4) for _ in range(50)]
        check_against_naive(tree, text, pi, substrings(text, 6) + others)


@settings(max_examples=150, deadline=None)
@given(texts_with_properties(max_n=24, max_sigma=3))
def test_property_queries(instance):
    text, pi = instance
    tree = build_property_suffix_tree(text, pi, "ABC")
    check_against_naive(tree, text, pi, substrings(text, len(text)))


def check_size(tree, n):
    assert tree.stats["locus_steps"] <= 4 * n
    assert tree.node_count <= 2 * n + 1
    assert len(tree.entries) == n


def test_linear_loci_walk():
    rng = make_rng(17)
    for _ in range(100):
        n = int(rng.integers(1, 200))
        text, pi = random_text(rng, n, int(rng.integers(1, 5))), random_property(rng, n)
        check_size(build_property_suffix_tree(text, pi, "ABCD"), n)

    for text in ["A" * 300, "AB" * 150, "AAB" * 100, "MISSISSIPPI" * 20]:
        n = len(text)
        check_size(build_property_suffix_tree(text, [n] * n), n)
        check_size(build_property_suffix_tree(text, list(range(n))), n)


def test_rejects_invalid_property():
    with pytest.raises(WSeqValidationError):
        build_property_suffix_tree("ABC", [2, 1, 3])
    with pytest.raises(WSeqValidationError):
        build_property_suffix_tree([0, 1], [1, 2])


# -------------
# Serialization
# -------------

def test_bytes_round_trip():
    rng = make_rng(9)
    text, pi = random_text(rng, 30, 3), random_property(rng, 30)
    tree = build_property_suffix_tree(text, pi, "ABC")
    loaded = PropertySuffixTree.from_bytes(tree.to_bytes())

    assert loaded.alphabet == tree.alphabet
    assert np.array_equal(loaded.entries, tree.entries)
    check_against_naive(loaded, text, pi, substrings(text, 8))


def test_corrupt_bytes():
    blob = build_property_suffix_tree("ABAB", [2, 3, 4, 4]).to_bytes()
    with pytest.raises(IndexLoadError):
        PropertySuffixTree.from_bytes(b"PST2" + blob[4:])
    with pytest.raises(IndexLoadError):
        PropertySuffixTree.from_bytes(blob[:-4])
    with pytest.raises(IndexLoadError):
        PropertySuffixTree.from_bytes(blob[:5])


@pytest.mark.parametrize("name, index, value", [
    ("text", 0, 7),
    ("depth", -1, 100),
    ("depth", 0, 1),
    ("label_start", 1, -5),
    ("parent", 1, 50),
    ("parent", 0, 0),
    ("child_ptr", -1, 0),
    ("child_ptr", 1, 9),
    ("child_ids", 0, 999),
    ("child_ids", 0, 0),
    ("term_lo", 1, -1),
    ("term_hi", 1, 99),
    ("sub_hi", 0, 99),
    ("entries", -1, 10 ** 6),
    ("entries", 0, 0),
])
def test_corrupt_arrays(name, index, value):
    tree = build_property_suffix_tree("ABAB", [2, 3, 4, 4])
    blob = overwrite_tree_word(tree.to_bytes(), tree, name, index, value)
    with pytest.raises(IndexLoadError):
        PropertySuffixTree.from_bytes(blob)


def test_unchanged_word_loads():
    tree = build_property_suffix_tree("ABAB", [2, 3, 4, 4])
    blob = overwrite_tree_word(tree.to_bytes(), tree, "child_ids", 0, int(tree.child_ids[0]))
    assert PropertySuffixTree.from_bytes(blob).terminals() == tree.terminals()
