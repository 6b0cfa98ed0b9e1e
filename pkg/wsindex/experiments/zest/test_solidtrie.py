"""Solid factor trie testing.
"""

import pytest

from wsindex.core.oracles import enumerate_multiset, enumerate_solid_factors
from wsindex.core.probability import DELTA_CMP
from wsindex.zest.solidtrie import SolidFactorTrie, transform_step
from wsindex.experiments.helpers import random_sequences


def test_initial_trie(profile):
    trie = SolidFactorTrie(profile, 4)
    assert trie.position == 7
    assert trie.node_count == 1
    assert trie.multiset() == {"": 4}


def walk(x, z):
    trie = SolidFactorTrie(x, z)
    for i in range(x.n, 0, -1):
        yield transform_step(trie, x, z, i), i


def test_profile_steps(profile):
    for trie, i in walk(profile, 4):
        assert trie.position == i
        assert trie.multiset() == enumerate_multiset(profile, 4, i)
        assert {label for _, label in trie.iter_nodes()} == enumerate_solid_factors(profile, 4, i)


def test_profile_position3_tokens(profile):
    trie = SolidFactorTrie(profile, 4)
    for i in range(6, 2, -1):
        trie.transform(i)

    assert sorted(trie.multiset().elements()) == ["A", "AAA", "AAB", "B"]
    for node, label in trie.iter_nodes():
        assert trie.label(node) == label
        assert trie.probability(node) * 4 >= 1 - DELTA_CMP


@pytest.mark.parametrize("z", [1, 2, 3.5, 8])
def test_random_steps(z):
    for x in random_sequences(30, 8, 3, seed=11):
        for trie, i in walk(x, z):
            assert trie.multiset() == enumerate_multiset(x, z, i)
            assert {label for _, label in trie.iter_nodes()} == enumerate_solid_factors(x, z, i)


def test_counters(profile):
    trie = SolidFactorTrie(profile, 4, record_walks=True)
    for i in range(6, 0, -1):
        trie.transform(i)

    stats = trie.stats
    assert len(trie.walks) == 6
    assert sum(int(w.sum()) for w in trie.walks) == stats["walk_steps"]
    assert stats["nodes_created"] - stats["nodes_deleted"] == trie.node_count
    assert stats["requests_placed"] > 0


def test_dump(profile):
    trie = SolidFactorTrie(profile, 4)
    trie.transform(6)
    lines = trie.dump().splitlines()

    assert lines[0] == "# position 6"
    assert lines[1] == "* p=1 tokens=[] requests=0"
    assert lines[2].startswith("  A p=0.25 tokens=[")
    assert lines[3].startswith("  B p=0.75 tokens=[")


def test_transform_order(profile):
    trie = SolidFactorTrie(profile, 4)
    with pytest.raises(ValueError):
        trie.transform(5)
    with pytest.raises(ValueError):
        transform_step(trie, profile, 3, 6)
