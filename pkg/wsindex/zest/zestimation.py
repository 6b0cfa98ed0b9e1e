"""Contains z-estimation construction and verification.

A z-estimation of a weighted sequence X is a family of ``floor(z)`` strings
with properties such that, for every string P and position i, the number of
strings with a property-respecting occurrence of P at i equals
``floor(P_X(P, i) * z)``.

Example:
    >>> x = read_weighted_sequence("profile.wseq")
    >>> fam = build_z_estimation(x, 4)
    >>> fam.count("AA", 3)                  # --> 2
    >>> verify_z_estimation(x, 4, fam)      # --> True
"""

from __future__ import annotations  # Doc aliases
from typing import Dict, List, Optional, Union

import logging

import numpy as np

from wsindex.core.errors import WSeqValidationError
from wsindex.core.oracles import enumerate_multiset, factor_counts, is_compatible
from wsindex.core.probability import family_size
from wsindex.core.weightedseq import Alphabet, WeightedSequence, validate_property
from wsindex.zest.solidtrie import SolidFactorTrie, transform_step
from wsindex.zest.stringfamily import StringFamily


logger = logging.getLogger(__name__)


class ZEstimation(StringFamily):
    """String family satisfying the z-estimation counting condition.

    Args:
        alphabet: Alphabet of the strings.
        strings: (k, n) letter ranks.
        pi: (k, n) 1-based property ends.
        z: Threshold the family estimates.
        stats: Construction counters, empty for hand-made families.
        walks: Per-step token walk lengths if they were recorded.

    Attributes:
        z (float): The threshold.
        stats (Dict[str, int]): Construction counters.
        walks (Optional[List[np.ndarray]]): Token walk lengths, positions n
            down to 1.
    """
    def __init__(self, alphabet: Union[Alphabet, str], strings, pi, z: float,
                 stats: Optional[Dict[str, int]] = None,
                 walks: Optional[List[np.ndarray]] = None):
        super().__init__(alphabet, strings, pi)
        self.z = z
        self.stats = dict(stats or {})
        self.walks = walks

    @classmethod
    def from_strings(cls, alphabet, strings, pi, z: Optional[float] = None) -> ZEstimation:
        """Creates a z-estimation from plain strings; z defaults to the family size."""
        fam = StringFamily.from_strings(alphabet, strings, pi)
        return cls(fam.alphabet, fam.strings, fam.pi, z if z is not None else fam.k)


def build_z_estimation(x: WeightedSequence, z: float, record_walks: bool = False) -> ZEstimation:
    """Builds a z-estimation of a weighted sequence in O(nz) time.

    The solid factor trie is moved from position n + 1 down to 1. After the
    step for position i, token j sits at P_{j,i}; S_j[i] is its first letter
    (the heavy letter when P_{j,i} is empty) and ``pi_j[i] = i + |P_{j,i}| - 1``.

    Args:
        x: Weighted sequence.
        z: Threshold with floor(z) >= 1.
        record_walks: Keep per-token walk lengths on the result.

    Returns:
        The z-estimation, with construction counters in ``stats``.

    Raises:
        WSeqValidationError: floor(z) < 1.
    """
    k = family_size(z)
    n = x.n

    strings = np.empty((k, n), dtype=np.uint8)
    pi = np.empty((k, n), dtype=np.int64)

    trie = SolidFactorTrie(x, z, record_walks)
    peak = trie.node_count
    for i in range(n, 0, -1):
        transform_step(trie, x, z, i)
        strings[:, i - 1] = trie.last_letters
        pi[:, i - 1] = i - 1 + trie.last_depths
        peak = max(peak, trie.node_count)

    stats = dict(trie.stats)
    stats["peak_nodes"] = peak
    stats["final_nodes"] = trie.node_count

    logger.info("Built %d-estimation of length %d (created=%d, deleted=%d, walk_steps=%d)",
                k, n, stats["nodes_created"], stats["nodes_deleted"], stats["walk_steps"])

    return ZEstimation(x.alphabet, strings, pi, z, stats, trie.walks)


def verify_z_estimation(x: WeightedSequence, z: float, fam: StringFamily) -> bool:
    """Checks a family against the z-estimation condition by brute force.

    Every position i is tested on the prefixes of M_i, their one-letter
    extensions and the family's own factors at i.

    Args:
        x: Weighted sequence.
        z: Threshold.
        fam: Family to check.

    Returns:
        Whether the family is a z-estimation of x.
    """
    try:
        k = family_size(z)
    except WSeqValidationError:
        return False

    if fam.k != k or fam.n != x.n or fam.alphabet != x.alphabet:
        logger.debug("Family shape (%d, %d) doesn't match (%d, %d)", fam.k, fam.n, k, x.n)
        return False

    try:
        for row in fam.pi:
            validate_property(row, x.n)
    except WSeqValidationError as err:
        logger.debug("Invalid property: %s", err)
        return False

    for i in range(1, x.n + 1):
        patterns = set()
        for factor in list(enumerate_multiset(x, z, i)) + list(fam.factor_multiset(i)):
            for length in range(len(factor) + 1):
                prefix = factor[:length]
                patterns.add(prefix)
                patterns.update(prefix + c for c in x.alphabet)

        for pattern in patterns:
            if i + len(pattern) - 1 > x.n:
                continue

            t, _ = factor_counts(x, z, pattern, i)
            count = fam.count(pattern, i)
            if count != t:
                logger.debug("Count of '%s' at %d is %d, expected %d", pattern, i, count, t)
                return False

    return True


def check_compatibility(fam: StringFamily) -> bool:
    """Checks that consecutive factors of every string are compatible.

    For each j and i, S_j[i..pi_j[i]] must be empty or a letter followed by a
    prefix of S_j[i+1..pi_j[i+1]] (the factor after position n is empty).
    """
    for j in range(1, fam.k + 1):
        following = ""
        for i in range(fam.n, 0, -1):
            current = fam.factor(j, i)
            if not is_compatible(current, following):
                logger.debug("S_%d: '%s' at %d can't precede '%s'", j, current, i, following)
                return False
            following = current

    return True
