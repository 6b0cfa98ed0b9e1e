"""Brute-force reference implementations.

Everything here follows the definitions directly and runs in time
exponential in the worst case. The index structures are tested against these
functions, and ``wsindex verify`` runs them on small inputs.

Positions are 1-based throughout.
"""

from __future__ import annotations  # Doc aliases
from typing import Dict, List, Optional, Sequence, Set, Tuple
from collections import Counter

import math

from wsindex.core.probability import NEG_INF, floor_count, is_solid
from wsindex.core.weightedseq import WeightedSequence


# ------------------
# Match Probabilities
# ------------------

def match_probability(x: WeightedSequence, pattern: str, i: int, log: bool = False) -> float:
    """Returns the probability that a pattern occurs at position i.

    This is the product of ``p_{i+j-1}(P[j])`` over the letters of the
    pattern. Letters outside the alphabet have probability 0 and the empty
    pattern has probability 1.

    Args:
        x: Weighted sequence.
        pattern: Pattern string.
        i: 1-based start position.
        log: Return the base-2 logarithm instead of the linear value.

    Raises:
        IndexError: The window [i, i + |P| - 1] is not inside [1, n].

    Example:
        >>> match_probability(x, "AA", 3)   # --> 0.6
    """
    if i < 1 or i + len(pattern) - 1 > x.n:
        raise IndexError(f"Window of '{pattern}' at position {i} exceeds 1..{x.n}.")

    ranks = x.alphabet.encode(pattern)
    if ranks is None:
        return NEG_INF if log else 0.0

    rows = range(i - 1, i - 1 + len(pattern))
    if log:
        return float(sum(x.log_probs[row, r] for row, r in zip(rows, ranks)))
    return float(math.prod(x.probs[row, r] for row, r in zip(rows, ranks)))


def factor_counts(x: WeightedSequence, z: float, pattern: str, i: int) -> Tuple[int, int]:
    """Returns ``(t, m)`` for a pattern at position i.

    ``t = floor(P_X(P, i) * z)`` and ``m = t - sum_c t(Pc)``. One-letter
    extensions running past the end of the sequence contribute 0.

    Raises:
        IndexError: The window of the pattern is out of range.
    """
    logp = match_probability(x, pattern, i, log=True)
    t = floor_count(logp, z)

    end = i + len(pattern)
    if t == 0 or end > x.n:
        return t, t

    extended = sum(floor_count(logp + x.log_probs[end - 1, r], z)
                   for r in range(len(x.alphabet)))

    return t, t - extended


def estimate_bounds(count: int, z: float) -> Tuple[float, float]:
    """Returns the interval ``[count / z, (count + 1) / z)`` holding P_X(P, i).

    In a z-estimation, Count_S(P, i) = floor(P_X(P, i) * z), so the occurrence
    probability is pinned to this half-open interval.
    """
    return count / z, (count + 1) / z


# -------------------
# Solid Factor Oracles
# -------------------

def enumerate_multiset(x: WeightedSequence, z: float, i: int) -> Counter:
    """Returns the multiset M_i of factors at position i.

    Each string P appears with multiplicity ``m_i(P)``. The multiset is
    computed by depth-first extension while ``t_i(P) > 0``, so its total
    multiplicity is ``floor(z)``.

    Args:
        x: Weighted sequence.
        z: Threshold.
        i: 1-based position, n + 1 allowed (yields floor(z) copies of '').

    Raises:
        IndexError: i outside [1, n + 1].

    Example:
        >>> enumerate_multiset(x, 4, 3)
        Counter({'A': 1, 'AAA': 1, 'AAB': 1, 'B': 1})
    """
    if i < 1 or i > x.n + 1:
        raise IndexError(f"Position {i} is outside 1..{x.n + 1}.")

    multiset = Counter()
    sigma = len(x.alphabet)
    stack = [("", 0.0)]

    while stack:
        factor, logp = stack.pop()
        t = floor_count(logp, z)

        end = i - 1 + len(factor)
        children = 0
        if end < x.n:
            for r in range(sigma):
                child_logp = logp + x.log_probs[end, r]
                child_t = floor_count(child_logp, z)
                if child_t > 0:
                    children += child_t
                    stack.append((factor + x.alphabet[r], child_logp))

        if t > children:
            multiset[factor] = t - children

    return multiset


def enumerate_solid_factors(x: WeightedSequence, z: float, i: int) -> Set[str]:
    """Returns every string P with ``P_X(P, i) >= 1/z``, the empty string included.

    This is the prefix closure of M_i.
    """
    factors = set()
    for factor in enumerate_multiset(x, z, i):
        for length in range(len(factor) + 1):
            factors.add(factor[:length])

    return factors


def naive_weighted_occurrences(x: WeightedSequence, z: float, pattern: str) -> List[int]:
    """Returns the sorted positions where a pattern occurs with probability >= 1/z."""
    if x.alphabet.encode(pattern) is None:
        return []

    return [i for i in range(1, x.n - len(pattern) + 2)
            if is_solid(match_probability(x, pattern, i, log=True), z)]


def naive_property_occurrences(text: str, pi: Sequence[int], pattern: str) -> List[int]:
    """Returns the sorted occurrences of a pattern that respect a property.

    Position i qualifies when ``text[i..i+|P|-1] == P`` and
    ``i + |P| - 1 <= pi[i]`` (1-based on both sides).

    Example:
        >>> naive_property_occurrences("AAAAAA", [2, 2, 3, 4, 5, 6], "AA")   # --> [1]
    """
    if len(pi) != len(text):
        raise ValueError(f"Property of length {len(pi)} doesn't match text of length {len(text)}.")

    m = len(pattern)
    return [i for i in range(1, len(text) + 1)
            if i + m - 1 <= pi[i - 1] and text.startswith(pattern, i - 1)]


# --------------------
# Compatibility Oracles
# --------------------

def is_compatible(current: str, following: str) -> bool:
    """Whether a factor at position i may follow one at position i + 1.

    ``current`` is compatible with ``following`` when it is empty or equals a
    letter followed by a prefix of ``following``.
    """
    return current == "" or following.startswith(current[1:])


def greedy_compatibility_matching(following: Sequence[str],
                                  current: Sequence[str]) -> Optional[List[Tuple[str, str]]]:
    """Matches M_{i+1} into M_i greedily, longest compatible partner first.

    Every string of ``following`` is processed in the given order and paired
    with the longest still unmatched compatible string of ``current``.

    Args:
        following: Members of M_{i+1}, repeated by multiplicity.
        current: Members of M_i, repeated by multiplicity.

    Returns:
        The ``(following, current)`` pairs, or None if some string could not
        be matched.
    """
    # Longest first, ties in lexicographic order
    available: Dict[str, int] = Counter(current)
    order = sorted(available, key=lambda s: (-len(s), s))

    pairs = []
    for q in following:
        for p in order:
            if available[p] > 0 and is_compatible(p, q):
                available[p] -= 1
                pairs.append((q, p))
                break
        else:
            return None

    return pairs if len(pairs) == len(current) else None


def solid_occurrence_set(x: WeightedSequence, z: float) -> Set[Tuple[str, int]]:
    """Returns every ``(P, i)`` pair with a non-empty P solid at i."""
    return {(factor, i)
            for i in range(1, x.n + 1)
            for factor in enumerate_solid_factors(x, z, i) if factor}
