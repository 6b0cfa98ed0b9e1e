"""Contains the special weighted sequence reduction.

A special weighted sequence has at most one letter with positive probability
per position, and its probabilities need not sum to 1. Concatenating the
strings of a z-estimation, taking each letter's probability from the
weighted sequence and separating blocks with an all-zero position, gives a
special weighted sequence of length ``k*n + k - 1`` with the same solid
factors as the original.
"""

from __future__ import annotations  # Doc aliases
from typing import Optional, Set, Tuple

import numpy as np

from wsindex.core.errors import WSeqValidationError
from wsindex.core.probability import is_solid, to_log
from wsindex.core.weightedseq import Alphabet, WeightedSequence
from wsindex.zest.stringfamily import StringFamily


class SpecialWeightedSequence:
    """Weighted sequence with at most one positive-probability letter per position.

    Args:
        alphabet: Alphabet of the letters.
        letters: Per position, the rank of its letter or -1 for a separator.
        probs: Per position, the letter's probability (0 for separators).
        block_length: Length n of the blocks between separators.

    Attributes:
        letters (np.ndarray[int16]): Letter ranks, -1 at separators.
        probs (np.ndarray[float]): Letter probabilities.
        log_probs (np.ndarray[float]): Base-2 logarithms of ``probs``.

    Raises:
        WSeqValidationError: Mismatched lengths or a probability outside [0, 1].
    """
    def __init__(self, alphabet: Alphabet, letters, probs, block_length: int):
        self.alphabet = alphabet
        self.letters = np.asarray(letters, dtype=np.int16)
        self.probs = np.asarray(probs, dtype=float)
        self.block_length = block_length

        if self.letters.shape != self.probs.shape or self.letters.ndim != 1:
            raise WSeqValidationError("Letters and probabilities must be equal-length vectors.")
        if np.any((self.probs < 0.0) | (self.probs > 1.0)):
            raise WSeqValidationError("A probability is not between 0 and 1.")

        self.probs = np.where(self.letters < 0, 0.0, self.probs)
        self.log_probs = np.asarray(to_log(self.probs), dtype=float)

    def __len__(self) -> int:
        return len(self.letters)

    def prob(self, position: int, letter: str) -> float:
        """Returns the probability of a letter at a 1-based position."""
        rank = self.letters[position - 1]
        if rank < 0 or letter not in self.alphabet or self.alphabet.rank(letter) != rank:
            return 0.0
        return float(self.probs[position - 1])

    def image(self, j: int, i: int) -> int:
        """Returns the position holding block j, position i."""
        return (j - 1) * (self.block_length + 1) + i

    def preimage(self, position: int) -> Optional[Tuple[int, int]]:
        """Returns ``(j, i)`` for a block position, or None for a separator."""
        j, offset = divmod(position - 1, self.block_length + 1)
        if offset == self.block_length:
            return None
        return j + 1, offset + 1

    def match_probability(self, pattern: str, position: int, log: bool = False) -> float:
        """Returns the probability that a pattern occurs at a 1-based position.

        Raises:
            IndexError: The window exceeds the sequence.
        """
        if position < 1 or position + len(pattern) - 1 > len(self):
            raise IndexError(f"Window of '{pattern}' at {position} exceeds 1..{len(self)}.")

        logp = 0.0
        for offset, letter in enumerate(pattern):
            p = position - 1 + offset
            if self.letters[p] < 0 or self.alphabet[self.letters[p]] != letter:
                return float("-inf") if log else 0.0
            logp += self.log_probs[p]

        return logp if log else float(2.0 ** logp)

    def solid_factors_at(self, position: int, z: float) -> Set[str]:
        """Returns every string with probability >= 1/z at a position, '' included.

        The only candidates are the prefixes of the letters starting at the
        position.
        """
        factors = {""}
        logp = 0.0
        word = ""
        for p in range(position - 1, len(self)):
            if self.letters[p] < 0:
                break
            logp += self.log_probs[p]
            if not is_solid(logp, z):
                break
            word += self.alphabet[self.letters[p]]
            factors.add(word)

        return factors


def to_special_weighted_sequence(fam: StringFamily, x: WeightedSequence) -> SpecialWeightedSequence:
    """Concatenates a family into a special weighted sequence.

    Block j position i holds S_j[i] with probability p_i(S_j[i]); blocks are
    separated by all-zero positions.

    Raises:
        WSeqValidationError: The family and sequence disagree in length or alphabet.
    """
    if fam.n != x.n or fam.alphabet != x.alphabet:
        raise WSeqValidationError("Family doesn't match the weighted sequence.")

    n, k = x.n, fam.k
    columns = np.arange(n)

    letters = np.full((k, n + 1), -1, dtype=np.int16)
    probs = np.zeros((k, n + 1))
    letters[:, :n] = fam.strings
    probs[:, :n] = x.probs[columns[None, :], fam.strings]

    # Drop the trailing separator
    return SpecialWeightedSequence(x.alphabet, letters.reshape(-1)[:-1],
                                   probs.reshape(-1)[:-1], n)
