"""Contains the alphabet and weighted sequence definitions.

A weighted sequence assigns every position a probability distribution over a
fixed alphabet. Sequences are read from and written to the WSEQ text format.

For example, a DNA binding profile could be a weighted sequence over the
alphabet 'ACGT'.
"""

from __future__ import annotations  # Doc aliases
from typing import Iterable, List, Optional, Union
from numpy.typing import ArrayLike

import os
import math
import string
import logging

import numpy as np
import matplotlib.pyplot as plt

from wsindex.core.errors import WSeqParseError, WSeqValidationError
from wsindex.core.probability import DELTA_SUM, to_log


logger = logging.getLogger(__name__)


# Letters handed out by random_weighted_sequence, in order of preference
GENERATOR_LETTERS = (
    string.ascii_uppercase
    + string.ascii_lowercase
    + string.digits
    + "".join(c for c in string.punctuation if c not in "#:")
    + "".join(chr(code) for code in range(0xC0, 0x100))
)


class Alphabet:
    """Ordered set of distinct single-character letters.

    Letters are sorted on construction so that a letter's rank is its position
    in ascending order. Ranks are what the index structures store.

    Args:
        letters: Iterable of single-character letters (a string works).

    Attributes:
        letters (str): The letters in ascending order.

    Raises:
        WSeqValidationError: Empty, oversized, duplicated, or unprintable letters.

    Example:
        >>> sigma = Alphabet("BA")
        >>> sigma.letters      # --> "AB"
        >>> sigma.rank("B")    # --> 1
    """
    MAX_SIZE = 128

    # -----------
    # Constructor
    # -----------

    def __init__(self, letters: Iterable[str]):
        letters = list(letters)

        if not letters:
            raise WSeqValidationError("Alphabet must contain at least one letter.")
        if len(letters) > Alphabet.MAX_SIZE:
            raise WSeqValidationError(f"Alphabet of {len(letters)} letters exceeds "
                                      f"the maximum of {Alphabet.MAX_SIZE}.")
        if len(set(letters)) != len(letters):
            raise WSeqValidationError(f"Alphabet '{''.join(letters)}' repeats a letter.")

        for letter in letters:
            if len(letter) != 1 or not letter.isprintable() or letter.isspace() or letter == "#":
                raise WSeqValidationError(f"Invalid alphabet letter {letter!r}.")

        self.letters = "".join(sorted(letters))
        self._ranks = {letter: rank for rank, letter in enumerate(self.letters)}

    # -------
    # Methods
    # -------

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, letter) -> bool:
        return letter in self._ranks

    def __getitem__(self, rank: int) -> str:
        return self.letters[rank]

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({self.letters!r})"

    def rank(self, letter: str) -> int:
        """Returns the rank of a letter.

        Raises:
            KeyError: The letter is not in the alphabet.
        """
        try:
            return self._ranks[letter]
        except KeyError:
            raise KeyError(f"Letter {letter!r} is not in alphabet '{self.letters}'.")

    def encode(self, text: str) -> Optional[List[int]]:
        """Returns the ranks of a string's letters, or None if a letter is foreign."""
        ranks = self._ranks
        try:
            return [ranks[c] for c in text]
        except KeyError:
            return None

    def decode(self, ranks: Iterable[int]) -> str:
        """Returns the string spelled by a sequence of ranks."""
        return "".join(self.letters[r] for r in ranks)


class WeightedSequence:
    """Sequence of per-position probability distributions over an alphabet.

    Instances are immutable. Probabilities are kept both in linear form and as
    base-2 logarithms (zero maps to negative infinity); positions in every
    method are 1-based.

    Args:
        alphabet: Alphabet or string of letters.
        probs: Array-like of shape (n, sigma); row i holds the distribution of
            position i + 1 with columns in alphabet rank order.

    Attributes:
        alphabet (Alphabet): The letters of the sequence.
        probs (np.ndarray[float]): Read-only (n, sigma) linear probabilities.
        log_probs (np.ndarray[float]): Read-only (n, sigma) base-2 logarithms.

    Raises:
        WSeqValidationError: Bad shape, a probability outside [0, 1], or a
            distribution whose sum differs from 1 by more than ``DELTA_SUM``.

    Example:
        >>> x = WeightedSequence("AB", [[1.0, 0.0], [0.5, 0.5]])
        >>> x.prob(2, "B")    # --> 0.5
    """
    # -----------
    # Constructor
    # -----------

    def __init__(self, alphabet: Union[Alphabet, str], probs: ArrayLike):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)

        probs = np.array(probs, dtype=float)
        self._validate(probs)

        self.probs = probs
        self.log_probs = np.asarray(to_log(probs), dtype=float)
        self.probs.setflags(write=False)
        self.log_probs.setflags(write=False)

    # -------
    # Methods
    # -------

    @property
    def n(self) -> int:
        """Length of the sequence."""
        return self.probs.shape[0]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"WeightedSequence(n={self.n}, alphabet={self.alphabet.letters!r})"

    def prob(self, i: int, letter: str) -> float:
        """Returns p_i(letter); letters outside the alphabet have probability 0."""
        if letter not in self.alphabet:
            return 0.0
        return float(self.probs[i - 1, self.alphabet.rank(letter)])

    def heavy_letter(self, i: int) -> str:
        """Returns the most probable letter at position i.

        Ties resolve to the smallest letter in alphabet order.
        """
        return self.alphabet[self.heavy_rank(i - 1)]

    def heavy_rank(self, index: int) -> int:
        """Returns the heavy letter's rank for a 0-based position index."""
        return int(np.argmax(self.probs[index]))

    def is_deterministic(self) -> bool:
        """Whether every position holds one letter with probability 1."""
        return bool(np.all(np.isclose(np.max(self.probs, axis=1), 1.0)))

    def plot(self, width: float = 0.8, fill_alpha: float = 0.8, **plt_kwargs):
        """Plots the distributions as stacked bars, one bar per position.

        Args:
            width: Bar width.
            fill_alpha: Alpha of bar fill.
            **plt_kwargs: matplotlib.pyplot bar options.

        Returns:
            The axis being plotted.
        """
        ax = plt.gca()

        positions = np.arange(1, self.n + 1)
        bottom = np.zeros(self.n)

        # Stack one bar segment per letter
        for rank, letter in enumerate(self.alphabet):
            heights = self.probs[:, rank]
            ax.bar(positions, heights, width, bottom=bottom, label=letter,
                   alpha=fill_alpha, **plt_kwargs)
            bottom = bottom + heights

        # Decorate
        ax.set_xticks(positions)
        ax.set_ylim(0.0, 1.05)
        ax.set_xlabel("position")
        ax.set_ylabel("probability")
        ax.grid(visible=True, axis="y", alpha=0.5, ls="--")
        ax.legend(fontsize=8)

        return ax

    # ---------------
    # Writing Methods
    # ---------------

    def dumps(self) -> str:
        """Returns the sequence in WSEQ text format.

        Zero probabilities are omitted and values carry at most 12
        significant digits.
        """
        lines = [f"WSEQ {self.n} {self.alphabet.letters}"]
        for row in self.probs:
            pairs = [f"{letter}:{p:.12g}" for letter, p in zip(self.alphabet, row) if p > 0]
            lines.append(" ".join(pairs))

        return "\n".join(lines) + "\n"

    def write(self, filepath: str):
        """Writes the sequence in WSEQ format to the given path."""
        with open(filepath, "w", encoding="utf-8") as file:
            file.write(self.dumps())

    # Helpers

    def _validate(self, probs: np.ndarray):
        sigma = len(self.alphabet)

        if probs.ndim != 2 or probs.shape[1] != sigma or probs.shape[0] < 1:
            raise WSeqValidationError(f"Probabilities of shape {probs.shape} don't "
                                      f"match (n >= 1, {sigma}).")

        if np.any(~np.isfinite(probs)) or np.any((probs < 0.0) | (probs > 1.0)):
            raise WSeqValidationError("A probability is not between 0 and 1.")

        sums = probs.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > DELTA_SUM)
        if bad.size:
            i = bad[0]
            raise WSeqValidationError(f"Distribution at position {i + 1} sums to "
                                      f"{sums[i]:.12g}, not 1.")


# -------------------
# Reading and Writing
# -------------------

def parse_weighted_sequence(text: str, normalize: bool = False) -> WeightedSequence:
    """Parses a weighted sequence from WSEQ text.

    The header line is ``WSEQ <n> <alphabet>``; each of the following n lines
    holds whitespace-separated ``letter:prob`` pairs. Omitted letters have
    probability 0 and ``#`` starts a comment.

    Args:
        text: WSEQ text.
        normalize: Rescale every distribution to sum to 1 instead of
            rejecting sums outside tolerance.

    Returns:
        The parsed weighted sequence.

    Raises:
        WSeqParseError: Malformed header or pair, or wrong number of lines.
        WSeqValidationError: Unknown letter, probability outside [0, 1], or a
            distribution sum outside tolerance.

    Example::

        === profile.wseq ===

        WSEQ 6 AB
        A:1
        A:0.5 B:0.5
        A:0.75 B:0.25
        A:0.8 B:0.2
        A:0.5 B:0.5
        A:0.25 B:0.75
    """
    alphabet = None
    rows: List[np.ndarray] = []
    n = 0
    number = 0

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()

        # Evaluate line
        if not line:
            continue
        elif alphabet is None:
            alphabet, n = _read_header(line, number)
        elif len(rows) == n:
            raise WSeqParseError(f"More than {n} position lines.", number)
        else:
            rows.append(_read_row(line, number, alphabet, normalize))

    if alphabet is None:
        raise WSeqParseError("Missing 'WSEQ <n> <alphabet>' header.", number or None)
    if len(rows) != n:
        raise WSeqParseError(f"Expected {n} position lines, found {len(rows)}.", number)

    logger.debug("Parsed weighted sequence of length %d over '%s'", n, alphabet.letters)

    return WeightedSequence(alphabet, np.array(rows))


def read_weighted_sequence(filepath: str, normalize: bool = False) -> WeightedSequence:
    """Reads a weighted sequence from a WSEQ file.

    The path may be relative to the current working directory.
    """
    full_path = os.path.join(os.getcwd(), filepath)
    with open(full_path, encoding="utf-8") as file:
        return parse_weighted_sequence(file.read(), normalize)


def random_weighted_sequence(n: int, sigma: int, seed: int = 0) -> WeightedSequence:
    """Generates a reproducible random weighted sequence.

    Each distribution is a vector of normalized standard exponentials (a flat
    Dirichlet draw), rounded to 12 significant digits so that writing and
    re-reading the sequence reproduces it exactly.

    Args:
        n: Length of the sequence.
        sigma: Alphabet size, taken from the front of ``GENERATOR_LETTERS``.
        seed: Seed of the generator.

    Raises:
        WSeqValidationError: n < 1 or sigma outside [1, 128].
    """
    if n < 1:
        raise WSeqValidationError(f"Sequence length {n} must be positive.")
    if not 1 <= sigma <= Alphabet.MAX_SIZE:
        raise WSeqValidationError(f"Alphabet size {sigma} must be in [1, {Alphabet.MAX_SIZE}].")

    rng = np.random.Generator(np.random.Philox(seed))
    weights = rng.standard_exponential((n, sigma))
    probs = weights / weights.sum(axis=1, keepdims=True)
    probs = np.vectorize(lambda p: float(f"{p:.12g}"))(probs)

    return WeightedSequence(GENERATOR_LETTERS[:sigma], probs)


# Helpers

def _read_header(line: str, number: int):
    parts = line.split()
    if len(parts) != 3 or parts[0] != "WSEQ":
        raise WSeqParseError(f"Expected header 'WSEQ <n> <alphabet>', got {line!r}.", number)

    try:
        n = int(parts[1])
    except ValueError:
        raise WSeqParseError(f"Sequence length {parts[1]!r} is not an integer.", number)
    if n < 1:
        raise WSeqParseError(f"Sequence length {n} must be positive.", number)

    try:
        alphabet = Alphabet(parts[2])
    except WSeqValidationError as err:
        raise WSeqValidationError(f"line {number}: {err}")

    return alphabet, n


def _read_row(line: str, number: int, alphabet: Alphabet, normalize: bool) -> np.ndarray:
    row = np.zeros(len(alphabet))
    seen = set()

    for pair in line.split():
        letter, sep, value = pair.rpartition(":")
        if not sep or len(letter) != 1:
            raise WSeqParseError(f"Malformed pair {pair!r}, expected 'letter:prob'.", number)

        try:
            p = float(value)
        except ValueError:
            raise WSeqParseError(f"Probability {value!r} is not a number.", number)
        if not math.isfinite(p):
            raise WSeqParseError(f"Probability {value!r} is not finite.", number)

        if letter not in alphabet:
            raise WSeqValidationError(f"line {number}: unknown letter {letter!r}.")
        if letter in seen:
            raise WSeqParseError(f"Letter {letter!r} given twice.", number)
        if p < 0.0 or p > 1.0:
            raise WSeqValidationError(f"line {number}: probability {p} is not between 0 and 1.")

        seen.add(letter)
        row[alphabet.rank(letter)] = p

    total = row.sum()
    if normalize:
        if total <= 0.0:
            raise WSeqValidationError(f"line {number}: cannot normalize an all-zero distribution.")
        row = row / total
    elif abs(total - 1.0) > DELTA_SUM:
        raise WSeqValidationError(f"line {number}: distribution sums to {total:.12g}, not 1.")

    return row



# ---------------
# Property Arrays
# ---------------

def validate_property(pi: np.ndarray, n: Optional[int] = None):
    """Checks a property array.

    Entry k (0-based) holds the 1-based property end of position k + 1 and
    must lie in [k, n]; entries must be non-decreasing.

    Raises:
        WSeqValidationError: The array violates a condition.
    """
    pi = np.asarray(pi)
    n = len(pi) if n is None else n

    if pi.ndim != 1 or len(pi) != n:
        raise WSeqValidationError(f"Property of shape {pi.shape} doesn't have length {n}.")
    if n == 0:
        return

    lower = np.arange(n)
    if np.any(pi < lower) or np.any(pi > n):
        bad = int(np.flatnonzero((pi < lower) | (pi > n))[0])
        raise WSeqValidationError(f"Property value {int(pi[bad])} at position {bad + 1} "
                                  f"is outside [{bad}, {n}].")
    if np.any(np.diff(pi) < 0):
        bad = int(np.flatnonzero(np.diff(pi) < 0)[0])
        raise WSeqValidationError(f"Property decreases after position {bad + 1}.")
