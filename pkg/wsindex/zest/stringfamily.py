"""Contains the indexed string family definition.

A string family is k strings of a common length n, each carrying a property:
string j may only be matched inside the intervals [i, pi_j[i]]. Both
z-estimations and sampled families are string families, and every index
builder accepts any of them.
"""

from __future__ import annotations  # Doc aliases
from typing import Counter as CounterType, Iterator, Optional, Sequence, Union
from collections import Counter

import numpy as np
from matplotlib.axis import Axis
import matplotlib.pyplot as plt

from wsindex.core.errors import WSeqValidationError
from wsindex.core.weightedseq import Alphabet, validate_property


class StringFamily:
    """Indexed family of equal-length strings with properties.

    Args:
        alphabet: Alphabet of the strings.
        strings: Array-like of shape (k, n) holding letter ranks.
        pi: Array-like of shape (k, n) holding 1-based property ends.

    Attributes:
        alphabet (Alphabet): Letters of the strings.
        strings (np.ndarray[uint8]): Read-only (k, n) letter ranks.
        pi (np.ndarray[int64]): Read-only (k, n) property ends.

    Raises:
        WSeqValidationError: Shapes disagree, a rank is foreign, or a
            property array is invalid.
    """
    # -----------
    # Constructor
    # -----------

    def __init__(self, alphabet: Union[Alphabet, str], strings, pi):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)

        self.strings = np.array(strings, dtype=np.uint8, ndmin=2)
        self.pi = np.array(pi, dtype=np.int64, ndmin=2)

        if self.strings.shape != self.pi.shape or self.strings.shape[0] < 1:
            raise WSeqValidationError(f"Strings of shape {self.strings.shape} don't match "
                                      f"properties of shape {self.pi.shape}.")
        if self.strings.size and int(self.strings.max()) >= len(self.alphabet):
            raise WSeqValidationError("A string holds a rank outside the alphabet.")

        for row in self.pi:
            validate_property(row, self.n)

        self.strings.setflags(write=False)
        self.pi.setflags(write=False)

    @classmethod
    def from_strings(cls, alphabet: Union[Alphabet, str], strings: Sequence[str],
                     pi: Sequence[Sequence[int]]) -> StringFamily:
        """Creates a family from plain strings.

        Example:
            >>> fam = StringFamily.from_strings("AB", ["AB", "BB"], [[2, 2], [1, 2]])
        """
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        ranks = []
        for s in strings:
            encoded = alphabet.encode(s)
            if encoded is None:
                raise WSeqValidationError(f"String '{s}' has letters outside '{alphabet.letters}'.")
            ranks.append(encoded)

        return cls(alphabet, ranks, pi)

    # -------
    # Methods
    # -------

    @property
    def k(self) -> int:
        """Number of strings."""
        return self.strings.shape[0]

    @property
    def n(self) -> int:
        """Common length of the strings."""
        return self.strings.shape[1]

    def __len__(self) -> int:
        return self.k

    def __iter__(self) -> Iterator[str]:
        return (self.string(j) for j in range(1, self.k + 1))

    def string(self, j: int) -> str:
        """Returns S_j for a 1-based index j."""
        return self.alphabet.decode(self.strings[j - 1])

    def factor(self, j: int, i: int) -> str:
        """Returns S_j[i..pi_j[i]], the longest factor of S_j usable at i."""
        return self.alphabet.decode(self.strings[j - 1, i - 1:self.pi[j - 1, i - 1]])

    def count(self, pattern: str, i: int) -> int:
        """Returns Count_S(P, i), the number of j with an occurrence of P at i respecting pi_j.

        Args:
            pattern: Pattern string, foreign letters allowed.
            i: 1-based position.
        """
        m = len(pattern)
        if i < 1 or i - 1 + m > self.n:
            return 0

        ranks = self.alphabet.encode(pattern)
        if ranks is None:
            return 0

        fits = self.pi[:, i - 1] >= i - 1 + m
        if m:
            fits &= np.all(self.strings[:, i - 1:i - 1 + m] == np.array(ranks, dtype=np.uint8), axis=1)

        return int(np.count_nonzero(fits))

    def factor_multiset(self, i: int) -> CounterType[str]:
        """Returns the multiset of factors S_j[i..pi_j[i]] over all j."""
        return Counter(self.factor(j, i) for j in range(1, self.k + 1))

    def plot(self, cmap: str = "Blues", fontsize: int = 9, **plt_kwargs) -> Axis:
        """Plots the family as a letter grid shaded by usable factor length.

        Row j shows S_j; cell (j, i) is shaded by ``pi_j[i] - i + 1``.

        Args:
            cmap: matplotlib colormap name.
            fontsize: Size of the letters drawn in the cells.
            **plt_kwargs: matplotlib.pyplot imshow options.

        Returns:
            The axis being plotted.
        """
        ax = plt.gca()

        lengths = self.pi - np.arange(self.n)
        ax.imshow(lengths, cmap=cmap, aspect="auto", vmin=0, vmax=self.n, **plt_kwargs)

        # Letters
        for j in range(self.k):
            for i in range(self.n):
                ax.text(i, j, self.alphabet[self.strings[j, i]], ha="center", va="center",
                        fontsize=fontsize)

        # Decorate
        ax.set_xticks(range(self.n))
        ax.set_xticklabels(range(1, self.n + 1))
        ax.set_yticks(range(self.k))
        ax.set_yticklabels([f"S{j}" for j in range(1, self.k + 1)])
        ax.set_xlabel("position")

        return ax

    def __repr__(self) -> str:
        return f"{type(self).__name__}(k={self.k}, n={self.n}, alphabet={self.alphabet.letters!r})"
