"""Contains the approximate weighted index.

The accuracy eps is fixed when the index is built; the probability threshold
1/z' is chosen per query. Built from the z-estimation for z = 1/eps, a query
reports the positions i where the pattern occurs in at least
``l = floor(z/z')`` family members, which includes every position with
probability >= 1/z' and excludes every position below 1/z' - eps.

Example:
    >>> x = read_weighted_sequence("profile.wseq")
    >>> index = build_approx_index(x, 0.25)
    >>> approx_report(index, "A", 2)    # --> [1, 2, 3, 4, 5]
"""

from __future__ import annotations  # Doc aliases
from typing import List, Optional

import math
import logging

from wsindex.core.errors import IndexLoadError, WSeqValidationError
from wsindex.core.probability import DELTA_CMP
from wsindex.core.weightedseq import WeightedSequence
from wsindex.index.querycontext import QueryContext
from wsindex.index.weightedindex import Pattern, WeightedIndex
from wsindex.rand.sampling import RandomizedConfig, build_randomized_approx_family
from wsindex.zest.zestimation import build_z_estimation


logger = logging.getLogger(__name__)


class ApproxIndex:
    """Weighted index answering reporting queries for any threshold above eps.

    Args:
        index: Approximate weighted index; ``index.eps`` must be set.

    Attributes:
        index (WeightedIndex): The underlying index with z = 1/eps.
        eps (float): Accuracy parameter.
        z (float): Threshold the family was built for.

    Raises:
        WSeqValidationError: The index has no accuracy parameter.
    """

    # -----------
    # Constructor
    # -----------

    def __init__(self, index: WeightedIndex):
        if not index.approximate:
            raise WSeqValidationError("An approximate index needs an accuracy parameter eps.")
        self.index = index
        self.eps = index.eps
        self.z = index.z

    # -------
    # Methods
    # -------

    @property
    def n(self) -> int:
        return self.index.n

    @property
    def k(self) -> int:
        return self.index.k

    @property
    def randomized(self) -> bool:
        return self.index.randomized

    @property
    def stats(self):
        return self.index.stats

    def min_count(self, zprime: float) -> int:
        """Returns the smallest family count a reported position needs.

        A z-estimation needs ``floor(z/z')`` members; a sampled family needs
        more than ``k(1/z' - eps)`` of its k members. Never less than 1.

        Raises:
            WSeqValidationError: zprime < 1.
        """
        if not zprime >= 1:
            raise WSeqValidationError(f"Query threshold zprime={zprime} must be at least 1.")

        if self.randomized:
            bound = self.k * (1.0 / zprime - self.eps)
            ell = math.floor(bound + DELTA_CMP) + 1
        else:
            ell = math.floor(self.z / zprime + DELTA_CMP)

        return max(ell, 1)

    def is_trivial(self, zprime: float) -> bool:
        """Whether 1/zprime < eps, in which case every position qualifies."""
        return zprime * self.eps > 1.0 + DELTA_CMP

    def report(self, pattern: Pattern, zprime: float,
               context: Optional[QueryContext] = None) -> List[int]:
        ell = self.min_count(zprime)
        if self.is_trivial(zprime):
            return list(range(1, self.n + 1))

        locus = self.index.locate(pattern)
        if locus is None:
            return []

        lo, hi = self.index.entry_range(locus)
        context = context or self.index._context
        return context.frequent(self.index.positions[lo:hi].tolist(), ell)

    # -------------
    # Serialization
    # -------------

    def to_bytes(self) -> bytes:
        return self.index.to_bytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> ApproxIndex:
        """Loads an approximate index from ``WIX1`` bytes.

        Raises:
            IndexLoadError: Corrupt data or an exact index.
        """
        index = WeightedIndex.from_bytes(blob)
        if not index.approximate:
            raise IndexLoadError("Index file holds an exact index, not an approximate one.")
        return cls(index)

    def save(self, filepath: str):
        self.index.save(filepath)

    @classmethod
    def load(cls, filepath: str) -> ApproxIndex:
        index = WeightedIndex.load(filepath)
        if not index.approximate:
            raise IndexLoadError(f"'{filepath}' holds an exact index, not an approximate one.")
        return cls(index)

    def __repr__(self) -> str:
        kind = "randomized, " if self.randomized else ""
        return f"ApproxIndex(n={self.n}, blocks={self.k}, {kind}eps={self.eps:g})"


def build_approx_index(x: WeightedSequence, eps: float,
                       config: Optional[RandomizedConfig] = None) -> ApproxIndex:
    """Builds the approximate index of a weighted sequence.

    Args:
        x: Weighted sequence.
        eps: Accuracy parameter in (0, 1].
        config: Sample an eps-family with these parameters instead of
            building the z-estimation for z = 1/eps.

    Raises:
        WSeqValidationError: eps outside (0, 1].
    """
    if not 0.0 < eps <= 1.0:
        raise WSeqValidationError(f"Accuracy eps={eps} must be in (0, 1].")

    z = 1.0 / eps
    if config is None:
        fam = build_z_estimation(x, z)
    else:
        fam = build_randomized_approx_family(x, eps, config)

    index = WeightedIndex.from_family(fam, z, eps=eps, randomized=config is not None)
    logger.info("Built approximate index for eps=%g with %d blocks", eps, index.k)

    return ApproxIndex(index)


def approx_report(index: ApproxIndex, pattern: Pattern, zprime: float,
                  context: Optional[QueryContext] = None) -> List[int]:
    """Returns the sorted positions reported for threshold 1/zprime.

    Every position with probability >= 1/zprime is reported and none with
    probability below 1/zprime - eps. If 1/zprime < eps every position is.

    Raises:
        WSeqValidationError: zprime < 1.

    Example:
        >>> approx_report(index, "AAB", 4)      # --> [3, 4]
    """
    return index.report(pattern, zprime, context)
