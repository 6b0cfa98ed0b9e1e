"""Contains the weighted index.

The index concatenates the strings of a z-estimation (or any string family)
into one text, shifts every property into its block, and builds the property
suffix tree of the result. Terminal entries are mapped back to positions of
the weighted sequence; a position occurs once per family member that matches
there, so counting and reporting work on distinct positions.

Example:
    >>> x = read_weighted_sequence("profile.wseq")
    >>> index = build_weighted_index(x, 4)
    >>> wi_report(index, "AA")      # --> [1, 2, 3, 4]
    >>> wi_decision(index, "BAB")   # --> False
"""

from __future__ import annotations  # Doc aliases
from typing import Dict, List, Optional, Sequence, Union

import os
import struct
import logging

import numpy as np

from wsindex.core.errors import IndexLoadError
from wsindex.core.weightedseq import WeightedSequence
from wsindex.index.querycontext import QueryContext
from wsindex.sufstruct.propertytree import Locus, PropertySuffixTree, build_property_suffix_tree
from wsindex.zest.stringfamily import StringFamily
from wsindex.zest.zestimation import build_z_estimation


logger = logging.getLogger(__name__)

Pattern = Union[str, Sequence[int]]


def concatenate_family(fam: StringFamily):
    """Returns the concatenated ranks and block-shifted property of a family.

    Block j (1-based) covers concatenated positions (j - 1)n + 1 .. jn, and
    every shifted property value is capped at its block end.
    """
    n = fam.n
    offsets = np.arange(fam.k, dtype=np.int64)[:, None] * n
    shifted = np.minimum(fam.pi + offsets, offsets + n)

    return fam.strings.reshape(-1), shifted.reshape(-1)


class WeightedIndex:
    """Property suffix tree over a concatenated string family.

    Args:
        tree: Property suffix tree of the concatenation.
        n: Length of the weighted sequence (block length).
        k: Number of blocks.
        z: Threshold the family was built for.
        eps: Accuracy parameter for approximate indexes, None otherwise.
        randomized: Whether the family was sampled.
        stats: Construction counters.

    Attributes:
        tree (PropertySuffixTree): The property suffix tree.
        positions (np.ndarray[int32]): Document array; the original position
            i of every terminal entry, in entry order.
        blocks (np.ndarray[int32]): The 1-based block j of every entry.
        distinct (np.ndarray[int64]): Per node, the number of distinct
            positions in its subtree.
        stats (Dict[str, int]): Construction counters.
    """
    MAGIC = b"WIX1"
    VERSION = 1
    HEADER = struct.Struct("<4sHBIIddQ")

    FLAG_APPROX = 1
    FLAG_RANDOMIZED = 2

    # -----------
    # Constructor
    # -----------

    def __init__(self, tree: PropertySuffixTree, n: int, k: int, z: float,
                 eps: Optional[float] = None, randomized: bool = False,
                 stats: Optional[Dict[str, int]] = None):
        self.tree = tree
        self.n = n
        self.k = k
        self.z = z
        self.eps = eps
        self.randomized = randomized
        self.stats = dict(stats or {})

        self.positions = ((tree.entries - 1) % n + 1).astype(np.int32)
        self.blocks = ((tree.entries - 1) // n + 1).astype(np.int32)
        self.distinct = self._count_distinct()

        self._context = QueryContext(n)

    @classmethod
    def from_family(cls, fam: StringFamily, z: Optional[float] = None,
                    eps: Optional[float] = None, randomized: bool = False) -> WeightedIndex:
        """Indexes any string family.

        Args:
            fam: z-estimation or sampled family.
            z: Threshold; defaults to the family's ``z`` attribute or its size.
            eps: Accuracy parameter of an approximate index.
            randomized: Whether the family was sampled.
        """
        if z is None:
            z = getattr(fam, "z", None) or float(fam.k)

        text, pi = concatenate_family(fam)
        tree = build_property_suffix_tree(text, pi, fam.alphabet)

        stats = dict(getattr(fam, "stats", {}))
        stats.update(tree.stats)
        stats["blocks"] = fam.k
        stats["block_length"] = fam.n
        stats["pst_nodes"] = tree.node_count
        stats["pst_entries"] = len(tree.entries)

        index = cls(tree, fam.n, fam.k, z, eps, randomized, stats)
        logger.info("Built weighted index: %d blocks of length %d, %d nodes",
                    fam.k, fam.n, tree.node_count)

        return index

    # -------
    # Methods
    # -------

    @property
    def alphabet(self):
        return self.tree.alphabet

    @property
    def approximate(self) -> bool:
        return self.eps is not None

    def locate(self, pattern: Pattern) -> Optional[Locus]:
        return self.tree.locate(pattern)

    def entry_range(self, locus: Locus):
        """Returns the document-array range ``[lo, hi)`` below a locus."""
        return int(self.tree.term_lo[locus.node]), int(self.tree.sub_hi[locus.node])

    def decide(self, pattern: Pattern) -> bool:
        return self.locate(pattern) is not None

    def count(self, pattern: Pattern) -> int:
        locus = self.locate(pattern)
        if locus is None:
            return 0
        return int(self.distinct[locus.node])

    def report(self, pattern: Pattern, context: Optional[QueryContext] = None) -> List[int]:
        locus = self.locate(pattern)
        if locus is None:
            return []

        lo, hi = self.entry_range(locus)
        context = context or self._context
        return context.distinct(self.positions[lo:hi].tolist())

    # -------------
    # Serialization
    # -------------

    def to_bytes(self) -> bytes:
        """Returns the index in the ``WIX1`` binary format (header plus ``PST1`` blob)."""
        flags = (WeightedIndex.FLAG_APPROX if self.approximate else 0) \
            | (WeightedIndex.FLAG_RANDOMIZED if self.randomized else 0)
        blob = self.tree.to_bytes()
        header = WeightedIndex.HEADER.pack(WeightedIndex.MAGIC, WeightedIndex.VERSION, flags,
                                           self.n, self.k, float(self.z),
                                           float(self.eps or 0.0), len(blob))
        return header + blob

    @classmethod
    def from_bytes(cls, blob: bytes) -> WeightedIndex:
        """Loads an index from ``WIX1`` bytes.

        Raises:
            IndexLoadError: Wrong magic or version, truncated data, a corrupt
                tree, or a tree or threshold that doesn't match the metadata.
        """
        size = WeightedIndex.HEADER.size
        if len(blob) < size:
            raise IndexLoadError("Index file is truncated.")

        magic, version, flags, n, k, z, eps, length = WeightedIndex.HEADER.unpack_from(blob)
        if magic != WeightedIndex.MAGIC:
            raise IndexLoadError(f"Bad index magic {magic!r}.")
        if version != WeightedIndex.VERSION:
            raise IndexLoadError(f"Unsupported index version {version}.")
        if len(blob) != size + length:
            raise IndexLoadError(f"Index has {len(blob) - size} tree bytes, expected {length}.")

        tree = PropertySuffixTree.from_bytes(blob[size:])
        if n < 1 or k < 1 or tree.n != n * k:
            raise IndexLoadError(f"Tree of {tree.n} letters doesn't match {k} blocks of {n}.")

        approx = bool(flags & WeightedIndex.FLAG_APPROX)
        if not z >= 1 or (approx and not 0.0 < eps <= 1.0):
            raise IndexLoadError(f"Bad index parameters z={z}, eps={eps}.")

        return cls(tree, n, k, z, eps if approx else None,
                   bool(flags & WeightedIndex.FLAG_RANDOMIZED))

    def save(self, filepath: str):
        """Writes the index to a file."""
        with open(filepath, "wb") as file:
            file.write(self.to_bytes())

    @classmethod
    def load(cls, filepath: str) -> WeightedIndex:
        """Reads an index from a file, relative paths from the working directory."""
        with open(os.path.join(os.getcwd(), filepath), "rb") as file:
            return cls.from_bytes(file.read())

    # Helpers

    def _count_distinct(self) -> np.ndarray:
        """Distinct positions per subtree, merging sets small-to-large bottom-up."""
        tree = self.tree
        positions = self.positions.tolist()
        term_lo = tree.term_lo.tolist()
        term_hi = tree.term_hi.tolist()

        distinct = np.zeros(tree.node_count, dtype=np.int64)
        sets: List[Optional[set]] = [None] * tree.node_count

        for node in reversed(range(tree.node_count)):
            merged = set(positions[term_lo[node]:term_hi[node]])
            for child in tree.children(node):
                other = sets[child]
                sets[child] = None
                if len(other) > len(merged):
                    merged, other = other, merged
                merged |= other

            sets[node] = merged
            distinct[node] = len(merged)

        return distinct

    def __repr__(self) -> str:
        kind = f"approximate eps={self.eps:g}" if self.approximate else f"z={self.z:g}"
        return f"WeightedIndex(n={self.n}, blocks={self.k}, {kind})"


def build_weighted_index(x: WeightedSequence, z: float) -> WeightedIndex:
    """Builds the weighted index of a weighted sequence for threshold 1/z.

    Raises:
        WSeqValidationError: floor(z) < 1.
    """
    return WeightedIndex.from_family(build_z_estimation(x, z), z)


def wi_decision(index: WeightedIndex, pattern: Pattern) -> bool:
    """Returns whether the pattern occurs anywhere with probability >= 1/z."""
    return index.decide(pattern)


def wi_count(index: WeightedIndex, pattern: Pattern) -> int:
    """Returns the number of positions where the pattern occurs with probability >= 1/z."""
    return index.count(pattern)


def wi_report(index: WeightedIndex, pattern: Pattern,
              context: Optional[QueryContext] = None) -> List[int]:
    """Returns the sorted positions where the pattern occurs with probability >= 1/z.

    Args:
        index: Weighted index.
        pattern: Pattern string.
        context: Scratch state for this query; the index's own context is
            used if omitted.
    """
    return index.report(pattern, context)
