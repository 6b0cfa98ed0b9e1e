"""Contains the property suffix tree and property indexing queries.

For a string S with property pi, the property suffix tree is the compact trie
of the strings S[i..pi[i]]. Every terminal node lists the positions i whose
string ends there, so the occurrences of a pattern respecting the property
are the positions listed below its locus.

Construction starts from the suffix tree of S:

1. The locus of each S[i..pi[i]] is found by following the suffix link of
   the previous locus's explicit ancestor and descending by first letters.
2. Implicit loci are made explicit, edge by edge in order of depth.
3. Nodes that are neither the root, terminal, nor branching are removed.

The result is flattened in preorder so that the terminal entries of any
subtree form one contiguous range.

Example:
    >>> tree = build_property_suffix_tree("AAAAAB", [4, 4, 5, 6, 6, 6])
    >>> pst_report(tree, "AAB")     # --> [4]
"""

from __future__ import annotations  # Doc aliases
from typing import Dict, List, NamedTuple, Optional, Sequence, Union
from numpy.typing import ArrayLike

import struct
import logging

import numpy as np

from wsindex.core.errors import IndexLoadError, WSeqValidationError
from wsindex.core.weightedseq import Alphabet, validate_property
from wsindex.sufstruct.suffixtree import SuffixTree


logger = logging.getLogger(__name__)


class Locus(NamedTuple):
    """Position of a string in a compact trie.

    The string ends ``depth`` letters below the root on the edge entering
    ``node``; it is explicit when ``depth`` equals the node's depth.
    """
    node: int
    depth: int


class PropertySuffixTree:
    """Flattened compact trie of the strings S[i..pi[i]].

    Nodes are numbered in preorder with children ordered by first letter.
    Node v owns the entries ``entries[term_lo[v]:term_hi[v]]`` and its
    subtree owns ``entries[term_lo[v]:sub_hi[v]]``.

    Attributes:
        alphabet (Alphabet): Letters of the text.
        text (np.ndarray[int32]): Ranks of S.
        depth (np.ndarray[int32]): Per node, length of the path label.
        label_start (np.ndarray[int32]): Per node, 0-based start of an
            occurrence of its path label in ``text``.
        parent (np.ndarray[int32]): Per node, parent id (-1 for the root).
        child_ptr (np.ndarray[int32]): Children of v are
            ``child_ids[child_ptr[v]:child_ptr[v + 1]]``.
        child_ids (np.ndarray[int32]): Concatenated child lists.
        term_lo, term_hi, sub_hi (np.ndarray[int32]): Entry ranges.
        entries (np.ndarray[int32]): 1-based positions i, terminal lists in
            preorder.
        stats (Dict[str, int]): Construction counters, ``locus_steps`` among
            them; empty after loading.
    """
    MAGIC = b"PST1"
    VERSION = 1
    HEADER = struct.Struct("<4sHIIIH")

    # -----------
    # Constructor
    # -----------

    def __init__(self, alphabet: Alphabet, text, depth, label_start, parent, child_ptr,
                 child_ids, term_lo, term_hi, sub_hi, entries,
                 stats: Optional[Dict[str, int]] = None):
        self.alphabet = alphabet
        self.text = np.asarray(text, dtype=np.int32)
        self.depth = np.asarray(depth, dtype=np.int32)
        self.label_start = np.asarray(label_start, dtype=np.int32)
        self.parent = np.asarray(parent, dtype=np.int32)
        self.child_ptr = np.asarray(child_ptr, dtype=np.int32)
        self.child_ids = np.asarray(child_ids, dtype=np.int32)
        self.term_lo = np.asarray(term_lo, dtype=np.int32)
        self.term_hi = np.asarray(term_hi, dtype=np.int32)
        self.sub_hi = np.asarray(sub_hi, dtype=np.int32)
        self.entries = np.asarray(entries, dtype=np.int32)
        self.stats = dict(stats or {})

        # Plain lists for letter-by-letter traversal
        self._text = self.text.tolist()
        self._depth = self.depth.tolist()
        self._label_start = self.label_start.tolist()
        self._child_ptr = self.child_ptr.tolist()
        self._child_ids = self.child_ids.tolist()
        self._child_letter = [self._text[self._label_start[c] + self._depth[p]]
                              for c, p in zip(self._child_ids, self.parent[self.child_ids].tolist())]

    # -------
    # Methods
    # -------

    @property
    def n(self) -> int:
        """Length of the indexed text."""
        return len(self.text)

    @property
    def node_count(self) -> int:
        return len(self.depth)

    def children(self, node: int) -> List[int]:
        return self._child_ids[self._child_ptr[node]:self._child_ptr[node + 1]]

    def label(self, node: int) -> str:
        """Returns the path label of a node."""
        start = self._label_start[node]
        return self.alphabet.decode(self._text[start:start + self._depth[node]])

    def terminal_entries(self, node: int) -> np.ndarray:
        """Returns the positions listed at a node, L_v."""
        return self.entries[self.term_lo[node]:self.term_hi[node]]

    def subtree_entries(self, node: int) -> np.ndarray:
        """Returns the positions listed anywhere below a node, itself included."""
        return self.entries[self.term_lo[node]:self.sub_hi[node]]

    def terminals(self) -> Dict[str, List[int]]:
        """Returns every terminal label with its sorted position list."""
        return {self.label(v): sorted(self.terminal_entries(v).tolist())
                for v in range(self.node_count) if self.term_hi[v] > self.term_lo[v]}

    def locate(self, pattern: Union[str, Sequence[int]]) -> Optional[Locus]:
        """Returns the locus of a pattern, or None if no indexed string extends it.

        Args:
            pattern: String over the tree's alphabet or a sequence of ranks.
        """
        if isinstance(pattern, str):
            pattern = self.alphabet.encode(pattern)
            if pattern is None:
                return None

        text = self._text
        depth = self._depth
        m = len(pattern)

        node = 0
        matched = 0
        while matched < m:
            # Child by first letter
            letter = pattern[matched]
            child = -1
            for slot in range(self._child_ptr[node], self._child_ptr[node + 1]):
                if self._child_letter[slot] == letter:
                    child = self._child_ids[slot]
                    break
            if child < 0:
                return None

            # Compare along the edge
            start = self._label_start[child]
            stop = min(depth[child], m)
            for q in range(matched + 1, stop):
                if text[start + q] != pattern[q]:
                    return None

            if m <= depth[child]:
                return Locus(child, m)
            node = child
            matched = depth[child]

        return Locus(0, 0)

    # -------------
    # Serialization
    # -------------

    def to_bytes(self) -> bytes:
        """Returns the tree in the little-endian ``PST1`` binary format."""
        letters = self.alphabet.letters.encode("utf-8")
        header = PropertySuffixTree.HEADER.pack(PropertySuffixTree.MAGIC, PropertySuffixTree.VERSION,
                                                self.n, self.node_count, len(self.entries), len(letters))
        arrays = [self.text, self.depth, self.label_start, self.parent, self.child_ptr,
                  self.child_ids, self.term_lo, self.term_hi, self.sub_hi, self.entries]

        return header + letters + b"".join(np.asarray(a, dtype="<i4").tobytes() for a in arrays)

    @classmethod
    def from_bytes(cls, blob: bytes) -> PropertySuffixTree:
        """Loads a tree from ``PST1`` bytes.

        Raises:
            IndexLoadError: Wrong magic or version, truncated data, or arrays
                that do not form a preorder tree over the text.
        """
        size = PropertySuffixTree.HEADER.size
        if len(blob) < size:
            raise IndexLoadError("Property suffix tree blob is truncated.")

        magic, version, n, nodes, count, alen = PropertySuffixTree.HEADER.unpack_from(blob)
        if magic != PropertySuffixTree.MAGIC:
            raise IndexLoadError(f"Bad property suffix tree magic {magic!r}.")
        if version != PropertySuffixTree.VERSION:
            raise IndexLoadError(f"Unsupported property suffix tree version {version}.")
        if nodes < 1:
            raise IndexLoadError("Property suffix tree has no root.")

        lengths = [n, nodes, nodes, nodes, nodes + 1, nodes - 1, nodes, nodes, nodes, count]
        expected = size + alen + 4 * sum(lengths)
        if len(blob) != expected:
            raise IndexLoadError(f"Property suffix tree blob has {len(blob)} bytes, expected {expected}.")

        try:
            alphabet = Alphabet(blob[size:size + alen].decode("utf-8"))
        except (UnicodeDecodeError, WSeqValidationError) as err:
            raise IndexLoadError(f"Bad property suffix tree alphabet: {err}")

        arrays = []
        offset = size + alen
        for length in lengths:
            arrays.append(np.frombuffer(blob, dtype="<i4", count=length, offset=offset).astype(np.int32))
            offset += 4 * length

        problem = _check_layout(len(alphabet), *arrays)
        if problem:
            raise IndexLoadError(f"Corrupt property suffix tree: {problem}.")

        return cls(alphabet, *arrays)


# ------------
# Construction
# ------------

def build_property_suffix_tree(text: Union[str, Sequence[int]], pi: ArrayLike,
                               alphabet: Optional[Union[Alphabet, str]] = None,
                               suffix_tree: Optional[SuffixTree] = None) -> PropertySuffixTree:
    """Builds the property suffix tree of a string with a property.

    Args:
        text: Non-empty string, or ranks when an alphabet is given.
        pi: 1-based property ends, non-decreasing with ``i - 1 <= pi[i] <= n``.
        alphabet: Alphabet of the text; derived from a string if omitted.
        suffix_tree: Suffix tree of the text, built if omitted.

    Returns:
        The property suffix tree, with ``locus_steps`` counting the edges
        traversed while locating the strings S[i..pi[i]].

    Raises:
        WSeqValidationError: Invalid property or text.
    """
    if alphabet is None:
        if not isinstance(text, str):
            raise WSeqValidationError("Rank sequences need an explicit alphabet.")
        alphabet = Alphabet(set(text) or "A")
    elif not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)

    ranks = alphabet.encode(text) if isinstance(text, str) else list(text)
    if ranks is None:
        raise WSeqValidationError(f"Text has letters outside '{alphabet.letters}'.")

    pi = np.asarray(pi, dtype=np.int64)
    validate_property(pi, len(ranks))

    tree = suffix_tree if suffix_tree is not None else SuffixTree(ranks, len(alphabet), alphabet)
    builder = _PropertyTreeBuilder(tree, pi.tolist())

    pst = builder.flatten(alphabet, ranks)
    logger.debug("Built property suffix tree of %d letters: %d nodes, locus_steps=%d",
                 len(ranks), pst.node_count, pst.stats["locus_steps"])

    return pst


class _PropertyTreeBuilder:
    """Working copy of a suffix tree turned into a property suffix tree."""

    def __init__(self, tree: SuffixTree, pi: List[int]):
        self.text = tree.text
        self.n = len(pi)

        self.parent = list(tree.parent)
        self.depth = list(tree.depth)
        self.label_start = [e - d for e, d in zip(tree.end, tree.depth)]
        self.children = [dict(c) for c in tree.children]
        self.terminal: List[List[int]] = [[] for _ in self.depth]

        nodes, depths, steps = self._find_loci(tree, pi)
        self._make_explicit(nodes, depths)
        self.stats = {"locus_steps": steps, "suffix_tree_nodes": len(tree)}

    def _find_loci(self, tree: SuffixTree, pi: List[int]):
        """Phase 1: locus of every S[i..pi[i]] as (node, depth)."""
        text = self.text
        depth = tree.depth
        nodes = [0] * self.n
        depths = [0] * self.n
        steps = 0

        ancestor = SuffixTree.ROOT
        for i in range(self.n):
            target = pi[i] - i

            if ancestor == SuffixTree.ROOT:
                node = SuffixTree.ROOT
            else:
                node = tree.link[ancestor]
                steps += 1

            while depth[node] < target:
                child = tree.children[node][text[i + depth[node]]]
                steps += 1
                if depth[child] >= target:
                    node = child
                    break
                node = child

            nodes[i] = node
            depths[i] = target
            ancestor = node if depth[node] == target else tree.parent[node]

        return nodes, depths, steps

    def _make_explicit(self, nodes: List[int], depths: List[int]):
        """Phase 2: split edges at implicit loci and attach terminal lists."""
        # Counting sort by depth
        buckets: List[List[int]] = [[] for _ in range(self.n + 1)]
        for i, d in enumerate(depths):
            buckets[d].append(i)

        groups: Dict[int, List[int]] = {}
        for bucket in buckets:
            for i in bucket:
                node = nodes[i]
                if depths[i] == self.depth[node]:
                    self.terminal[node].append(i + 1)
                else:
                    groups.setdefault(node, []).append(i)

        for lower, members in groups.items():
            upper = self.parent[lower]
            start = self.label_start[lower]
            current = -1

            for i in members:
                d = depths[i]
                if current < 0 or self.depth[current] != d:
                    current = self._split(upper, lower, start, d)
                    upper = current
                self.terminal[current].append(i + 1)

    def _split(self, upper: int, lower: int, start: int, depth: int) -> int:
        node = len(self.depth)
        self.parent.append(upper)
        self.depth.append(depth)
        self.label_start.append(start)
        self.children.append({self.text[start + depth]: lower})
        self.terminal.append([])

        self.children[upper][self.text[start + self.depth[upper]]] = node
        self.parent[lower] = node
        return node

    def flatten(self, alphabet: Alphabet, ranks: List[int]) -> PropertySuffixTree:
        """Phase 3: trim bottom-up and lay the kept nodes out in preorder."""
        order = []
        stack = [SuffixTree.ROOT]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(self.children[node][r] for r in sorted(self.children[node], reverse=True))

        # Kept nodes represent themselves; pass-through nodes their only kept child
        rep = [-1] * len(self.depth)
        kept_children: Dict[int, List[int]] = {}
        for node in reversed(order):
            below = [rep[c] for _, c in sorted(self.children[node].items()) if rep[c] >= 0]
            if node == SuffixTree.ROOT or self.terminal[node] or len(below) >= 2:
                rep[node] = node
                kept_children[node] = below
            elif below:
                rep[node] = below[0]

        # Preorder layout
        ids: Dict[int, int] = {}
        layout = []
        stack = [SuffixTree.ROOT]
        while stack:
            node = stack.pop()
            ids[node] = len(layout)
            layout.append(node)
            stack.extend(reversed(kept_children[node]))

        count = len(layout)
        depth = [self.depth[v] for v in layout]
        label_start = [self.label_start[v] for v in layout]
        parent = [-1] * count
        child_ptr = [0] * (count + 1)
        child_ids = []
        for new, node in enumerate(layout):
            for child in kept_children[node]:
                parent[ids[child]] = new
                child_ids.append(ids[child])
            child_ptr[new + 1] = len(child_ids)

        entries = []
        term_lo = [0] * count
        term_hi = [0] * count
        for new, node in enumerate(layout):
            term_lo[new] = len(entries)
            entries.extend(sorted(self.terminal[node]))
            term_hi[new] = len(entries)

        # Subtree ends, children before parents
        sub_hi = list(term_hi)
        for new in reversed(range(count)):
            if child_ptr[new + 1] > child_ptr[new]:
                sub_hi[new] = sub_hi[child_ids[child_ptr[new + 1] - 1]]

        return PropertySuffixTree(alphabet, ranks, depth, label_start, parent, child_ptr,
                                  child_ids, term_lo, term_hi, sub_hi, entries, self.stats)


# -------
# Queries
# -------

def pst_locate(tree: PropertySuffixTree, pattern: Union[str, Sequence[int]]) -> Optional[Locus]:
    """Returns the locus of a pattern in the tree, or None if it is absent."""
    return tree.locate(pattern)


def pst_count(tree: PropertySuffixTree, pattern: Union[str, Sequence[int]]) -> int:
    """Returns the number of occurrences of a pattern that respect the property."""
    locus = tree.locate(pattern)
    if locus is None:
        return 0
    return int(tree.sub_hi[locus.node] - tree.term_lo[locus.node])


def pst_report(tree: PropertySuffixTree, pattern: Union[str, Sequence[int]]) -> List[int]:
    """Returns the sorted occurrences of a pattern that respect the property."""
    locus = tree.locate(pattern)
    if locus is None:
        return []
    return sorted(tree.subtree_entries(locus.node).tolist())


# Helpers

def _check_layout(sigma: int, text, depth, label_start, parent, child_ptr, child_ids,
                  term_lo, term_hi, sub_hi, entries) -> Optional[str]:
    """Returns what is wrong with loaded tree arrays, or None if they are consistent."""
    n = len(text)
    nodes = len(depth)
    count = len(entries)

    if np.any((text < 0) | (text >= sigma)):
        return "letter rank outside the alphabet"
    if depth[0] != 0 or np.any(label_start[1:] < 0) or np.any(label_start[1:] + depth[1:] > n):
        return "path label outside the text"
    if parent[0] != -1 or np.any((parent[1:] < 0) | (parent[1:] >= nodes)):
        return "parent id out of range"
    if child_ptr[0] != 0 or child_ptr[-1] != nodes - 1 or np.any(np.diff(child_ptr) < 0):
        return "child pointers out of order"
    if np.any((child_ids < 1) | (child_ids >= nodes)):
        return "child id out of range"
    owners = np.repeat(np.arange(nodes), np.diff(child_ptr))
    if np.any(parent[child_ids] != owners):
        return "child lists disagree with parent ids"
    if np.any(child_ids <= owners):
        return "nodes not in preorder"
    if np.any(depth[parent[child_ids]] >= depth[child_ids]):
        return "child not deeper than its parent"
    if np.any(term_lo < 0) or np.any(term_lo > term_hi) or np.any(term_hi > sub_hi) \
            or np.any(sub_hi > count):
        return "entry ranges out of order"
    if np.any((entries < 1) | (entries > n)):
        return "entry position out of range"

    return None
