"""Contains Ukkonen's online suffix tree construction.

The tree is built over a sequence of integer letter ranks with a unique end
sentinel appended, so every suffix ends at its own leaf. Nodes live in
parallel lists indexed by node id; node 0 is the root.

Example:
    >>> tree = build_suffix_tree("ABAB")
    >>> sorted(tree.label(v) for v in tree.internal_nodes())   # --> ['AB', 'B']
"""

from __future__ import annotations  # Doc aliases
from typing import Dict, Iterator, List, Optional, Sequence, Union

import logging

from wsindex.core.errors import WSeqValidationError
from wsindex.core.weightedseq import Alphabet


logger = logging.getLogger(__name__)

# Marks a leaf edge that grows with the text during construction
_OPEN = -1


class SuffixTree:
    """Suffix tree of a rank sequence followed by a unique sentinel.

    Args:
        ranks: Letter ranks of the text, each in [0, sigma).
        sigma: Alphabet size; the sentinel is the rank ``sigma``.
        alphabet: Optional alphabet used to decode labels.

    Attributes:
        text (List[int]): The ranks followed by the sentinel.
        start (List[int]): Per node, start of its incoming edge in ``text``.
        end (List[int]): Per node, exclusive end of its incoming edge.
        children (List[Dict[int, int]]): Per node, first letter to child id.
        link (List[int]): Per node, suffix link (root for leaves and root).
        parent (List[int]): Per node, parent id (-1 for the root).
        depth (List[int]): Per node, length of the path label.
        suffix (List[int]): Per leaf, the 1-based start of its suffix; -1
            for internal nodes.
    """
    ROOT = 0

    # -----------
    # Constructor
    # -----------

    def __init__(self, ranks: Sequence[int], sigma: int, alphabet: Optional[Alphabet] = None):
        if not len(ranks):
            raise WSeqValidationError("Suffix tree text must not be empty.")

        self.sigma = sigma
        self.alphabet = alphabet
        self.text = list(ranks) + [sigma]

        self.start: List[int] = []
        self.end: List[int] = []
        self.children: List[Dict[int, int]] = []
        self.link: List[int] = []

        self._new_node(-1, -1)
        self._build()
        self._annotate()

        logger.debug("Built suffix tree of %d letters with %d nodes", len(ranks), len(self.start))

    # -------
    # Methods
    # -------

    def __len__(self) -> int:
        return len(self.start)

    @property
    def n(self) -> int:
        """Length of the text without the sentinel."""
        return len(self.text) - 1

    def is_leaf(self, node: int) -> bool:
        return not self.children[node]

    def leaves(self) -> Iterator[int]:
        return (v for v in range(len(self)) if self.is_leaf(v))

    def internal_nodes(self) -> Iterator[int]:
        """Yields the explicit non-root, non-leaf nodes."""
        return (v for v in range(1, len(self)) if not self.is_leaf(v))

    def edge_length(self, node: int) -> int:
        return self.end[node] - self.start[node]

    def label_ranks(self, node: int) -> List[int]:
        """Returns the path label of a node as ranks (sentinel included)."""
        return self.text[self.end[node] - self.depth[node]:self.end[node]]

    def label(self, node: int) -> str:
        """Returns the path label decoded, with '$' for the sentinel."""
        ranks = self.label_ranks(node)
        if self.alphabet is None:
            return " ".join(str(r) for r in ranks)
        return "".join("$" if r == self.sigma else self.alphabet[r] for r in ranks)

    def child(self, node: int, rank: int) -> int:
        """Returns the child whose edge starts with a rank, or -1."""
        return self.children[node].get(rank, -1)

    def preorder(self) -> Iterator[int]:
        """Yields nodes in preorder, children by ascending first letter."""
        stack = [SuffixTree.ROOT]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(self.children[node][r] for r in sorted(self.children[node], reverse=True))

    # Helpers

    def _new_node(self, start: int, end: int) -> int:
        self.start.append(start)
        self.end.append(end)
        self.children.append({})
        self.link.append(SuffixTree.ROOT)
        return len(self.start) - 1

    def _build(self):
        text = self.text
        root = SuffixTree.ROOT

        node = root
        edge = 0
        length = 0
        remainder = 0

        for cursor in range(len(text)):
            remainder += 1
            half = -1

            while remainder > 0:
                if length == 0:
                    edge = cursor

                bridge = self.children[node].get(text[edge], -1)

                if bridge < 0:
                    self.children[node][text[edge]] = self._new_node(cursor, _OPEN)
                    if half >= 0:
                        self.link[half] = node
                        half = -1
                else:
                    span = (cursor + 1 if self.end[bridge] == _OPEN else self.end[bridge]) - self.start[bridge]
                    if length >= span:
                        edge += span
                        length -= span
                        node = bridge
                        continue

                    if text[self.start[bridge] + length] == text[cursor]:
                        if half >= 0 and node != root:
                            self.link[half] = node
                        length += 1
                        break

                    # Split the edge and hang a new leaf
                    split = self._new_node(self.start[bridge], self.start[bridge] + length)
                    self.children[node][text[edge]] = split
                    self.children[split][text[cursor]] = self._new_node(cursor, _OPEN)
                    self.start[bridge] += length
                    self.children[split][text[self.start[bridge]]] = bridge
                    if half >= 0:
                        self.link[half] = split
                    half = split

                remainder -= 1

                if node == root and length > 0:
                    length -= 1
                    edge = cursor - remainder + 1
                elif node != root:
                    node = self.link[node]

        size = len(text)
        self.end = [size if e == _OPEN else e for e in self.end]

    def _annotate(self):
        count = len(self.start)
        self.parent = [-1] * count
        self.depth = [0] * count
        self.suffix = [-1] * count

        size = len(self.text)
        for node in self.preorder():
            for child in self.children[node].values():
                self.parent[child] = node
                self.depth[child] = self.depth[node] + self.end[child] - self.start[child]
            if not self.children[node] and node != SuffixTree.ROOT:
                self.suffix[node] = size - self.depth[node] + 1


def build_suffix_tree(text: Union[str, Sequence[int]],
                      alphabet: Optional[Union[Alphabet, str]] = None) -> SuffixTree:
    """Builds the suffix tree of a string.

    Args:
        text: Non-empty string, or a sequence of ranks when an alphabet is given.
        alphabet: Alphabet of the text; derived from the letters of a string
            if omitted.

    Raises:
        WSeqValidationError: Empty text or letters outside the alphabet.
    """
    if alphabet is None:
        if not isinstance(text, str):
            raise WSeqValidationError("Rank sequences need an explicit alphabet.")
        alphabet = Alphabet(set(text) or "A")
    elif not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)

    if isinstance(text, str):
        ranks = alphabet.encode(text)
        if ranks is None:
            raise WSeqValidationError(f"Text has letters outside '{alphabet.letters}'.")
    else:
        ranks = list(text)

    return SuffixTree(ranks, len(alphabet), alphabet)
