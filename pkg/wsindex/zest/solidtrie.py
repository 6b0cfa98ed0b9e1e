"""Contains the solid factor trie used to build z-estimations.

The trie for position i holds every solid factor P at i (those with
``floor(P_X(P, i) * z) > 0``) as a node. Each of the ``floor(z)`` family
members is a token sitting at the node of its current factor, so the token
placement is the multiset M_i.

Moving from position i + 1 to i reuses the old trie below the heavy letter
and copies only the parts that start with other letters. Tokens then climb
toward the root until they reach a node that needs them, trimming emptied
leaves on the way.

Nodes live in parallel lists indexed by node id and are recycled through a
free pool. Probabilities are stored relative to a global log offset so that
re-rooting the whole trie under a new edge costs O(1).
"""

from __future__ import annotations  # Doc aliases
from typing import Counter as CounterType, Iterator, List, Optional, Tuple
from collections import Counter

import logging

import numpy as np

from wsindex.core.errors import ConstructionError
from wsindex.core.probability import family_size, floor_count, from_log
from wsindex.core.weightedseq import WeightedSequence


logger = logging.getLogger(__name__)


class SolidFactorTrie:
    """Token-bearing trie of the solid factors at one position.

    A new trie represents position n + 1: a lone root holding all tokens.
    Each call to :meth:`transform` moves it one position to the left.

    Args:
        x: Weighted sequence being estimated.
        z: Threshold.
        record_walks: Keep the per-token walk lengths of every step in
            ``walks``.

    Attributes:
        x (WeightedSequence): The weighted sequence.
        z (float): The threshold.
        k (int): Number of tokens, ``floor(z)``.
        position (int): Position the trie currently represents.
        root (int): Id of the root node.
        last_letters (np.ndarray[uint8]): Per token, the letter S_j[i] chosen
            by the last step.
        last_depths (np.ndarray[int64]): Per token, the factor length
            |P_{j,i}| after the last step.
        stats (Dict[str, int]): Counters ``nodes_created``, ``nodes_deleted``,
            ``walk_steps`` and ``requests_placed`` over the trie's lifetime.
        walks (Optional[List[np.ndarray]]): Per step (positions n down to 1),
            the number of parent moves made by each token.
    """
    # -----------
    # Constructor
    # -----------

    def __init__(self, x: WeightedSequence, z: float, record_walks: bool = False):
        self.x = x
        self.z = z
        self.k = family_size(z)
        self.position = x.n + 1

        self._sigma = len(x.alphabet)
        self._offset = 0.0

        # Node storage
        self._parent: List[int] = []
        self._letter: List[int] = []
        self._children: List[List[int]] = []
        self._logp: List[float] = []
        self._tokens: List[int] = []
        self._requests: List[Optional[List[Tuple[int, int]]]] = []
        self._epoch: List[int] = []
        self._processed: List[int] = []
        self._free: List[int] = []
        self._pending = 0

        self.stats = {"nodes_created": 0, "nodes_deleted": 0,
                      "walk_steps": 0, "requests_placed": 0}
        self.walks = [] if record_walks else None

        self.root = self._new_node(-1, -1, 0.0)
        self._tokens[self.root] = self.k

        # Token storage
        self._token_node = [self.root] * self.k
        self._token_depth = [0] * self.k

        self.last_letters = np.zeros(self.k, dtype=np.uint8)
        self.last_depths = np.zeros(self.k, dtype=np.int64)

    # -------
    # Methods
    # -------

    @property
    def node_count(self) -> int:
        """Number of live nodes, the root included."""
        return len(self._parent) - len(self._free)

    def transform(self, i: int):
        """Turns the trie for position i + 1 into the trie for position i.

        With DEBUG logging enabled the whole new trie is dumped, so a full
        build logs O(n * trie size) text.

        Args:
            i: The new position, one less than the current one.

        Raises:
            ValueError: i is not the next position to the left.
            ConstructionError: Some token request was left unfulfilled.
        """
        if i != self.position - 1 or i < 1:
            raise ValueError(f"Trie at position {self.position} can't move to position {i}.")

        index = i - 1
        heavy = self.x.heavy_rank(index)

        # Re-root the old trie under the heavy letter
        self._offset += self.x.log_probs[index, heavy]
        old_root = self.root
        self.root = self._new_node(-1, -1, 0.0)
        self._children[self.root][heavy] = old_root
        self._parent[old_root] = self.root
        self._letter[old_root] = heavy

        self._grow_light_subtrees(index, heavy, old_root)
        self._move_tokens(i, heavy)

        if self._pending:
            raise ConstructionError(f"{self._pending} token requests left unfulfilled "
                                    f"at position {i}.")

        self.position = i

        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("Solid factor trie at position %d:\n%s", i, self.dump())

    def probability(self, node: int) -> float:
        """Returns P_X(L(node), position) in linear form."""
        return from_log(self._logp[node] + self._offset)

    def label(self, node: int) -> str:
        """Returns the string spelled from the root to a node."""
        letters = []
        while node != self.root:
            letters.append(self.x.alphabet[self._letter[node]])
            node = self._parent[node]

        return "".join(reversed(letters))

    def iter_nodes(self) -> Iterator[Tuple[int, str]]:
        """Yields ``(node, label)`` for every live node in preorder."""
        stack = [(self.root, "")]
        while stack:
            node, label = stack.pop()
            yield node, label

            for rank in reversed(range(self._sigma)):
                child = self._children[node][rank]
                if child >= 0:
                    stack.append((child, label + self.x.alphabet[rank]))

    def multiset(self) -> CounterType[str]:
        """Returns the multiset of factors marked by the tokens."""
        return Counter(self.label(node) for node in self._token_node)

    def dump(self) -> str:
        """Returns an indented text rendering of the trie.

        Every line shows the edge letter, the probability of the node's
        label, the 1-based ids of the tokens at the node and the number of
        open token requests.

        Example::

            * p=1 tokens=[] requests=0
              A p=0.5 tokens=[1] requests=0
              B p=0.5 tokens=[2, 3, 4] requests=0
        """
        holders = {}
        for j, node in enumerate(self._token_node, start=1):
            holders.setdefault(node, []).append(j)

        lines = [f"# position {self.position}"]
        for node, label in self.iter_nodes():
            letter = label[-1] if label else "*"
            requests = len(self._requests[node] or ())
            lines.append(f"{'  ' * len(label)}{letter} p={self.probability(node):.6g} "
                         f"tokens={holders.get(node, [])} requests={requests}")

        return "\n".join(lines)

    # Helpers

    def _new_node(self, parent: int, letter: int, logp: float) -> int:
        raw = logp - self._offset
        if self._free:
            node = self._free.pop()
            self._parent[node] = parent
            self._letter[node] = letter
            self._children[node] = [-1] * self._sigma
            self._logp[node] = raw
            self._tokens[node] = 0
            self._requests[node] = None
            self._epoch[node] = 0
            self._processed[node] = 0
        else:
            node = len(self._parent)
            self._parent.append(parent)
            self._letter.append(letter)
            self._children.append([-1] * self._sigma)
            self._logp.append(raw)
            self._tokens.append(0)
            self._requests.append(None)
            self._epoch.append(0)
            self._processed.append(0)

        if parent >= 0:
            self._children[parent][letter] = node

        self.stats["nodes_created"] += 1
        return node

    def _delete_node(self, node: int):
        self._children[self._parent[node]][self._letter[node]] = -1
        self._parent[node] = -1
        self._free.append(node)
        self.stats["nodes_deleted"] += 1

    def _count(self, node: int) -> int:
        return floor_count(self._logp[node] + self._offset, self.z)

    def _multiplicity(self, node: int) -> int:
        below = sum(self._count(child) for child in self._children[node] if child >= 0)
        return self._count(node) - below

    def _grow_light_subtrees(self, index: int, heavy: int, heavy_root: int):
        """Builds the subtrees for non-heavy first letters and places token requests.

        A light node labelled cP mirrors the heavy node labelled hP; children
        are only tried where the heavy node has them, and ``m(cP)`` requests
        are left at the heavy node.
        """
        logs = self.x.log_probs
        n = self.x.n

        for first in range(self._sigma):
            if first == heavy:
                continue

            logp = logs[index, first]
            count = floor_count(logp, self.z)
            if count == 0:
                continue

            node = self._new_node(self.root, first, logp)
            stack = [(node, heavy_root, logp, count, 1)]

            while stack:
                node, mirror, logp, count, depth = stack.pop()

                below = 0
                if index + depth < n:
                    row = logs[index + depth]
                    mirror_children = self._children[mirror]
                    for rank in range(self._sigma):
                        mirror_child = mirror_children[rank]
                        if mirror_child < 0:
                            continue

                        child_logp = logp + row[rank]
                        child_count = floor_count(child_logp, self.z)
                        if child_count:
                            child = self._new_node(node, rank, child_logp)
                            stack.append((child, mirror_child, child_logp, child_count, depth + 1))
                            below += child_count

                # Requests for tokens ending exactly here
                multiplicity = count - below
                if multiplicity:
                    if self._requests[mirror] is None:
                        self._requests[mirror] = []
                    self._requests[mirror].extend([(node, first)] * multiplicity)
                    self._pending += multiplicity
                    self.stats["requests_placed"] += multiplicity

    def _move_tokens(self, i: int, heavy: int):
        """Walks every token upward in ascending id order until it settles."""
        steps_per_token = np.zeros(self.k, dtype=np.int64)

        for j in range(self.k):
            node = self._token_node[j]
            depth = self._token_depth[j] + 1
            self._tokens[node] -= 1
            steps = 0

            while True:
                if node == self.root:
                    target, letter = node, heavy
                    break

                requests = self._requests[node]
                if requests:
                    target, letter = requests.pop()
                    self._pending -= 1
                    break

                if self._epoch[node] != i:
                    self._epoch[node] = i
                    self._processed[node] = 0
                if self._processed[node] < self._multiplicity(node):
                    self._processed[node] += 1
                    target, letter = node, heavy
                    break

                # Climb, dropping the node if it became an empty leaf
                parent = self._parent[node]
                if self._tokens[node] == 0 and max(self._children[node]) < 0:
                    self._delete_node(node)
                node = parent
                depth -= 1
                steps += 1

            self._tokens[target] += 1
            self._token_node[j] = target
            self._token_depth[j] = depth

            self.last_letters[j] = letter
            self.last_depths[j] = depth
            steps_per_token[j] = steps

        self.stats["walk_steps"] += int(steps_per_token.sum())
        if self.walks is not None:
            self.walks.append(steps_per_token)


def transform_step(trie: SolidFactorTrie, x: WeightedSequence, z: float, i: int) -> SolidFactorTrie:
    """Transforms the trie for position i + 1 into the trie for position i.

    Args:
        trie: Trie currently at position i + 1.
        x: The weighted sequence the trie was created for.
        z: The threshold the trie was created for.
        i: Target position.

    Returns:
        The same trie, now at position i.

    Raises:
        ValueError: The trie belongs to another sequence or threshold, or is
            not at position i + 1.
        ConstructionError: A token failed to settle.
    """
    if x is not trie.x or z != trie.z:
        raise ValueError("Trie was created for a different sequence or threshold.")

    trie.transform(i)
    return trie
