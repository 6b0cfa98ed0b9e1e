"""Contains per-query scratch state for distinct-position retrieval.

Index queries visit document-array ranges in which a position of the
weighted sequence may appear once per family member. A query context marks
and counts positions with epoch stamps, so clearing between queries is free.
Contexts are not thread-safe; give each thread its own.
"""

from typing import Iterable, List


class QueryContext:
    """Epoch-stamped marks and counters over positions 1..n.

    Args:
        n: Largest position that will be seen.

    Example:
        >>> ctx = QueryContext(6)
        >>> ctx.distinct([3, 1, 3, 2])          # --> [1, 2, 3]
        >>> ctx.frequent([3, 1, 3, 2], 2)       # --> [3]
    """
    def __init__(self, n: int):
        self.n = n
        self._stamp = [0] * (n + 1)
        self._count = [0] * (n + 1)
        self._epoch = 0

    def distinct(self, positions: Iterable[int]) -> List[int]:
        """Returns the distinct positions, sorted ascending."""
        self._epoch += 1
        epoch = self._epoch
        stamp = self._stamp

        found = []
        for p in positions:
            if stamp[p] != epoch:
                stamp[p] = epoch
                found.append(p)

        found.sort()
        return found

    def frequent(self, positions: Iterable[int], threshold: int) -> List[int]:
        """Returns the positions seen at least ``threshold`` times, sorted ascending."""
        self._epoch += 1
        epoch = self._epoch
        stamp = self._stamp
        count = self._count

        found = []
        for p in positions:
            if stamp[p] != epoch:
                stamp[p] = epoch
                count[p] = 0
            count[p] += 1
            if count[p] == threshold:
                found.append(p)

        found.sort()
        return found
