"""Contains the probability arithmetic shared by every index component.

Probabilities are carried as base-2 logarithms in 64-bit floats so products
become sums. A probability of zero is the ``NEG_INF`` sentinel, which
compares below every positive threshold.

Threshold comparisons follow a single rule everywhere in the package:

* ``p >= 1/z`` is evaluated as ``p * z >= 1 - DELTA_CMP``
* ``floor(p * z)`` is evaluated as ``floor(p * z + DELTA_CMP)``

Exactly integral values of ``p * z`` therefore resolve toward inclusion.
"""

from __future__ import annotations  # Doc aliases
from numpy.typing import ArrayLike

import math

import numpy as np

from wsindex.core.errors import WSeqValidationError


# Slack used by all >= and floor comparisons against a threshold
DELTA_CMP = 1e-9

# Allowed deviation of a position's distribution from summing to one
DELTA_SUM = 1e-6

# Log-domain representation of probability zero
NEG_INF = float("-inf")


def to_log(p: ArrayLike) -> ArrayLike:
    """Converts linear probabilities to base-2 logarithms.

    Zero probabilities map to ``NEG_INF`` without warnings.

    Args:
        p: Scalar or array-like of probabilities in [0, 1].

    Returns:
        Scalar or numpy array of base-2 logarithms.
    """
    with np.errstate(divide="ignore"):
        logp = np.log2(np.asarray(p, dtype=float))

    return logp.item() if logp.ndim == 0 else logp


def from_log(logp: float) -> float:
    """Converts a base-2 logarithm back to a linear probability."""
    if logp == NEG_INF:
        return 0.0
    return 2.0 ** logp


def floor_count(logp: float, z: float) -> int:
    """Returns ``floor(p * z)`` under the slack rule, 0 for zero probability.

    Args:
        logp: Probability as a base-2 logarithm.
        z: Threshold parameter (reciprocal of the minimum probability).

    Example:
        >>> floor_count(to_log(0.6), 4)   # --> 2
        >>> floor_count(0.0, 3.5)         # --> 3 (floor of z itself)
    """
    if logp == NEG_INF:
        return 0
    return math.floor(2.0 ** logp * z + DELTA_CMP)


def is_solid(logp: float, z: float) -> bool:
    """Returns whether ``p >= 1/z`` under the slack rule."""
    if logp == NEG_INF:
        return False
    return 2.0 ** logp * z >= 1.0 - DELTA_CMP


def at_least(p: float, bound: float) -> bool:
    """Returns whether a linear probability reaches an arbitrary bound.

    Bounds at or below zero are reached by every probability.
    """
    return p >= bound - DELTA_CMP


def family_size(z: float) -> int:
    """Returns the number of strings in a z-estimation, ``floor(z)``.

    Raises:
        WSeqValidationError: The threshold gives an empty family.
    """
    k = floor_count(0.0, z)
    if k < 1:
        raise WSeqValidationError(f"Threshold z={z} gives floor(z) < 1.")
    return k
