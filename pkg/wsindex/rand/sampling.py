"""Contains the randomized string family constructions.

A weighted sequence is a product distribution over strings of length n.
Sampling k strings from it and truncating every suffix at the longest prefix
that is still probable enough gives a family that matches the weighted
sequence with high probability:

* exact mode samples ``ceil((c + 2) z ln(nz))`` strings with threshold 1/z,
  so that Count > 0 exactly when P_X(P, i) >= 1/z;
* approximate mode samples ``ceil((c + 2) ln(n/eps) / eps^2)`` strings with
  threshold eps, so that Count/k is within eps of P_X(P, i).

Each string has its own Philox stream spawned from the seed, so the result
depends only on the seed.
"""

from __future__ import annotations  # Doc aliases
from typing import Optional
from dataclasses import dataclass

import math
import logging

import numpy as np

from wsindex.core.errors import WSeqValidationError
from wsindex.core.oracles import enumerate_solid_factors, match_probability
from wsindex.core.probability import DELTA_CMP, family_size, from_log
from wsindex.core.weightedseq import WeightedSequence
from wsindex.zest.stringfamily import StringFamily


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RandomizedConfig:
    """Parameters of a randomized construction.

    Attributes:
        c: Confidence constant; failure probability shrinks polynomially in c.
        seed: Seed of the generator, an unsigned 64-bit value.
    """
    c: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if not self.c >= 1:
            raise WSeqValidationError(f"Confidence constant c={self.c} must be at least 1.")
        if not 0 <= self.seed < 2 ** 64:
            raise WSeqValidationError(f"Seed {self.seed} is not an unsigned 64-bit value.")


class SampledFamily(StringFamily):
    """String family of sampled strings with probability-truncated properties.

    Attributes:
        mode (str): ``"exact"`` or ``"approximate"``.
        z (float): Threshold in exact mode, ``1/eps`` in approximate mode.
        eps (Optional[float]): Accuracy in approximate mode.
        threshold (float): Minimum probability of a usable factor.
        config (RandomizedConfig): Parameters used for sampling.
    """
    EXACT = "exact"
    APPROXIMATE = "approximate"

    def __init__(self, alphabet, strings, pi, mode: str, z: float,
                 eps: Optional[float], config: RandomizedConfig):
        super().__init__(alphabet, strings, pi)
        self.mode = mode
        self.z = z
        self.eps = eps
        self.threshold = eps if mode == SampledFamily.APPROXIMATE else 1.0 / z
        self.config = config
        self.stats = {"sampled_strings": self.k}


# ----------
# Sampling
# ----------

def sample_ranks(x: WeightedSequence, rng: np.random.Generator) -> np.ndarray:
    """Draws one string as letter ranks, position by position by inverse CDF."""
    cdf = np.cumsum(x.probs, axis=1)
    cdf /= cdf[:, -1:]
    u = rng.random(x.n)

    return np.argmax(cdf > u[:, None], axis=1).astype(np.uint8)


def sample_string(x: WeightedSequence, rng: np.random.Generator) -> str:
    """Draws a random string with distribution X.

    Example:
        >>> rng = np.random.Generator(np.random.Philox(7))
        >>> sample_string(x, rng)     # --> e.g. 'AABAAB'
    """
    return x.alphabet.decode(sample_ranks(x, rng))


def truncated_property(x: WeightedSequence, ranks: np.ndarray, threshold: float) -> np.ndarray:
    """Returns the longest-prefix property of a sampled string.

    Entry i (0-based) is the largest 1-based end e with
    ``P_X(S[i+1..e], i+1) >= threshold`` under the slack rule.
    """
    logs = x.log_probs[np.arange(x.n), ranks]
    descent = -np.concatenate(([0.0], np.cumsum(logs)))
    bound = -math.log2(threshold * (1.0 - DELTA_CMP))

    ends = np.searchsorted(descent, descent[:-1] + bound, side="right") - 1
    return ends.astype(np.int64)


def _sample_family(x: WeightedSequence, k: int, threshold: float,
                   config: RandomizedConfig):
    strings = np.empty((k, x.n), dtype=np.uint8)
    pi = np.empty((k, x.n), dtype=np.int64)

    streams = np.random.SeedSequence(config.seed).spawn(k)
    for j, stream in enumerate(streams):
        rng = np.random.Generator(np.random.Philox(stream))
        strings[j] = sample_ranks(x, rng)
        pi[j] = truncated_property(x, strings[j], threshold)

    return strings, pi


# -------------
# Constructions
# -------------

def exact_family_size(n: int, z: float, c: float) -> int:
    """Returns ``max(1, ceil((c + 2) z ln(nz)))``."""
    return max(1, math.ceil((c + 2) * z * math.log(n * z)))


def approx_family_size(n: int, eps: float, c: float) -> int:
    """Returns ``max(1, ceil((c + 2) ln(n/eps) / eps^2))``."""
    return max(1, math.ceil((c + 2) * math.log(n / eps) / eps ** 2))


def build_randomized_family(x: WeightedSequence, z: float,
                            config: Optional[RandomizedConfig] = None) -> SampledFamily:
    """Samples a family whose positive counts match the solid factors whp.

    Count_S(P, i) > 0 always implies P_X(P, i) >= 1/z; the converse fails with
    probability at most (nz)^-c.

    Raises:
        WSeqValidationError: floor(z) < 1.
    """
    config = config or RandomizedConfig()
    family_size(z)

    k = exact_family_size(x.n, z, config.c)
    strings, pi = _sample_family(x, k, 1.0 / z, config)

    logger.info("Sampled %d strings of length %d for z=%g (seed=%d)", k, x.n, z, config.seed)

    return SampledFamily(x.alphabet, strings, pi, SampledFamily.EXACT, z, None, config)


def build_randomized_approx_family(x: WeightedSequence, eps: float,
                                   config: Optional[RandomizedConfig] = None) -> SampledFamily:
    """Samples a family with ``|P_X(P, i) - Count_S(P, i)/k| < eps`` whp.

    Raises:
        WSeqValidationError: eps outside (0, 1].
    """
    config = config or RandomizedConfig()
    if not 0.0 < eps <= 1.0:
        raise WSeqValidationError(f"Accuracy eps={eps} must be in (0, 1].")

    k = approx_family_size(x.n, eps, config.c)
    strings, pi = _sample_family(x, k, eps, config)

    logger.info("Sampled %d strings of length %d for eps=%g (seed=%d)", k, x.n, eps, config.seed)

    return SampledFamily(x.alphabet, strings, pi, SampledFamily.APPROXIMATE, 1.0 / eps, eps, config)


def estimation_error(fam: StringFamily, x: WeightedSequence, threshold: Optional[float] = None) -> float:
    """Returns the largest ``|P_X(P, i) - Count_S(P, i)/k|`` over relevant pairs.

    The pairs are the factors with probability at least ``threshold`` (the
    family's own threshold by default) and every factor the family holds.
    Other pairs have Count 0 and probability below the threshold.
    """
    if threshold is None:
        threshold = getattr(fam, "threshold", 1.0 / fam.k)

    worst = 0.0
    for i in range(1, x.n + 1):
        patterns = enumerate_solid_factors(x, 1.0 / threshold, i)
        for j in range(1, fam.k + 1):
            factor = fam.factor(j, i)
            patterns.update(factor[:length] for length in range(1, len(factor) + 1))

        for pattern in patterns:
            p = from_log(match_probability(x, pattern, i, log=True))
            worst = max(worst, abs(p - fam.count(pattern, i) / fam.k))

    return worst
