"""Random instance generators for the test suites.
"""

from typing import Iterator, List, Tuple

import numpy as np
from hypothesis import strategies as st

from wsindex.core.weightedseq import GENERATOR_LETTERS, WeightedSequence


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def random_sequence(rng: np.random.Generator, n: int, sigma: int,
                    sharp: float = 0.3) -> WeightedSequence:
    """Draws a weighted sequence; about ``sharp`` of its positions are deterministic."""
    probs = rng.dirichlet(np.ones(sigma), size=n)
    for i in np.flatnonzero(rng.random(n) < sharp):
        probs[i] = 0.0
        probs[i, rng.integers(sigma)] = 1.0

    return WeightedSequence(GENERATOR_LETTERS[:sigma], probs)


def random_sequences(count: int, max_n: int, max_sigma: int, seed: int) -> Iterator[WeightedSequence]:
    rng = make_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        sigma = int(rng.integers(1, max_sigma + 1))
        yield random_sequence(rng, n, sigma)


def random_property(rng: np.random.Generator, n: int) -> List[int]:
    """Draws a valid property array: non-decreasing with entry k in [k, n]."""
    pi = []
    current = 0
    for k in range(n):
        current = int(rng.integers(max(k, current), n + 1))
        pi.append(current)

    return pi


def random_text(rng: np.random.Generator, n: int, sigma: int) -> str:
    return "".join(GENERATOR_LETTERS[r] for r in rng.integers(sigma, size=n))


def substrings(text: str, max_length: int) -> List[str]:
    """Returns the distinct non-empty substrings of at most ``max_length`` letters."""
    return sorted({text[i:j] for i in range(len(text))
                   for j in range(i + 1, min(len(text), i + max_length) + 1)})


# ----------
# Strategies
# ----------

@st.composite
def texts_with_properties(draw, min_n: int = 1, max_n: int = 24,
                          max_sigma: int = 3) -> Tuple[str, List[int]]:
    sigma = draw(st.integers(1, max_sigma))
    text = draw(st.text(alphabet=GENERATOR_LETTERS[:sigma], min_size=min_n, max_size=max_n))
    n = len(text)

    pi = []
    current = 0
    for k in range(n):
        current = draw(st.integers(max(k, current), n))
        pi.append(current)

    return text, pi


@st.composite
def weighted_sequences(draw, max_n: int = 6, max_sigma: int = 2) -> WeightedSequence:
    """Sequences with small integer weights, so that exact thresholds occur often."""
    sigma = draw(st.integers(1, max_sigma))
    n = draw(st.integers(1, max_n))

    rows = []
    for _ in range(n):
        weights = draw(st.lists(st.integers(0, 4), min_size=sigma, max_size=sigma)
                       .filter(lambda w: sum(w) > 0))
        rows.append([w / sum(weights) for w in weights])

    return WeightedSequence(GENERATOR_LETTERS[:sigma], rows)


TREE_ARRAYS = ["text", "depth", "label_start", "parent", "child_ptr", "child_ids",
               "term_lo", "term_hi", "sub_hi", "entries"]


def overwrite_tree_word(blob: bytes, tree, name: str, index: int, value: int, start: int = 0) -> bytes:
    """Returns ``blob`` with one word of a serialized tree array replaced.

    ``start`` is where the tree's ``PST1`` bytes begin inside ``blob``.
    """
    offset = start + tree.HEADER.size + len(tree.alphabet.letters.encode("utf-8"))
    for other in TREE_ARRAYS[:TREE_ARRAYS.index(name)]:
        offset += 4 * len(getattr(tree, other))

    index %= len(getattr(tree, name))
    patched = bytearray(blob)
    patched[offset + 4 * index:offset + 4 * index + 4] = int(value).to_bytes(4, "little", signed=True)
    return bytes(patched)
