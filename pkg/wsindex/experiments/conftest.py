"""Shared fixtures.
"""

import os

import matplotlib
matplotlib.use("Agg")

import pytest

from wsindex.core.weightedseq import WeightedSequence
from wsindex.zest.zestimation import ZEstimation

OBJECTS = os.path.join(os.path.dirname(__file__), "objects")

PROFILE_PROBS = [[1.0, 0.0], [0.5, 0.5], [0.75, 0.25], [0.8, 0.2], [0.5, 0.5], [0.25, 0.75]]

FAMILY4_STRINGS = ["AAAAAA", "AAAAAB", "ABAABB", "ABBBBB"]
FAMILY4_PI = [[2, 2, 3, 4, 5, 6], [4, 4, 5, 6, 6, 6], [4, 4, 5, 6, 6, 6], [2, 2, 3, 3, 5, 6]]


@pytest.fixture
def profile():
    return WeightedSequence("AB", PROFILE_PROBS)


@pytest.fixture
def profile_path():
    return os.path.join(OBJECTS, "profile.wseq")


@pytest.fixture
def family4():
    return ZEstimation.from_strings("AB", FAMILY4_STRINGS, FAMILY4_PI, z=4)
