"""Special weighted sequence reduction testing.
"""

import pytest

from wsindex.core.errors import WSeqValidationError
from wsindex.core.oracles import enumerate_solid_factors
from wsindex.core.weightedseq import WeightedSequence
from wsindex.index.specialseq import SpecialWeightedSequence, to_special_weighted_sequence
from wsindex.zest.zestimation import build_z_estimation
from wsindex.experiments.helpers import make_rng, random_sequence


def test_family_reduction(profile, family4):
    special = to_special_weighted_sequence(family4, profile)
    assert len(special) == 4 * 6 + 3

    assert special.preimage(7) is None
    assert special.preimage(special.image(3, 2)) == (3, 2)
    assert special.prob(special.image(3, 2), "B") == 0.5
    assert special.prob(special.image(3, 2), "A") == 0.0
    assert special.prob(7, "A") == 0.0

    assert special.match_probability("AA", special.image(1, 3)) == pytest.approx(0.6)
    assert special.match_probability("AA", 6) == 0.0
    with pytest.raises(IndexError):
        special.match_probability("AA", 27)


def test_solid_factors_per_block(profile, family4):
    special = to_special_weighted_sequence(family4, profile)
    assert special.solid_factors_at(special.image(2, 3), 4) == {"", "A", "AA", "AAA"}
    assert special.solid_factors_at(special.image(4, 6), 4) == {"", "B"}


def test_preserves_solid_factors():
    rng = make_rng(24)
    for _ in range(50):
        x = random_sequence(rng, int(rng.integers(1, 25)), int(rng.integers(1, 4)))
        z = float(rng.uniform(1, 8))
        fam = build_z_estimation(x, z)
        special = to_special_weighted_sequence(fam, x)
        assert len(special) == fam.k * x.n + fam.k - 1

        for i in range(1, x.n + 1):
            found = set()
            for j in range(1, fam.k + 1):
                found |= special.solid_factors_at(special.image(j, i), z)
            assert found == enumerate_solid_factors(x, z, i)


def test_rejects_mismatch(profile, family4):
    with pytest.raises(WSeqValidationError):
        to_special_weighted_sequence(family4, WeightedSequence("AB", [[1.0, 0.0]]))
    with pytest.raises(WSeqValidationError):
        SpecialWeightedSequence(profile.alphabet, [0, 1], [0.5], 2)
    with pytest.raises(WSeqValidationError):
        SpecialWeightedSequence(profile.alphabet, [0], [1.5], 1)
