"""Core wsindex module.
"""
# Weighted sequences
from .core.weightedseq import (Alphabet, WeightedSequence, parse_weighted_sequence,
                               read_weighted_sequence, random_weighted_sequence)
from .core.errors import WSeqParseError, WSeqValidationError, IndexLoadError, ConstructionError

# Z-estimations
from .zest.stringfamily import StringFamily
from .zest.solidtrie import SolidFactorTrie
from .zest.zestimation import ZEstimation, build_z_estimation, verify_z_estimation

# Suffix structures
from .sufstruct.suffixtree import SuffixTree, build_suffix_tree
from .sufstruct.propertytree import PropertySuffixTree, build_property_suffix_tree

# Indexes
from .index.querycontext import QueryContext
from .index.weightedindex import WeightedIndex, build_weighted_index
from .index.specialseq import SpecialWeightedSequence, to_special_weighted_sequence
from .approx.approxindex import ApproxIndex, build_approx_index, approx_report

# Randomized constructions
from .rand.sampling import (RandomizedConfig, SampledFamily, build_randomized_family,
                            build_randomized_approx_family)
