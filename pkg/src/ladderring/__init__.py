"""Exact decomposition rules on a supercuspidal line of p-adic GL(n).

Multisegment combinatorics, Kazhdan-Lusztig ground truth, indicator
multiplicities in Jacquet modules, and batch verification of the
321-avoidance decomposition rule for products of ladder representations.
"""
from .segments import (Multisegment, Segment, indicator_shape, is_generic,
                       is_ladder, min_ladder_cover, parse_multisegment,
                       precedes, support, width)
from .perms import (avoids, bruhat_leq, contains_pattern, enumerate_avoiders,
                    enumerate_S, flatten, in_Q, is_max_double_coset,
                    longest_double_coset_rep, parse_permutation, star)
from .klengine import KLEngine, backend_name, format_poly, get_engine, invert_interval
from .coords import build_multisegment, canonical_coordinates, combine
from .decompose import (DecompositionResult, expand_standard, product_irreducibles,
                        product_ladders)
from .jacquet import (indicator_multiplicity, indicator_multiplicity_standard,
                      indicator_set, jacquet_pairs_ladder, jacquet_pairs_segment,
                      match_two_column)

__version__ = "0.1.0"
