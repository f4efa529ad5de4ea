"""Ternary self-dual codes of length 2(p+1), the Hadamard matrices formed by
their full-weight words, and the search and equivalence tools around them."""

from .gf3 import (Gf3Matrix, Gf3Vector, TernaryCode, dual_code, is_self_dual,
                  is_self_orthogonal, rank3, rref, standard_form,
                  weight_distribution_small)
from .constructions import (ConstructionError, build_blocks, build_extended_qr,
                            build_four_negacirculant, build_length60_negacirculant,
                            build_nv_code, build_pless_symmetry, build_rx_ry,
                            negacirculant, quadratic_character)
from .hadamard import (HadamardMatrix, NotHadamardError, SdsPair, SignMatrix,
                       build_h_nv, build_h_sds, build_paley, cyclotomic_classes,
                       figure2_hadamard, is_hadamard, is_sds, is_skew,
                       octal_decode, octal_encode, rows_in_code, sds_for_theorem,
                       sylvester, type1_matrix)
from .search import (build_ortho_graph, enumerate_full_weight, find_cliques,
                     min_weight_bz, sign_normalize)
from .equivalence import (MonomialPair, SignedPermutation, are_equivalent,
                          automorphism_group, automorphism_group_order,
                          canonical_form, codes_equivalent, profile_invariant)

__version__ = "0.1.0"
