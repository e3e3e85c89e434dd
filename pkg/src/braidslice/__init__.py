"""Root systems, twisted Weyl groups, positive braids and exact SL_n slices."""
from .braid import (PositiveBraid, braid_mul, braid_of, braid_pow, dg_complement, dg_factor,
                    dg_of_power, dg_stabilized, dgn, power)
from .chevalley import (SliceContext, factorize_unipotent, psi, psi_inverse, root_subgroup,
                        spaltenstein_witness, standard_lift, transversality_rank)
from .cross import (CrossingPair, CrossingPairError, big_cross_iter, big_cross_set,
                    braid_equation_check, cross_braid, cross_iter, cross_root, cross_set,
                    crossing_condition, is_crossing_pair, is_nimble, is_slicing, main_lemma_ii_check)
from .rmatrix import (BDTriple, RMatrixData, build_rmatrix, cayley_r0, dual_embedding, mcybe_check,
                      reduction_criterion, sl, sts_bivector)
from .root_system import RootSystem, RootSystemError, build_root_system
from .weyl import WeylElement, elements, longest_element, parse_word, weyl_from_word

__version__ = "0.1.0"

__all__ = [
    "PositiveBraid",
    "braid_mul",
    "braid_of",
    "braid_pow",
    "dg_complement",
    "dg_factor",
    "dg_of_power",
    "dg_stabilized",
    "dgn",
    "power",
    "SliceContext",
    "factorize_unipotent",
    "psi",
    "psi_inverse",
    "root_subgroup",
    "spaltenstein_witness",
    "standard_lift",
    "transversality_rank",
    "CrossingPair",
    "CrossingPairError",
    "big_cross_iter",
    "big_cross_set",
    "braid_equation_check",
    "cross_braid",
    "cross_iter",
    "cross_root",
    "cross_set",
    "crossing_condition",
    "is_crossing_pair",
    "is_nimble",
    "is_slicing",
    "main_lemma_ii_check",
    "BDTriple",
    "RMatrixData",
    "build_rmatrix",
    "cayley_r0",
    "dual_embedding",
    "mcybe_check",
    "reduction_criterion",
    "sl",
    "sts_bivector",
    "RootSystem",
    "RootSystemError",
    "build_root_system",
    "WeylElement",
    "elements",
    "longest_element",
    "parse_word",
    "weyl_from_word",
]
