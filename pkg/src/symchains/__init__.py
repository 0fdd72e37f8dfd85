"""Symmetric chain decompositions of Boolean-lattice and chain-product
quotients by permutation groups, with brute-force verification throughout."""

from .errors import (InternalInconsistencyError, ResourceCapError,
                     SearchTimeoutError)
from .posets import (BOOLEAN_GROUND_CAP, PRODUCT_SIZE_CAP, Chain,
                     ChainDecomposition, RankedPoset, ScdReport,
                     boolean_lattice, chain_product,
                     decomposition_from_json, decomposition_to_json,
                     is_symmetric_saturated_chain, partition_sum_scd,
                     poset_from_json, poset_hash, poset_product,
                     poset_to_json, power_poset, verify_scd)
from .perms import (CycleSpec, GeneratedGroup, Permutation, act_on_tuple,
                    alternating_group, close_group, format_generators,
                    format_permutation, is_powers_of_disjoint_cycles,
                    orbit_of_tuple, orbit_reps_lex, parse_permutations,
                    stabilizer_brute, stabilizer_cyclic_powers,
                    symmetric_group, trivial_group, wreath_product)
from .quotients import (BlockFactorization, QuotientPoset,
                        base_quotient_factorization, coordinate_action,
                        quotient, subset_action)
from .engine import (chain_product_quotient_scd, chain_product_scd,
                     greene_kleitman_scd, grid_quotient_scd, product_scd,
                     product_scd_many, search_scd)
from .pipeline import (Grid, GridPartition, PipelineResult, PowerContext,
                       WreathContext, grids_from_scds, necklace_scd,
                       power_quotient_scd, wreath_quotient_scd)

__version__ = "0.1.0"
