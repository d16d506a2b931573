"""Finite-resolution tools for multidimensional shifts of finite type."""

from .coding import (SlidingBlockCode, code_apply, compose_codes, image_in_sft_check,
                     partition_refine, stability_radius)
from .patterns import (Alphabet, Pattern, Window, occurs_in, pattern_restrict, pattern_shift,
                       patterns_compatible)
from .perturbation import (PerturbationRequest, image_language, perturb_subsystem,
                           product_projection_check)
from .sft import (BlockLanguage, Empty, Nonempty, Sft, Unknown, admissible_blocks,
                  emptiness_semidecide, higher_block_sft, periodic_witness_search, product_sft,
                  transition_sft)
from .space import (DyadicDistance, hausdorff_proxy, language_equal_at, language_of_pattern,
                    restrict_language)
from .toeplitz import (ToeplitzSpec, coloring_structure, orbit_language, syndetic_check,
                       toeplitz_decode, toeplitz_encode)

__version__ = "0.1.0"
