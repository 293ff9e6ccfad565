"""Pocsets, their dual CAT(0) cube complexes, and equivariant folds."""

__version__ = "0.1.0"

from .action import GroupAction, check_equivariant, joint_closure, validate_action
from .dual import CubeComplex, dual_complex, naive_vertices
from .errors import CubefoldError
from .folding import (
    FoldStep,
    FoldTrace,
    ResolutionState,
    complexity,
    elementary_fold,
    find_foldable_pairs,
    fold_to_target,
    folding_sequence,
)
from .kernels import BACKEND
from .maps import PocsetMap, classify_map, image_partition, induced_complex_map, kernel_relation
from .pocset import Pocset, chain, pocset_from, validate_pocset
from .quotient import EquivalenceRelation, check_admissible, quotient, quotient_pocset

__all__ = [
    "BACKEND",
    "CubeComplex",
    "CubefoldError",
    "EquivalenceRelation",
    "FoldStep",
    "FoldTrace",
    "GroupAction",
    "Pocset",
    "PocsetMap",
    "ResolutionState",
    "chain",
    "check_admissible",
    "check_equivariant",
    "classify_map",
    "complexity",
    "dual_complex",
    "elementary_fold",
    "find_foldable_pairs",
    "fold_to_target",
    "folding_sequence",
    "image_partition",
    "induced_complex_map",
    "joint_closure",
    "kernel_relation",
    "naive_vertices",
    "pocset_from",
    "quotient",
    "quotient_pocset",
    "validate_action",
    "validate_pocset",
]
