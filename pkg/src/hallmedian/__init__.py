"""Strengthened Hall conditions and median-realizing phylogenetic trees.

A family of 3-element sets has an injective median map into some tree
exactly when every subfamily covers at least two more elements than it
has members.  This package decides that condition, builds the tree when
it holds, verifies median maps, and does the same for families of larger
sets whose median blocks partition the interior vertices.
"""

from .builder import CaseI, CaseII, Degree1, Reattach, build_partition_tree, build_tree, find_reduction
from .checker import (
    CheckOutcome,
    PartitionCheckOutcome,
    TightFamily,
    accepts_addition,
    check_bruteforce,
    check_partition_condition,
    check_poly,
    fan_expansion,
    tight_sets,
)
from .core import (
    SetSystem,
    Tree,
    canonicalize_to_binary,
    caterpillar,
    load_newick,
    load_set_system,
    parse_newick,
    parse_set_system,
    serialize_newick,
    star,
    subdivide_and_attach,
)
from .errors import (
    ConditionViolated,
    HallMedianError,
    NoReduction,
    ParseError,
    SizeGuardExceeded,
    TreeError,
)
from .genbench import (
    GenSpec,
    bench_checkers,
    generate,
    perturb_to_violation,
    random_binary_tree,
    sample_partition_system,
    sample_realizable_system,
)
from .matching import max_bipartite_matching
from .median import MedianIndex, VerificationReport, median, median_set, verify_injective, verify_partition

__version__ = "0.1.0"

__all__ = [
    "CaseI", "CaseII", "Degree1", "Reattach", "build_partition_tree", "build_tree", "find_reduction",
    "CheckOutcome", "PartitionCheckOutcome", "TightFamily", "accepts_addition", "check_bruteforce",
    "check_partition_condition", "check_poly", "fan_expansion", "tight_sets",
    "SetSystem", "Tree", "canonicalize_to_binary", "caterpillar", "load_newick", "load_set_system",
    "parse_newick", "parse_set_system", "serialize_newick", "star", "subdivide_and_attach",
    "ConditionViolated", "HallMedianError", "NoReduction", "ParseError", "SizeGuardExceeded", "TreeError",
    "GenSpec", "bench_checkers", "generate", "perturb_to_violation", "random_binary_tree",
    "sample_partition_system", "sample_realizable_system",
    "max_bipartite_matching",
    "MedianIndex", "VerificationReport", "median", "median_set", "verify_injective", "verify_partition",
]
