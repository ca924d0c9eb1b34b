"""Twin-width tooling: trigraphs, contraction sequences, an exact solver,
and kernelization pipelines for graphs with few feedback edges."""

from .trigraph import EdgeColor, Trigraph, new_trigraph
from .sequence import (
    BagForest,
    ContractionSequence,
    ContractionStep,
    Lift,
    bags,
    compose,
    identity_lift,
    restrict,
    verify,
)
from .solver import (
    SolveResult,
    SolverConfig,
    canonical_key,
    decide_width_at_most,
    optimal_sequence,
)
from .structure import (
    HPGraph,
    PseudoPath,
    Stump,
    StumpKind,
    classify_stumps,
    feedback_edge_set,
    find_bridges,
    find_dangling_paths,
    find_dangling_trees,
)
from .reduce import (
    RuleOutcome,
    fen1_sequence,
    kill_stumps_prefix,
    merge_stumps,
    prune,
    reduce_star,
    reduce_tree,
    tidy,
    tree_sequence,
)
from .kernel import (
    KernelOutcome,
    Practical,
    Theory,
    general_kernel,
    path_floor,
    solve,
    tower_bound,
    tww2_bikernel,
)

__all__ = [
    "BagForest",
    "ContractionSequence",
    "ContractionStep",
    "EdgeColor",
    "HPGraph",
    "KernelOutcome",
    "Lift",
    "Practical",
    "PseudoPath",
    "RuleOutcome",
    "SolveResult",
    "SolverConfig",
    "Stump",
    "StumpKind",
    "Theory",
    "Trigraph",
    "bags",
    "canonical_key",
    "classify_stumps",
    "compose",
    "decide_width_at_most",
    "feedback_edge_set",
    "fen1_sequence",
    "find_bridges",
    "find_dangling_paths",
    "find_dangling_trees",
    "general_kernel",
    "identity_lift",
    "kill_stumps_prefix",
    "merge_stumps",
    "new_trigraph",
    "optimal_sequence",
    "path_floor",
    "prune",
    "reduce_star",
    "reduce_tree",
    "restrict",
    "solve",
    "tidy",
    "tower_bound",
    "tree_sequence",
    "tww2_bikernel",
    "verify",
]
