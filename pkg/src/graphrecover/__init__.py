"""Pattern complementation on degenerate graphs: apply, recover, verify."""

from .cliques import CliqueQuery, enumerate_part_cliques, find_clique
from .generators import (
    PatternedInstance,
    Rng,
    gen_degenerate,
    gen_multicolored_reduction,
    gen_planted,
)
from .graph import (
    Graph,
    GraphBuilder,
    VertexSet,
    degeneracy,
    disagreement_vertices,
    graph_symmetric_difference,
    induced_subgraph,
    symmetric_difference_size,
    twin_classes,
)
from .pattern import (
    PartitionedGraph,
    Pattern,
    SubsetList,
    apply_pattern,
    blowup_to_pattern,
    complement_on_subsets,
    first_forbidden_twins,
    is_pattern,
    pattern_to_subsets,
    perfect_blowup,
    reduce_pattern,
    restrict_partitioned,
    subsets_to_pattern,
)
from .recovery import (
    RecoveryConfig,
    RecoveryOutcome,
    VerificationReport,
    recover,
    recover_blowup,
    verify_against_truth,
)
from .similarity import (
    PreconditionError,
    check_max_similarity_vertex_perfect,
    check_part_perfect_fraction,
    check_similar_vertices_single_part,
    max_similarity_degree_vertex,
    perfectness,
    similarity_degree,
    similarity_degrees,
    u_perfect_set,
)

__all__ = [
    "CliqueQuery",
    "enumerate_part_cliques",
    "find_clique",
    "PatternedInstance",
    "Rng",
    "gen_degenerate",
    "gen_multicolored_reduction",
    "gen_planted",
    "RecoveryConfig",
    "RecoveryOutcome",
    "VerificationReport",
    "recover",
    "recover_blowup",
    "verify_against_truth",
    "PreconditionError",
    "check_max_similarity_vertex_perfect",
    "check_part_perfect_fraction",
    "check_similar_vertices_single_part",
    "max_similarity_degree_vertex",
    "perfectness",
    "similarity_degree",
    "similarity_degrees",
    "u_perfect_set",
    "Graph",
    "GraphBuilder",
    "VertexSet",
    "degeneracy",
    "disagreement_vertices",
    "graph_symmetric_difference",
    "induced_subgraph",
    "symmetric_difference_size",
    "twin_classes",
    "Pattern",
    "PartitionedGraph",
    "SubsetList",
    "apply_pattern",
    "blowup_to_pattern",
    "complement_on_subsets",
    "first_forbidden_twins",
    "is_pattern",
    "pattern_to_subsets",
    "perfect_blowup",
    "reduce_pattern",
    "restrict_partitioned",
    "subsets_to_pattern",
]
