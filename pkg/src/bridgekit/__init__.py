"""Graph preprocessing around bridge-depth: exact parameters, blocking-set
shrinking, and kernelization of Independent Set with a bounded-bridge-depth
modulator, all backed by brute-force oracles at desk scale."""

from .errors import (
    BridgekitError,
    CapExceededError,
    GraphFormatError,
    InternalInconsistencyError,
)
from .graph import (
    Graph,
    bipartition,
    connected_components,
    contract_all_bridges,
    delete_edges,
    delete_vertices,
    dump_graph,
    find_bridges,
    identify_vertices,
    is_bipartite,
    is_connected,
    is_tree,
    load_graph,
    maximal_trees_of_bridges,
    tree_longest_path,
)
from .independence import (
    MISResult,
    Matching,
    alpha,
    alpha_additive_check,
    alpha_value,
    alternating_reachability,
    bipartite_maximum_matching,
    conf,
    maximum_independent_sets,
)
from .depth import (
    LoweringTree,
    bridge_depth,
    bridge_depth_via_trees,
    fvs_number,
    is_bd_at_most,
    lowering_tree,
    min_bd_modulator,
    tree_depth,
    treewidth,
)
from .blocking import (
    AuxiliaryBipartite,
    BlockingCertificate,
    build_auxiliary_bipartite,
    is_blocking_set,
    mbs,
    mbs_witness,
    shrink_blocking_set,
    shrink_blocking_set_bipartite,
)
from .minors import (
    MinorModel,
    NecklacePattern,
    find_necklace_model,
    find_triangle_path_model,
    make_necklace,
    necklace_hitting,
    necklace_minor_length,
    necklace_model_to_triangle_path,
    necklace_packing,
    triangle_path,
    triangle_path_minor_length,
    truncated_center_witness,
    truncated_triangle_path,
    validate_necklace_model,
    validate_triangle_path_model,
)
from .kernel import (
    ConflictStructure,
    Instance,
    PendingDecomposition,
    ReductionTrace,
    RootType,
    absorb_a_leaves,
    chunk_degree,
    dump_instance,
    enumerate_chunks,
    find_conflict_structure,
    is_almost_free,
    is_free,
    kernelize,
    load_instance,
    meta_rule_1,
    meta_rule_2,
    meta_rule_3,
    meta_rule_4,
    meta_rule_5,
    pending_decomposition,
    replay_trace,
    rule_chunk_degree,
    rule_free,
    verify_equivalence,
)
