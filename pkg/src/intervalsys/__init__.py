"""Interval systems, their limits in the triangle, and exchangeable processes on them."""

from .core import (
    DomainError,
    UnsupportedSizeError,
    IntervalSystem,
    IntervalHypergraph,
    Permutation,
    delete_point,
    subsample,
    restrict_hypergraph,
    relabel_hypergraph,
    linearize,
    selection_vector,
    eraser_sequence,
    sequential_delete,
    is_hierarchy,
    is_schroeder,
    is_binary,
    is_interval_partition,
    enumerate_interval_systems,
    increasing_vectors,
    as_hypergraph,
    as_interval_system,
    parse_system,
    format_system,
    parse_hypergraph,
    format_hypergraph,
)
from .limits import (
    LimitSet,
    Rectangle,
    scale,
    hausdorff,
    hausdorff_points,
    sample_system,
    sample_codes,
    scale_vector,
    cdf_sup_deviation,
    intersects_closed,
    intersects_open,
    spine_limit,
    complete_tree_limit,
    is_schroeder_limit,
    is_partition_limit,
    is_binary_limit_mc,
    format_limitset,
    parse_limitset,
    render_svg,
)
from .processes import (
    EraserSequence,
    PermutationSequence,
    EipTrajectory,
    eta_from_u,
    perm_from_u,
    perm_from_eta,
    eta_from_perm,
    simulate_eip,
    backward_chain,
    remy_step,
    remy_chain,
    remy_tree,
    exchangeable_hypergraph,
    sample_231_avoiding,
    permutation_graph,
)
from .martin import (
    GammaTable,
    ChiSquareReport,
    gamma,
    gamma_table,
    spine_tree,
    complete_tree,
    gamma_convergence,
    boundary_law_estimate,
    uniformity_test,
)
from ._rng import make_rng

__version__ = "0.1.0"
