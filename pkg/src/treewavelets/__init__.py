"""Spanning-tree wavelet detection of clustered signals on graphs.

The package builds an orthonormal Haar-style wavelet basis over a spanning
tree of a graph, tests noisy vertex observations against a universal
threshold, and ships the Monte Carlo harnesses and CLI used to study the
detector's power, the basis's sparsity on low-cut signals, and how uniform
spanning trees concentrate over edge sets.
"""

from ._version import __version__
from .detection import (
    DecisionRecord,
    DetectionTest,
    NoiseModel,
    detect,
    gen_cluster_signal,
    gen_prior_signal,
    gen_two_level_signal,
    prior_support_size,
    snr_condition,
    threshold,
)
from .errors import (
    DisconnectedGraphError,
    FitUndefinedError,
    InfeasibleSignalError,
    WalkLimitError,
)
from .experiments import (
    CellSpec,
    ConcentrationRow,
    ExperimentResult,
    FitRow,
    SparsityPoint,
    TreeSource,
    TrialRecord,
    aggregate_records,
    fit_sparsity_points,
    mu_at_power,
    power_curve,
    preset_config,
    run_experiment,
    run_trial,
    sparsity_experiment,
    ust_concentration_check,
    write_csv,
)
from .graphs import (
    EPS_CUT,
    Graph,
    Signal,
    build_graph,
    connected_components,
    cut_size,
    gen_complete,
    gen_epsilon,
    gen_knn,
    gen_torus,
    graph_digest,
    incidence_apply,
    read_edge_list,
    read_points,
    require_connected,
    write_edge_list,
    write_points,
)
from .resistance import (
    CommuteEstimate,
    ResistanceProfile,
    all_edge_resistances,
    cut_resistance,
    effective_resistance,
    estimate_commute_resistance,
    laplacian,
    pseudoinverse,
    write_resistance_csv,
)
from .trees import (
    SpanningTree,
    bfs_spanning_tree,
    build_spanning_tree,
    find_balance,
    find_balance_walk,
    read_tree,
    sample_ust,
    tree_cut_size,
    validate_spanning_tree,
    write_tree,
)
from .wavelets import (
    BasisElement,
    WaveletBasis,
    activation_bound,
    apply_basis,
    basis_sparsity,
    build_basis,
    edge_activations,
    form_wavelets,
    write_basis_csv,
)

__all__ = [
    "__version__",
    "BasisElement",
    "CellSpec",
    "CommuteEstimate",
    "DecisionRecord",
    "DetectionTest",
    "ConcentrationRow",
    "DisconnectedGraphError",
    "EPS_CUT",
    "ExperimentResult",
    "FitRow",
    "FitUndefinedError",
    "Graph",
    "InfeasibleSignalError",
    "NoiseModel",
    "ResistanceProfile",
    "Signal",
    "SpanningTree",
    "SparsityPoint",
    "TreeSource",
    "TrialRecord",
    "WalkLimitError",
    "WaveletBasis",
    "activation_bound",
    "aggregate_records",
    "all_edge_resistances",
    "apply_basis",
    "basis_sparsity",
    "bfs_spanning_tree",
    "build_basis",
    "build_graph",
    "build_spanning_tree",
    "connected_components",
    "cut_resistance",
    "cut_size",
    "detect",
    "edge_activations",
    "effective_resistance",
    "estimate_commute_resistance",
    "find_balance",
    "find_balance_walk",
    "fit_sparsity_points",
    "form_wavelets",
    "gen_cluster_signal",
    "gen_complete",
    "gen_epsilon",
    "gen_knn",
    "gen_prior_signal",
    "gen_torus",
    "gen_two_level_signal",
    "graph_digest",
    "incidence_apply",
    "laplacian",
    "mu_at_power",
    "power_curve",
    "preset_config",
    "prior_support_size",
    "pseudoinverse",
    "read_edge_list",
    "read_points",
    "read_tree",
    "require_connected",
    "run_experiment",
    "run_trial",
    "sample_ust",
    "snr_condition",
    "sparsity_experiment",
    "threshold",
    "tree_cut_size",
    "ust_concentration_check",
    "validate_spanning_tree",
    "write_basis_csv",
    "write_csv",
    "write_edge_list",
    "write_points",
    "write_resistance_csv",
    "write_tree",
]
