"""Decide, certify, and disprove conformal rigidity of finite graphs.

A connected graph is conformally rigid when the uniform edge weighting is
already optimal: no reweighting of total mass |E| can raise the second
Laplacian eigenvalue (lower target) or lower the largest one (upper target).
The package decides this through a pipeline of spectral clustering, symmetry
reduction, an embedding feasibility SDP, isotypic decomposition, and a
polyhedral certificate cone with exact rational arithmetic, falling back to a
perturbation search that produces explicit witness weights when rigidity
fails.
"""

from .certify import (
    ConeMode,
    ConeModel,
    ConeSolution,
    ConicCertificate,
    Disproof,
    DisproofParams,
    LineSearchFailed,
    MultiplicityObstruction,
    RationalizationFailed,
    ResidualTooLarge,
    TargetKind,
    VerificationReport,
    assemble_certificate,
    bipartite_regular_upper_certificate,
    build_cone,
    exact_nonneg_solve,
    find_disproof,
    quadratic_system_residual,
    rationalize,
    rationalize_tight,
    solve_cone_membership,
    subcone_model,
    verify_certificate,
    verify_disproof,
)
from .graphcore import (
    DimensionMismatch,
    DisconnectedGraph,
    EdgeEnergyVector,
    Graph,
    MalformedGraph6,
    WeightVector,
    cartesian_product,
    circulant,
    edge_energy,
    format_edge_list,
    laplacian,
    parse_edge_list,
    parse_graph6,
    to_graph6,
)
from .isotypics import (
    ClosureRequired,
    IsotypicComponent,
    IsotypicDecomposition,
    MultiplicityNotOne,
    UnstableSplit,
    all_multiplicity_one,
    isotypic_decompose,
    multiplicity_bound_ok,
    representative_vector,
)
from .pipeline import (
    TRANSITIONS,
    CertificationReport,
    PipelineConfig,
    PipelineStatus,
    emit_report,
    report_from_json,
    reverify_report,
    route_is_valid,
    run_batch,
    run_pipeline,
)
from .sdpfeas import (
    CompressedOperators,
    SdpResult,
    SdpStatus,
    block_diagonal_feasibility,
    compress_operators,
    expand_gram,
    orbit_laplacian,
    rank_estimate,
    solve_feasibility,
)
from .spectra import (
    AmbiguousCluster,
    ConvergenceFailure,
    EigenDecomposition,
    EigenspaceCluster,
    NotSymmetric,
    Which,
    cluster_eigenspace,
    eig_sym,
    lambda2,
    lambda_bounds,
    lambda_max,
    laplacian_spectrum,
    projector,
)
from .symmetry import (
    CapExceeded,
    EdgeOrbitPartition,
    GroupClosure,
    GroupGenerators,
    OrbitEnergyVector,
    Permutation,
    SearchBudgetExceeded,
    VertexOrbitPartition,
    automorphism_generators,
    close_group,
    edge_orbits,
    edge_permutation,
    generators_from_json,
    generators_to_json,
    is_vertex_transitive,
    orbit_energy,
    permute_vector,
    symmetrize_weights,
    symmetrized_embedding,
    verify_automorphism,
    vertex_orbits,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
