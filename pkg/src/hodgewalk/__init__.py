"""Spectral analysis of simplicial complexes via the normalized Hodge
1-Laplacian: complex construction, edge-space random walks, Hodge
decompositions of edge flows, harmonic embeddings, and simplicial PageRank.
"""

from .complex import (
    SimplicialComplex,
    clique_complex,
    from_set_collection,
    from_simplices,
    read_complex,
    write_complex,
)
from .boundary import (
    DegreeMatrices,
    Lifting,
    build_b1,
    build_b2,
    build_degree_matrices,
    build_lifting,
    dump_matrix,
    lifting_lemma_checks,
)
from .laplacian import (
    KERNEL_TOL,
    LiftedTransition,
    NormalizedL1,
    SpectralDecomposition,
    build_lifted_transition,
    g1_g2_lift_check,
    spectral_containment_check,
    spectrum,
    verify_stochastic_lifting,
)
from .decomposition import HodgeComponents, decompose, harmonic_basis, harmonic_project
from .embedding import (
    EmbeddingPoint,
    Trajectory,
    embed_edge,
    embed_trajectory,
    spectral_embed,
    trajectory_flow,
)
from .pagerank import (
    PageRankQuery,
    PageRankResult,
    baseline_edge_pagerank,
    gauge_normalize,
    harmonic_pagerank_all_edges,
    node_pagerank,
    pagerank,
    pagerank_norms,
    rank_stability,
)
from .simulate import LiftedWalk, WalkRun, WalkState
from .ingest import (
    MADAGASCAR_BBOX,
    GeoTrack,
    HexGrid,
    build_complex_from_tracks,
    load_graph_with_categories,
    load_tracks,
    write_trajectories,
)
from . import errors, synthetic

__version__ = "0.1.0"

__all__ = [
    "SimplicialComplex",
    "from_simplices",
    "clique_complex",
    "from_set_collection",
    "read_complex",
    "write_complex",
    "build_b1",
    "build_b2",
    "DegreeMatrices",
    "build_degree_matrices",
    "Lifting",
    "build_lifting",
    "lifting_lemma_checks",
    "dump_matrix",
    "KERNEL_TOL",
    "NormalizedL1",
    "LiftedTransition",
    "SpectralDecomposition",
    "build_lifted_transition",
    "verify_stochastic_lifting",
    "spectrum",
    "g1_g2_lift_check",
    "spectral_containment_check",
    "HodgeComponents",
    "decompose",
    "harmonic_basis",
    "harmonic_project",
    "Trajectory",
    "EmbeddingPoint",
    "trajectory_flow",
    "embed_edge",
    "embed_trajectory",
    "spectral_embed",
    "PageRankQuery",
    "PageRankResult",
    "pagerank",
    "gauge_normalize",
    "pagerank_norms",
    "harmonic_pagerank_all_edges",
    "rank_stability",
    "baseline_edge_pagerank",
    "node_pagerank",
    "LiftedWalk",
    "WalkState",
    "WalkRun",
    "GeoTrack",
    "HexGrid",
    "MADAGASCAR_BBOX",
    "load_tracks",
    "build_complex_from_tracks",
    "load_graph_with_categories",
    "write_trajectories",
    "errors",
    "synthetic",
]
