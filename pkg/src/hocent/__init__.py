"""Second-order (triangle-based) eigenvector centrality, spectral clustering
coefficients and seeded-diffusion link prediction for undirected graphs."""

__version__ = "0.1.0"

from .graph import (
    Graph,
    GraphFormatError,
    components,
    from_adjacency,
    from_edges,
    load_graph,
    write_edge_list,
    write_matrix_market,
)
from .triangles import TENSORS, TriangleSet, enumerate_triangles, linearized_matrix, power_mean, tensor_apply
from .solver import MATRICES, MapSpec, SolverReport, apply_map, solve
from .measures import (
    DatasetSummary,
    MeasureVector,
    NoSecondOrderStructure,
    first_order_centrality,
    global_clustering,
    local_closure,
    spectral_coefficient,
    static_coefficient,
    summarize,
    ws_clustering,
)
from .linkpred import (
    ConvergenceWarning,
    SimilarityScores,
    nonlinear_seeded_diffusion,
    run_split_experiment,
    seeded_pagerank,
    similarity_matrix,
)
from .synthetic import WheelParams, analytic_crossover, generate_wheel, sweep_phase_diagram
from .estimators import HigherOrderCentrality, SeededDiffusionLinkPredictor, SpectralClusteringCoefficient

__all__ = [
    "Graph", "GraphFormatError", "components", "from_adjacency", "from_edges", "load_graph",
    "write_edge_list", "write_matrix_market",
    "TENSORS", "TriangleSet", "enumerate_triangles", "linearized_matrix", "power_mean", "tensor_apply",
    "MATRICES", "MapSpec", "SolverReport", "apply_map", "solve",
    "DatasetSummary", "MeasureVector", "NoSecondOrderStructure", "first_order_centrality",
    "global_clustering", "local_closure", "spectral_coefficient", "static_coefficient", "summarize",
    "ws_clustering",
    "ConvergenceWarning", "SimilarityScores", "nonlinear_seeded_diffusion", "run_split_experiment",
    "seeded_pagerank", "similarity_matrix",
    "WheelParams", "analytic_crossover", "generate_wheel", "sweep_phase_diagram",
    "HigherOrderCentrality", "SeededDiffusionLinkPredictor", "SpectralClusteringCoefficient",
]
