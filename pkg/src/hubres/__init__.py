"""Hubs-biased Laplacians, resistance distances and random walks on small graphs."""

__version__ = "0.1.0"

from .graph import (
    DisconnectedGraphError,
    Graph,
    GraphError,
    GraphStats,
    ParseError,
    complete_bipartite_graph,
    complete_graph,
    connected_components,
    cycle_graph,
    diameter,
    edge_connectivity,
    graph_stats,
    largest_component,
    parse_edge_list,
    parse_graph6,
    path_graph,
    star_graph,
    write_edge_list,
    write_graph6,
)
from .laplacian import ALPHAS, Bias, LaplacianBundle, build_laplacian, conductance, hubs_trace
from .laplacian import trace_bounds_report
from .spectral import (
    PseudoinverseKind,
    Spectrum,
    biased_spectrum,
    eigen_bounds_report,
    group_inverse,
    moore_penrose,
    normalized_laplacian_spectrum,
    sym_eigen,
)
from .resistance import (
    KirchhoffTriple,
    ResistanceMatrix,
    conjecture_check,
    kirchhoff_bounds_report,
    kirchhoff_index,
    kirchhoff_triple,
    metric_properties_report,
    resistance_bounds_survey,
    resistance_matrix,
)
from .randomwalk import (
    CommuteReport,
    TransitionMatrix,
    commute_identity_report,
    efficiency,
    exact_hitting_time,
    mc_commute_time,
    mc_hitting_time,
    relative_efficiency,
    transition_matrix,
    volume,
)
from .enumeration import (
    SweepRecord,
    SweepSummary,
    canonical_form,
    classify_sweep,
    enumerate_connected,
    extremal_graphs,
    sweep,
)
