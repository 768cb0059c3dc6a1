"""Random-cluster model toolkit: exact finite-volume engine, sharpness
quantities, inequality checkers, and Monte Carlo samplers."""

from .errors import ResourceLimitError
from .lattice import (
    EdgeBoundary,
    Region,
    boundary_vertices,
    candidate_sets,
    edge_boundary,
    from_vertices,
    make_box,
    make_rect,
    region_radius,
)
from .exact import (
    ClusterStats,
    Config,
    GammaRecord,
    RCParams,
    cluster_stats,
    connection_probability,
    connection_probability_to_set,
    connectivity_table,
    derivative_event_probability,
    event_probability,
    gamma_distribution,
    partition_function,
    pivotal_probability,
    susceptibility,
    weight,
)
from .events import (
    Event,
    boundary_connection_event,
    connection_event,
    connection_to_set_event,
    edge_open_event,
    verify_increasing,
)
from .sharpness import (
    CriticalEstimate,
    DecayBound,
    DecayFit,
    PhiResult,
    bracket_ptilde,
    decay_upper_bound,
    phi,
    theta_lower_bound,
)
from .ineq import (
    CheckReport,
    check_derivative_identity,
    check_differential_inequality,
    check_fkg,
    check_markov_factorization,
    check_pivotal_lower_chain,
    check_simon,
    check_tanh_bound,
    format_summary,
    simon_reports,
    summarize,
)
from .mc import (
    McEstimate,
    SpinConfig,
    combine_estimates,
    estimate_connection,
    estimate_edge_open,
    estimate_theta,
    fit_decay,
    heat_bath_sweep,
    make_rng,
    swendsen_wang_sweep,
)

__version__ = "0.1.0"
