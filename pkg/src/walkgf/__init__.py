"""Exact walk generating functions for networks.

Truncated power series with rational coefficients, restricted walk
counts, intervention effects, diffusion centralities and link-construction
comparisons, checked against a brute-force enumerator.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceGuardError,
    EmptyGraphError,
    NotInvertibleInRing,
    OrderMismatchError,
    ValidationError,
    WalkGFError,
)
from .series import KatzVectors, SeriesMatrix, TruncatedSeries
from .graph import InterventionSpec, Network, load_network, read_network, spectral_bound
from .calculus import (
    add_links_matrix,
    avoid_links_matrix,
    avoid_nodes_matrix,
    compute_M,
    group_intercentrality,
    katz_vectors,
    through_links_matrix,
    through_nodes_matrix,
)
from .intervention import delta_M, key_group_search, key_link_search, single_link_change, total_walk_change
from .diffusion import DiffusionQuery, Mode, intermediary_report, simulate_diffusion
from .linkbuild import check_nestedness, compare_constructions, exact_pass_series
from .oracle import Restriction, count_exact_link_passes, enumerate_walks
