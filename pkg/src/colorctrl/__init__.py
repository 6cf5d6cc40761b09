"""Exact analysis of strong structural controllability for colored pattern matrices."""

__version__ = "0.1.0"

from .colorrule import (  # noqa: E402
    ColoredDirectedGraph,
    DerivationTrace,
    build_directed_graph,
    is_color_perfect_white_neighbor,
    is_colorable,
    replay_trace,
    white_out_neighbors,
)
from .matching import (  # noqa: E402
    build_bipartite,
    enumerate_perfect_matchings,
    group_equivalence_classes,
    is_nonsingular,
)
from .oracle import (  # noqa: E402
    ColorPolynomial,
    find_singular_assignment,
    permanent_01,
    single_solid_monomial,
    symbolic_determinant,
)
from .pattern import (  # noqa: E402
    ColorAssignment,
    ColorId,
    ColoredPatternMatrix,
    ColoredSystem,
    RationalMatrix,
    build_barred,
    instantiate,
    parse_colored_matrix,
    parse_document,
    parse_system,
    validate,
)
from .verification import (  # noqa: E402
    SamplePlan,
    Status,
    assess_controllability,
    check_controllability,
    check_step_rank_agreement,
    kalman_controllable,
    refute_by_sampling,
    refute_fullrank_by_sampling,
)
