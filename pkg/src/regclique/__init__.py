"""Maximum clique search through regularized Motzkin-Straus programs."""

from .graph import (
    Clique,
    DimacsError,
    Graph,
    characteristic_vector,
    degree_stats,
    figure1_graph,
    is_clique,
    is_maximal_clique,
    parse_dimacs,
    read_graph,
)
from .objective import clique_objective, f_eval, hessian_quadform
from .optimality import (
    certify_characteristic_vector,
    disprove_local_max,
    extract_clique,
    first_order_check,
    purify,
)
from .optimizer import RunReport, SolveOptions, TrialResult, frank_wolfe, multistart, sample_simplex
from .oracle import enumerate_maximal_cliques, max_clique_exact, motzkin_straus_value
from .regularizer import ParameterError, RegularizerSpec, max_alpha1, max_alpha2, verify_conditions

__version__ = "0.1.0"
