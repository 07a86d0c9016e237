"""Classical-versus-quantum gap toolkit for mobile-agent graph tasks.

Agents placed on graph vertices move simultaneously along edges and are
scored collectively: for rendezvous they succeed when all meet at one
vertex, for domination they earn the number of vertices covered by their
closed neighborhoods.  Each task instance becomes a linear game over
conditional distributions, and the package computes four numbers per
instance: the uniform-random baseline, the exact classical optimum, a
see-saw lower bound on the quantum value, and a moment-relaxation upper
bound certifying it.
"""

from .graphs import (Graph, CatalogEntry, make_cycle, make_path, make_complete,
                     make_cube, parse_graph, load_graph, catalog_lookup,
                     catalog_names, verify_catalog_entry, allowed_moves,
                     walk_power, closed_neighborhood)
from .tasks import TaskSpec, BellGame, score, start_prior, build_game, game_value
from .classical import (DeterministicStrategy, StochasticStrategy,
                        random_value, evaluate, classical_optimum,
                        symmetrize, derandomize, best_response_improve)
from .sdp import SdpProblem, SdpSolution, make_problem, solve_embedded
from .npa import MomentRelaxation, NpaBound, build_relaxation, npa_bound
from .seesaw import (QuantumRealization, SeesawConfig, born_value, optimize,
                     symmetric_optimize)

__version__ = "0.1.0"

__all__ = [
    "Graph", "CatalogEntry", "make_cycle", "make_path", "make_complete",
    "make_cube", "parse_graph", "load_graph", "catalog_lookup",
    "catalog_names", "verify_catalog_entry", "allowed_moves", "walk_power",
    "closed_neighborhood",
    "TaskSpec", "BellGame", "score", "start_prior", "build_game", "game_value",
    "DeterministicStrategy", "StochasticStrategy", "random_value", "evaluate",
    "classical_optimum", "symmetrize", "derandomize", "best_response_improve",
    "SdpProblem", "SdpSolution", "make_problem", "solve_embedded",
    "MomentRelaxation", "NpaBound", "build_relaxation", "npa_bound",
    "QuantumRealization", "SeesawConfig", "born_value", "optimize",
    "symmetric_optimize",
    "__version__",
]
