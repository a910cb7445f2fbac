"""Petri-net coverability via invariant-pruned backward reachability."""

from .ingest import ParseError, Problem, emit_native, parse_mist, parse_native
from .invariants import (
    IntersectionInvariant,
    Invariant,
    SignAnalysis,
    SignInvariant,
    StateInvariant,
    TrivialInvariant,
    make_invariant,
    propagate,
    sign_analysis,
)
from .net import Displacement, Marking, Ordering, PetriNet
from .preprocess import (
    PruneReport,
    PruneRound,
    prune_dead_transitions,
    prune_problem,
)
from .ratlp import FeasibilityProblem, feasible
from .refcheck import (
    ExploreBound,
    OracleOutcome,
    OutcomeKind,
    bounded_cover,
    reachable_markings,
)
from .solver import (
    IterationStats,
    SolveResult,
    Verdict,
    extract_witness,
    solve,
    solve_classical,
)
from .upset import Basis, minimize

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "Displacement",
    "ExploreBound",
    "FeasibilityProblem",
    "IntersectionInvariant",
    "Invariant",
    "IterationStats",
    "Marking",
    "OracleOutcome",
    "Ordering",
    "OutcomeKind",
    "ParseError",
    "PetriNet",
    "Problem",
    "PruneReport",
    "PruneRound",
    "SignAnalysis",
    "SignInvariant",
    "SolveResult",
    "StateInvariant",
    "TrivialInvariant",
    "Verdict",
    "bounded_cover",
    "emit_native",
    "extract_witness",
    "feasible",
    "make_invariant",
    "minimize",
    "parse_mist",
    "parse_native",
    "propagate",
    "prune_dead_transitions",
    "prune_problem",
    "reachable_markings",
    "sign_analysis",
    "solve",
    "solve_classical",
]
