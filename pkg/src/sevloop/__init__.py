"""Safety verifier for small imperative integer programs.

Symbolic execution over constrained transition systems, with interpolation
by constraint deletion, memo-table subsumption, speculative path-based loop
invariants, and conflict-driven locking with restarts. A bounded model
checker over the same representation serves as a test oracle.
"""

from .annotations import (MAX, MIN, NEUTRAL, AnnotatedState, Annotation,
                          BOTTOM, conflict, interp_max, interp_min,
                          interpolate, mergemax, mergemin, neut, wp_bar)
from .bmc import BmcVerdict, bmc
from .constraints import (Atom, Conjunction, LinearTerm, RationalModel, Rel,
                          Sat, UNSAT, VarId, entails, entails_atom, is_sat,
                          project, rename)
from .engine import Engine, EngineConfig, Stats, Verdict, run
from .frontend import ParseError, dump_cts, parse_cts, parse_mini
from .program import (ERROR, Goal, Program, ProgramPoint, Rule,
                      TransitionSystem, VarAllocator, lower, pt, reduct)

__all__ = [
    "MAX", "MIN", "NEUTRAL", "AnnotatedState", "Annotation", "BOTTOM",
    "conflict", "interp_max", "interp_min", "interpolate", "mergemax",
    "mergemin", "neut", "wp_bar",
    "BmcVerdict", "bmc",
    "Atom", "Conjunction", "LinearTerm", "RationalModel", "Rel", "Sat",
    "UNSAT", "VarId", "entails", "entails_atom", "is_sat", "project",
    "rename",
    "Engine", "EngineConfig", "Stats", "Verdict", "run",
    "ParseError", "dump_cts", "parse_cts", "parse_mini",
    "ERROR", "Goal", "Program", "ProgramPoint", "Rule", "TransitionSystem",
    "VarAllocator", "lower", "pt", "reduct",
]

__version__ = "0.1.0"
