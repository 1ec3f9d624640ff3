"""pslab: exact checking for probabilistic separation logic over pwhile."""

__version__ = "0.1.0"

from .assertions import (
    TOP, Assertion, Sat, make_cond, make_connective, make_det, make_event,
    make_sep, make_sim, parse_assertion,
)
from .lang import mv, parse_program, pretty, vars_of
from .prob import (
    Dist, SampleFamily, cond_independent, condition, distribution_of,
    independent, pushforward, refine,
)
from .semantics import (
    ExplorationResult, Mode, RandomRun, absorption_solve, analyze, explore,
    is_fault_free, is_terminating, run_random, step,
)
from .speccheck import (
    SearchSpace, Spec, Verdict, apply_frame, check_partial,
    check_relative_tightness, check_total, frame_side_condition,
    search_counterexample,
)
from .specfile import load_spec, parse_spec_text, parse_triple
from .state import (
    RandomState, State, parse_random_state, parse_state, random_restrict, restrict,
)

__all__ = [
    "TOP", "Assertion", "Dist", "ExplorationResult", "Mode", "RandomRun", "RandomState",
    "SampleFamily", "SearchSpace", "Sat", "Spec", "State", "Verdict", "absorption_solve",
    "analyze", "apply_frame", "check_partial", "check_relative_tightness", "check_total",
    "cond_independent", "condition", "distribution_of", "explore", "frame_side_condition",
    "independent", "is_fault_free", "is_terminating", "load_spec", "make_cond",
    "make_connective", "make_det", "make_event", "make_sep", "make_sim", "mv",
    "parse_assertion", "parse_program", "parse_random_state", "parse_spec_text",
    "parse_state", "parse_triple", "pretty", "pushforward", "random_restrict", "refine",
    "restrict", "run_random", "search_counterexample", "step", "vars_of",
]
