"""Simulators and equivalence transforms for heads, counters and registers."""

from headcount.bounded import (
    Block,
    BoundDescriptor,
    LanguageId,
    StrictBound,
    conjugates,
    decompose_blocks,
    enumerate_bounded_inputs,
    fine_wilf_threshold,
    matches_bound,
    oracle_membership,
)
from headcount.machines import (
    CounterMachine,
    MultiHeadAutomaton,
    RegisterMachine,
    RunResult,
    Tape,
    Trace,
    Verdict,
    normalize_head_order,
    normalize_one_move,
    run_cm,
    run_mha,
    run_rm,
)

__version__ = "0.1.0"
