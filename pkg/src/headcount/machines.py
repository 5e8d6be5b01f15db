"""Machine models and interpreters.

Three deterministic models share the same run conventions:

* ``MultiHeadAutomaton``: finite control plus k two-way read-only heads on an
  end-marked tape.  Optionally *sensing*, meaning the control sees which
  heads currently share a square.
* ``CounterMachine``: one two-way head plus k counters supporting increment,
  decrement and zero-test, with counter values audited against the input
  length.  Overflow behaviour is configurable.
* ``RegisterMachine``: k nonnegative registers and no tape; the input number
  arrives in register 1.

A word of length n is bordered by reserved end-markers, giving n + 2 head
positions 0..n+1 with "<" at 0 and ">" at n+1.  Every machine starts in its
start state with all heads at position 1 (for the empty word that is already
the right end-marker) and all counters/registers zero except the input
register.  Acceptance happens on *entering* an accepting state, so a run can
accept after 0 steps.  A missing transition halts and rejects.  A repeated
configuration in a deterministic run can never accept, so the interpreters
reject with reason "loop" when configuration tracking is enabled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

LEFT_MARKER = "<"
RIGHT_MARKER = ">"
MARKERS = (LEFT_MARKER, RIGHT_MARKER)

INC = "inc"
DEC = "dec"
NOP = "nop"
COUNTER_OPS = (INC, DEC, NOP)

OVERFLOW_SIMPLE = "simple"
OVERFLOW_BLOCK = "block"
OVERFLOW_SIGNAL = "signal"
OVERFLOW_POLICIES = (OVERFLOW_SIMPLE, OVERFLOW_BLOCK, OVERFLOW_SIGNAL)

DEFAULT_LIMIT = 1_000_000
# Configuration tracking is enabled automatically while the configuration
# space r*(n+2)*(n+1)^k stays below this budget; beyond it the step limit
# alone bounds the run.
LOOP_BUDGET = 4_000_000


class MachineError(ValueError):
    """Malformed machine definition or invalid run request."""


class Verdict(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    TIMEOUT = "timeout"
    FAULT = "fault"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass
class Trace:
    """Resource usage observed during one run."""

    final_state: str | None = None
    max_counters: list[int] = field(default_factory=list)
    head_moves: list[int] = field(default_factory=list)
    op_counts: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    def bump(self, op: str, amount: int = 1) -> None:
        self.op_counts[op] = self.op_counts.get(op, 0) + amount

    def to_dict(self) -> dict:
        return {
            "final_state": self.final_state,
            "max_counters": list(self.max_counters),
            "head_moves": list(self.head_moves),
            "op_counts": dict(sorted(self.op_counts.items())),
            "violations": list(self.violations),
        }


@dataclass
class RunResult:
    verdict: Verdict
    steps: int
    reason: str = ""
    trace: Trace = field(default_factory=Trace)
    history: list | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT

    def to_dict(self, with_trace: bool = True) -> dict:
        out = {"verdict": self.verdict.value, "steps": self.steps, "reason": self.reason}
        if with_trace:
            out["trace"] = self.trace.to_dict()
        return out


class Tape:
    """Read-only end-marked tape over a word of length n.

    Position 0 reads the left marker, position n+1 the right marker, and
    positions 1..n read the word itself.
    """

    __slots__ = ("word", "n")

    def __init__(self, word: str):
        if LEFT_MARKER in word or RIGHT_MARKER in word:
            raise MachineError("end-marker symbols are reserved and cannot occur in input")
        self.word = word
        self.n = len(word)

    def __len__(self) -> int:
        return self.n

    def symbol(self, pos: int) -> str:
        if pos == 0:
            return LEFT_MARKER
        if pos == self.n + 1:
            return RIGHT_MARKER
        if 0 < pos <= self.n:
            return self.word[pos - 1]
        raise MachineError(f"position {pos} outside tape bounds 0..{self.n + 1}")

    def in_range(self, pos: int) -> bool:
        return 0 <= pos <= self.n + 1


def coincidence_partition(positions: Sequence[int]) -> tuple[int, ...]:
    """Canonical partition of head indices by shared position.

    Heads receive group ids in order of first occurrence, so [5, 3, 5]
    canonicalises to (0, 1, 0).
    """
    groups: dict[int, int] = {}
    out = []
    for p in positions:
        if p not in groups:
            groups[p] = len(groups)
        out.append(groups[p])
    return tuple(out)


def _check_states(states, start, accepting):
    states = frozenset(states)
    if start not in states:
        raise MachineError(f"start state {start!r} not among states")
    accepting = frozenset(accepting)
    if not accepting <= states:
        raise MachineError("accepting states must be a subset of states")
    return states, accepting


def _check_alphabet(alphabet: Iterable[str]) -> frozenset[str]:
    alphabet = frozenset(alphabet)
    for sym in alphabet:
        if len(sym) != 1:
            raise MachineError(f"alphabet symbols are single characters, got {sym!r}")
        if sym in MARKERS:
            raise MachineError(f"symbol {sym!r} is a reserved end-marker")
    return alphabet


@dataclass
class MultiHeadAutomaton:
    """Deterministic two-way automaton with k heads.

    Transitions map ``(state, reads)`` for plain machines, or
    ``(state, reads, partition)`` for sensing machines, to
    ``(next_state, moves)`` where ``moves`` is a k-tuple over {-1, 0, +1}.
    A transition may move several heads at once; ``normalize_one_move``
    rewrites a machine so that exactly one head moves per step.
    """

    states: frozenset[str]
    start: str
    accepting: frozenset[str]
    k: int
    alphabet: frozenset[str]
    transitions: Mapping[tuple, tuple[str, tuple[int, ...]]]
    sensing: bool = False

    def __post_init__(self):
        self.states, self.accepting = _check_states(self.states, self.start, self.accepting)
        self.alphabet = _check_alphabet(self.alphabet)
        if self.k < 1:
            raise MachineError("head count must be >= 1")
        symbols = self.alphabet | set(MARKERS)
        for key, value in self.transitions.items():
            if self.sensing:
                if len(key) != 3:
                    raise MachineError(f"sensing transition key {key!r} needs a partition")
                state, reads, part = key
                if part != coincidence_partition_normal_form(part, self.k):
                    raise MachineError(f"partition {part!r} is not canonical")
            else:
                if len(key) != 2:
                    raise MachineError(f"transition key {key!r} must be (state, reads)")
                state, reads = key
            if state not in self.states:
                raise MachineError(f"transition from unknown state {state!r}")
            if len(reads) != self.k or any(s not in symbols for s in reads):
                raise MachineError(f"bad read tuple {reads!r}")
            nxt, moves = value
            if nxt not in self.states:
                raise MachineError(f"transition into unknown state {nxt!r}")
            if len(moves) != self.k or any(d not in (-1, 0, 1) for d in moves):
                raise MachineError(f"bad move tuple {moves!r}")

    def lookup_key(self, state: str, reads: tuple[str, ...], positions: Sequence[int]):
        if self.sensing:
            return (state, reads, coincidence_partition(positions))
        return (state, reads)

    def one_move_only(self) -> bool:
        return all(
            sum(1 for d in moves if d != 0) == 1
            for (_, moves) in self.transitions.values()
        )


def coincidence_partition_normal_form(part: Sequence[int], k: int) -> tuple[int, ...]:
    """Renumber an arbitrary group-id tuple into first-occurrence order."""
    if len(part) != k:
        raise MachineError(f"partition {part!r} must list all {k} heads")
    remap: dict[int, int] = {}
    out = []
    for g in part:
        if g not in remap:
            remap[g] = len(remap)
        out.append(remap[g])
    return tuple(out)


@dataclass
class CounterMachine:
    """One two-way head plus k counters bounded by the input length.

    Transition keys are ``(state, read, zeros)`` with ``zeros`` the counter
    zero-flag tuple computed before the step's operations; machines with the
    ``signal`` overflow policy key on ``(state, read, zeros, overflowed)``
    where the flag reports an overflow attempt on the previous step.
    Values are ``(next_state, head_move, ops)`` with one op per counter.
    """

    states: frozenset[str]
    start: str
    accepting: frozenset[str]
    k: int
    alphabet: frozenset[str]
    transitions: Mapping[tuple, tuple[str, int, tuple[str, ...]]]
    overflow_policy: str = OVERFLOW_SIMPLE

    def __post_init__(self):
        self.states, self.accepting = _check_states(self.states, self.start, self.accepting)
        self.alphabet = _check_alphabet(self.alphabet)
        if self.k < 0:
            raise MachineError("counter count must be >= 0")
        if self.overflow_policy not in OVERFLOW_POLICIES:
            raise MachineError(f"unknown overflow policy {self.overflow_policy!r}")
        symbols = self.alphabet | set(MARKERS)
        keylen = 4 if self.overflow_policy == OVERFLOW_SIGNAL else 3
        for key, value in self.transitions.items():
            if len(key) != keylen:
                raise MachineError(f"transition key {key!r} has wrong arity for policy")
            state, read, zeros = key[0], key[1], key[2]
            if state not in self.states or read not in symbols:
                raise MachineError(f"bad transition key {key!r}")
            if len(zeros) != self.k or any(not isinstance(z, bool) for z in zeros):
                raise MachineError(f"bad zero-flag tuple {zeros!r}")
            nxt, move, ops = value
            if nxt not in self.states or move not in (-1, 0, 1):
                raise MachineError(f"bad transition value {value!r}")
            if len(ops) != self.k or any(op not in COUNTER_OPS for op in ops):
                raise MachineError(f"bad op tuple {ops!r}")

    def lookup_key(self, state, read, zeros, overflowed=False):
        if self.overflow_policy == OVERFLOW_SIGNAL:
            return (state, read, zeros, overflowed)
        return (state, read, zeros)


@dataclass
class RegisterMachine:
    """k registers of nonnegative integers; the input number starts in register 1."""

    states: frozenset[str]
    start: str
    accepting: frozenset[str]
    k: int
    transitions: Mapping[tuple, tuple[str, tuple[str, ...]]]

    def __post_init__(self):
        self.states, self.accepting = _check_states(self.states, self.start, self.accepting)
        if self.k < 1:
            raise MachineError("register count must be >= 1")
        for key, value in self.transitions.items():
            state, zeros = key
            if state not in self.states:
                raise MachineError(f"transition from unknown state {state!r}")
            if len(zeros) != self.k or any(not isinstance(z, bool) for z in zeros):
                raise MachineError(f"bad zero-flag tuple {zeros!r}")
            nxt, ops = value
            if nxt not in self.states:
                raise MachineError(f"transition into unknown state {nxt!r}")
            if len(ops) != self.k or any(op not in COUNTER_OPS for op in ops):
                raise MachineError(f"bad op tuple {ops!r}")


# Run configurations, mostly useful for instrumented tests.


@dataclass(frozen=True)
class MhaConfig:
    state: str
    positions: tuple[int, ...]
    steps: int


@dataclass(frozen=True)
class CmConfig:
    state: str
    position: int
    counters: tuple[int, ...]
    steps: int


@dataclass(frozen=True)
class RmConfig:
    state: str
    registers: tuple[int, ...]
    steps: int


def _loop_tracking(loop_check: bool | None, space: int) -> bool:
    if loop_check is not None:
        return loop_check
    return space <= LOOP_BUDGET


def _validate_word(word: str, alphabet: frozenset[str]) -> None:
    bad = set(word) - alphabet
    if bad:
        raise MachineError(f"input symbols {sorted(bad)!r} not in machine alphabet")


def run_mha(
    machine: MultiHeadAutomaton,
    word: str,
    limit: int = DEFAULT_LIMIT,
    loop_check: bool | None = None,
    record: bool = False,
) -> RunResult:
    """Run a multi-head automaton on a word.

    Returns accept on entering an accepting state, reject on a missing
    transition or a repeated configuration, timeout once ``limit`` steps have
    been taken, and fault if a head is driven off the tape.
    """
    if limit <= 0:
        raise MachineError("step limit must be positive")
    _validate_word(word, machine.alphabet)
    tape = Tape(word)
    n = tape.n
    k = machine.k
    positions = [1] * k
    state = machine.start
    steps = 0
    trace = Trace(head_moves=[0] * k)
    history: list[MhaConfig] | None = [] if record else None

    space = len(machine.states) * (n + 2) * (n + 1) ** k
    seen: set | None = set() if _loop_tracking(loop_check, space) else None

    while True:
        if record:
            history.append(MhaConfig(state, tuple(positions), steps))
        if state in machine.accepting:
            trace.final_state = state
            return RunResult(Verdict.ACCEPT, steps, "accepting state", trace, history)
        if seen is not None:
            config = (state, tuple(positions))
            if config in seen:
                trace.final_state = state
                return RunResult(Verdict.REJECT, steps, "loop", trace, history)
            seen.add(config)
        if steps >= limit:
            trace.final_state = state
            return RunResult(Verdict.TIMEOUT, steps, "step limit reached", trace, history)
        reads = tuple(tape.symbol(p) for p in positions)
        entry = machine.transitions.get(machine.lookup_key(state, reads, positions))
        if entry is None:
            trace.final_state = state
            return RunResult(Verdict.REJECT, steps, "no transition", trace, history)
        nxt, moves = entry
        for i, d in enumerate(moves):
            if d == 0:
                continue
            new = positions[i] + d
            if not tape.in_range(new):
                trace.final_state = state
                trace.violations.append(f"head {i + 1} driven off the tape")
                return RunResult(Verdict.FAULT, steps, "head off tape", trace, history)
            positions[i] = new
            trace.head_moves[i] += 1
        state = nxt
        steps += 1


def run_cm(
    machine: CounterMachine,
    word: str,
    limit: int = DEFAULT_LIMIT,
    loop_check: bool | None = None,
    record: bool = False,
    turbo: bool = False,
) -> RunResult:
    """Run a counter machine on a word.

    Zero flags are computed before the step's counter operations.  A
    decrement of a zero counter faults (machine-definition error); an
    increment past the input length follows the machine's overflow policy.
    With ``turbo`` the interpreter skips through self-loop stretches in bulk
    (identical state, symbol run, stable zero flags) with exact step
    accounting, which keeps long sweep-heavy runs affordable.
    """
    if limit <= 0:
        raise MachineError("step limit must be positive")
    _validate_word(word, machine.alphabet)
    tape = Tape(word)
    n = tape.n
    k = machine.k
    pos = 1
    counters = [0] * k
    state = machine.start
    overflowed = False
    steps = 0
    trace = Trace(max_counters=[0] * k, head_moves=[0])
    history: list[CmConfig] | None = [] if record else None

    space = len(machine.states) * (n + 2) * (n + 1) ** k
    seen: set | None = set() if _loop_tracking(loop_check, space) else None

    run_end = _run_lengths(word) if turbo else None

    while True:
        if record:
            history.append(CmConfig(state, pos, tuple(counters), steps))
        if state in machine.accepting:
            trace.final_state = state
            return RunResult(Verdict.ACCEPT, steps, "accepting state", trace, history)
        if seen is not None:
            config = (state, pos, tuple(counters), overflowed)
            if config in seen:
                trace.final_state = state
                return RunResult(Verdict.REJECT, steps, "loop", trace, history)
            seen.add(config)
        if steps >= limit:
            trace.final_state = state
            return RunResult(Verdict.TIMEOUT, steps, "step limit reached", trace, history)
        read = tape.symbol(pos)
        zeros = tuple(c == 0 for c in counters)
        entry = machine.transitions.get(machine.lookup_key(state, read, zeros, overflowed))
        if entry is None:
            trace.final_state = state
            return RunResult(Verdict.REJECT, steps, "no transition", trace, history)
        nxt, move, ops = entry
        overflowed = False

        if turbo and nxt == state and not record:
            jumped = _try_bulk_steps(
                state, pos, counters, move, ops, tape, run_end, limit - steps, n
            )
            if jumped:
                count, pos = jumped
                for i, op in enumerate(ops):
                    if op == INC:
                        counters[i] += count
                        trace.bump(INC, count)
                    elif op == DEC:
                        counters[i] -= count
                        trace.bump(DEC, count)
                    if counters[i] > trace.max_counters[i]:
                        trace.max_counters[i] = counters[i]
                if move:
                    trace.head_moves[0] += count
                steps += count
                continue

        new_pos = pos + move
        if move and not tape.in_range(new_pos):
            trace.final_state = state
            trace.violations.append("head driven off the tape")
            return RunResult(Verdict.FAULT, steps, "head off tape", trace, history)
        for i, op in enumerate(ops):
            if op == NOP:
                continue
            if op == DEC:
                if counters[i] == 0:
                    trace.final_state = state
                    trace.violations.append(f"decrement of zero counter {i + 1}")
                    return RunResult(Verdict.FAULT, steps, "dec on zero", trace, history)
                counters[i] -= 1
                trace.bump(DEC)
                continue
            # increment
            if counters[i] >= n:
                if machine.overflow_policy == OVERFLOW_BLOCK:
                    trace.final_state = state
                    trace.violations.append(f"counter {i + 1} overflow (block)")
                    return RunResult(Verdict.FAULT, steps, "counter overflow", trace, history)
                if machine.overflow_policy == OVERFLOW_SIGNAL:
                    overflowed = True
                trace.bump("inc_clamped")
            else:
                counters[i] += 1
                trace.bump(INC)
                if counters[i] > trace.max_counters[i]:
                    trace.max_counters[i] = counters[i]
        pos = new_pos
        if move:
            trace.head_moves[0] += 1
        state = nxt
        steps += 1


def _run_lengths(word: str) -> list[int]:
    """run_end[p] for positions 1..n: last position of the same-symbol run at p."""
    n = len(word)
    run_end = [0] * (n + 2)
    i = n
    while i >= 1:
        j = i
        while j >= 1 and word[j - 1] == word[i - 1]:
            j -= 1
        for p in range(j + 1, i + 1):
            run_end[p] = i
        i = j
    return run_end


def _try_bulk_steps(state, pos, counters, move, ops, tape, run_end, budget, n):
    """How many identical self-loop steps are safe to apply at once.

    Safe means: the head stays inside the current same-symbol run (or does
    not move), every decremented counter stays positive, every incremented
    counter stays below the bound, and zero flags therefore cannot change.
    Returns (count, new_pos) or None.
    """
    if budget <= 1:
        return None
    span = budget - 1  # always leave the final step to the slow path
    if move > 0:
        if pos < 1 or pos > tape.n:
            return None
        span = min(span, run_end[pos] - pos)
    elif move < 0:
        if pos < 1 or pos > tape.n:
            return None
        run_start = pos
        while run_start > 1 and tape.word[run_start - 2] == tape.word[pos - 1]:
            run_start -= 1
        span = min(span, pos - run_start)
    for i, op in enumerate(ops):
        if op == DEC:
            span = min(span, counters[i] - 1)
        elif op == INC:
            span = min(span, n - 1 - counters[i])
    if span <= 0:
        return None
    if move == 0 and all(op == NOP for op in ops):
        return None  # genuine infinite loop; let the loop detector see it
    return span, pos + move * span


def run_rm(
    machine: RegisterMachine,
    input_number: int,
    limit: int = DEFAULT_LIMIT,
    loop_check: bool | None = None,
    record: bool = False,
) -> RunResult:
    """Run a register machine on an input number placed in register 1.

    Register values are unbounded upward operationally; the trace flags any
    value exceeding the input number as an audit violation.
    """
    if limit <= 0:
        raise MachineError("step limit must be positive")
    if input_number < 0:
        raise MachineError("input number must be nonnegative")
    k = machine.k
    registers = [0] * k
    registers[0] = input_number
    state = machine.start
    steps = 0
    trace = Trace(max_counters=list(registers))
    history: list[RmConfig] | None = [] if record else None

    space = len(machine.states) * (input_number + 1) ** k
    seen: set | None = set() if _loop_tracking(loop_check, space) else None
    flagged = False

    while True:
        if record:
            history.append(RmConfig(state, tuple(registers), steps))
        if state in machine.accepting:
            trace.final_state = state
            return RunResult(Verdict.ACCEPT, steps, "accepting state", trace, history)
        if seen is not None:
            config = (state, tuple(registers))
            if config in seen:
                trace.final_state = state
                return RunResult(Verdict.REJECT, steps, "loop", trace, history)
            seen.add(config)
            if len(seen) > LOOP_BUDGET:
                seen = None
        if steps >= limit:
            trace.final_state = state
            return RunResult(Verdict.TIMEOUT, steps, "step limit reached", trace, history)
        zeros = tuple(r == 0 for r in registers)
        entry = machine.transitions.get((state, zeros))
        if entry is None:
            trace.final_state = state
            return RunResult(Verdict.REJECT, steps, "no transition", trace, history)
        nxt, ops = entry
        for i, op in enumerate(ops):
            if op == NOP:
                continue
            if op == DEC:
                if registers[i] == 0:
                    trace.final_state = state
                    trace.violations.append(f"decrement of zero register {i + 1}")
                    return RunResult(Verdict.FAULT, steps, "dec on zero", trace, history)
                registers[i] -= 1
                trace.bump(DEC)
            else:
                registers[i] += 1
                trace.bump(INC)
                if registers[i] > trace.max_counters[i]:
                    trace.max_counters[i] = registers[i]
                if registers[i] > input_number and not flagged:
                    trace.violations.append(
                        f"register {i + 1} exceeded the input number {input_number}"
                    )
                    flagged = True
        state = nxt
        steps += 1


# ---------------------------------------------------------------------------
# Normalization passes


def _read_tuples(machine: MultiHeadAutomaton):
    symbols = sorted(machine.alphabet) + list(MARKERS)
    return itertools.product(symbols, repeat=machine.k)


def _set_partitions(k: int):
    """All canonical coincidence partitions of k heads."""
    parts: list[tuple[int, ...]] = []

    def grow(prefix: list[int], used: int):
        if len(prefix) == k:
            parts.append(tuple(prefix))
            return
        for g in range(used + 1):
            grow(prefix + [g], max(used, g + 1))

    grow([], 0)
    return parts


def _keys_for(machine: MultiHeadAutomaton, state: str):
    if machine.sensing:
        for reads in _read_tuples(machine):
            for part in _set_partitions(machine.k):
                yield (state, reads, part)
    else:
        for reads in _read_tuples(machine):
            yield (state, reads)


def normalize_one_move(machine: MultiHeadAutomaton) -> MultiHeadAutomaton:
    """Rewrite a machine so every transition moves exactly one head.

    Stationary steps are resolved in the finite control: a chain of
    stationary transitions is followed until it moves a head (collapsed into
    one transition), accepts (redirected to a fresh accepting sink), halts
    (transition dropped) or cycles (transition dropped, since a stationary
    cycle can never accept).  Transitions moving several heads are serialised
    through intermediate states that apply one move each.  Acceptance is
    preserved on every input; step counts generally are not.
    """
    if machine.one_move_only():
        return machine

    accept_sink = _fresh_name(machine.states, "accept_sink")
    states = set(machine.states) | {accept_sink}
    transitions: dict = {}
    pending_multi: list[tuple] = []

    for key, (nxt, moves) in machine.transitions.items():
        moving = sum(1 for d in moves if d != 0)
        if moving == 0:
            resolved = _resolve_stationary(machine, key, nxt)
            if resolved is None:
                continue  # halts or cycles without accepting: drop = halt-reject
            if resolved == "accept":
                reads = key[1]
                transitions[key] = (accept_sink, _safe_single_move(machine.k, reads))
                continue
            nxt, moves = resolved
            moving = sum(1 for d in moves if d != 0)
        if moving == 1:
            transitions[key] = (nxt, moves)
        else:
            pending_multi.append((key, nxt, moves))

    for key, nxt, moves in pending_multi:
        state = key[0]
        first = next(i for i, d in enumerate(moves) if d != 0)
        rest = tuple(0 if i == first else d for i, d in enumerate(moves))
        stage = _fresh_name(states, f"{state}_then")
        states.add(stage)
        transitions[key] = (stage, _one_hot(machine.k, first, moves[first]))
        _serialize_rest(machine, states, transitions, stage, nxt, rest)

    return MultiHeadAutomaton(
        states=frozenset(states),
        start=machine.start,
        accepting=machine.accepting | {accept_sink},
        k=machine.k,
        alphabet=machine.alphabet,
        transitions=transitions,
        sensing=machine.sensing,
    )


def _serialize_rest(machine, states, transitions, stage, final_state, moves):
    """Emit transitions from an intermediate stage applying the remaining moves."""
    moving = [i for i, d in enumerate(moves) if d != 0]
    nxt_index = moving[0]
    remaining = tuple(0 if i == nxt_index else d for i, d in enumerate(moves))
    last = not any(remaining)
    if last:
        target = final_state
    else:
        target = _fresh_name(states, f"{stage}_then")
        states.add(target)
    for key in _keys_for(machine, stage):
        transitions[key] = (target, _one_hot(machine.k, nxt_index, moves[nxt_index]))
    if not last:
        _serialize_rest(machine, states, transitions, target, final_state, remaining)


def _resolve_stationary(machine, key, first_next):
    """Follow a stationary chain; reads and partition cannot change along it."""
    tail = key[1:]
    current = first_next
    visited = {key[0]}
    while True:
        if current in machine.accepting:
            return "accept"
        if current in visited:
            return None
        visited.add(current)
        entry = machine.transitions.get((current, *tail))
        if entry is None:
            return None
        nxt, moves = entry
        if any(moves):
            return (nxt, moves)
        current = nxt


def _safe_single_move(k: int, reads: tuple[str, ...]) -> tuple[int, ...]:
    """A head-1 move that stays on the tape given head 1's current read."""
    d = -1 if reads[0] == RIGHT_MARKER else 1
    return _one_hot(k, 0, d)


def _one_hot(k: int, index: int, d: int) -> tuple[int, ...]:
    return tuple(d if i == index else 0 for i in range(k))


def _fresh_name(existing, base: str) -> str:
    if base not in existing:
        return base
    i = 2
    while f"{base}{i}" in existing:
        i += 1
    return f"{base}{i}"


def normalize_head_order(machine: MultiHeadAutomaton) -> MultiHeadAutomaton:
    """Rewrite a sensing machine so head positions stay sorted by head index.

    The output tracks a role permutation in its finite control; when a moving
    head is about to pass a head it currently coincides with, the two roles
    are swapped internally instead, so physical head positions remain
    non-decreasing in head index at every step.  Requires a sensing machine
    (without coincidence information a transposition is undetectable) in
    which each transition moves at most one head.
    """
    if not machine.sensing:
        raise MachineError("head-order normalization needs a sensing machine")
    for nxt, moves in machine.transitions.values():
        if sum(1 for d in moves if d != 0) > 1:
            raise MachineError("normalize_one_move must run before head-order normalization")

    k = machine.k
    perms = list(itertools.permutations(range(k)))
    symbols = sorted(machine.alphabet) + list(MARKERS)

    def name(q: str, perm) -> str:
        return q if perm == tuple(range(k)) else f"{q}|" + "".join(map(str, perm))

    states = set()
    accepting = set()
    transitions: dict = {}

    # Physical partitions under the sorted invariant are runs of equal
    # positions, i.e. partitions into consecutive intervals.
    interval_parts = [p for p in _set_partitions(k) if _is_interval_partition(p)]

    for q in machine.states:
        for perm in perms:
            phys_state = name(q, perm)
            states.add(phys_state)
            if q in machine.accepting:
                accepting.add(phys_state)
            for reads in itertools.product(symbols, repeat=k):
                for part in interval_parts:
                    key = (phys_state, reads, part)
                    # Translate physical observation to the original head roles.
                    orig_reads = tuple(reads[_phys_of(perm, j)] for j in range(k))
                    orig_part = coincidence_partition(
                        tuple(part[_phys_of(perm, j)] for j in range(k))
                    )
                    entry = machine.transitions.get((q, orig_reads, orig_part))
                    if entry is None:
                        continue
                    nxt, moves = entry
                    moved = [j for j, d in enumerate(moves) if d != 0]
                    if not moved:
                        transitions[key] = (name(nxt, perm), (0,) * k)
                        continue
                    j = moved[0]
                    d = moves[j]
                    i = _phys_of(perm, j)
                    # Move the outermost physical head of the coincidence run
                    # in the move direction, rotating roles so head j rides it.
                    target = i
                    while (step_to := _next_in_run(part, target, d)) is not None:
                        target = step_to
                    new_perm = list(perm)
                    if target != i:
                        step = 1 if target > i else -1
                        for t in range(i, target, step):
                            new_perm[t] = perm[t + step]
                        new_perm[target] = j
                    transitions[key] = (
                        name(nxt, tuple(new_perm)),
                        _one_hot(k, target, d),
                    )

    return MultiHeadAutomaton(
        states=frozenset(states),
        start=name(machine.start, tuple(range(k))),
        accepting=frozenset(accepting),
        k=k,
        alphabet=machine.alphabet,
        transitions=transitions,
        sensing=True,
    )


def _phys_of(perm, j: int) -> int:
    """Physical slot currently playing original head j."""
    return perm.index(j)


def _is_interval_partition(part: tuple[int, ...]) -> bool:
    return all(part[i + 1] in (part[i], part[i] + 1) for i in range(len(part) - 1))


def _next_in_run(part: tuple[int, ...], i: int, d: int) -> int | None:
    j = i + d
    if 0 <= j < len(part) and part[j] == part[i]:
        return j
    return None
