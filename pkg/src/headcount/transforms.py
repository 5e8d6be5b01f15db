"""Machine-to-machine constructions.

Three constructions connect the machine models over bounded inputs:

* ``counters_to_heads`` compiles a counter machine with k-1 counters into a
  (k)-head automaton: head 1 mirrors the input head and each remaining head
  encodes a counter value as its distance from the left end-marker, so a
  zero-test becomes "reading the left end-marker".  This works on arbitrary
  input and preserves step counts one-to-one on runs that never overflow.

* ``heads_to_counters_run`` simulates a k-head automaton on strictly bounded
  input using a restricted virtual machine with a single physical head (the
  *pointer*), k-1 counters holding head-to-block-boundary distances, and
  finite control only.  The simulation proceeds in intervals: at the start
  of each interval the pointer visits every encoded head, reads a
  fixed-length segment around it, and predicts at which block boundary that
  head could cause the next block-crossing event; the stored distance then
  turns the crossing into a counter underflow attempt, at which point the
  pointer and the counter swap roles and a new interval begins.

* ``heads_to_registers_run`` simulates a sensing unary-alphabet k-head
  automaton on a register machine with k+1 registers holding the gaps
  between neighbouring heads and the end-markers.

``can_cause_next_event`` is the segment-based event predictor the interval
simulation relies on: with every other head's symbol frozen, the behaviour
of one head inside its block depends only on the control state and the
head's offset, so simulating at most states x segment-length partial
configurations decides whether and where the head can exit its block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from headcount.bounded import StrictBound
from headcount.machines import (
    DEFAULT_LIMIT,
    LOOP_BUDGET,
    LEFT_MARKER,
    RIGHT_MARKER,
    DEC,
    INC,
    NOP,
    OVERFLOW_SIGNAL,
    CounterMachine,
    MachineError,
    MultiHeadAutomaton,
    RunResult,
    Tape,
    Trace,
    Verdict,
    _set_partitions,
    normalize_head_order,
    normalize_one_move,
)

LEFT = "left"
RIGHT = "right"


# ---------------------------------------------------------------------------
# counters -> heads


def counters_to_heads(machine: CounterMachine) -> MultiHeadAutomaton:
    """Compile a counter machine with k-1 counters into a k-head automaton.

    Head 1 replays the input head; head i+1 sits at distance v from the left
    end-marker whenever counter i holds v, so increments become right moves,
    decrements left moves, and a zero-test is "head i+1 reads the left
    end-marker".  Because every head starts on position 1 while counters
    start at 0, the compiled start state folds a one-position correction
    into the first simulated step, keeping the step mapping exactly 1:1.

    Under the ``simple`` overflow policy a clamped increment parks the
    encoding head on the right end-marker; a repair step (which does not
    consume a simulated step) pulls it back.  The ``signal`` policy has no
    head analogue and is rejected.
    """
    if machine.overflow_policy == OVERFLOW_SIGNAL:
        raise MachineError("signal overflow has no head analogue")
    simple = machine.overflow_policy == "simple"
    kc = machine.k
    k = kc + 1
    boot = "boot"
    while boot in machine.states:
        boot += "_"
    states = set(machine.states) | {boot}
    accepting = set(machine.accepting)
    if machine.start in machine.accepting:
        accepting.add(boot)

    symbols = sorted(machine.alphabet) + [LEFT_MARKER, RIGHT_MARKER]
    transitions: dict = {}

    def op_move(op: str) -> int:
        return 1 if op == INC else (-1 if op == DEC else 0)

    import itertools

    for reads in itertools.product(symbols, repeat=k):
        s1 = reads[0]
        # Boot: counters are zero by convention, counter heads still at 1.
        entry = machine.transitions.get(machine.lookup_key(machine.start, s1, (True,) * kc))
        if entry is not None:
            nxt, d, ops = entry
            if not any(op == DEC for op in ops):
                moves = (d,) + tuple(op_move(op) - 1 for op in ops)
                transitions[(boot, reads)] = (nxt, moves)
            # a decrement of a zero counter faults the source machine on its
            # first step; leaving the key undefined halts the compiled one

        for state in machine.states:
            key = (state, reads)
            clamped = [i for i, sym in enumerate(reads[1:]) if sym == RIGHT_MARKER]
            if clamped:
                if simple:
                    # repair: pull parked encoding heads back onto the tape
                    moves = tuple(
                        -1 if (i > 0 and reads[i] == RIGHT_MARKER) else 0 for i in range(k)
                    )
                    transitions[key] = (state, moves)
                # block policy: leave undefined, the compiled machine halts
                continue
            zeros = tuple(sym == LEFT_MARKER for sym in reads[1:])
            entry = machine.transitions.get(machine.lookup_key(state, s1, zeros))
            if entry is None:
                continue
            nxt, d, ops = entry
            moves = (d,) + tuple(op_move(op) for op in ops)
            transitions[key] = (nxt, moves)

    return MultiHeadAutomaton(
        states=frozenset(states),
        start=boot,
        accepting=frozenset(accepting),
        k=k,
        alphabet=machine.alphabet,
        transitions=transitions,
    )


# ---------------------------------------------------------------------------
# the segment event predictor


@dataclass(frozen=True)
class EventPrediction:
    """Outcome of the fixed-segment lookahead for one head.

    ``outcome`` is "left"/"right" when the head can cause the next event at
    that boundary of its block, or None when it cannot (it loops or halts
    first).  ``examined`` counts the distinct partial configurations that
    were visited; it never exceeds states * (2 * states - 1).
    """

    outcome: str | None
    examined: int


def can_cause_next_event(
    machine: MultiHeadAutomaton,
    state: str,
    head_index: int,
    segment: tuple[str, ...],
    head_offset: int,
    frozen_reads: tuple[str, ...],
) -> EventPrediction:
    """Decide whether one head can cause the next block-crossing event.

    ``segment`` holds up to 2r-1 tape symbols around the head (truncated at
    the tape ends) with the head at ``head_offset``; ``frozen_reads`` gives
    the symbol currently read by every head (the entry for ``head_index`` is
    ignored).  Assuming no other head causes an event, those symbols stay
    fixed, so a partial configuration is just (state, offset): once one
    repeats the head can never exit.  Stepping onto a different symbol inside
    the segment is an exit at that side; running off the segment while still
    inside the block means the head is drifting and will exit on that side.
    """
    if machine.sensing:
        raise MachineError("event prediction works on non-sensing machines")
    r = len(machine.states)
    if len(segment) > 2 * r - 1:
        raise MachineError(f"segment longer than {2 * r - 1} symbols")
    if not 0 <= head_offset < len(segment):
        raise MachineError("head offset outside the segment")
    if len(frozen_reads) != machine.k:
        raise MachineError("frozen reads must cover every head")
    block_symbol = segment[head_offset]
    if block_symbol in (LEFT_MARKER, RIGHT_MARKER):
        raise MachineError("the inspected head must sit inside a block")

    pos = head_offset
    seen: set[tuple[str, int]] = set()
    while True:
        if (state, pos) in seen:
            return EventPrediction(None, len(seen))
        seen.add((state, pos))
        reads = tuple(
            segment[pos] if i == head_index else frozen_reads[i] for i in range(machine.k)
        )
        entry = machine.transitions.get((state, reads))
        if entry is None:
            # the machine halts before any event
            return EventPrediction(None, len(seen))
        state, moves = entry
        d = moves[head_index]
        if d == 0:
            continue
        pos += d
        side = RIGHT if d > 0 else LEFT
        if pos < 0 or pos >= len(segment):
            # monotone drift continues to the block boundary on this side
            return EventPrediction(side, len(seen))
        if segment[pos] != block_symbol:
            return EventPrediction(side, len(seen))


def segment_around(tape: Tape, pos: int, r: int) -> tuple[tuple[str, ...], int]:
    """The up-to-(2r-1)-symbol window around a tape position, plus the
    position's offset within it.  Used by tests; the interval simulation
    gathers the same window by pointer excursions."""
    lo = max(0, pos - (r - 1))
    hi = min(tape.n + 1, pos + (r - 1))
    return tuple(tape.symbol(p) for p in range(lo, hi + 1)), pos - lo


# ---------------------------------------------------------------------------
# heads -> counters: the audited interval simulation


@dataclass
class SimulationAudit:
    """Resource usage of the restricted pointer-plus-counters machine."""

    counters_used: int
    max_counters: list[int]
    pointer_moves: int = 0
    counter_ops: int = 0
    intervals: int = 0
    control_ok: bool = True
    notes: list[str] = field(default_factory=list)
    interval_trace: list | None = None

    def to_dict(self) -> dict:
        return {
            "counters_used": self.counters_used,
            "max_counters": list(self.max_counters),
            "pointer_moves": self.pointer_moves,
            "counter_ops": self.counter_ops,
            "intervals": self.intervals,
            "control_ok": self.control_ok,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class IntervalState:
    """Snapshot taken at the start of an interval (for trace assertions)."""

    m_steps: int
    state: str
    pointer_head: int
    boundary: tuple[str, str]
    side: str
    reads: tuple[str, ...]
    distance_types: tuple[str, ...]
    positions: tuple[int, ...]


class _AuditFault(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class _IntervalVM:
    """Pointer + (k-1) counters + finite control, simulating a k-head automaton.

    Finite-control variables (state, per-head read symbols, the head/counter
    assignment, per-counter distance sides, the pointer's boundary bookmark,
    and the bounded segment scratch) all range over sets whose size depends
    only on the simulated machine, never on the input length.
    """

    def __init__(self, machine: MultiHeadAutomaton, bound: StrictBound, word: str):
        self.m = machine
        self.bound = bound
        self.tape = Tape(word)
        self.n = self.tape.n
        self.k = machine.k
        self.r = len(machine.states)
        # physical resources
        self.pointer = 1
        self.counters = [0] * (self.k - 1)
        # finite control
        self.state = machine.start
        init_read = self.tape.symbol(1)
        self.reads = [init_read] * self.k
        self.pointer_head = 0
        self.counter_heads = list(range(1, self.k))  # counter index -> head index
        self.distance_types = [LEFT] * (self.k - 1)
        self.boundary = (LEFT_MARKER, init_read)
        self.boundary_side = RIGHT
        # accounting
        self.m_steps = 0
        self.audit = SimulationAudit(self.k - 1, [0] * (self.k - 1))
        self.intervals: list[IntervalState] = []
        # symbol order along the tape, for navigation
        self._rank = {sym: i for i, sym in enumerate(bound.symbols)}
        self._rank[LEFT_MARKER] = -1
        self._rank[RIGHT_MARKER] = len(bound.symbols)
        # harness data for configuration reconstruction only
        self._block_span: dict[str, tuple[int, int]] = {}
        start = 1
        for i, sym in enumerate(word):
            if sym not in self._block_span:
                self._block_span[sym] = (i + 1, i + 1)
            else:
                lo, _ = self._block_span[sym]
                self._block_span[sym] = (lo, i + 1)

    # physical primitives

    def _move(self, d: int) -> None:
        new = self.pointer + d
        if not self.tape.in_range(new):
            raise _AuditFault("pointer driven off the tape during navigation")
        self.pointer = new
        self.audit.pointer_moves += 1

    def _read(self) -> str:
        return self.tape.symbol(self.pointer)

    def _inc(self, c: int) -> None:
        self.counters[c] += 1
        self.audit.counter_ops += 1
        if self.counters[c] > self.audit.max_counters[c]:
            self.audit.max_counters[c] = self.counters[c]
        if self.counters[c] > self.n:
            raise _AuditFault(f"counter {c + 1} exceeded the input length {self.n}")

    def _dec(self, c: int) -> None:
        if self.counters[c] == 0:
            raise _AuditFault(f"internal decrement of zero counter {c + 1}")
        self.counters[c] -= 1
        self.audit.counter_ops += 1

    # navigation, guided only by symbols and the bound order

    def _walk_to_symbol(self, target: str) -> None:
        want = self._rank[target]
        while self._read() != target:
            self._move(1 if self._rank[self._read()] < want else -1)

    def _walk_into_block(self, sym: str) -> None:
        self._walk_to_symbol(sym)

    def _walk_to_edge(self, sym: str, d: int) -> None:
        """From inside a block of sym, stop on its outermost square toward d."""
        while True:
            self._move(d)
            if self._read() != sym:
                self._move(-d)
                return

    def _goto_boundary_side(self, left_sym: str, right_sym: str, side: str) -> None:
        if side == LEFT:
            if left_sym == LEFT_MARKER:
                self._walk_to_symbol(LEFT_MARKER)
            else:
                self._walk_into_block(left_sym)
                self._walk_to_edge(left_sym, 1)
        else:
            if right_sym == RIGHT_MARKER:
                self._walk_to_symbol(RIGHT_MARKER)
            else:
                self._walk_into_block(right_sym)
                self._walk_to_edge(right_sym, -1)

    # interval phases

    def _measure_head(self, c: int) -> None:
        """Locate counter-head c, predict its next-event boundary, and store
        the distance to that boundary on its counter."""
        h = self.counter_heads[c]
        sym = self.reads[h]
        if sym in (LEFT_MARKER, RIGHT_MARKER):
            # a head parked on a marker needs no distance; any exit from the
            # marker square is visible in the finite control
            if self.counters[c] != 0:
                raise _AuditFault("marker-parked head with a nonzero counter")
            self.distance_types[c] = LEFT
            return
        # walk to the recorded boundary of the head's block ...
        self._walk_into_block(sym)
        edge_dir = -1 if self.distance_types[c] == LEFT else 1
        self._walk_to_edge(sym, edge_dir)
        # ... then spend the counter to stand on the head's square
        inward = -edge_dir
        while self.counters[c] > 0:
            self._dec(c)
            self._move(inward)
        segment, offset = self._excursion_segment(c)
        pred = can_cause_next_event(self.m, self.state, h, segment, offset, tuple(self.reads))
        side = pred.outcome if pred.outcome is not None else LEFT
        # measure the distance from the head square to that boundary
        out = -1 if side == LEFT else 1
        while True:
            self._move(out)
            self._inc(c)
            if self._read() != sym:
                self._move(-out)
                self._dec(c)
                break
        self.distance_types[c] = side

    def _excursion_segment(self, c: int) -> tuple[tuple[str, ...], int]:
        """Read the up-to-(2r-1)-symbol window around the pointer without
        losing its position, measuring excursions on the (zero) counter c."""
        center = self._read()
        left: list[str] = []
        while len(left) < self.r - 1 and self.pointer > 0:
            self._move(-1)
            self._inc(c)
            left.append(self._read())
        while self.counters[c] > 0:
            self._dec(c)
            self._move(1)
        right: list[str] = []
        while len(right) < self.r - 1 and self.pointer < self.n + 1:
            self._move(1)
            self._inc(c)
            right.append(self._read())
        while self.counters[c] > 0:
            self._dec(c)
            self._move(-1)
        segment = tuple(reversed(left)) + (center,) + tuple(right)
        return segment, len(left)

    def _record_pointer_into_counter(self, c: int) -> None:
        """Store the old pointer-head's distance to the left boundary of its
        block on counter c (zero right now), making it counter-backed."""
        if self.counters[c] != 0:
            raise _AuditFault("role swap with a nonzero counter")
        sym = self.reads[self.pointer_head]
        if sym in (LEFT_MARKER, RIGHT_MARKER):
            return  # position known from the read symbol
        while True:
            self._move(-1)
            self._inc(c)
            if self._read() != sym:
                self._move(1)
                self._dec(c)
                break

    def _swap_roles(self, c: int, new_side: str) -> str:
        """Counter c underflowed (or its head left a marker): its head becomes
        the pointer, the old pointer-head takes over counter c.  Returns the
        symbol now read by the relocated pointer."""
        h = self.counter_heads[c]
        old_sym = self.reads[h]
        self._record_pointer_into_counter(c)
        self.counter_heads[c] = self.pointer_head
        self.distance_types[c] = LEFT
        self.pointer_head = h
        # physically relocate the pointer to just beyond the crossed boundary
        if old_sym == LEFT_MARKER:
            self._walk_to_symbol(LEFT_MARKER)
            self._move(1)
            self.boundary = (LEFT_MARKER, self._read())
            self.boundary_side = RIGHT
        elif old_sym == RIGHT_MARKER:
            self._walk_to_symbol(RIGHT_MARKER)
            self._move(-1)
            self.boundary = (self._read(), RIGHT_MARKER)
            self.boundary_side = LEFT
        else:
            self._walk_into_block(old_sym)
            out = -1 if new_side == LEFT else 1
            self._walk_to_edge(old_sym, out)
            self._move(out)
            if new_side == LEFT:
                self.boundary = (self._read(), old_sym)
                self.boundary_side = LEFT
            else:
                self.boundary = (old_sym, self._read())
                self.boundary_side = RIGHT
        return self._read()

    # reconstruction, used for loop detection and trace assertions only

    def head_positions(self) -> tuple[int, ...]:
        positions = [0] * self.k
        positions[self.pointer_head] = self.pointer
        for c, h in enumerate(self.counter_heads):
            sym = self.reads[h]
            if sym == LEFT_MARKER:
                positions[h] = 0
            elif sym == RIGHT_MARKER:
                positions[h] = self.n + 1
            else:
                lo, hi = self._block_span[sym]
                if self.distance_types[c] == LEFT:
                    positions[h] = lo + self.counters[c]
                else:
                    positions[h] = hi - self.counters[c]
        return tuple(positions)

    def _snapshot_interval(self) -> None:
        self.audit.intervals += 1
        self.intervals.append(
            IntervalState(
                m_steps=self.m_steps,
                state=self.state,
                pointer_head=self.pointer_head,
                boundary=self.boundary,
                side=self.boundary_side,
                reads=tuple(self.reads),
                distance_types=tuple(self.distance_types),
                positions=self.head_positions(),
            )
        )

    # the main loop

    def run(self, limit: int, loop_check: bool | None) -> RunResult:
        trace = Trace(max_counters=self.audit.max_counters, head_moves=[0])
        space = self.r * (self.n + 2) * (self.n + 1) ** self.k
        track = loop_check if loop_check is not None else space <= LOOP_BUDGET
        seen: set | None = set() if track else None
        accepting = self.m.accepting
        transitions = self.m.transitions

        def result(verdict, reason):
            trace.final_state = self.state
            trace.head_moves = [self.audit.pointer_moves]
            trace.op_counts["counter_ops"] = self.audit.counter_ops
            if not self.audit.control_ok:
                trace.violations.extend(self.audit.notes)
            return RunResult(verdict, self.m_steps, reason, trace)

        try:
            while True:  # one iteration per interval
                if self.state in accepting:
                    return result(Verdict.ACCEPT, "accepting state")
                self._snapshot_interval()
                for c in range(self.k - 1):
                    self._measure_head(c)
                self._goto_boundary_side(*self.boundary, self.boundary_side)
                event = False
                while not event:
                    if self.state in accepting:
                        return result(Verdict.ACCEPT, "accepting state")
                    if seen is not None:
                        config = (self.state, self.head_positions())
                        if config in seen:
                            return result(Verdict.REJECT, "loop")
                        seen.add(config)
                    if self.m_steps >= limit:
                        return result(Verdict.TIMEOUT, "step limit reached")
                    entry = transitions.get((self.state, tuple(self.reads)))
                    if entry is None:
                        return result(Verdict.REJECT, "no transition")
                    nxt, moves = entry
                    h = next(i for i, d in enumerate(moves) if d != 0)
                    d = moves[h]
                    if h == self.pointer_head:
                        if not self.tape.in_range(self.pointer + d):
                            trace.violations.append(f"head {h + 1} driven off the tape")
                            return result(Verdict.FAULT, "head off tape")
                        old = self.reads[h]
                        self._move(d)
                        new = self._read()
                        self.state = nxt
                        self.m_steps += 1
                        if new != old:
                            self.reads[h] = new
                            self.boundary = (old, new) if d > 0 else (new, old)
                            self.boundary_side = RIGHT if d > 0 else LEFT
                            event = True
                    else:
                        sym = self.reads[h]
                        c = self.counter_heads.index(h)
                        if sym == LEFT_MARKER or sym == RIGHT_MARKER:
                            outward = (sym == LEFT_MARKER and d < 0) or (
                                sym == RIGHT_MARKER and d > 0
                            )
                            if outward:
                                trace.violations.append(f"head {h + 1} driven off the tape")
                                return result(Verdict.FAULT, "head off tape")
                            self.reads[h] = self._swap_roles(c, LEFT)
                            self.state = nxt
                            self.m_steps += 1
                            event = True
                        else:
                            dt = self.distance_types[c]
                            toward_stored = (dt == LEFT and d < 0) or (dt == RIGHT and d > 0)
                            if not toward_stored:
                                self._inc(c)
                                self.state = nxt
                                self.m_steps += 1
                            elif self.counters[c] > 0:
                                self._dec(c)
                                self.state = nxt
                                self.m_steps += 1
                            else:
                                # underflow attempt: the head crosses its
                                # predicted boundary and becomes the pointer
                                self.reads[h] = self._swap_roles(c, dt)
                                self.state = nxt
                                self.m_steps += 1
                                event = True
        except _AuditFault as fault:
            self.audit.control_ok = False
            self.audit.notes.append(fault.message)
            return result(Verdict.FAULT, f"audit: {fault.message}")


def _run_in_control(machine: MultiHeadAutomaton, word: str, limit: int) -> RunResult:
    """Empty input: both marker positions fit in the finite control, so the
    whole simulation runs without counters or pointer moves."""
    n = len(word)
    positions = tuple([1] * machine.k)
    state = machine.start
    tape = Tape(word)
    steps = 0
    seen = set()
    trace = Trace(max_counters=[0] * (machine.k - 1), head_moves=[0])
    while True:
        if state in machine.accepting:
            trace.final_state = state
            return RunResult(Verdict.ACCEPT, steps, "accepting state", trace)
        if (state, positions) in seen:
            trace.final_state = state
            return RunResult(Verdict.REJECT, steps, "loop", trace)
        seen.add((state, positions))
        if steps >= limit:
            trace.final_state = state
            return RunResult(Verdict.TIMEOUT, steps, "step limit reached", trace)
        reads = tuple(tape.symbol(p) for p in positions)
        entry = machine.transitions.get((state, reads))
        if entry is None:
            trace.final_state = state
            return RunResult(Verdict.REJECT, steps, "no transition", trace)
        nxt, moves = entry
        new = tuple(p + d for p, d in zip(positions, moves))
        if any(not tape.in_range(p) for p in new):
            trace.final_state = state
            return RunResult(Verdict.FAULT, steps, "head off tape", trace)
        positions = new
        state = nxt
        steps += 1


def heads_to_counters_run(
    machine: MultiHeadAutomaton,
    bound: StrictBound,
    word: str,
    limit: int = DEFAULT_LIMIT,
    loop_check: bool | None = None,
    keep_intervals: bool = False,
):
    """Simulate a k-head automaton with one pointer and k-1 counters.

    The input must lie in the given strict bound (a construction
    precondition, not a membership test).  Returns ``(RunResult,
    SimulationAudit)``; with ``keep_intervals`` the audit gains an
    ``interval_trace`` attribute listing an ``IntervalState`` per interval.
    ``limit`` counts simulated machine steps; pointer and counter work is
    reported in the audit.  The verdict matches ``run_mha`` on the same
    word.
    """
    if limit <= 0:
        raise MachineError("step limit must be positive")
    if machine.sensing:
        raise MachineError("the interval simulation handles non-sensing machines")
    if not bound.matches(word):
        raise MachineError(f"input {word!r} does not lie in the strict bound")
    if not set(bound.symbols) <= machine.alphabet:
        raise MachineError("bound symbols must belong to the machine alphabet")
    machine = normalize_one_move(machine)
    if len(word) == 0:
        res = _run_in_control(machine, word, limit)
        audit = SimulationAudit(machine.k - 1, [0] * (machine.k - 1))
        if keep_intervals:
            audit.interval_trace = []
        return res, audit
    vm = _IntervalVM(machine, bound, word)
    res = vm.run(limit, loop_check)
    if keep_intervals:
        vm.audit.interval_trace = vm.intervals
    return res, vm.audit


# ---------------------------------------------------------------------------
# heads -> registers over a unary alphabet


def initial_register_encoding(k: int, n: int) -> dict:
    """The forced initial register encoding for k heads on input length n.

    Gaps use the strictly-between convention against the right end-marker
    and plain position differences between neighbouring heads; the flag
    records that the leftmost heads sit next to (or on) the left end-marker,
    absorbing the marker-adjacency case the distance registers cannot
    represent.
    """
    p = 1  # every head starts here
    right = max(n - max(p, 1), 0)
    return {
        "right": right,
        "between": [0] * (k - 1),
        "left": max(p, 1) - 1,
        "flag": p <= 1,
    }


def _as_sensing(machine: MultiHeadAutomaton) -> MultiHeadAutomaton:
    if machine.sensing:
        return machine
    transitions = {}
    for (q, reads), v in machine.transitions.items():
        for part in _set_partitions(machine.k):
            transitions[(q, reads, part)] = v
    return MultiHeadAutomaton(
        states=machine.states,
        start=machine.start,
        accepting=machine.accepting,
        k=machine.k,
        alphabet=machine.alphabet,
        transitions=transitions,
        sensing=True,
    )


def heads_to_registers_run(
    machine: MultiHeadAutomaton,
    n: int,
    limit: int = DEFAULT_LIMIT,
    loop_check: bool | None = None,
) -> RunResult:
    """Simulate a unary k-head automaton on k+1 registers and no tape.

    Register 1 holds the distance of the last head to the right end-marker
    (squares strictly between them); k-1 registers hold the gaps between
    neighbouring heads; one more holds the leftmost head's distance to the
    left end-marker.  Heads sitting on a marker are visible in the finite
    control through their read symbols, which disambiguates the clamped
    register values.  The machine is brought into one-move, sorted-head form
    first, so gaps never go negative.  All register values stay <= n
    (audited via the trace).  The verdict matches ``run_mha`` on a^n.
    """
    if limit <= 0:
        raise MachineError("step limit must be positive")
    if n < 0:
        raise MachineError("input length must be nonnegative")
    if len(machine.alphabet) != 1:
        raise MachineError("register simulation needs a unary alphabet")
    (letter,) = machine.alphabet
    machine = normalize_head_order(normalize_one_move(_as_sensing(machine)))
    k = machine.k

    empty = n == 0
    reads = [RIGHT_MARKER if empty else letter] * k
    right = max(n - 1, 0)
    between = [0] * (k - 1)
    left_gap = 0
    state = machine.start
    steps = 0
    trace = Trace(max_counters=[right] + between + [left_gap])
    space = len(machine.states) * (n + 2) ** k
    track = loop_check if loop_check is not None else space <= LOOP_BUDGET
    seen: set | None = set() if track else None

    def audit_max():
        values = [right] + between + [left_gap]
        for i, v in enumerate(values):
            if v > trace.max_counters[i]:
                trace.max_counters[i] = v
            if v > n:
                trace.violations.append(f"register value {v} exceeded the input length {n}")

    def coincident(i: int) -> bool:
        # heads i and i+1 share a square
        if reads[i] != reads[i + 1]:
            return False
        if reads[i] in (LEFT_MARKER, RIGHT_MARKER):
            return True
        return between[i] == 0

    def partition() -> tuple[int, ...]:
        part = [0] * k
        g = 0
        for i in range(1, k):
            if not coincident(i - 1):
                g += 1
            part[i] = g
        return tuple(part)

    def at_position_one(i: int) -> bool:
        # head i (reading the letter) stands on the first input square iff
        # its clamped left distance, the sum of the gaps below it, is zero
        return left_gap == 0 and all(between[j] == 0 for j in range(i))

    def lands_on_right_marker(i: int) -> bool:
        if i == k - 1:
            return right == 0
        return reads[i + 1] == RIGHT_MARKER and between[i] == 1

    while True:
        if state in machine.accepting:
            trace.final_state = state
            return RunResult(Verdict.ACCEPT, steps, "accepting state", trace)
        if seen is not None:
            config = (state, tuple(reads), right, tuple(between), left_gap)
            if config in seen:
                trace.final_state = state
                return RunResult(Verdict.REJECT, steps, "loop", trace)
            seen.add(config)
        if steps >= limit:
            trace.final_state = state
            return RunResult(Verdict.TIMEOUT, steps, "step limit reached", trace)
        entry = machine.transitions.get((state, tuple(reads), partition()))
        if entry is None:
            trace.final_state = state
            return RunResult(Verdict.REJECT, steps, "no transition", trace)
        nxt, moves = entry
        moved = [i for i, d in enumerate(moves) if d != 0]
        if moved:
            i = moved[0]
            d = moves[i]
            sym = reads[i]
            if (sym == LEFT_MARKER and d < 0) or (sym == RIGHT_MARKER and d > 0):
                trace.final_state = state
                trace.violations.append(f"head {i + 1} driven off the tape")
                return RunResult(Verdict.FAULT, steps, "head off tape", trace)
            # new read symbol after the move
            if d > 0:
                if sym == LEFT_MARKER:
                    new_read = RIGHT_MARKER if empty else letter
                elif lands_on_right_marker(i):
                    new_read = RIGHT_MARKER
                else:
                    new_read = letter
            else:
                if sym == RIGHT_MARKER:
                    new_read = LEFT_MARKER if empty else letter
                elif at_position_one(i):
                    new_read = LEFT_MARKER
                else:
                    new_read = letter
            # register deltas; moves between positions 0 and 1 leave the
            # clamped max(p, 1) encoding unchanged
            delta = d
            if (sym == LEFT_MARKER and d > 0) or (new_read == LEFT_MARKER and d < 0):
                delta = 0
            if delta:
                if i == 0:
                    left_gap += delta
                else:
                    between[i - 1] += delta
                if i == k - 1:
                    # the right register clamps at 0 while the last head sits
                    # on the right end-marker; the read symbol disambiguates
                    clamped = (new_read == RIGHT_MARKER and d > 0) or (
                        sym == RIGHT_MARKER and d < 0
                    )
                    if not clamped:
                        right -= delta
                else:
                    between[i] -= delta
            if min([right, left_gap] + between) < 0:
                raise MachineError("register underflow: machine heads became unsorted")
            reads[i] = new_read
            audit_max()
        state = nxt
        steps += 1
