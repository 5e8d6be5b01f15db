"""Bounded-input speed-up pipeline.

A word from a bound w1* ... wm* is compressed in stages onto at most m
counter-sized runs: stage i probes the next 2*mu input symbols (mu being
the longest bound word) and compares the probe against every rotation of
w_i repeated; a probe that matches keeps counting copies of that rotation
until they stop, which by the Fine-Wilf periodicity threshold is guaranteed
to carry the encoding past the end of the i-th block, while a probe that
matches no rotation already spans a block border and is small enough to
keep verbatim.  The result is an item list of literals (finite-control
sized) and (rotation, count) runs whose concatenation is exactly the input.

A counter machine can then be simulated over the encoded input: the head
position inside a run is a copy counter plus an offset modulo the word
length, so crossing a block costs one counter drain instead of a symbol
walk, and the whole simulation can be processed in chunks: counters stored
as (quotient, remainder) relative to a compression factor d, with d
simulated steps charged per fixed-cost accounting unit.  That yields a
reported cost of (one input pass) + c * t(n) for a chosen constant c > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from headcount.bounded import BoundDescriptor, conjugates, matches_bound
from headcount.machines import (
    DEFAULT_LIMIT,
    LOOP_BUDGET,
    LEFT_MARKER,
    RIGHT_MARKER,
    DEC,
    INC,
    NOP,
    OVERFLOW_BLOCK,
    OVERFLOW_SIGNAL,
    CounterMachine,
    MachineError,
    RunResult,
    Trace,
    Verdict,
)

# Cost model of the chunked simulation: one accounting unit covers the
# table lookup for a d-step chunk, the quotient updates, and the remainder
# bookkeeping.  The compression factor for a target ratio c is d =
# ceil(UNIT_COST / c), so UNIT_COST * ceil(t / d) <= c * t + UNIT_COST.
UNIT_COST = 4
MAX_FACTOR = 2**31


@dataclass(frozen=True)
class Literal:
    """A short input segment stored verbatim (finite-control sized)."""

    text: str

    def __len__(self) -> int:
        return len(self.text)


@dataclass(frozen=True)
class Run:
    """``count`` consecutive copies of a rotation of some bound word."""

    word: str
    count: int

    def __len__(self) -> int:
        return len(self.word) * self.count


@dataclass
class EncodedInput:
    """Staged run-length form of a bounded word."""

    items: list
    bound: BoundDescriptor
    stage_ends: list[int] = field(default_factory=list)
    reads: int = 0  # input symbols the staged encoder inspected

    def __len__(self) -> int:
        return sum(len(item) for item in self.items)

    def run_items(self) -> list[Run]:
        return [item for item in self.items if isinstance(item, Run)]

    def to_dict(self) -> dict:
        return {
            "bound": list(self.bound.words),
            "items": [
                {"run": item.word, "count": item.count}
                if isinstance(item, Run)
                else {"literal": item.text}
                for item in self.items
            ],
            "stage_ends": list(self.stage_ends),
            "reads": self.reads,
        }


def encode_bounded_input(word: str, bound: BoundDescriptor) -> EncodedInput:
    """Stage-by-stage run-length encoding of a word from the given bound.

    Stage i probes 2*mu symbols (less at the input's end) and tries the
    rotations of w_i in rotation order, starting from w_i itself.  A match
    turns into a run counting every consecutive copy; the symbols after the
    last full copy are left for the following stages.  A failed probe is
    stored verbatim.  Literals therefore never exceed 2*mu symbols.
    """
    if not matches_bound(word, bound):
        raise MachineError(f"input does not match the bound {'*'.join(bound.words)}*")
    mu = bound.mu
    probe_len = 2 * mu
    items: list = []
    stage_ends: list[int] = []
    reads = 0
    cursor = 0
    n = len(word)
    for w in bound.words:
        if cursor < n:
            probe = word[cursor : cursor + probe_len]
            reads += len(probe)
            matched = None
            if len(probe) == probe_len:
                for vu in conjugates(w):
                    reps = -(-probe_len // len(vu))
                    if (vu * reps)[:probe_len] == probe:
                        matched = vu
                        break
            if matched is None:
                items.append(Literal(probe))
                cursor += len(probe)
            else:
                step = len(matched)
                count = probe_len // step
                end = cursor + count * step
                # extend past the probe, one copy at a time
                while word[end : end + step] == matched:
                    reads += step
                    end += step
                    count += 1
                items.append(Run(matched, count))
                cursor = end
                # the window that broke the run (or the input's tail) was
                # inspected as well and stays in the finite control; without
                # it a run stopping just short of a block border would leave
                # that border uncovered
                window = word[end : end + step]
                reads += len(window)
                if window:
                    items.append(Literal(window))
                    cursor += len(window)
        stage_ends.append(cursor)
    # a leftover after the last stage would falsify the stage-coverage
    # invariant; keep decode exact regardless
    while cursor < n:
        chunk = word[cursor : cursor + probe_len]
        reads += len(chunk)
        items.append(Literal(chunk))
        cursor += len(chunk)
    return EncodedInput(items=items, bound=bound, stage_ends=stage_ends, reads=reads)


def decode_encoded_input(encoded: EncodedInput) -> str:
    """Concatenate the stored segments and run copies back into the word."""
    out = []
    for item in encoded.items:
        if isinstance(item, Run):
            out.append(item.word * item.count)
        else:
            out.append(item.text)
    return "".join(out)


# ---------------------------------------------------------------------------
# counters for the chunked simulation


@dataclass
class CompressedCounter:
    """A counter value stored as quotient * factor + remainder.

    The quotient is what a real compressed machine keeps on its counter;
    the remainder lives in the finite control.  The represented value is
    exact at every step, and zero iff both parts are zero.
    """

    factor: int
    quotient: int = 0
    remainder: int = 0

    def value(self) -> int:
        return self.quotient * self.factor + self.remainder

    def is_zero(self) -> bool:
        return self.quotient == 0 and self.remainder == 0

    def add(self, delta: int) -> None:
        total = self.value() + delta
        if total < 0:
            raise MachineError("compressed counter went negative")
        self.quotient, self.remainder = divmod(total, self.factor)


class _PlainBank:
    def __init__(self, k: int):
        self.values = [0] * k

    def zeros(self) -> tuple:
        return tuple(v == 0 for v in self.values)

    def value(self, i: int) -> int:
        return self.values[i]

    def add(self, i: int, delta: int) -> None:
        self.values[i] += delta

    def snapshot(self) -> tuple:
        return tuple(self.values)


class _CompressedBank:
    def __init__(self, k: int, factor: int):
        self.counters = [CompressedCounter(factor) for _ in range(k)]

    def zeros(self) -> tuple:
        return tuple(c.is_zero() for c in self.counters)

    def value(self, i: int) -> int:
        return self.counters[i].value()

    def add(self, i: int, delta: int) -> None:
        self.counters[i].add(delta)

    def snapshot(self) -> tuple:
        return tuple((c.quotient, c.remainder) for c in self.counters)


# ---------------------------------------------------------------------------
# simulation over the encoding


class _EncodedTape:
    """Head position as (item index, offset); markers sit beyond the items."""

    def __init__(self, encoded: EncodedInput):
        self.items = encoded.items
        self.lengths = [len(item) for item in self.items]
        self.n = sum(self.lengths)

    def symbol(self, item: int, offset: int) -> str:
        if item < 0:
            return LEFT_MARKER
        if item >= len(self.items):
            return RIGHT_MARKER
        entry = self.items[item]
        if isinstance(entry, Run):
            return entry.word[offset % len(entry.word)]
        return entry.text[offset]

    def start(self) -> tuple[int, int]:
        # position 1: the first square of the first nonempty item, or beyond
        if self.n == 0:
            return (len(self.items), 0)
        item = 0
        while self.lengths[item] == 0:
            item += 1
        return (item, 0)

    def move(self, item: int, offset: int, d: int) -> tuple[int, int] | None:
        if d == 0:
            return (item, offset)
        if item < 0:
            if d < 0:
                return None
            return self.start() if self.n else (len(self.items), 0)
        if item >= len(self.items):
            if d > 0:
                return None
            if self.n == 0:
                return (-1, 0)
            item = len(self.items) - 1
            while self.lengths[item] == 0:
                item -= 1
            return (item, self.lengths[item] - 1)
        offset += d
        if 0 <= offset < self.lengths[item]:
            return (item, offset)
        if d > 0:
            item += 1
            while item < len(self.items) and self.lengths[item] == 0:
                item += 1
            return (item, 0)
        item -= 1
        while item >= 0 and self.lengths[item] == 0:
            item -= 1
        if item < 0:
            return (-1, 0)
        return (item, self.lengths[item] - 1)


def _encoded_run(
    machine: CounterMachine,
    encoded: EncodedInput,
    limit: int,
    bank,
    loop_check: bool | None,
    turbo: bool,
):
    """Step a counter machine over an encoded input.  Returns (RunResult,
    simulated steps); verdicts match ``run_cm`` on the decoded word."""
    tape = _EncodedTape(encoded)
    n = tape.n
    state = machine.start
    item, offset = tape.start()
    if n == 0:
        item, offset = len(tape.items), 0
    overflowed = False
    steps = 0
    trace = Trace(max_counters=[0] * machine.k, head_moves=[0])
    space = len(machine.states) * (n + 2) * (n + 1) ** machine.k
    track = loop_check if loop_check is not None else space <= LOOP_BUDGET
    seen: set | None = set() if track else None

    while True:
        if state in machine.accepting:
            trace.final_state = state
            return RunResult(Verdict.ACCEPT, steps, "accepting state", trace), steps
        if seen is not None:
            config = (state, item, offset, bank.snapshot(), overflowed)
            if config in seen:
                trace.final_state = state
                return RunResult(Verdict.REJECT, steps, "loop", trace), steps
            seen.add(config)
        if steps >= limit:
            trace.final_state = state
            return RunResult(Verdict.TIMEOUT, steps, "step limit reached", trace), steps
        read = tape.symbol(item, offset)
        zeros = bank.zeros()
        entry = machine.transitions.get(machine.lookup_key(state, read, zeros, overflowed))
        if entry is None:
            trace.final_state = state
            return RunResult(Verdict.REJECT, steps, "no transition", trace), steps
        nxt, move, ops = entry
        overflowed = False

        if turbo and nxt == state:
            span = _bulk_span(machine, bank, tape, item, offset, move, ops, limit - steps, n)
            if span:
                for i, op in enumerate(ops):
                    if op == INC:
                        bank.add(i, span)
                    elif op == DEC:
                        bank.add(i, -span)
                    v = bank.value(i)
                    if v > trace.max_counters[i]:
                        trace.max_counters[i] = v
                if move:
                    offset += move * span
                    trace.head_moves[0] += span
                steps += span
                continue

        fault = None
        for i, op in enumerate(ops):
            if op == NOP:
                continue
            if op == DEC:
                if bank.value(i) == 0:
                    fault = f"decrement of zero counter {i + 1}"
                    break
                bank.add(i, -1)
                continue
            if bank.value(i) >= n:
                if machine.overflow_policy == OVERFLOW_BLOCK:
                    fault = f"counter {i + 1} overflow (block)"
                    break
                if machine.overflow_policy == OVERFLOW_SIGNAL:
                    overflowed = True
            else:
                bank.add(i, 1)
                v = bank.value(i)
                if v > trace.max_counters[i]:
                    trace.max_counters[i] = v
        if fault:
            trace.final_state = state
            trace.violations.append(fault)
            reason = "dec on zero" if "decrement" in fault else "counter overflow"
            return RunResult(Verdict.FAULT, steps, reason, trace), steps
        if move:
            nxt_pos = tape.move(item, offset, move)
            if nxt_pos is None:
                trace.final_state = state
                trace.violations.append("head driven off the tape")
                return RunResult(Verdict.FAULT, steps, "head off tape", trace), steps
            item, offset = nxt_pos
            trace.head_moves[0] += 1
        state = nxt
        steps += 1


def _bulk_span(machine, bank, tape, item, offset, move, ops, budget, n):
    """Largest number of identical self-loop steps that stay inside one
    uniform stretch with stable zero flags.  Single-symbol runs only."""
    if budget <= 1:
        return 0
    span = budget - 1
    if move:
        if not 0 <= item < len(tape.items):
            return 0
        entry = tape.items[item]
        if not (isinstance(entry, Run) and len(entry.word) == 1):
            return 0
        if move > 0:
            span = min(span, tape.lengths[item] - 1 - offset)
        else:
            span = min(span, offset)
    for i, op in enumerate(ops):
        if op == DEC:
            span = min(span, bank.value(i) - 1)
        elif op == INC:
            span = min(span, n - 1 - bank.value(i))
    if span <= 0:
        return 0
    if move == 0 and all(op == NOP for op in ops):
        return 0
    return span


def run_on_encoding(
    machine: CounterMachine,
    encoded: EncodedInput,
    limit: int = DEFAULT_LIMIT,
    loop_check: bool | None = None,
    turbo: bool = False,
) -> RunResult:
    """Run a counter machine over an encoded input without decoding it.

    The head is tracked as an item index plus an in-item offset (a copy
    count and a position modulo the run word's length); verdicts equal
    ``run_cm`` on the decoded word.
    """
    if limit <= 0:
        raise MachineError("step limit must be positive")
    alphabet = set(decode_symbols(encoded))
    if not alphabet <= machine.alphabet:
        raise MachineError("encoded input uses symbols outside the machine alphabet")
    result, _ = _encoded_run(machine, encoded, limit, _PlainBank(machine.k), loop_check, turbo)
    return result


def decode_symbols(encoded: EncodedInput) -> set[str]:
    syms: set[str] = set()
    for item in encoded.items:
        if isinstance(item, Run):
            syms |= set(item.word)
        else:
            syms |= set(item.text)
    return syms


@dataclass
class SpeedupReport:
    """Outcome of the full encode-then-chunked-simulation pipeline."""

    result: RunResult
    raw_steps: int  # steps of the simulated machine
    encode_reads: int  # symbols inspected by the staged encoder
    factor: int  # d: simulated steps per accounting unit
    units: int  # accounting units consumed
    accounting_steps: int  # encode_reads + UNIT_COST * units

    def to_dict(self) -> dict:
        out = self.result.to_dict()
        out.update(
            raw_steps=self.raw_steps,
            encode_reads=self.encode_reads,
            factor=self.factor,
            units=self.units,
            accounting_steps=self.accounting_steps,
        )
        return out


def speedup_factor(c: float) -> int:
    if c <= 0:
        raise MachineError("the speed-up ratio must be positive")
    d = math.ceil(UNIT_COST / c)
    if d > MAX_FACTOR:
        raise MachineError(f"compression factor {d} is out of range")
    return max(d, 1)


def speedup_run(
    machine: CounterMachine,
    bound: BoundDescriptor,
    word: str,
    c: float,
    limit: int = DEFAULT_LIMIT,
    loop_check: bool | None = None,
    turbo: bool = True,
) -> SpeedupReport:
    """Encode the input, then simulate with counters compressed by d = ceil(4/c).

    The reported accounting cost is (symbols read while encoding) +
    UNIT_COST * ceil(t / d) for a t-step run, which is bounded by
    n + c * t(n) + K with K = 3 * m * mu + UNIT_COST for a bound with m
    words of length at most mu (the encoder reads each symbol once plus at
    most one probe and one failed window per stage).  Verdicts equal
    ``run_cm`` on the raw word.
    """
    d = speedup_factor(c)
    encoded = encode_bounded_input(word, bound)
    result, steps = _encoded_run(
        machine, encoded, limit, _CompressedBank(machine.k, d), loop_check, turbo
    )
    units = -(-steps // d) if steps else 0
    return SpeedupReport(
        result=result,
        raw_steps=steps,
        encode_reads=encoded.reads,
        factor=d,
        units=units,
        accounting_steps=encoded.reads + UNIT_COST * units,
    )


def speedup_bound_constant(bound: BoundDescriptor) -> int:
    """The documented additive constant K in the n + c*t(n) + K bound."""
    return 3 * bound.m * bound.mu + UNIT_COST
