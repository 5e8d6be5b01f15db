"""Concrete counter-machine acceptors with instrumented step counts.

Three procedures over a single two-way head and a fixed counter budget:

* ``ww_accept``: binary squares {ww} with one counter.  For each position
  the partner offset is computed by storing the distance to the left
  end-marker and sweeping the whole tape while incrementing every second
  step; after comparing, the computation is reversed to recover the
  position.

* ``palindrome_2c_accept``: marked palindromes x$x^T with two counters in
  O(n^2 / log n) steps.  Segments of about log2(n) bits are packed into a
  counter by repeated doubling (the two counters swapping roles per bit);
  a segment is complete once its encoding survives excursions towards both
  block boundaries (an attempted subtraction of roughly half the input
  length, restored after each excursion and aborted early when the encoding
  empties, which keeps the excursions linear per segment).  The encoding is
  then decoded bit by bit against the mirrored segment and rebuilt from the
  mirror side, whose symmetric stopping rule recovers the exact position.

* ``lm_accept``: the log-information family x 0^(2^(|x|/m)-|x|) $
  0^(2^(|x|/m)-|x|) x^T with four counters in (2m+3)n + o(n) steps: one
  validation scan that also banks the half length, a halving cascade
  establishing |x|/m (rejecting half lengths that are not powers of two),
  one right-to-left desert scan, and 2m alternating encode/cross/compare
  iterations costing one tape crossing each.

The procedures run on a metered interpreter that enforces the declared
counter budget, audits counter values against the input length, and counts
one step per combined head-move/counter-operation.  Bulk helpers advance
the meter by exactly the number of steps of the per-step loop they replace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from headcount.machines import LEFT_MARKER, RIGHT_MARKER, RunResult, Trace, Verdict

BITS = ("0", "1")


class ProgramFault(Exception):
    """Budget or audit violation inside a counter program."""


class _Reject(Exception):
    pass


def _as_ops(which) -> tuple[int, ...]:
    if which is None:
        return ()
    if isinstance(which, int):
        return (which,)
    return tuple(which)


class MeteredRun:
    """One read-only head plus a declared number of audited counters.

    A step bundles one optional head move with at most one operation per
    counter, mirroring a counter-machine transition.  Counters live in
    [0, n]; leaving that range faults the run.
    """

    def __init__(self, word: str, counters: int):
        if LEFT_MARKER in word or RIGHT_MARKER in word:
            raise ProgramFault("end-markers cannot occur in the input")
        self.word = word
        self.n = len(word)
        self.pos = 1
        self.counters = [0] * counters
        self.max_counters = [0] * counters
        self.steps = 0
        self.marks: list[tuple[str, int, tuple[int, ...]]] = []

    # observation is free: it feeds the transition lookup

    def read(self, pos: int | None = None) -> str:
        p = self.pos if pos is None else pos
        if p == 0:
            return LEFT_MARKER
        if p == self.n + 1:
            return RIGHT_MARKER
        return self.word[p - 1]

    def value(self, c: int) -> int:
        return self.counters[c]

    def mark(self, label: str) -> None:
        self.marks.append((label, self.steps, tuple(self.counters)))

    def _apply(self, c: int, delta: int) -> None:
        v = self.counters[c] + delta
        if v < 0:
            raise ProgramFault(f"counter {c + 1} decremented below zero")
        if v > self.n:
            raise ProgramFault(f"counter {c + 1} exceeded the input length {self.n}")
        self.counters[c] = v
        if v > self.max_counters[c]:
            self.max_counters[c] = v

    def step(self, move: int = 0, inc=None, dec=None) -> None:
        """One machine step: an optional move plus counter operations."""
        if move:
            new = self.pos + move
            if not 0 <= new <= self.n + 1:
                raise ProgramFault("head driven off the tape")
            self.pos = new
        for c in _as_ops(inc):
            self._apply(c, 1)
        for c in _as_ops(dec):
            self._apply(c, -1)
        self.steps += 1

    def walk(self, move: int, dist: int, inc=None, dec=None, every: int = 1) -> None:
        """``dist`` steps of ``move``, applying the counter ops on every
        ``every``-th step (counting from 1).  Steps exactly as the loop."""
        if dist < 0:
            raise ProgramFault("negative walk distance")
        if dist == 0:
            return
        if move:
            new = self.pos + move * dist
            if not 0 <= new <= self.n + 1:
                raise ProgramFault("head driven off the tape")
            self.pos = new
        ops = dist // every
        for c in _as_ops(inc):
            self._apply(c, ops)
        for c in _as_ops(dec):
            self._apply(c, -ops)
        self.steps += dist

    def drain(self, c: int, move: int = 0) -> int:
        """Decrement counter c to zero, optionally moving each step."""
        v = self.counters[c]
        self.walk(move, v, dec=c)
        return v

    def transfer(self, src: int, dst: int) -> int:
        """dst += src, emptying src; one step per unit."""
        v = self.counters[src]
        self.counters[src] = 0
        self._apply(dst, v)
        self.steps += v
        return v

    def double_into(self, src: int, dst: int) -> int:
        """dst += 2 * src, emptying src; two steps per unit."""
        v = self.counters[src]
        self.counters[src] = 0
        self._apply(dst, 2 * v)
        self.steps += 2 * v
        return v

    def halve_into(self, src: int, dst: int) -> int:
        """dst += src // 2, emptying src; one step per unit.  Returns the
        parity, i.e. the leftover unit when src was odd."""
        v = self.counters[src]
        self.counters[src] = 0
        self._apply(dst, v // 2)
        self.steps += v
        return v % 2


@dataclass
class CounterProgram:
    """An executable counter procedure with a declared counter budget."""

    name: str
    counters: int
    procedure: Callable[[str], RunResult]
    params: dict = field(default_factory=dict)

    def __call__(self, word: str) -> RunResult:
        return self.procedure(word)


def _run_program(word: str, counters: int, body) -> RunResult:
    vm = MeteredRun(word, counters)
    try:
        body(vm)
    except _Reject as rej:
        trace = Trace(max_counters=list(vm.max_counters), head_moves=[vm.steps])
        return RunResult(Verdict.REJECT, vm.steps, str(rej), trace)
    except ProgramFault as fault:
        trace = Trace(max_counters=list(vm.max_counters), violations=[str(fault)])
        return RunResult(Verdict.FAULT, vm.steps, str(fault), trace)
    trace = Trace(max_counters=list(vm.max_counters), head_moves=[vm.steps])
    trace.op_counts["marks"] = len(vm.marks)
    result = RunResult(Verdict.ACCEPT, vm.steps, "accepted", trace)
    result.marks = vm.marks
    return result


# ---------------------------------------------------------------------------
# {ww} with one counter


def ww_accept(word: str) -> RunResult:
    """Accept binary squares ww using a single counter."""

    def body(vm: MeteredRun) -> None:
        n = vm.n
        for p in range(1, n + 1):  # parity sweep also spots foreign symbols
            if vm.read(p) not in BITS:
                vm.walk(1, p - vm.pos)
                raise _Reject("input symbol outside the binary alphabet")
        vm.walk(1, n + 1 - vm.pos)
        if n % 2 == 1:
            raise _Reject("odd length")
        half = n // 2
        if half == 0:
            return  # the empty word is a square
        vm.walk(-1, n)  # stand on the first symbol
        c = 0
        for i in range(1, half + 1):
            sym = vm.read()
            vm.walk(-1, i, inc=c)  # bank the distance to the left marker
            # sweep the tape, incrementing every second step: the counter
            # now holds the partner offset i + n/2
            vm.walk(1, n + 1, inc=c, every=2)
            vm.walk(-1, n + 1)
            vm.walk(1, vm.value(c), dec=c)  # spend the offset
            if vm.read() != sym:
                raise _Reject(f"mismatch at position {i}")
            # reverse the computation to recover position i
            vm.walk(-1, i + half, inc=c)
            vm.walk(1, n + 1, dec=c, every=2)
            vm.walk(-1, n + 1)
            vm.walk(1, vm.value(c), dec=c)
            vm.step(1)  # advance to the next symbol

    return _run_program(word, 1, body)


# ---------------------------------------------------------------------------
# marked palindromes with two counters


def palindrome_2c_accept(word: str) -> RunResult:
    """Accept marked palindromes x$x^T over {0,1} with two counters."""

    def body(vm: MeteredRun) -> None:
        n = vm.n
        for p in range(1, n + 1):
            if vm.read(p) not in ("0", "1", "$"):
                vm.walk(1, p - vm.pos)
                raise _Reject("input symbol outside the alphabet")
        marker = vm.word.find("$")
        if marker < 0:
            vm.walk(1, n + 1 - vm.pos)
            raise _Reject("no marker found")
        d = marker + 1
        vm.walk(1, d - vm.pos, inc=0)  # count the symbols before the marker
        second = vm.word.find("$", d)
        if second >= 0:
            vm.walk(1, min(second + 1, d + vm.value(0)) - vm.pos, dec=0)
            raise _Reject("second marker")
        left, right = d - 1, n - d
        if right > left:
            vm.walk(1, left, dec=0)
            raise _Reject("right part longer")
        vm.walk(1, right, dec=0)
        if left != right:
            raise _Reject("left part longer")
        vm.step(1)  # confirm the zero on the right end-marker
        ell = left
        vm.walk(-1, n)  # back to the first symbol

        enc, spare = 0, 1

        def survives_excursions(left_stop: int, right_stop: int) -> bool:
            # attempted subtraction of both boundary distances, restored
            # after each excursion, aborted early once the encoding empties
            for direction, stop in ((-1, left_stop), (1, right_stop)):
                dist = (vm.pos - stop) if direction < 0 else (stop - vm.pos)
                out = min(vm.value(enc), dist)
                vm.walk(direction, out, dec=enc, inc=spare)
                survived = vm.value(enc) > 0
                vm.walk(-direction, out, inc=enc, dec=spare)
                if not survived:
                    return False
            return True

        while True:
            if vm.read() == "$":
                return  # every segment of x matched its mirror
            vm.step(inc=enc)  # sentinel 1
            while True:  # pack bits until the encoding outgrows the distances
                sym = vm.read()
                if sym == "$":
                    break
                vm.double_into(enc, spare)
                enc, spare = spare, enc
                if sym == "1":
                    vm.step(inc=enc)
                vm.mark("doubled")
                vm.step(1)
                if survives_excursions(0, d):
                    break
            # move to the mirror square of the last packed bit
            vm.walk(1, d - vm.pos, inc=spare)
            vm.walk(1, vm.value(spare), dec=spare)
            vm.step(1)
            # decode against the mirrored segment, low bit first
            while True:
                parity = vm.halve_into(enc, spare)
                enc, spare = spare, enc
                if vm.value(enc) == 0:
                    break  # the sentinel came off: segment fully compared
                if vm.read() != ("1" if parity else "0"):
                    raise _Reject(f"mirror mismatch at position {vm.pos}")
                vm.step(1)
            vm.step(-1, inc=enc)  # fresh sentinel, standing on the last bit
            while True:  # re-encode from the mirror side to find the way back
                sym = vm.read()
                if sym == "$":
                    break
                vm.double_into(enc, spare)
                enc, spare = spare, enc
                if sym == "1":
                    vm.step(inc=enc)
                vm.step(-1)
                if survives_excursions(d, n + 1):
                    break
            # the symmetric stopping rule packed exactly the same bits, so
            # spending the marker distance lands on the next segment start
            vm.walk(-1, vm.pos - d, inc=spare)
            vm.walk(-1, vm.value(spare), dec=spare)
            vm.drain(enc)

    return _run_program(word, 2, body)


# ---------------------------------------------------------------------------
# the log-information family with four counters


def lm_accept(m: int, word: str) -> RunResult:
    """Accept x 0^(2^(|x|/m)-|x|) $ 0^(2^(|x|/m)-|x|) x^T with four counters."""
    if m < 1:
        raise ValueError("the family parameter m must be >= 1")

    def body(vm: MeteredRun) -> None:
        n = vm.n
        A, B, C, D = 0, 1, 2, 3
        for p in range(1, n + 1):
            if vm.read(p) not in ("0", "1", "$"):
                vm.walk(1, p - vm.pos)
                raise _Reject("input symbol outside the alphabet")
        marker = vm.word.find("$")
        if marker < 0:
            vm.walk(1, n + 1 - vm.pos)
            raise _Reject("no marker found")
        d = marker + 1
        h = d - 1
        # first scan: cancel the halves on A while banking the length on B
        vm.walk(1, d - vm.pos, inc=(A, B))
        second = vm.word.find("$", d)
        if second >= 0:
            vm.walk(1, min(second + 1, d + vm.value(A)) - vm.pos, dec=A)
            raise _Reject("second marker")
        right = n - d
        if right > h:
            vm.walk(1, h, dec=A)
            raise _Reject("right part longer")
        vm.walk(1, right, dec=A)
        if right != h:
            raise _Reject("left part longer")
        vm.step(1)  # zero confirmed on the right end-marker
        if h == 0:
            raise _Reject("empty left part")
        # halving cascade: D becomes log2(h); non-powers of two die here
        src, dst = B, C
        while True:
            parity = vm.halve_into(src, dst)
            if parity:
                if vm.value(dst) != 0:
                    raise _Reject("half length is not a power of two")
                break
            vm.step(inc=D)
            src, dst = dst, src
        q = vm.value(D)
        # A := m * q = |x|, preserving q on C
        while vm.value(D) > 0:
            vm.step(dec=D, inc=(A, C))
            for _ in range(m - 1):
                vm.step(inc=A)
        L = m * q
        if vm.value(A) != L or vm.value(C) != q:
            raise ProgramFault("length bookkeeping out of step")
        # right-to-left: skip x^T, then count the right desert onto D;
        # a half length smaller than |x| runs into the marker and rejects
        while vm.value(A) > 0:
            vm.step(-1, dec=A)
            if vm.read() in (LEFT_MARKER, "$"):
                raise _Reject("right part shorter than |x|")
        while True:
            vm.step(-1, inc=D)
            sym = vm.read()
            if sym == "0":
                continue
            if sym == "$":
                vm.step(dec=D)  # the marker itself was not a desert square
                break
            raise _Reject("right desert contains a one")
        # left desert: exactly as many zeros
        while vm.value(D) > 0:
            vm.step(-1, dec=D)
            if vm.read() != "0":
                raise _Reject("left desert mismatch")
        if L == 0:
            return  # x is empty and everything is verified
        vm.walk(-1, vm.pos)  # to the left end-marker
        vm.step(1)
        # 2m alternating block iterations, one tape crossing each
        for j in range(2 * m):
            outward = j % 2 == 0  # pack on the left half, compare right
            size = (q + 1) // 2 if outward else q // 2
            step_dir = 1 if outward else -1
            if size == 0:
                # nothing to pack: just mirror the frontier across the marker
                toward = -1 if vm.pos > d else 1
                vm.walk(toward, abs(vm.pos - d), inc=D)
                vm.walk(toward, vm.value(D), dec=D)
                continue
            # block size: C -> D halved, rounding up on outward iterations,
            # then rebuilt so C ends at q again and A holds the size
            parity = vm.halve_into(C, D)
            if outward and parity:
                vm.step(inc=D)
            while vm.value(D) > 0:
                vm.step(dec=D, inc=(A, C))
                vm.step(inc=C)
            if parity:
                if outward:
                    vm.step(dec=C)
                else:
                    vm.step(inc=C)
            if vm.value(C) != q or vm.value(A) != size:
                raise ProgramFault("block-size bookkeeping out of step")
            # pack `size` bits, counting them off A
            enc, scratch = B, D
            vm.step(inc=enc)  # sentinel
            while vm.value(A) > 0:
                sym = vm.read()
                if sym not in BITS:
                    raise _Reject("expected a bit while packing a block")
                vm.double_into(enc, scratch)
                enc, scratch = scratch, enc
                if sym == "1":
                    vm.step(inc=enc)
                vm.step(step_dir, dec=A)
            if enc != B:
                vm.transfer(enc, B)
                enc, scratch = B, D
            # cross to the partner half: spend the marker distance plus one
            dist = (d - vm.pos) if outward else (vm.pos - d)
            vm.walk(step_dir, dist, inc=D)
            vm.walk(step_dir, vm.value(D), dec=D)
            vm.step(step_dir)
            # compare low bit first, walking back towards the marker's far side
            while True:
                parity_bit = vm.halve_into(enc, scratch)
                enc, scratch = scratch, enc
                if vm.value(enc) == 0:
                    break
                if vm.read() != ("1" if parity_bit else "0"):
                    raise _Reject("mirror mismatch")
                vm.step(step_dir)
            # stand on this side's next unread square
            vm.walk(-step_dir, size + 1)

    return _run_program(word, 4, body)


def lm_program(m: int) -> CounterProgram:
    return CounterProgram(
        name=f"lm[{m}]",
        counters=4,
        procedure=lambda word: lm_accept(m, word),
        params={"m": m},
    )


WW_PROGRAM = CounterProgram("ww", 1, ww_accept)
PALINDROME_PROGRAM = CounterProgram("palindrome2c", 2, palindrome_2c_accept)


# ---------------------------------------------------------------------------
# measurement


@dataclass
class StepSeries:
    """Step-count samples (input length, steps, verdict) at increasing n."""

    samples: list[tuple[int, int, str]] = field(default_factory=list)

    def append(self, n: int, steps: int, verdict: str) -> None:
        if self.samples and n <= self.samples[-1][0]:
            raise ValueError("sample lengths must be strictly increasing")
        self.samples.append((n, steps, verdict))

    def normalized(self, scale: Callable[[int], float]) -> list[float]:
        return [steps * scale(n) for n, steps, _ in self.samples]


def measure_steps(program: CounterProgram, inputs: Iterable[str]) -> StepSeries:
    """Run a counter program over inputs of strictly increasing length."""
    series = StepSeries()
    for word in inputs:
        result = program(word)
        series.append(len(word), result.steps, result.verdict.value)
    return series


# canonical accepted families used by the benchmarks


def ww_family_word(n: int) -> str:
    if n % 2:
        raise ValueError("square words have even length")
    half = ("01" * (n // 4 + 1))[: n // 2]
    return half + half


def palindrome_zeros_word(n: int) -> str:
    if n % 2 == 0:
        raise ValueError("marked palindromes have odd length")
    j = (n - 1) // 2
    return "0" * j + "$" + "0" * j


def palindrome_random_word(n: int, seed: int = 7) -> str:
    if n % 2 == 0:
        raise ValueError("marked palindromes have odd length")
    rng = random.Random(seed * 1_000_003 + n)
    x = "".join(rng.choice(BITS) for _ in range((n - 1) // 2))
    return x + "$" + x[::-1]


def lm_member_word(m: int, q: int, alternate: bool = True) -> str:
    """The member with |x| = m*q and half length 2^q; needs 2^q >= m*q."""
    L = m * q
    h = 2**q
    if h < L:
        raise ValueError("2^q must cover |x| = m*q")
    x = ("10" * L)[:L] if alternate else "1" * L
    pad = "0" * (h - L)
    return x + pad + "$" + pad + x[::-1]
