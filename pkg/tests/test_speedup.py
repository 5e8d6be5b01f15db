import random

import pytest

from headcount import zoo
from headcount.bounded import (
    BoundDescriptor,
    enumerate_bounded_inputs,
    fine_wilf_threshold,
    matches_bound,
)
from headcount.machines import MachineError, Verdict, run_cm
from headcount.speedup import (
    CompressedCounter,
    EncodedInput,
    Literal,
    Run,
    decode_encoded_input,
    encode_bounded_input,
    run_on_encoding,
    speedup_bound_constant,
    speedup_factor,
    speedup_run,
)

from reference import all_words


def minimal_borders(word: str, bound: BoundDescriptor) -> list[int]:
    """Greedy-minimal consistent stage borders: after block i the factor
    w1^k1 ... wi^ki covers word[:borders[i]], choosing each k_i as small as
    possible while the remainder still completes."""
    borders = []
    pos = 0
    for i, w in enumerate(bound.words):
        rest = BoundDescriptor(bound.words[i + 1 :]) if i + 1 < len(bound.words) else None
        t = 0
        while True:
            end = pos + t * len(w)
            if end > len(word) or word[pos:end] != w * t:
                raise AssertionError("no consistent factorization found")
            remainder = word[end:]
            if (remainder == "" if rest is None else matches_bound(remainder, rest)):
                if rest is not None or remainder == "":
                    pos = end
                    break
            t += 1
        borders.append(pos)
    return borders


def random_bound(rng) -> BoundDescriptor:
    m = rng.randint(1, 3)
    words = []
    for _ in range(m):
        length = rng.randint(1, 3)
        words.append("".join(rng.choice("ab") for _ in range(length)))
    return BoundDescriptor(tuple(words))


def random_bounded_word(rng, bound, max_reps=6) -> str:
    return "".join(w * rng.randint(0, max_reps) for w in bound.words)


def test_encode_examples():
    enc = encode_bounded_input("ababcc", BoundDescriptor(("ab", "c")))
    # stage 1 counts the ab-copies; stage 2 hits the input end, so its short
    # probe "cc" is recorded verbatim in the finite control
    assert enc.items == [Run("ab", 2), Literal("cc")]
    assert decode_encoded_input(enc) == "ababcc"
    enc = encode_bounded_input("aaaa", BoundDescriptor(("a",)))
    assert enc.items == [Run("a", 4)]
    enc = encode_bounded_input("", BoundDescriptor(("a", "b")))
    assert enc.items == []
    assert decode_encoded_input(enc) == ""


def test_encode_rejects_non_bound_input():
    with pytest.raises(MachineError):
        encode_bounded_input("ba", BoundDescriptor(("a", "b")))


def test_encode_literals_on_probe_mismatch():
    # abba fits (ab)*(ba)* but no rotation power matches the 4-symbol probe
    enc = encode_bounded_input("abba", BoundDescriptor(("ab", "ba")))
    assert decode_encoded_input(enc) == "abba"
    assert all(isinstance(item, Literal) for item in enc.items)
    assert all(len(item.text) <= 2 * 2 for item in enc.items)


def test_encode_roundtrip_and_invariants_random():
    rng = random.Random(2026)
    for _ in range(2000):
        bound = random_bound(rng)
        word = random_bounded_word(rng, bound)
        enc = encode_bounded_input(word, bound)
        assert decode_encoded_input(enc) == word, (bound.words, word)
        assert len(enc.run_items()) <= bound.m
        mu = bound.mu
        for item in enc.items:
            if isinstance(item, Literal):
                assert len(item.text) <= 2 * mu
        borders = minimal_borders(word, bound)
        for i, border in enumerate(borders):
            assert enc.stage_ends[i] >= border, (bound.words, word, enc.stage_ends, borders)
        assert enc.reads <= len(word) + 3 * bound.m * mu


def test_probe_length_covers_fine_wilf_threshold():
    # the 2*mu probe is long enough for any rotation/word period pair
    for mu in range(1, 8):
        for h in range(1, mu + 1):
            for k in range(1, mu + 1):
                assert 2 * mu >= fine_wilf_threshold(h, k)


def test_compressed_counter_matches_shadow():
    rng = random.Random(4)
    for factor in (2, 3, 8):
        counter = CompressedCounter(factor)
        shadow = 0
        for _ in range(2000):
            delta = rng.choice((1, 1, 1, -1)) if shadow > 0 else 1
            counter.add(delta)
            shadow += delta
            assert counter.value() == shadow
            assert counter.quotient * factor + counter.remainder == shadow
            assert 0 <= counter.remainder < factor
            assert counter.is_zero() == (shadow == 0)


AB = BoundDescriptor(("a", "b"))


def test_run_on_encoding_matches_direct_runs():
    machines = list(zoo.cm_suite().values()) + [zoo.zigzag_one_counter()]
    for machine in machines:
        for word in enumerate_bounded_inputs(AB, 14):
            enc = encode_bounded_input(word, AB)
            direct = run_cm(machine, word, limit=200_000)
            sim = run_on_encoding(machine, enc, limit=200_000)
            assert sim.verdict == direct.verdict, (machine.start, word)
            assert sim.steps == direct.steps, (machine.start, word)


def test_run_on_encoding_empty_input():
    enc = encode_bounded_input("", AB)
    m = zoo.anbn_one_counter()
    assert run_on_encoding(m, enc).verdict == run_cm(m, "").verdict


def test_run_on_encoding_turbo_matches_plain():
    m = zoo.zigzag_one_counter()
    for word in enumerate_bounded_inputs(AB, 12):
        enc = encode_bounded_input(word, AB)
        plain = run_on_encoding(m, enc, limit=100_000)
        fast = run_on_encoding(m, enc, limit=100_000, turbo=True)
        assert plain.verdict == fast.verdict, word
        assert plain.steps == fast.steps, word


def test_speedup_factor_and_errors():
    assert speedup_factor(1.0) == 4  # identity-ish compression: d equals the unit cost
    assert speedup_factor(0.5) == 8
    with pytest.raises(MachineError):
        speedup_factor(0)
    with pytest.raises(MachineError):
        speedup_factor(1e-12)


def test_speedup_verdicts_match_direct_runs():
    m = zoo.zigzag_one_counter()
    for word in enumerate_bounded_inputs(AB, 12):
        direct = run_cm(m, word, limit=300_000)
        for c in (1.0, 0.5):
            report = speedup_run(m, AB, word, c, limit=300_000)
            assert report.result.verdict == direct.verdict, (word, c)
            assert report.raw_steps == direct.steps, (word, c)


def test_speedup_accounting_bound():
    m = zoo.zigzag_one_counter()
    K = speedup_bound_constant(AB)
    for half in (16, 32, 64):
        word = "a" * half + "b" * half
        n = len(word)
        direct = run_cm(m, word, limit=50_000_000, turbo=True)
        report = speedup_run(m, AB, word, 0.5, limit=50_000_000)
        assert report.result.verdict is Verdict.ACCEPT
        assert report.raw_steps == direct.steps
        assert report.accounting_steps <= n + 0.5 * direct.steps + K
        # the pipeline genuinely beats running flat-out for quadratic time
        assert report.accounting_steps < direct.steps


def test_speedup_report_serialization():
    report = speedup_run(zoo.zigzag_one_counter(), AB, "aabb", 0.5)
    doc = report.to_dict()
    for key in ("verdict", "steps", "raw_steps", "encode_reads", "factor", "units", "accounting_steps"):
        assert key in doc
