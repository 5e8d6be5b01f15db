import math
import random

import pytest

from headcount.acceptors import (
    PALINDROME_PROGRAM,
    WW_PROGRAM,
    MeteredRun,
    ProgramFault,
    lm_accept,
    lm_member_word,
    lm_program,
    measure_steps,
    palindrome_2c_accept,
    palindrome_random_word,
    palindrome_zeros_word,
    ww_accept,
    ww_family_word,
)
from headcount.bounded import LanguageId, oracle_membership
from headcount.machines import Verdict

from reference import all_words


def test_metered_run_audits_budget_and_bounds():
    vm = MeteredRun("abc", 1)
    vm.step(1, inc=0)
    assert vm.steps == 1 and vm.counters == [1]
    with pytest.raises(ProgramFault):
        vm.step(dec=0), vm.step(dec=0)
    vm2 = MeteredRun("a", 1)
    vm2.step(inc=0)
    with pytest.raises(ProgramFault):
        vm2.step(inc=0)  # beyond the input length


def test_metered_bulk_matches_single_steps():
    a = MeteredRun("aaaaaa", 2)
    b = MeteredRun("aaaaaa", 2)
    a.walk(1, 5, inc=0, every=2)
    for i in range(1, 6):
        b.step(1, inc=0 if i % 2 == 0 else None)
    assert (a.pos, a.steps, a.counters) == (b.pos, b.steps, b.counters)


# {ww}


def test_ww_examples():
    assert ww_accept("0101").accepted
    assert not ww_accept("01").accepted
    assert ww_accept("").accepted
    assert ww_accept("").steps == 0
    assert not ww_accept("aba").accepted


def test_ww_matches_oracle_exhaustively():
    lang = LanguageId("WW")
    for word in all_words("01", 10):
        res = ww_accept(word)
        assert res.accepted == oracle_membership(lang, word), word
        assert len(res.trace.max_counters) == 1
        assert res.trace.max_counters[0] <= len(word)


# marked palindromes


def test_palindrome_examples():
    assert palindrome_2c_accept("01$10").accepted
    assert not palindrome_2c_accept("01$01").accepted
    assert palindrome_2c_accept("$").accepted
    assert palindrome_2c_accept("0$0").accepted
    assert not palindrome_2c_accept("0110").accepted
    assert not palindrome_2c_accept("0$1$0").accepted


def test_palindrome_matches_oracle_exhaustively():
    lang = LanguageId("L")
    for word in all_words("01$", 9):
        res = palindrome_2c_accept(word)
        assert res.accepted == oracle_membership(lang, word), word
        assert len(res.trace.max_counters) == 2
        assert max(res.trace.max_counters, default=0) <= len(word)


def test_palindrome_random_members_and_mutations():
    rng = random.Random(5)
    lang = LanguageId("L")
    for _ in range(300):
        x = "".join(rng.choice("01") for _ in range(rng.randrange(12)))
        word = x + "$" + x[::-1]
        assert palindrome_2c_accept(word).accepted
        if word != "$":
            pos = rng.randrange(len(word))
            flip = {"0": "1", "1": "0", "$": "0"}[word[pos]]
            broken = word[:pos] + flip + word[pos + 1:]
            assert palindrome_2c_accept(broken).accepted == oracle_membership(lang, broken)


def test_palindrome_doubling_leaves_one_counter_empty():
    res = palindrome_2c_accept(palindrome_random_word(41))
    assert res.accepted
    for label, _, counters in res.marks:
        if label == "doubled":
            assert min(counters) == 0


def test_palindrome_growth_order():
    # T(n) * log2(n) / n^2 should be flat-ish across a doubling range
    series = measure_steps(
        PALINDROME_PROGRAM, [palindrome_zeros_word(2**e + 1) for e in range(7, 12)]
    )
    assert all(v == "accept" for _, _, v in series.samples)
    normal = series.normalized(lambda n: math.log2(n) / n**2)
    assert max(normal) / min(normal) <= 4.0


# the log-information family


def test_lm_examples():
    assert lm_accept(1, "1100$0011").accepted
    assert not lm_accept(1, "1100$0010").accepted
    assert lm_accept(1, "0$0").accepted
    assert lm_accept(1, "10$01").accepted
    assert not lm_accept(1, "$").accepted
    assert lm_accept(2, "11$11").accepted


def test_lm_matches_oracle_exhaustively():
    lang = LanguageId("Lm", m=1)
    for word in all_words("01$", 9):
        res = lm_accept(1, word)
        assert res.accepted == oracle_membership(lang, word), word
        assert len(res.trace.max_counters) == 4


def test_lm_members_and_near_misses():
    rng = random.Random(9)
    for m in (1, 2):
        lang = LanguageId("Lm", m=m)
        for q in range(0, 5):
            if 2**q < m * q:
                continue
            word = lm_member_word(m, q)
            assert lm_accept(m, word).accepted, (m, q)
            assert oracle_membership(lang, word)
            for _ in range(40):
                broken = _mutate(rng, word)
                assert lm_accept(m, broken).accepted == oracle_membership(lang, broken), (
                    m,
                    q,
                    broken,
                )


def _mutate(rng, word):
    choice = rng.randrange(3)
    if choice == 0 and word:
        pos = rng.randrange(len(word))
        return word[:pos] + rng.choice("01$") + word[pos + 1:]
    if choice == 1 and word:
        pos = rng.randrange(len(word))
        return word[:pos] + word[pos + 1:]
    pos = rng.randrange(len(word) + 1)
    return word[:pos] + rng.choice("01$") + word[pos:]


def test_lm_step_bound_band():
    prog = lm_program(1)
    series = measure_steps(prog, [lm_member_word(1, q) for q in range(6, 14)])
    assert all(v == "accept" for _, _, v in series.samples)
    n_last, steps_last, _ = series.samples[-1]
    assert n_last >= 2**14
    assert steps_last / n_last <= 5.5
    assert steps_last / n_last > 1 / 13


def test_measure_steps_requires_increasing_lengths():
    series = measure_steps(WW_PROGRAM, [])
    assert series.samples == []
    with pytest.raises(ValueError):
        measure_steps(WW_PROGRAM, [ww_family_word(4), ww_family_word(2)])


def test_family_builders():
    assert ww_family_word(8) == "01010101"
    assert oracle_membership(LanguageId("WW"), ww_family_word(12))
    assert oracle_membership(LanguageId("L"), palindrome_zeros_word(9))
    assert oracle_membership(LanguageId("L"), palindrome_random_word(31))
    assert oracle_membership(LanguageId("Lm", m=2), lm_member_word(2, 3))
