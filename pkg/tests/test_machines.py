import random

import pytest

from headcount import zoo
from headcount.machines import (
    DEC,
    INC,
    NOP,
    CounterMachine,
    MachineError,
    MultiHeadAutomaton,
    RegisterMachine,
    Tape,
    Verdict,
    coincidence_partition,
    run_cm,
    run_mha,
    run_rm,
)

from reference import all_words, reference_cm, reference_mha, reference_rm


def test_tape_positions_and_markers():
    t = Tape("abc")
    assert t.symbol(0) == "<"
    assert t.symbol(4) == ">"
    assert [t.symbol(i) for i in (1, 2, 3)] == ["a", "b", "c"]
    with pytest.raises(MachineError):
        t.symbol(5)
    with pytest.raises(MachineError):
        Tape("a<b")


def test_coincidence_partition_canonical():
    assert coincidence_partition([5, 3, 5]) == (0, 1, 0)
    assert coincidence_partition([1, 1, 1]) == (0, 0, 0)
    assert coincidence_partition([2, 4, 6]) == (0, 1, 2)


def accept_at_start_machine():
    return MultiHeadAutomaton(
        states=frozenset({"q"}),
        start="q",
        accepting=frozenset({"q"}),
        k=1,
        alphabet=frozenset("a"),
        transitions={},
    )


def test_accept_at_start_zero_steps():
    res = run_mha(accept_at_start_machine(), "a")
    assert res.verdict is Verdict.ACCEPT
    assert res.steps == 0


def test_anbn_two_head_verdicts():
    m = zoo.anbn_two_head()
    assert run_mha(m, "aabb").accepted
    assert not run_mha(m, "aab").accepted
    assert run_mha(m, "").accepted
    assert not run_mha(m, "ba").accepted


def test_zoo_machine_languages():
    anbn = zoo.anbn_two_head()
    for word in all_words("ab", 8):
        want = word == "a" * (len(word) // 2) + "b" * (len(word) // 2) and len(word) % 2 == 0
        assert run_mha(anbn, word).accepted == want, word
    anbncn = zoo.anbncn_three_head()
    for word in all_words("abc", 6):
        n3 = len(word) // 3
        want = len(word) % 3 == 0 and word == "a" * n3 + "b" * n3 + "c" * n3
        assert run_mha(anbncn, word).accepted == want, word
    for n in range(4):
        assert run_mha(anbncn, "a" * n + "b" * n + "c" * n).accepted
    anb2n = zoo.anb2n_two_head()
    for word in all_words("ab", 7):
        n = len(word) // 3
        want = len(word) % 3 == 0 and word == "a" * n + "b" * (2 * n)
        assert run_mha(anb2n, word).accepted == want, word
    for m, lang in [
        (zoo.anbn_one_counter(), lambda w: w == "a" * (len(w) // 2) + "b" * (len(w) // 2) and len(w) % 2 == 0),
        (zoo.equal_counts_one_counter(), lambda w: w.count("a") == w.count("b")),
        (zoo.anb2n_two_counter(), lambda w: len(w) % 3 == 0 and w == "a" * (len(w) // 3) + "b" * (2 * len(w) // 3)),
        (zoo.zigzag_one_counter(), lambda w: w == "a" * w.count("a") + "b" * w.count("b")),
    ]:
        for word in all_words("ab", 7):
            assert run_cm(m, word, limit=100_000).accepted == lang(word), (m.start, word)


def test_mha_agrees_with_reference_simulator():
    for m in zoo.mha_suite().values():
        for word in all_words(sorted(m.alphabet), 7):
            got = run_mha(m, word).verdict.value
            want = reference_mha(m, word)
            assert got == want, (word, got, want)


def test_missing_transition_rejects_in_place():
    m = zoo.anbn_two_head()
    res = run_mha(m, "ba")
    assert res.verdict is Verdict.REJECT
    assert res.reason == "no transition"


def test_head_off_tape_faults():
    m = MultiHeadAutomaton(
        states=frozenset({"q"}),
        start="q",
        accepting=frozenset(),
        k=1,
        alphabet=frozenset("a"),
        transitions={("q", ("<",)): ("q", (-1,)), ("q", ("a",)): ("q", (-1,))},
    )
    res = run_mha(m, "a")
    assert res.verdict is Verdict.FAULT
    assert res.reason == "head off tape"


def test_loop_detection_rejects():
    # One head bouncing between two squares forever.
    m = MultiHeadAutomaton(
        states=frozenset({"p", "q"}),
        start="p",
        accepting=frozenset(),
        k=1,
        alphabet=frozenset("a"),
        transitions={
            ("p", ("a",)): ("q", (1,)),
            ("q", ("a",)): ("p", (-1,)),
            ("q", (">",)): ("p", (-1,)),
        },
    )
    res = run_mha(m, "aa")
    assert res.verdict is Verdict.REJECT
    assert res.reason == "loop"
    # with tracking disabled the same run times out
    res = run_mha(m, "aa", limit=50, loop_check=False)
    assert res.verdict is Verdict.TIMEOUT


def test_runs_are_reproducible():
    m = zoo.anbncn_three_head()
    a = run_mha(m, "aabbcc", record=True)
    b = run_mha(m, "aabbcc", record=True)
    assert a.to_dict() == b.to_dict()
    assert a.history == b.history


def test_head_positions_stay_in_range():
    m = zoo.anb2n_two_head()
    res = run_mha(m, "aabbbb", record=True)
    n = 6
    for cfg in res.history:
        assert all(0 <= p <= n + 1 for p in cfg.positions)


# counter machines


def test_out_and_back_counter_machine():
    m = zoo.out_and_back_one_counter()
    res = run_cm(m, "aa")
    assert res.accepted
    assert res.trace.max_counters == [2]
    assert res.trace.max_counters[0] <= 2


def test_cm_agrees_with_reference():
    for m in zoo.cm_suite().values():
        for word in all_words("ab", 8):
            got = run_cm(m, word).verdict.value
            want = reference_cm(m, word)
            assert got == want, (word, got, want)


def test_cm_missing_transition_halts():
    m = zoo.anbn_one_counter()
    res = run_cm(m, "ba")
    assert res.verdict is Verdict.REJECT
    assert res.steps == 0


def test_dec_on_zero_is_fault():
    m = CounterMachine(
        states=frozenset({"q"}),
        start="q",
        accepting=frozenset(),
        k=1,
        alphabet=frozenset("a"),
        transitions={("q", "a", (True,)): ("q", 0, (DEC,))},
    )
    res = run_cm(m, "a")
    assert res.verdict is Verdict.FAULT
    assert res.reason == "dec on zero"


def overflow_probe(policy):
    # increments forever at the right end; overflows once the counter hits n
    t = {
        ("q", "a", (True,)): ("q", 0, (INC,)),
        ("q", "a", (False,)): ("q", 0, (INC,)),
    }
    if policy == "signal":
        t = {(k[0], k[1], k[2], False): v for k, v in t.items()}
        t[("q", "a", (False,), True)] = ("hit", 0, (NOP,))
    return CounterMachine(
        states=frozenset({"q", "hit"}),
        start="q",
        accepting=frozenset({"hit"}),
        k=1,
        alphabet=frozenset("a"),
        transitions=t,
        overflow_policy=policy,
    )


def test_overflow_simple_clamps():
    res = run_cm(overflow_probe("simple"), "a", limit=10)
    # counter sticks at n=1, configuration repeats, run rejects
    assert res.verdict is Verdict.REJECT
    assert res.reason == "loop"
    assert res.trace.max_counters == [1]


def test_overflow_block_faults():
    res = run_cm(overflow_probe("block"), "a", limit=10)
    assert res.verdict is Verdict.FAULT
    assert res.reason == "counter overflow"


def test_overflow_signal_flags_next_lookup():
    res = run_cm(overflow_probe("signal"), "a", limit=10)
    assert res.verdict is Verdict.ACCEPT
    # inc to n, clamped inc raising the flag, flagged lookup moves to the accept state
    assert res.steps == 3


def test_cm_turbo_matches_plain():
    for m in list(zoo.cm_suite().values()) + [zoo.zigzag_one_counter()]:
        for word in all_words("ab", 6):
            plain = run_cm(m, word)
            fast = run_cm(m, word, turbo=True)
            assert plain.verdict == fast.verdict, (word, plain.verdict, fast.verdict)
            assert plain.steps == fast.steps, word


def test_zigzag_time_is_quadratic():
    m = zoo.zigzag_one_counter()
    steps = {}
    for n in (8, 16, 32):
        word = "a" * (n // 2) + "b" * (n // 2)
        res = run_cm(m, word, limit=10_000_000, turbo=True)
        assert res.accepted
        steps[n] = res.steps
    for n in (8, 16):
        ratio = steps[2 * n] / steps[n]
        assert 3.0 < ratio < 5.0  # quadratic growth doubles to ~4x


# register machines


def test_even_register_machine():
    m = zoo.even_register_machine()
    assert run_rm(m, 4).accepted
    assert not run_rm(m, 5).accepted
    for n in range(12):
        assert run_rm(m, n).accepted == (n % 2 == 0)
        assert run_rm(m, n).verdict.value == reference_rm(m, n)


def test_register_zero_input_accepts_immediately():
    m = zoo.accept_immediately_register_machine()
    res = run_rm(m, 0)
    assert res.accepted
    assert res.steps == 0


def test_register_audit_flags_growth_beyond_input():
    m = RegisterMachine(
        states=frozenset({"q", "acc"}),
        start="q",
        accepting=frozenset({"acc"}),
        k=2,
        transitions={
            ("q", (False, True)): ("q", (DEC, INC)),
            ("q", (False, False)): ("q", (DEC, INC)),
            ("q", (True, False)): ("q", (NOP, INC)),
        },
    )
    res = run_rm(m, 3, limit=10)
    assert res.verdict is Verdict.TIMEOUT
    assert any("exceeded the input number" in v for v in res.trace.violations)


def test_random_machines_match_reference():
    rng = random.Random(11)
    syms = sorted("ab")
    keys = [(q, (s1, s2)) for q in ("q0", "q1", "q2") for s1 in syms + ["<", ">"] for s2 in syms + ["<", ">"]]
    for _ in range(40):
        transitions = {}
        for key in keys:
            if rng.random() < 0.8:
                nxt = rng.choice(("q0", "q1", "q2", "acc"))
                moves = (rng.choice((-1, 0, 1)), rng.choice((-1, 0, 1)))
                transitions[key] = (nxt, moves)
        m = MultiHeadAutomaton(
            states=frozenset({"q0", "q1", "q2", "acc"}),
            start="q0",
            accepting=frozenset({"acc"}),
            k=2,
            alphabet=frozenset(syms),
            transitions=transitions,
        )
        for word in ("", "a", "ab", "abab", "bbaa", "aabb"):
            assert run_mha(m, word, limit=2000).verdict.value == reference_mha(m, word, limit=2000)
