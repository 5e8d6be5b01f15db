from headcount import zoo
from headcount.machines import (
    MachineError,
    MultiHeadAutomaton,
    normalize_head_order,
    normalize_one_move,
    run_mha,
)

from reference import all_words

import pytest


def test_already_normalized_machine_is_unchanged():
    m = zoo.anb2n_two_head()
    assert m.one_move_only()
    assert normalize_one_move(m) is m


def test_output_has_no_stationary_or_multi_moves():
    for m in zoo.mha_suite().values():
        norm = normalize_one_move(m)
        assert norm.one_move_only()
        # idempotent modulo renaming: a second pass is a no-op
        assert normalize_one_move(norm) is norm


def test_one_move_preserves_acceptance_exhaustively():
    for m in zoo.mha_suite().values():
        norm = normalize_one_move(m)
        for word in all_words(sorted(m.alphabet), 10 if len(m.alphabet) == 2 else 7):
            assert run_mha(m, word).accepted == run_mha(norm, word).accepted, word


def multi_move_machine():
    # both heads advance in a single step; accepts words of even length
    t = {
        ("q", ("a", "a")): ("q", (1, 1)),
        ("q", (">", ">")): ("acc", (-1, 0)),
    }
    return MultiHeadAutomaton(
        states=frozenset({"q", "acc"}),
        start="q",
        accepting=frozenset({"acc"}),
        k=2,
        alphabet=frozenset("a"),
        transitions=t,
    )


def test_multi_move_serialization():
    m = multi_move_machine()
    norm = normalize_one_move(m)
    assert norm.one_move_only()
    for n in range(11):
        word = "a" * n
        assert run_mha(m, word).accepted == run_mha(norm, word).accepted, n


def stationary_cycle_machine():
    # stationary self-loop that never accepts
    t = {
        ("q", ("a",)): ("p", (0,)),
        ("p", ("a",)): ("q", (0,)),
    }
    return MultiHeadAutomaton(
        states=frozenset({"q", "p"}),
        start="q",
        accepting=frozenset(),
        k=1,
        alphabet=frozenset("a"),
        transitions=t,
    )


def test_stationary_cycle_becomes_halt_reject():
    m = stationary_cycle_machine()
    norm = normalize_one_move(m)
    assert norm.one_move_only()
    res = run_mha(norm, "a")
    assert not res.accepted
    assert run_mha(m, "a").accepted == res.accepted


def stationary_accept_machine():
    # a stationary step leading into an accepting state
    t = {
        ("q", ("a",)): ("mid", (0,)),
        ("mid", ("a",)): ("acc", (0,)),
    }
    return MultiHeadAutomaton(
        states=frozenset({"q", "mid", "acc"}),
        start="q",
        accepting=frozenset({"acc"}),
        k=1,
        alphabet=frozenset("a"),
        transitions=t,
    )


def test_stationary_chain_into_accept_is_preserved():
    m = stationary_accept_machine()
    norm = normalize_one_move(m)
    assert norm.one_move_only()
    assert run_mha(norm, "a").accepted
    assert not run_mha(norm, "").accepted


# head-order normalization


def crossing_machine():
    """Sensing machine whose head 1 deliberately walks past head 2."""
    a = "a"
    t = {
        # park head 2 one square in, then drive head 1 across it to the end
        ("s", (a, a), (0, 0)): ("w", (0, 1)),
        ("w", (a, a), (0, 1)): ("w", (1, 0)),
        ("w", (a, a), (0, 0)): ("w", (1, 0)),
        ("w", (">", a), (0, 1)): ("acc", (0, -1)),
    }
    return MultiHeadAutomaton(
        states=frozenset({"s", "w", "acc"}),
        start="s",
        accepting=frozenset({"acc"}),
        k=2,
        alphabet=frozenset("a"),
        transitions=t,
        sensing=True,
    )


def test_head_order_requires_sensing():
    with pytest.raises(MachineError):
        normalize_head_order(zoo.anbn_two_head())


def test_head_order_keeps_positions_sorted():
    m = crossing_machine()
    norm = normalize_head_order(m)
    res = run_mha(norm, "a" * 6, record=True)
    assert res.accepted == run_mha(m, "a" * 6).accepted
    for cfg in res.history:
        assert list(cfg.positions) == sorted(cfg.positions), cfg


def test_head_order_equivalence_on_unary_inputs():
    for build in (zoo.odd_meet_two_head, zoo.even_meet_two_head, crossing_machine):
        m = build()
        norm = normalize_head_order(m)
        for n in range(21):
            word = "a" * n
            assert run_mha(m, word).accepted == run_mha(norm, word).accepted, (build.__name__, n)


def test_never_crossing_machine_behaves_identically():
    m = zoo.odd_meet_two_head()
    norm = normalize_head_order(m)
    for n in range(15):
        word = "a" * n
        a = run_mha(m, word)
        b = run_mha(norm, word)
        assert a.verdict == b.verdict
        assert a.steps == b.steps


def test_sorted_positions_for_parity_machines():
    for build in (zoo.odd_meet_two_head, zoo.even_meet_two_head):
        norm = normalize_head_order(build())
        for n in (5, 8, 13):
            res = run_mha(norm, "a" * n, record=True)
            for cfg in res.history:
                assert list(cfg.positions) == sorted(cfg.positions)
