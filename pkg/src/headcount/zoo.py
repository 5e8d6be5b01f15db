"""Hand-written suite machines.

Small deterministic machines exercised throughout the test and
cross-validation suites: multi-head automata over strict bounds, counter
machines with one or two counters, register machines, sensing unary
machines, and the quadratic-time zigzag machine used by the speed-up
measurements.  Transition tables are written out explicitly; a missing
entry means halt-and-reject.
"""

from __future__ import annotations

from headcount.machines import (
    DEC,
    INC,
    NOP,
    CounterMachine,
    MultiHeadAutomaton,
    RegisterMachine,
)

L = "<"
R = ">"


def anbn_two_head() -> MultiHeadAutomaton:
    """Two heads accepting a^n b^n: head 1 crosses the a-block, then both
    blocks are consumed in lockstep (head 1 over b's, head 2 over a's)."""
    t = {
        ("s0", (R, R)): ("acc", (-1, 0)),      # empty word
        ("s0", ("a", "a")): ("s0", (1, 0)),
        ("s0", ("b", "a")): ("m", (0, 0)),     # stationary handoff; see normalize tests
        ("m", ("b", "a")): ("m1", (1, 0)),
        ("m1", ("b", "a")): ("m", (0, 1)),
        ("m1", (R, "a")): ("m", (0, 1)),
        ("m", (R, "b")): ("acc", (0, -1)),
    }
    return MultiHeadAutomaton(
        states=frozenset({"s0", "m", "m1", "acc"}),
        start="s0",
        accepting=frozenset({"acc"}),
        k=2,
        alphabet=frozenset("ab"),
        transitions=t,
    )


def anbncn_three_head() -> MultiHeadAutomaton:
    """Three heads accepting a^n b^n c^n; the third head re-verifies the
    a-count against the c-count."""
    t = {
        ("s0", (R, R, R)): ("acc", (-1, 0, 0)),
        ("s0", ("a", "a", "a")): ("s0", (1, 0, 0)),
        ("s0", ("b", "a", "a")): ("t", (0, 0, 0)),
        ("t", ("b", "a", "a")): ("t1", (1, 0, 0)),
        ("t1", ("b", "a", "a")): ("t", (0, 1, 0)),
        ("t1", ("c", "a", "a")): ("t", (0, 1, 0)),
        ("t1", (R, "a", "a")): ("t", (0, 1, 0)),
        ("t", ("c", "b", "a")): ("u", (0, 0, 0)),
        ("u", ("c", "b", "a")): ("u1", (1, 0, 0)),
        ("u1", ("c", "b", "a")): ("u2", (0, 1, 0)),
        ("u1", (R, "b", "a")): ("u2", (0, 1, 0)),
        ("u2", ("c", "b", "a")): ("u", (0, 0, 1)),
        ("u2", ("c", "c", "a")): ("u", (0, 0, 1)),
        ("u2", (R, "c", "a")): ("u", (0, 0, 1)),
        ("u", (R, "c", "b")): ("acc", (-1, 0, 0)),
    }
    return MultiHeadAutomaton(
        states=frozenset({"s0", "t", "t1", "u", "u1", "u2", "acc"}),
        start="s0",
        accepting=frozenset({"acc"}),
        k=3,
        alphabet=frozenset("abc"),
        transitions=t,
    )


def anb2n_two_head() -> MultiHeadAutomaton:
    """Two heads accepting a^n b^(2n): head 1 eats two b's per a eaten by head 2."""
    t = {
        ("s0", (R, R)): ("acc", (-1, 0)),
        ("s0", ("a", "a")): ("s0", (1, 0)),
        ("s0", ("b", "a")): ("v1", (1, 0)),
        ("v1", ("b", "a")): ("v2", (1, 0)),
        ("v2", ("b", "a")): ("v", (0, 1)),
        ("v2", (R, "a")): ("v", (0, 1)),
        ("v", ("b", "a")): ("v1", (1, 0)),
        ("v", (R, "b")): ("acc", (0, -1)),
    }
    return MultiHeadAutomaton(
        states=frozenset({"s0", "v", "v1", "v2", "acc"}),
        start="s0",
        accepting=frozenset({"acc"}),
        k=2,
        alphabet=frozenset("ab"),
        transitions=t,
    )


def mha_suite() -> dict[str, MultiHeadAutomaton]:
    return {
        "anbn_two_head": anbn_two_head(),
        "anbncn_three_head": anbncn_three_head(),
        "anb2n_two_head": anb2n_two_head(),
    }


def anbn_one_counter() -> CounterMachine:
    """One counter accepting a^n b^n."""
    t = {
        ("c0", "a", (True,)): ("c0", 1, (INC,)),
        ("c0", "a", (False,)): ("c0", 1, (INC,)),
        ("c0", "b", (False,)): ("c1", 1, (DEC,)),
        ("c0", R, (True,)): ("acc", 0, (NOP,)),
        ("c1", "b", (False,)): ("c1", 1, (DEC,)),
        ("c1", R, (True,)): ("acc", 0, (NOP,)),
    }
    return CounterMachine(
        states=frozenset({"c0", "c1", "acc"}),
        start="c0",
        accepting=frozenset({"acc"}),
        k=1,
        alphabet=frozenset("ab"),
        transitions=t,
    )


def equal_counts_one_counter() -> CounterMachine:
    """One counter accepting words over {a, b} with equally many a's and b's."""
    t = {}
    for z in (True, False):
        t[("e0", "a", (z,))] = ("e0", 1, (INC,))
        t[("e0", "b", (z,))] = ("e0", 1, (NOP,))
        t[("e0", R, (z,))] = ("e1", -1, (NOP,))
        t[("e1", "a", (z,))] = ("e1", -1, (NOP,))
    t[("e1", "b", (False,))] = ("e1", -1, (DEC,))
    t[("e1", L, (True,))] = ("acc", 0, (NOP,))
    return CounterMachine(
        states=frozenset({"e0", "e1", "acc"}),
        start="e0",
        accepting=frozenset({"acc"}),
        k=1,
        alphabet=frozenset("ab"),
        transitions=t,
    )


def anb2n_two_counter() -> CounterMachine:
    """Two counters accepting a^n b^(2n): both counters load n, then drain
    one per b each."""
    t = {
        ("d0", "a", (True, True)): ("d0", 1, (INC, INC)),
        ("d0", "a", (False, False)): ("d0", 1, (INC, INC)),
        ("d0", "b", (False, False)): ("d1", 1, (DEC, NOP)),
        ("d0", R, (True, True)): ("acc", 0, (NOP, NOP)),
        ("d1", "b", (False, False)): ("d1", 1, (DEC, NOP)),
        ("d1", "b", (True, False)): ("d2", 1, (NOP, DEC)),
        ("d2", "b", (True, False)): ("d2", 1, (NOP, DEC)),
        ("d2", R, (True, True)): ("acc", 0, (NOP, NOP)),
    }
    return CounterMachine(
        states=frozenset({"d0", "d1", "d2", "acc"}),
        start="d0",
        accepting=frozenset({"acc"}),
        k=2,
        alphabet=frozenset("ab"),
        transitions=t,
    )


def out_and_back_one_counter() -> CounterMachine:
    """Counts the unary input on the way out, drains it on the way back."""
    t = {
        ("w0", "a", (True,)): ("w0", 1, (INC,)),
        ("w0", "a", (False,)): ("w0", 1, (INC,)),
        ("w0", R, (False,)): ("w1", -1, (DEC,)),
        ("w0", R, (True,)): ("acc", -1, (NOP,)),
        ("w1", "a", (False,)): ("w1", -1, (DEC,)),
        ("w1", "a", (True,)): ("acc", -1, (NOP,)),
    }
    return CounterMachine(
        states=frozenset({"w0", "w1", "acc"}),
        start="w0",
        accepting=frozenset({"acc"}),
        k=1,
        alphabet=frozenset("a"),
        transitions=t,
    )


def cm_suite() -> dict[str, CounterMachine]:
    return {
        "anbn_one_counter": anbn_one_counter(),
        "equal_counts_one_counter": equal_counts_one_counter(),
        "anb2n_two_counter": anb2n_two_counter(),
    }


def even_register_machine() -> RegisterMachine:
    """Accepts even input numbers by decrementing in pairs."""
    t = {
        ("r0", (True,)): ("acc", (NOP,)),
        ("r0", (False,)): ("r1", (DEC,)),
        ("r1", (False,)): ("r0", (DEC,)),
    }
    return RegisterMachine(
        states=frozenset({"r0", "r1", "acc"}),
        start="r0",
        accepting=frozenset({"acc"}),
        k=1,
        transitions=t,
    )


def accept_immediately_register_machine() -> RegisterMachine:
    """Start state is accepting, so every input accepts in 0 steps."""
    return RegisterMachine(
        states=frozenset({"z0"}),
        start="z0",
        accepting=frozenset({"z0"}),
        k=1,
        transitions={},
    )


def _meet_parity_two_head(accept_on_outward: bool) -> MultiHeadAutomaton:
    """Sensing two-head unary machine: head 2 runs to the right end, then the
    heads walk towards each other one move at a time.  Whether they land on
    the same square after an even or an odd number of moves reveals the
    input-length parity."""
    a = "a"
    t = {
        ("g0", (a, a), (0, 0)): ("g0", (0, 1)),
        ("g0", (a, a), (0, 1)): ("g0", (0, 1)),
        ("g0", (a, R), (0, 1)): ("g1", (0, -1)),
        ("g1", (a, a), (0, 1)): ("g2", (1, 0)),
        ("g2", (a, a), (0, 1)): ("g1", (0, -1)),
    }
    if accept_on_outward:
        # coincidence after a full round: odd length
        t[("g1", (a, a), (0, 0))] = ("acc", (1, 0))
    else:
        # coincidence after the half round: even length (and the empty word)
        t[("g2", (a, a), (0, 0))] = ("acc", (1, 0))
        t[("g0", (R, R), (0, 0))] = ("acc", (-1, 0))
    return MultiHeadAutomaton(
        states=frozenset({"g0", "g1", "g2", "acc"}),
        start="g0",
        accepting=frozenset({"acc"}),
        k=2,
        alphabet=frozenset("a"),
        transitions=t,
        sensing=True,
    )


def odd_meet_two_head() -> MultiHeadAutomaton:
    """Sensing unary two-head machine accepting odd lengths."""
    return _meet_parity_two_head(True)


def even_meet_two_head() -> MultiHeadAutomaton:
    """Sensing unary two-head machine accepting even lengths."""
    return _meet_parity_two_head(False)


def zigzag_one_counter() -> CounterMachine:
    """Quadratic-time acceptor of a*b*.

    For every input symbol the head walks from the left end-marker out to
    the symbol, back, and then sweeps the whole tape once in each direction,
    so the run takes about 3n^2 steps.  The single counter remembers how
    many symbols have been processed.  Used as the superlinear test family
    for the speed-up measurements.
    """
    t = {}
    for sym in ("a", "b"):
        t[("init", sym, (True,))] = ("home", -1, (NOP,))
    t[("init", R, (True,))] = ("acc", 0, (NOP,))
    t[("home", L, (True,))] = ("peek_A", 1, (NOP,))
    for ph in ("A", "B"):
        t[(f"out_{ph}", "a", (False,))] = (f"out_{ph}", 1, (DEC,))
        t[(f"out_{ph}", "b", (False,))] = (f"out_{ph}", 1, (DEC,))
        for sym in ("a", "b"):
            t[(f"out_{ph}", sym, (True,))] = (f"peek_{ph}", 1, (NOP,))
        t[(f"peek_{ph}", R, (True,))] = ("acc", -1, (NOP,))
        t[(f"back_{ph}", "a", (False,))] = (f"back_{ph}", -1, (INC,))
        t[(f"back_{ph}", "b", (False,))] = (f"back_{ph}", -1, (INC,))
        t[(f"back_{ph}", L, (False,))] = (f"swr_{ph}", 1, (NOP,))
        t[(f"swr_{ph}", "a", (False,))] = (f"swr_{ph}", 1, (NOP,))
        t[(f"swr_{ph}", "b", (False,))] = (f"swr_{ph}", 1, (NOP,))
        t[(f"swr_{ph}", R, (False,))] = (f"swl_{ph}", -1, (NOP,))
        t[(f"swl_{ph}", "a", (False,))] = (f"swl_{ph}", -1, (NOP,))
        t[(f"swl_{ph}", "b", (False,))] = (f"swl_{ph}", -1, (NOP,))
        t[(f"swl_{ph}", L, (False,))] = (f"out_{ph}", 1, (DEC,))
    t[("peek_A", "a", (True,))] = ("back_A", -1, (INC,))
    t[("peek_A", "b", (True,))] = ("back_B", -1, (INC,))
    t[("peek_B", "b", (True,))] = ("back_B", -1, (INC,))
    # peek_B on "a" stays undefined: a after b rejects
    states = {"init", "home", "acc"}
    for ph in ("A", "B"):
        states |= {f"{kind}_{ph}" for kind in ("out", "peek", "back", "swr", "swl")}
    return CounterMachine(
        states=frozenset(states),
        start="init",
        accepting=frozenset({"acc"}),
        k=1,
        alphabet=frozenset("ab"),
        transitions=t,
    )
