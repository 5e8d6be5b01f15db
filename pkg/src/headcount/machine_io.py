"""JSON machine files.

A machine file is a JSON object with common fields

    kind      "multi_head" | "counter" | "register"
    states    list of state names
    start     state name
    accept    list of state names
    alphabet  list of single-character symbols ("<" and ">" are reserved)

plus kind-specific fields (``heads`` and optional ``sensing``; ``counters``
and optional ``overflow``; ``registers``) and a ``transitions`` list of
records with explicit field names:

    multi_head: {state, reads, next, move_head, dir} with 1-based move_head,
                dir in {-1, 0, 1}; sensing machines add "coincidence", a list
                of head-index groups such as [[1, 3], [2]].  A transition
                moving several heads uses "moves": [d1, ..., dk] instead of
                move_head/dir.
    counter:    {state, read, zeros, next, dir, ops}; signal-policy machines
                may add "overflow": true/false (default false).
    register:   {state, zeros, next, ops}

Loading validates determinism and all cross-references, reporting the index
of the offending transition record.  Serialization is stable so that
parse/serialize round-trips are exact.
"""

from __future__ import annotations

import json
from pathlib import Path

from headcount.machines import (
    COUNTER_OPS,
    MARKERS,
    OVERFLOW_POLICIES,
    OVERFLOW_SIGNAL,
    OVERFLOW_SIMPLE,
    CounterMachine,
    MachineError,
    MultiHeadAutomaton,
    RegisterMachine,
    coincidence_partition,
)

KINDS = ("multi_head", "counter", "register")


class MachineFileError(MachineError):
    """Schema violation in a machine file, with record diagnostics."""


def _fail(msg: str, index: int | None = None, field: str | None = None):
    where = ""
    if index is not None:
        where = f" (transition #{index}"
        if field:
            where += f", field {field!r}"
        where += ")"
    raise MachineFileError(msg + where)


def _require(doc: dict, field: str, index=None):
    if field not in doc:
        _fail(f"missing required field {field!r}", index, field)
    return doc[field]


def _symbols(alphabet, allow_markers=False) -> frozenset:
    out = set()
    for sym in alphabet:
        if not isinstance(sym, str) or len(sym) != 1:
            _fail(f"alphabet entries must be single characters, got {sym!r}")
        if sym in MARKERS and not allow_markers:
            _fail(f"alphabet may not contain reserved end-marker {sym!r}")
        out.add(sym)
    return frozenset(out)


def _read_symbol(sym, alphabet, index, field):
    if sym not in alphabet and sym not in MARKERS:
        _fail(f"symbol {sym!r} is not in the alphabet or an end-marker", index, field)
    return sym


def _zeros(record, k, index):
    zeros = _require(record, "zeros", index)
    if len(zeros) != k or any(not isinstance(z, bool) for z in zeros):
        _fail(f"'zeros' must list {k} booleans", index, "zeros")
    return tuple(zeros)


def _ops(record, k, index):
    ops = _require(record, "ops", index)
    if len(ops) != k or any(op not in COUNTER_OPS for op in ops):
        _fail(f"'ops' must list {k} entries from {COUNTER_OPS}", index, "ops")
    return tuple(ops)


def _state(record, field, states, index):
    name = _require(record, field, index)
    if name not in states:
        _fail(f"unknown state {name!r}", index, field)
    return name


def parse_machine_text(text: str):
    """Parse and validate a machine from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MachineFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MachineFileError("machine file must be a JSON object")
    kind = _require(doc, "kind")
    if kind not in KINDS:
        _fail(f"kind must be one of {KINDS}, got {kind!r}")
    states = frozenset(_require(doc, "states"))
    start = _require(doc, "start")
    accept = frozenset(_require(doc, "accept"))
    if start not in states:
        _fail(f"start state {start!r} not listed in states")
    for st in accept:
        if st not in states:
            _fail(f"accepting state {st!r} not listed in states")
    records = _require(doc, "transitions")

    if kind == "multi_head":
        return _parse_mha(doc, states, start, accept, records)
    if kind == "counter":
        return _parse_cm(doc, states, start, accept, records)
    return _parse_rm(doc, states, start, accept, records)


def parse_machine_file(path):
    return parse_machine_text(Path(path).read_text())


def _parse_moves(record, k, index):
    if "moves" in record:
        moves = record["moves"]
        if len(moves) != k or any(d not in (-1, 0, 1) for d in moves):
            _fail(f"'moves' must list {k} directions from -1/0/1", index, "moves")
        return tuple(moves)
    head = _require(record, "move_head", index)
    if not isinstance(head, int) or not 1 <= head <= k:
        _fail(f"'move_head' must be a head index 1..{k}", index, "move_head")
    d = _require(record, "dir", index)
    if d not in (-1, 0, 1):
        _fail("'dir' must be -1, 0 or 1", index, "dir")
    return tuple(d if i == head - 1 else 0 for i in range(k))


def _parse_partition(record, k, index):
    groups = _require(record, "coincidence", index)
    seen = set()
    assignment = {}
    for g, group in enumerate(groups):
        for head in group:
            if not isinstance(head, int) or not 1 <= head <= k:
                _fail(f"coincidence head index {head!r} out of range", index, "coincidence")
            if head in seen:
                _fail(f"head {head} listed twice in coincidence", index, "coincidence")
            seen.add(head)
            assignment[head] = g
    if len(seen) != k:
        _fail("coincidence must mention every head exactly once", index, "coincidence")
    raw = tuple(assignment[h + 1] for h in range(k))
    # canonical first-occurrence numbering
    return coincidence_partition([raw[i] for i in range(k)])


def _parse_mha(doc, states, start, accept, records):
    k = _require(doc, "heads")
    sensing = bool(doc.get("sensing", False))
    alphabet = _symbols(_require(doc, "alphabet"))
    transitions = {}
    for i, rec in enumerate(records):
        state = _state(rec, "state", states, i)
        reads = _require(rec, "reads", i)
        if len(reads) != k:
            _fail(f"'reads' must list {k} symbols", i, "reads")
        reads = tuple(_read_symbol(s, alphabet, i, "reads") for s in reads)
        nxt = _state(rec, "next", states, i)
        moves = _parse_moves(rec, k, i)
        if sensing:
            key = (state, reads, _parse_partition(rec, k, i))
        else:
            key = (state, reads)
        if key in transitions:
            _fail("nondeterministic: duplicate transition key", i)
        transitions[key] = (nxt, moves)
    return MultiHeadAutomaton(
        states=states,
        start=start,
        accepting=accept,
        k=k,
        alphabet=alphabet,
        transitions=transitions,
        sensing=sensing,
    )


def _parse_cm(doc, states, start, accept, records):
    k = _require(doc, "counters")
    policy = doc.get("overflow", OVERFLOW_SIMPLE)
    if policy not in OVERFLOW_POLICIES:
        _fail(f"overflow policy must be one of {OVERFLOW_POLICIES}, got {policy!r}")
    alphabet = _symbols(_require(doc, "alphabet"))
    transitions = {}
    for i, rec in enumerate(records):
        state = _state(rec, "state", states, i)
        read = _read_symbol(_require(rec, "read", i), alphabet, i, "read")
        zeros = _zeros(rec, k, i)
        nxt = _state(rec, "next", states, i)
        d = _require(rec, "dir", i)
        if d not in (-1, 0, 1):
            _fail("'dir' must be -1, 0 or 1", i, "dir")
        ops = _ops(rec, k, i)
        if policy == OVERFLOW_SIGNAL:
            key = (state, read, zeros, bool(rec.get("overflow", False)))
        else:
            key = (state, read, zeros)
        if key in transitions:
            _fail("nondeterministic: duplicate transition key", i)
        transitions[key] = (nxt, d, ops)
    return CounterMachine(
        states=states,
        start=start,
        accepting=accept,
        k=k,
        alphabet=alphabet,
        transitions=transitions,
        overflow_policy=policy,
    )


def _parse_rm(doc, states, start, accept, records):
    k = _require(doc, "registers")
    transitions = {}
    for i, rec in enumerate(records):
        state = _state(rec, "state", states, i)
        zeros = _zeros(rec, k, i)
        nxt = _state(rec, "next", states, i)
        ops = _ops(rec, k, i)
        key = (state, zeros)
        if key in transitions:
            _fail("nondeterministic: duplicate transition key", i)
        transitions[key] = (nxt, ops)
    return RegisterMachine(
        states=states, start=start, accepting=accept, k=k, transitions=transitions
    )


def serialize_machine(machine) -> str:
    """Stable JSON text for a machine; parse(serialize(m)) equals m."""
    if isinstance(machine, MultiHeadAutomaton):
        doc = {
            "kind": "multi_head",
            "alphabet": sorted(machine.alphabet),
            "states": sorted(machine.states),
            "start": machine.start,
            "accept": sorted(machine.accepting),
            "heads": machine.k,
            "sensing": machine.sensing,
            "transitions": [],
        }
        for key in sorted(machine.transitions, key=repr):
            nxt, moves = machine.transitions[key]
            rec = {"state": key[0], "reads": list(key[1]), "next": nxt}
            moving = [i for i, d in enumerate(moves) if d != 0]
            if len(moving) <= 1:
                head = moving[0] if moving else 0
                rec["move_head"] = head + 1
                rec["dir"] = moves[head] if moving else 0
            else:
                rec["moves"] = list(moves)
            if machine.sensing:
                part = key[2]
                groups: dict[int, list[int]] = {}
                for head, g in enumerate(part, start=1):
                    groups.setdefault(g, []).append(head)
                rec["coincidence"] = [groups[g] for g in sorted(groups)]
            doc["transitions"].append(rec)
    elif isinstance(machine, CounterMachine):
        doc = {
            "kind": "counter",
            "alphabet": sorted(machine.alphabet),
            "states": sorted(machine.states),
            "start": machine.start,
            "accept": sorted(machine.accepting),
            "counters": machine.k,
            "overflow": machine.overflow_policy,
            "transitions": [],
        }
        for key in sorted(machine.transitions, key=repr):
            nxt, d, ops = machine.transitions[key]
            rec = {
                "state": key[0],
                "read": key[1],
                "zeros": list(key[2]),
                "next": nxt,
                "dir": d,
                "ops": list(ops),
            }
            if machine.overflow_policy == OVERFLOW_SIGNAL:
                rec["overflow"] = key[3]
            doc["transitions"].append(rec)
    elif isinstance(machine, RegisterMachine):
        doc = {
            "kind": "register",
            "states": sorted(machine.states),
            "start": machine.start,
            "accept": sorted(machine.accepting),
            "registers": machine.k,
            "transitions": [
                {
                    "state": key[0],
                    "zeros": list(key[1]),
                    "next": machine.transitions[key][0],
                    "ops": list(machine.transitions[key][1]),
                }
                for key in sorted(machine.transitions, key=repr)
            ],
        }
    else:
        raise MachineFileError(f"cannot serialize {type(machine).__name__}")
    return json.dumps(doc, indent=2)


def machine_kind(machine) -> str:
    if isinstance(machine, MultiHeadAutomaton):
        return "multi_head"
    if isinstance(machine, CounterMachine):
        return "counter"
    if isinstance(machine, RegisterMachine):
        return "register"
    raise MachineFileError(f"unknown machine type {type(machine).__name__}")
