"""Command-line surface.

Subcommands:

    run            run a machine file on one input, JSON result on stdout
    simulate       run one of the restricted simulations (pointer+counters,
                   registers, encoded input) with its audit in the output
    crossvalidate  enumerate inputs and compare an original machine against
                   a transformed run path, reporting the first disagreement
    bench          step-count series for the built-in acceptors, CSV output
                   plus an optional rendered figure
    encode         staged run-length encoding of a bounded word, as JSON
    speedup        the encode-and-compress pipeline with step accounting

Exit codes for run/simulate/speedup follow the verdict: 0 accept, 1 reject,
2 timeout, 3 fault or error.  crossvalidate exits 0 on full agreement and 1
on any disagreement.  Bounds are written as comma-separated words, e.g.
``--bound a,b`` or ``--bound ab,c``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from headcount.acceptors import (
    PALINDROME_PROGRAM,
    WW_PROGRAM,
    lm_member_word,
    lm_program,
    palindrome_random_word,
    palindrome_zeros_word,
    ww_family_word,
)
from headcount.bounded import BoundDescriptor, StrictBound, enumerate_bounded_inputs
from headcount.machine_io import machine_kind, parse_machine_file, serialize_machine
from headcount.machines import (
    DEFAULT_LIMIT,
    CounterMachine,
    MachineError,
    MultiHeadAutomaton,
    RegisterMachine,
    Verdict,
    run_cm,
    run_mha,
    run_rm,
)
from headcount.speedup import (
    decode_encoded_input,
    encode_bounded_input,
    run_on_encoding,
    speedup_run,
)
from headcount.transforms import (
    counters_to_heads,
    heads_to_counters_run,
    heads_to_registers_run,
)

EXIT_BY_VERDICT = {
    Verdict.ACCEPT: 0,
    Verdict.REJECT: 1,
    Verdict.TIMEOUT: 2,
    Verdict.FAULT: 3,
}


def _parse_bound(text: str) -> BoundDescriptor:
    words = tuple(w for w in text.split(",") if w)
    return BoundDescriptor(words)


def _parse_strict_bound(text: str) -> StrictBound:
    return StrictBound(tuple(w for w in text.split(",") if w))


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _run_machine(machine, word: str, limit: int):
    if isinstance(machine, MultiHeadAutomaton):
        return run_mha(machine, word, limit)
    if isinstance(machine, CounterMachine):
        return run_cm(machine, word, limit)
    return run_rm(machine, int(word), limit)


def cmd_run(args) -> int:
    machine = parse_machine_file(args.machine)
    result = _run_machine(machine, args.input, args.limit)
    _emit(result.to_dict(with_trace=args.trace))
    return EXIT_BY_VERDICT[result.verdict]


def cmd_simulate(args) -> int:
    machine = parse_machine_file(args.machine)
    if args.mode == "heads_to_counters":
        bound = _parse_strict_bound(args.bound)
        result, audit = heads_to_counters_run(machine, bound, args.input, args.limit)
        doc = result.to_dict()
        doc["audit"] = audit.to_dict()
    elif args.mode == "registers":
        result = heads_to_registers_run(machine, len(args.input), args.limit)
        doc = result.to_dict()
        doc["audit"] = {"max_registers": result.trace.max_counters}
    else:  # encoding
        bound = _parse_bound(args.bound)
        encoded = encode_bounded_input(args.input, bound)
        result = run_on_encoding(machine, encoded, args.limit)
        doc = result.to_dict()
        doc["audit"] = {"encoding": encoded.to_dict()}
    _emit(doc)
    return EXIT_BY_VERDICT[result.verdict]


def _crossvalidate_pairs(machine, args):
    """Yield (input label, original verdict-ish, transformed verdict-ish)."""
    limit = args.limit
    if args.mode == "heads_to_counters":
        bound = _parse_strict_bound(args.bound)
        for word in enumerate_bounded_inputs(bound, args.max_len):
            direct = run_mha(machine, word, limit)
            sim, audit = heads_to_counters_run(machine, bound, word, limit)
            ok = (
                sim.verdict == direct.verdict
                and audit.counters_used <= machine.k - 1
                and all(v <= len(word) for v in audit.max_counters)
            )
            yield word, direct.verdict.value, sim.verdict.value, ok
    elif args.mode == "counters_to_heads":
        transformed = counters_to_heads(machine)
        alphabet = sorted(machine.alphabet)
        words = [""]
        yield from _compare_steps(machine, transformed, words, limit)
        for _ in range(args.max_len):
            words = [w + s for w in words for s in alphabet]
            yield from _compare_steps(machine, transformed, words, limit)
    elif args.mode == "registers":
        for n in range(args.max_len + 1):
            letter = sorted(machine.alphabet)[0]
            direct = run_mha(machine, letter * n, limit)
            sim = heads_to_registers_run(machine, n, limit)
            yield f"n={n}", direct.verdict.value, sim.verdict.value, (
                sim.verdict == direct.verdict
            )
    elif args.mode == "encoding":
        bound = _parse_bound(args.bound)
        for word in enumerate_bounded_inputs(bound, args.max_len):
            direct = run_cm(machine, word, limit)
            sim = run_on_encoding(machine, encode_bounded_input(word, bound), limit)
            yield word, direct.verdict.value, sim.verdict.value, (
                sim.verdict == direct.verdict and sim.steps == direct.steps
            )
    elif args.mode == "speedup":
        bound = _parse_bound(args.bound)
        for word in enumerate_bounded_inputs(bound, args.max_len):
            direct = run_cm(machine, word, limit)
            report = speedup_run(machine, bound, word, args.c, limit)
            yield word, direct.verdict.value, report.result.verdict.value, (
                report.result.verdict == direct.verdict
            )
    else:  # pragma: no cover - argparse restricts choices
        raise MachineError(f"unknown mode {args.mode!r}")


def _compare_steps(machine, transformed, words, limit):
    for word in words:
        direct = run_cm(machine, word, limit)
        sim = run_mha(transformed, word, limit)
        ok = sim.verdict == direct.verdict and sim.steps == direct.steps
        yield word, direct.verdict.value, sim.verdict.value, ok


def cmd_crossvalidate(args) -> int:
    machine = parse_machine_file(args.machine)
    checked = 0
    for label, direct, sim, ok in _crossvalidate_pairs(machine, args):
        checked += 1
        if not ok:
            print(f"disagree on {label!r}: direct={direct} transformed={sim}")
            return 1
    print(f"agree: all ({checked} inputs)")
    return 0


_BENCH_FAMILIES = {
    "ww": "alternating 01 square",
    "palindrome2c": "all-zero or seeded-random marked palindrome",
    "lm": "alternating-bit member with half length 2^q",
}


def _bench_input(acceptor: str, size: int, family: str, seed: int, m: int) -> str:
    if acceptor == "ww":
        return ww_family_word(size - (size % 2))
    if acceptor == "palindrome2c":
        n = size if size % 2 == 1 else size + 1
        if family == "random":
            return palindrome_random_word(n, seed)
        return palindrome_zeros_word(n)
    q = max(1, round(math.log2(max(size - 1, 2) / 2)))
    while 2**q < m * q:
        q += 1
    return lm_member_word(m, q)


def _parse_sizes(text: str) -> list[int]:
    sizes = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if "^" in token:
            base, exp = token.split("^")
            sizes.append(int(base) ** int(exp))
        else:
            sizes.append(int(token))
    return sizes


def cmd_bench(args) -> int:
    if args.acceptor == "ww":
        program = WW_PROGRAM
    elif args.acceptor == "palindrome2c":
        program = PALINDROME_PROGRAM
    else:
        program = lm_program(args.m)
    rows = []
    seen = set()
    for size in _parse_sizes(args.sizes):
        word = _bench_input(args.acceptor, size, args.family, args.seed, args.m)
        if len(word) in seen:
            continue
        seen.add(len(word))
        result = program(word)
        rows.append(
            {
                "n": len(word),
                "steps": result.steps,
                "verdict": result.verdict.value,
                "max_counter": max(result.trace.max_counters, default=0),
            }
        )
    out = Path(args.csv)
    with out.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["n", "steps", "verdict", "max_counter"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out}")
    if args.plot:
        from headcount.plotting import render_bench_figure

        figure = out.with_suffix(".png")
        render_bench_figure(rows, args.acceptor, figure)
        print(f"wrote figure to {figure}")
    return 0


def cmd_encode(args) -> int:
    bound = _parse_bound(args.bound)
    encoded = encode_bounded_input(args.input, bound)
    doc = encoded.to_dict()
    doc["decoded_ok"] = decode_encoded_input(encoded) == args.input
    _emit(doc)
    return 0


def cmd_speedup(args) -> int:
    machine = parse_machine_file(args.machine)
    bound = _parse_bound(args.bound)
    report = speedup_run(machine, bound, args.input, args.c, args.limit)
    _emit(report.to_dict())
    return EXIT_BY_VERDICT[report.result.verdict]


def cmd_show(args) -> int:
    machine = parse_machine_file(args.machine)
    print(serialize_machine(machine))
    print(f"# kind: {machine_kind(machine)}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="headcount",
        description="simulate, transform and benchmark multi-head automata, "
        "counter machines and register machines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, machine=True):
        if machine:
            p.add_argument("--machine", required=True, help="machine JSON file")
        p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="step limit")

    p = sub.add_parser("run", help="run a machine on one input")
    common(p)
    p.add_argument("--input", required=True, help="input word (or number for registers)")
    p.add_argument("--trace", action="store_true", help="include the resource trace")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", help="run a restricted simulation with audit")
    common(p)
    p.add_argument(
        "--mode",
        required=True,
        choices=["heads_to_counters", "registers", "encoding"],
    )
    p.add_argument("--bound", default="", help="comma-separated bound words")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("crossvalidate", help="compare original and transformed runs")
    common(p)
    p.add_argument(
        "--mode",
        required=True,
        choices=["heads_to_counters", "counters_to_heads", "registers", "encoding", "speedup"],
    )
    p.add_argument("--bound", default="", help="comma-separated bound words")
    p.add_argument("--max-len", type=int, default=10, dest="max_len")
    p.add_argument("--c", type=float, default=0.5, help="speed-up ratio for mode=speedup")
    p.set_defaults(func=cmd_crossvalidate)

    p = sub.add_parser("bench", help="step-count series for the built-in acceptors")
    p.add_argument("--acceptor", required=True, choices=["ww", "palindrome2c", "lm"])
    p.add_argument("--m", type=int, default=1, help="family parameter for lm")
    p.add_argument("--family", default="zeros", choices=["zeros", "random"])
    p.add_argument("--sizes", required=True, help="comma-separated sizes, 2^k allowed")
    p.add_argument("--csv", required=True, help="output CSV path")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("encode", help="staged run-length encoding of a bounded word")
    p.add_argument("--bound", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("speedup", help="encode and simulate with compressed counters")
    common(p)
    p.add_argument("--bound", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--c", type=float, required=True, help="target speed-up ratio")
    p.set_defaults(func=cmd_speedup)

    p = sub.add_parser("show", help="parse, validate and reprint a machine file")
    p.add_argument("--machine", required=True)
    p.set_defaults(func=cmd_show)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MachineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
