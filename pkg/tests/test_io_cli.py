import json

import pytest

from headcount import zoo
from headcount.cli import main
from headcount.machine_io import (
    MachineFileError,
    machine_kind,
    parse_machine_text,
    serialize_machine,
)
from headcount.machines import run_cm, run_mha, run_rm
from headcount.transforms import counters_to_heads

from reference import all_words


MINIMAL_COUNTER = json.dumps(
    {
        "kind": "counter",
        "alphabet": ["a"],
        "states": ["q"],
        "start": "q",
        "accept": [],
        "counters": 1,
        "transitions": [],
    }
)


def test_minimal_counter_machine_loads_and_rejects():
    machine = parse_machine_text(MINIMAL_COUNTER)
    assert machine_kind(machine) == "counter"
    res = run_cm(machine, "aa")
    assert not res.accepted
    assert res.steps == 0


def test_duplicate_transition_key_is_nondeterministic():
    doc = json.loads(MINIMAL_COUNTER)
    rec = {
        "state": "q",
        "read": "a",
        "zeros": [True],
        "next": "q",
        "dir": 1,
        "ops": ["nop"],
    }
    doc["transitions"] = [rec, dict(rec)]
    with pytest.raises(MachineFileError) as err:
        parse_machine_text(json.dumps(doc))
    assert "nondeterministic" in str(err.value)
    assert "#1" in str(err.value)


def test_dangling_state_reference_diagnostics():
    doc = json.loads(MINIMAL_COUNTER)
    doc["transitions"] = [
        {"state": "q", "read": "a", "zeros": [True], "next": "ghost", "dir": 0, "ops": ["nop"]}
    ]
    with pytest.raises(MachineFileError) as err:
        parse_machine_text(json.dumps(doc))
    assert "ghost" in str(err.value) and "next" in str(err.value)


def test_reserved_marker_rejected_in_alphabet():
    doc = json.loads(MINIMAL_COUNTER)
    doc["alphabet"] = ["a", "<"]
    with pytest.raises(MachineFileError):
        parse_machine_text(json.dumps(doc))


def test_round_trip_all_zoo_machines():
    machines = (
        list(zoo.mha_suite().values())
        + list(zoo.cm_suite().values())
        + [
            zoo.odd_meet_two_head(),
            zoo.even_meet_two_head(),
            zoo.zigzag_one_counter(),
            zoo.even_register_machine(),
            zoo.accept_immediately_register_machine(),
        ]
    )
    for machine in machines:
        text = serialize_machine(machine)
        again = parse_machine_text(text)
        assert serialize_machine(again) == text
        assert again.transitions == dict(machine.transitions)
        assert again.states == machine.states
        assert again.accepting == machine.accepting


def test_round_trip_keeps_multi_move_transitions():
    compiled = counters_to_heads(zoo.anbn_one_counter())
    text = serialize_machine(compiled)
    again = parse_machine_text(text)
    for word in all_words("ab", 6):
        a = run_mha(compiled, word)
        b = run_mha(again, word)
        assert a.verdict == b.verdict and a.steps == b.steps


# CLI


@pytest.fixture
def anbn_mha_file(tmp_path):
    path = tmp_path / "anbn.json"
    path.write_text(serialize_machine(zoo.anbn_two_head()))
    return path


@pytest.fixture
def anbn_cm_file(tmp_path):
    path = tmp_path / "anbn_cm.json"
    path.write_text(serialize_machine(zoo.anbn_one_counter()))
    return path


@pytest.fixture
def register_file(tmp_path):
    path = tmp_path / "even.json"
    path.write_text(serialize_machine(zoo.even_register_machine()))
    return path


def test_cmd_run_exit_codes(anbn_mha_file, capsys):
    assert main(["run", "--machine", str(anbn_mha_file), "--input", "aabb"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "accept"
    assert "trace" not in doc
    assert main(["run", "--machine", str(anbn_mha_file), "--input", "aab"]) == 1
    assert main(["run", "--machine", str(anbn_mha_file), "--input", "aabb", "--limit", "1"]) == 2


def test_cmd_run_trace_flag(anbn_mha_file, capsys):
    assert main(["run", "--machine", str(anbn_mha_file), "--input", "aabb", "--trace"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "trace" in doc and "head_moves" in doc["trace"]


def test_cmd_run_register_machine(register_file, capsys):
    assert main(["run", "--machine", str(register_file), "--input", "4"]) == 0
    assert main(["run", "--machine", str(register_file), "--input", "5"]) == 1


def test_cmd_run_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["run", "--machine", str(path), "--input", "a"]) == 3
    assert "error:" in capsys.readouterr().err


def test_cmd_simulate_heads_to_counters(anbn_mha_file, capsys):
    code = main(
        [
            "simulate",
            "--machine",
            str(anbn_mha_file),
            "--mode",
            "heads_to_counters",
            "--bound",
            "a,b",
            "--input",
            "aabb",
        ]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "accept"
    assert doc["audit"]["counters_used"] == 1


def test_cmd_crossvalidate_agreement(anbn_mha_file, anbn_cm_file, capsys):
    code = main(
        [
            "crossvalidate",
            "--machine",
            str(anbn_mha_file),
            "--mode",
            "heads_to_counters",
            "--bound",
            "a,b",
            "--max-len",
            "8",
        ]
    )
    assert code == 0
    assert "agree: all" in capsys.readouterr().out
    code = main(
        [
            "crossvalidate",
            "--machine",
            str(anbn_cm_file),
            "--mode",
            "counters_to_heads",
            "--max-len",
            "6",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "agree: all" in out


def test_cmd_crossvalidate_max_len_zero(anbn_mha_file, capsys):
    code = main(
        [
            "crossvalidate",
            "--machine",
            str(anbn_mha_file),
            "--mode",
            "heads_to_counters",
            "--bound",
            "a,b",
            "--max-len",
            "0",
        ]
    )
    assert code == 0
    assert "(1 inputs)" in capsys.readouterr().out


def test_cmd_crossvalidate_reports_disagreement(anbn_cm_file, capsys, monkeypatch):
    import headcount.cli as cli_mod

    def corrupted(machine):
        good = counters_to_heads(machine)
        # deliberately break the compiled machine: drop its accepting states
        return type(good)(
            states=good.states,
            start=good.start,
            accepting=frozenset(),
            k=good.k,
            alphabet=good.alphabet,
            transitions=good.transitions,
            sensing=good.sensing,
        )

    monkeypatch.setattr(cli_mod, "counters_to_heads", corrupted)
    code = main(
        [
            "crossvalidate",
            "--machine",
            str(anbn_cm_file),
            "--mode",
            "counters_to_heads",
            "--max-len",
            "4",
        ]
    )
    assert code == 1
    assert "disagree" in capsys.readouterr().out


def test_cmd_bench_csv_and_plot(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    code = main(
        [
            "bench",
            "--acceptor",
            "palindrome2c",
            "--sizes",
            "2^7,2^8,2^9",
            "--csv",
            str(out),
            "--plot",
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,steps,verdict,max_counter"
    assert len(lines) == 4
    steps = [int(line.split(",")[1]) for line in lines[1:]]
    assert steps == sorted(steps) and steps[0] < steps[-1]
    assert out.with_suffix(".png").exists()
    # deterministic content for fixed arguments
    main(
        ["bench", "--acceptor", "palindrome2c", "--sizes", "2^7,2^8,2^9", "--csv", str(out)]
    )
    assert out.read_text().strip().splitlines() == lines


def test_cmd_bench_empty_sizes(tmp_path):
    out = tmp_path / "empty.csv"
    assert main(["bench", "--acceptor", "ww", "--sizes", "", "--csv", str(out)]) == 0
    assert out.read_text().strip() == "n,steps,verdict,max_counter"


def test_cmd_encode(capsys):
    code = main(["encode", "--bound", "ab,c", "--input", "ababcc"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["items"][0] == {"run": "ab", "count": 2}
    assert doc["decoded_ok"] is True


def test_cmd_speedup(tmp_path, capsys):
    path = tmp_path / "zigzag.json"
    path.write_text(serialize_machine(zoo.zigzag_one_counter()))
    code = main(
        [
            "speedup",
            "--machine",
            str(path),
            "--bound",
            "a,b",
            "--input",
            "aaabbb",
            "--c",
            "0.5",
        ]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "accept"
    assert doc["accounting_steps"] < doc["raw_steps"] + len("aaabbb")
    assert doc["factor"] == 8


def test_cmd_show_round_trips(anbn_mha_file, capsys):
    assert main(["show", "--machine", str(anbn_mha_file)]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["kind"] == "multi_head"
