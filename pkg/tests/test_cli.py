import json
import subprocess
import sys

import pytest

from ferenczi import __version__, cli

VERDICT_COMMANDS = [
    ["rank", "--preset", "chacon"],
    ["spectra", "--preset", "chacon"],
    ["veech", "--preset", "chacon", "--alpha", "1/3"],
    ["mixing", "--preset", "chacon"],
    ["dimgroup", "--preset", "chacon"],
    ["oe", "--preset", "chacon"],
    ["measure", "--preset", "chacon", "--level", "1"],
    ["heights", "--preset", "chacon", "--level", "2"],
    ["realize", "--preset", "chacon"],
]

PLAIN_COMMANDS = [
    ["words", "--preset", "chacon", "--level", "2"],
    ["language", "--preset", "chacon", "--length", "3"],
    ["locate", "--preset", "chacon", "--position", "5", "--top", "3"],
    ["tail", "--preset", "chacon", "--length", "6"],
    ["matrices", "--preset", "four-letter", "--level", "1"],
    ["presets"],
]


def run(capsys, argv):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv + ["--format", "json"])
    return code, json.loads(out) if out.strip() else None, err


def test_words_text(capsys):
    code, out, _ = run(capsys, ["words", "--preset", "chacon", "--level", "2"])
    assert code == 0
    assert out.strip() == "0010001010010"


def test_spectra_text(capsys):
    code, out, _ = run(capsys, ["spectra", "--preset", "chacon"])
    assert code == 0
    assert "q_max = 1" in out
    assert "weakly mixing: True" in out
    assert "not topologically mixing" in out


def test_dimgroup_json(capsys):
    code, rep, _ = run_json(capsys, ["dimgroup", "--preset", "chacon"])
    assert code == 0
    res = rep["result"]
    assert res["group"] == "Z x Z[1/3]"
    assert res["cone"] == "x + 2y > 0"
    assert res["unit"] == [1, 1]
    assert res["z"] == {"1": "1/2", "0": "1"}
    assert rep["version"] == __version__
    assert rep["command"]["command"] == "dimgroup"


@pytest.mark.parametrize("argv", VERDICT_COMMANDS)
def test_verdict_commands_cite(capsys, argv):
    code, rep, _ = run_json(capsys, argv)
    assert code == 0
    assert rep["citations"]


@pytest.mark.parametrize("argv", VERDICT_COMMANDS + PLAIN_COMMANDS)
def test_json_roundtrip(capsys, argv):
    code, rep, _ = run_json(capsys, argv)
    assert code == 0
    assert json.loads(json.dumps(rep)) == rep
    assert set(rep) == {"command", "version", "result", "citations", "timing_ms"}


@pytest.mark.parametrize("argv", VERDICT_COMMANDS + PLAIN_COMMANDS)
def test_text_output(capsys, argv):
    code, out, _ = run(capsys, argv)
    assert code == 0 and out.strip()


def test_deterministic_apart_from_timing(capsys):
    reps = []
    for _ in range(2):
        _, rep, _ = run_json(capsys, ["rank", "--preset", "dwmu-one"])
        rep.pop("timing_ms")
        reps.append(rep)
    assert reps[0] == reps[1]


def test_rationals_are_strings(capsys):
    _, rep, _ = run_json(capsys, ["measure", "--preset", "chacon", "--level", "2"])
    assert rep["result"]["measure"]["values"] == {"0": "1/9", "1": "1/9"}
    assert rep["result"]["tower_masses"] == {"0": "4/9", "1": "5/9"}


def test_schedule_file(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text('{"preperiod": [[0,1],[2,2,4]], "tail": {"periodic": [[0,1]]}}')
    code, rep, _ = run_json(capsys, ["heights", "--schedule", str(f), "--level", "3"])
    assert code == 0
    # w_1 = 0010 and w_2 = w_1 11 w_1 11 w_1 1111 w_1
    assert rep["result"]["levels"][2]["heights"]["4"] == "8"
    assert rep["result"]["levels"][3]["heights"] == {"0": "24", "1": "25"}


def test_preset_params(capsys):
    code, rep, _ = run_json(capsys, ["words", "--preset", "four-letter", "--param", "a=1", "--param", "b=5",
                                     "--param", "c=6", "--param", "d=7", "--level", "1"])
    assert code == 0
    assert rep["result"]["word"] == "0" + "1" + "0" + "11111" + "0"


@pytest.mark.parametrize("argv, error", [
    (["words", "--preset", "nope", "--level", "1"], "bad_schedule_source"),
    (["words", "--schedule", "/nonexistent/s.json", "--level", "1"], "bad_schedule_source"),
    (["words", "--preset", "chacon", "--level", "40"], "cap_exceeded"),
    (["measure", "--preset", "chacon", "--level", "1", "--cylinder", "11"], "not_in_language"),
    (["realize", "--data", '{"B": [1], "r": {"period": [2]}, "z": {"1": "1/3"}, "v": {"1": 1}, "w": 1}'],
     "realization_failed"),
    (["words", "--preset", "four-letter", "--param", "a=9", "--level", "1"], "bad_schedule_source"),
])
def test_domain_errors(capsys, argv, error):
    code, rep, _ = run_json(capsys, argv)
    assert code == 1
    assert rep["error"] == error and rep["message"]


def test_malformed_schedule(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"preperiod": [[0,1],[]], "tail": {"periodic": [[0,1]]}}')
    code, rep, _ = run_json(capsys, ["words", "--schedule", str(f), "--level", "1"])
    assert code == 1 and rep["error"] == "invalid_schedule" and "stage 1" in rep["message"]
    f.write_text("{not json")
    code, rep, _ = run_json(capsys, ["words", "--schedule", str(f), "--level", "1"])
    assert code == 1 and rep["error"] == "invalid_schedule" and "JSON" in rep["message"]


def test_domain_error_text_goes_to_stderr(capsys):
    code, out, err = run(capsys, ["words", "--preset", "nope", "--level", "1"])
    assert code == 1 and not out and "unknown preset" in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["words", "--preset", "chacon"],
    ["words", "--level", "1"],
    ["words", "--preset", "chacon", "--schedule", "x.json", "--level", "1"],
    ["veech", "--preset", "chacon"],
    ["veech", "--preset", "chacon", "--alpha", "one third"],
    ["matrices", "--preset", "chacon", "--level", "2", "--to", "1"],
    ["words", "--preset", "chacon", "--param", "a", "--level", "1"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, argv)
    assert code == 2
    assert "usage" in err


def test_realize_inline_data(capsys):
    data = '{"B": [1], "r": {"period": [2]}, "z": {"1": "1/2"}, "v": {"1": 1}, "w": 1}'
    code, rep, _ = run_json(capsys, ["realize", "--data", data])
    assert code == 0
    assert rep["result"]["schedule"] == {"preperiod": [], "tail": {"periodic": [[0, 1]]}}
    assert rep["result"]["dimension_group"]["unit"] == [1, 1]


def test_veech_irrational(capsys):
    code, rep, _ = run_json(capsys, ["veech", "--preset", "chacon", "--alpha-center", "0.41421",
                                     "--alpha-radius", "1/1000000"])
    assert code == 0 and rep["result"]["verdict"] == "excluded"


def test_presets_listing(capsys):
    code, rep, _ = run_json(capsys, ["presets"])
    names = [p["name"] for p in rep["result"]["presets"]]
    assert "chacon" in names and "dwmu-one" in names and len(names) == 7


def test_console_module_exit_code():
    proc = subprocess.run([sys.executable, "-m", "ferenczi.cli", "words", "--preset", "chacon", "--level", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "0010"
    bad = subprocess.run([sys.executable, "-m", "ferenczi.cli", "words"], capture_output=True, text=True)
    assert bad.returncode == 2
