import json
from pathlib import Path

import pytest

from ultragram.cli import main
from ultragram.reports import emit
from ultragram.scenarios import (
    BUILTINS,
    ParseError,
    UnknownName,
    load_scenario,
    parse_scenario,
    run,
    scenario_from_dict,
)
from ultragram.verify import verify_report


def test_parse_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_scenario("{ not json")
    assert "line 1" in str(err.value)


def test_parse_rejects_missing_blocks():
    with pytest.raises(ParseError):
        parse_scenario(json.dumps({"ambient": {"group": {"group": "Z"}}}))


def test_unknown_element_reference():
    doc = {
        "ambient": {"group": {"group": "Z"}, "coefficients": {"field": "Fp", "p": 3}},
        "base_field": {"kind": "laurent", "t_value": 1},
        "elements": {"one": [[0, 1]]},
        "tasks": [{"task": "independence", "family": ["one", "ghost"]}],
        "precision": {"ceiling": 16},
    }
    with pytest.raises(UnknownName):
        scenario_from_dict(doc)


def test_empty_tasks_valid():
    doc = {
        "ambient": {"group": {"group": "Z"}, "coefficients": {"field": "Fp", "p": 3}},
        "base_field": {"kind": "laurent", "t_value": 1},
        "tasks": [],
        "precision": {"ceiling": 16},
    }
    scenario = scenario_from_dict(doc)
    report = run(scenario)
    assert report.tasks == []
    payload = emit(report, "structured")
    doc2 = json.loads(payload)
    assert doc2["schema"] == "ultragram/1"
    assert doc2["tasks"] == []


def test_builtins_parse_and_roundtrip():
    for name in BUILTINS:
        scenario = load_scenario(name)
        # the canonical scenario echoes through parse unchanged
        echo = json.dumps(scenario.canonical)
        assert parse_scenario(echo) == scenario


def test_report_echo_roundtrip():
    scenario = load_scenario("paper:sqrt-t")
    report = run(scenario)
    payload = json.loads(emit(report, "structured"))
    assert parse_scenario(json.dumps(payload["scenario"])) == scenario


def test_run_builtin_structured_deterministic():
    scenario = load_scenario("paper:fpt-y")
    a = emit(run(scenario), "structured")
    b = emit(run(scenario), "structured")
    assert a == b


def test_cli_exit_codes(tmp_path: Path, capsys):
    assert main(["run", "paper:sqrt-t"]) == 0
    # dependent verdicts are answers, not failures
    assert main(["run", "paper:notCA"]) == 0
    capsys.readouterr()
    assert main(["run", "no-such-builtin"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope", encoding="utf-8")
    assert main(["run", str(bad)]) == 1
    capsys.readouterr()


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in BUILTINS:
        assert name in out


def test_cli_runs_scenario_file(tmp_path: Path, capsys):
    doc = {
        "name": "local-test",
        "ambient": {"group": {"group": "Q"}, "coefficients": {"field": "Fp", "p": 5}},
        "base_field": {"kind": "laurent", "t_value": 1, "name": "F5(t)"},
        "elements": {"one": [[0, 1]], "root": [["1/2", 1]]},
        "tasks": [{"task": "independence", "family": ["one", "root"]}],
        "precision": {"ceiling": 24, "max_terms": 6},
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    out_path = tmp_path / "report.json"
    assert main(["run", str(path), "--format", "structured", "--output", str(out_path)]) == 0
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["tasks"][0]["outcome"]["verdict"] == "independent"


def test_cli_precision_overrides(tmp_path: Path):
    out_path = tmp_path / "r.json"
    assert main([
        "run", "paper:ti-minus-ti1", "--max-terms", "4",
        "--format", "structured", "--output", str(out_path),
    ]) == 0
    report = json.loads(out_path.read_text(encoding="utf-8"))
    streamed = report["tasks"][1]["outcome"]
    assert streamed["kind"] == "unbounded"
    assert len(streamed["evidence"]) == 4


def test_cli_verify_flag(tmp_path: Path):
    out_path = tmp_path / "r.json"
    assert main([
        "run", "paper:notCA", "--verify", "--format", "structured",
        "--output", str(out_path),
    ]) == 0
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["verification"]
    assert all(check["ok"] for check in report["verification"])


def test_verify_rejects_tampered_witness():
    scenario = load_scenario("paper:ti-minus-ti1")
    report = run(scenario)
    # corrupt the claimed maximum of the first nearest_point task
    doc = report.tasks[0].outcome
    assert doc["kind"] == "value"
    doc["value"] = ["7"]
    checks = verify_report(scenario, report)
    assert any(not c["ok"] for c in checks)


def test_text_format_stable():
    scenario = load_scenario("paper:sqrt-t")
    text = emit(run(scenario), "text").decode("utf-8")
    assert "vs_defectless" in text
    assert "n=2 e=2 f=1" in text


def test_seed_override_changes_sampling_but_stays_green(tmp_path: Path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", "paper:baur-sampling", "--seed", "1",
                 "--format", "structured", "--output", str(p1)]) == 0
    assert main(["run", "paper:baur-sampling", "--seed", "2",
                 "--format", "structured", "--output", str(p2)]) == 0
    for p in (p1, p2):
        doc = json.loads(p.read_text(encoding="utf-8"))
        assert doc["tasks"][0]["outcome"]["all_basis"] is True
