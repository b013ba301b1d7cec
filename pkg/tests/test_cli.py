"""Command line surface: exit codes, trace output, determinism, report."""

from pathlib import Path

import yaml
from click.testing import CliRunner

from roadfleet.cli import main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def write_minimal(tmp_path, **overrides):
    doc = {
        "name": "mini", "seed": 5, "duration": 40.0,
        "fleet": [{"count": 1, "region": "URBAN", "link": "XDSL"}],
        "packages": [{"name": "p", "version": "1.0.0"}],
        "timeline": [
            {"at": 2.0, "assign": {"station": "all", "package": "p",
                                   "version": "1.0.0", "activation": "ACTIVE"}},
            {"at": 39.0, "assert": {"metric": "all_converged", "op": "==",
                                    "value": 1}},
        ],
    }
    doc.update(overrides)
    path = tmp_path / "mini.yaml"
    path.write_text(yaml.safe_dump(doc))
    return path


def test_minimal_scenario_exits_zero(tmp_path):
    result = CliRunner().invoke(main, ["run", str(write_minimal(tmp_path))])
    assert result.exit_code == 0, result.output
    assert "result: PASS" in result.output


def test_failed_assert_exits_one(tmp_path):
    path = write_minimal(tmp_path, timeline=[
        {"at": 1.0, "inject_fault": {"station": "irs-000", "layer": "FUNCTION",
                                     "subject": "p", "install_corrupt": True,
                                     "repeat": -1}},
        {"at": 2.0, "assign": {"station": "all", "package": "p",
                               "version": "1.0.0", "activation": "ACTIVE"}},
        {"at": 39.0, "assert": {"metric": "all_converged", "op": "==", "value": 1}},
    ])
    result = CliRunner().invoke(main, ["run", str(path)])
    assert result.exit_code == 1
    assert "FAIL" in result.output


def test_parse_error_exits_two(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("timeline:\n  - at: 1.0\n    explode: {}\n")
    result = CliRunner().invoke(main, ["run", str(bad)])
    assert result.exit_code == 2


def test_same_seed_identical_trace_digests(tmp_path):
    path = write_minimal(tmp_path)
    runner = CliRunner()
    outputs = []
    for _ in range(2):
        result = runner.invoke(main, ["run", str(path), "--seed", "9"])
        assert result.exit_code == 0
        digest = [ln for ln in result.output.splitlines()
                  if ln.startswith("trace digest:")]
        outputs.append(digest[0])
    assert outputs[0] == outputs[1]


def test_trace_file_and_report_roundtrip(tmp_path):
    path = write_minimal(tmp_path)
    trace = tmp_path / "run.trace"
    runner = CliRunner()
    assert runner.invoke(main, ["run", str(path), "--trace", str(trace)]).exit_code == 0
    result = runner.invoke(main, ["report", str(trace)])
    assert result.exit_code == 0
    assert "[OK]" in result.output

    corrupted = trace.read_text().replace("EVENT BOOT", "EVENT B00T", 1)
    trace.write_text(corrupted)
    result = runner.invoke(main, ["report", str(trace)])
    assert result.exit_code == 2
    assert "MISMATCH" in result.output


def test_bootstrap_fragment_counts(tmp_path):
    result = CliRunner().invoke(main, [
        "bootstrap", "--count", "100",
        "--mix", "URBAN:0.3,HIGHWAY_DENSE:0.3,HIGHWAY_SPARSE:0.2,RURAL:0.2"])
    assert result.exit_code == 0
    fragment = yaml.safe_load(result.output)
    counts = {}
    for group in fragment["fleet"]:
        counts[group["region"]] = counts.get(group["region"], 0) + group["count"]
    assert counts == {"URBAN": 30, "HIGHWAY_DENSE": 30,
                      "HIGHWAY_SPARSE": 20, "RURAL": 20}


def test_shipped_scenarios_parse_and_pass():
    runner = CliRunner()
    for name in ("smoke.yaml", "recovery.yaml"):
        result = runner.invoke(main, ["run", str(SCENARIOS / name)])
        assert result.exit_code == 0, f"{name}: {result.output}"


def test_report_json_output(tmp_path):
    import json
    path = write_minimal(tmp_path)
    out = tmp_path / "report.json"
    result = CliRunner().invoke(main, ["run", str(path), "--report-json", str(out)])
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["scenario"] == "mini"
