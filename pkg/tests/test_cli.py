"""CLI surface: command wiring, manifests, file outputs."""

import json

import pytest
from click.testing import CliRunner

from gridpilot.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_solve_bundled_case(runner):
    result = runner.invoke(main, ["--case", "ieee14", "solve"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["converged"] is True
    assert payload["iterations"] <= 10


def test_lindex_reports_classes(runner):
    result = runner.invoke(main, ["--case", "ieee30", "lindex"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["state_class"] == "normal"
    assert len(payload["l_local"]) == 24


def test_scan_two_bus_case(runner, tmp_path):
    case_path = tmp_path / "two.json"
    from gridpilot.caseio import save_case

    from conftest import make_two_bus

    save_case(make_two_bus(q=1.0, x=0.1), case_path)
    result = runner.invoke(
        main, ["--case", str(case_path), "scan", "--lambda-tol", "1e-5"]
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["lambda_max"] == pytest.approx(2.5, abs=1e-3)


def test_unknown_case_reference(runner):
    result = runner.invoke(main, ["--case", "ieee9999", "solve"])
    assert result.exit_code != 0
    assert "neither a file nor a bundled case" in result.output


def test_datagen_train_eval_pipeline(runner, tmp_path):
    from gridpilot.caseio import save_case

    from conftest import make_five_bus

    case_path = tmp_path / "five.json"
    save_case(make_five_bus(), case_path)
    out = tmp_path / "run"
    result = runner.invoke(main, [
        "--case", str(case_path), "--seed", "37", "--out", str(out),
        "datagen", "--count", "120", "--scale-min", "1.6", "--scale-max", "3.4",
        "--sigma", "0.1", "--candidates", "3,4,5", "--alarm", "0.25",
        "--step-dq", "0.05", "--budget", "3.0", "--name", "ds",
    ])
    assert result.exit_code == 0, result.output
    assert (out / "ds.jsonl").exists()
    assert (out / "ds.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "datagen"
    assert manifest["config"]["header"]["n_samples"] == 120

    result = runner.invoke(main, [
        "--case", str(case_path), "--out", str(out),
        "train", "--dataset", str(out / "ds.jsonl"),
        "--max-depth", "8", "--min-leaf", "2", "--name", "model",
    ])
    assert result.exit_code == 0, result.output
    assert (out / "model.json").exists()

    result = runner.invoke(main, [
        "--case", str(case_path), "--out", str(out),
        "eval", "--dataset", str(out / "ds.jsonl"),
        "--model", str(out / "model.json"),
    ])
    assert result.exit_code == 0, result.output
    assert "l_max" in result.output
    report = json.loads((out / "eval.json").read_text())
    assert report["indicator"]["n"] > 0


def test_episode_command(runner, tmp_path):
    from gridpilot.caseio import save_case

    from conftest import make_five_bus

    case_path = tmp_path / "five.json"
    save_case(make_five_bus(load_scale=1.8), case_path)
    out = tmp_path / "episodes"
    result = runner.invoke(main, [
        "--case", str(case_path), "--seed", "3", "--out", str(out),
        "episode", "--ticks", "6", "--episodes", "2",
        "--candidates", "3,4,5", "--spike-probability", "0.3",
    ])
    assert result.exit_code == 0, result.output
    assert (out / "episodes.csv").exists()


def test_version_flag(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
