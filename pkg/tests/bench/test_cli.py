"""Tests for the benchmark command line."""
import csv
import io

import pytest
import yaml

from src.bench.cli import EXIT_CONFIG, EXIT_OK, comparison_rows, main


@pytest.fixture(autouse=True)
def quiet_logging(mocker):
    """Keep the command line from replacing the test logging handlers."""
    mocker.patch("src.bench.cli.configure_logging")


@pytest.fixture
def config_file(tmp_path, pendulum_experiment):
    """Experiment YAML for the command line."""
    path = tmp_path / "pendulum.yaml"
    path.write_text(yaml.safe_dump(pendulum_experiment))
    return path


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_run_and_metrics(config_file, tmp_path, capsys):
    """Test run followed by metrics recomputation."""
    out = tmp_path / "run"
    assert main(["run", str(config_file), "--out", str(out), "--trials", "1"]) == EXIT_OK
    written = (out / "summary.csv").read_text()
    assert capsys.readouterr().out == written
    assert len(list((out / "logs").iterdir())) == 1

    assert main(["metrics", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == written


def test_run_overrides(config_file, tmp_path):
    """Test that seed and preset flags reach the stored configuration."""
    out = tmp_path / "override"
    code = main(["run", str(config_file), "--out", str(out), "--trials", "1", "--seed-base", "9", "--preset", "mppi"])
    assert code == EXIT_OK
    stored = yaml.safe_load((out / "config.yaml").read_text())
    assert stored["seed_base"] == 9
    assert stored["preset"] == "mppi"


def test_compare(config_file, tmp_path, capsys):
    """Test the rank comparison of two result directories."""
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(config_file), "--out", str(a)]) == EXIT_OK
    assert main(["run", str(config_file), "--out", str(b), "--preset", "mppi"]) == EXIT_OK
    capsys.readouterr()

    target = tmp_path / "cmp" / "comparison.csv"
    code = main(["compare", str(a), str(b), "--metric", "cumulative_cost", "--out", str(target)])
    assert code == EXIT_OK
    table = rows(target.read_text())
    assert [row["metric"] for row in table] == ["cumulative_cost"]
    assert table[0]["n_a"] == "2"
    assert 0.0 <= float(table[0]["p_value"]) <= 1.0
    assert capsys.readouterr().out == target.read_text()

    assert comparison_rows(a, a, ["cumulative_cost"])[0]["superiority"] == "0.5"


def test_compare_unknown_metric(config_file, tmp_path):
    """Test that unknown metric names are a configuration error."""
    out = tmp_path / "a"
    assert main(["run", str(config_file), "--out", str(out), "--trials", "1"]) == EXIT_OK
    assert main(["compare", str(out), str(out), "--metric", "happiness"]) == EXIT_CONFIG


def test_bad_configuration_exit_code(tmp_path):
    """Test exit code 2 for invalid and missing files."""
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({"trials": -1}))
    assert main(["run", str(bad)]) == EXIT_CONFIG
    assert main(["run", str(tmp_path / "missing.yaml")]) == EXIT_CONFIG


def test_unknown_preset_flag_rejected(config_file):
    """Test that argparse refuses unknown presets."""
    with pytest.raises(SystemExit):
        main(["run", str(config_file), "--preset", "fancy"])


def test_default_output_dir_from_settings(config_file, tmp_path, monkeypatch):
    """Test that MAMPPI_OUTPUT_DIR applies when the document does not set an output directory."""
    document = yaml.safe_load(config_file.read_text())
    del document["output_dir"]
    config_file.write_text(yaml.safe_dump(document))
    monkeypatch.setenv("MAMPPI_OUTPUT_DIR", str(tmp_path / "env-results"))
    assert main(["run", str(config_file), "--trials", "1"]) == EXIT_OK
    assert (tmp_path / "env-results" / "pendulum-test" / "summary.csv").exists()


def test_gen_traps_passes_count(config_file, tmp_path, mocker, capsys):
    """Test that gen-traps forwards the requested number of starts."""
    target = tmp_path / "starts.yaml"
    generate = mocker.patch("src.bench.cli.generate_trap_starts", return_value=target)
    assert main(["gen-traps", str(config_file), "--count", "7", "--scenario-out", str(target)]) == EXIT_OK
    assert generate.call_args.kwargs == {"output": target, "count": 7}
    assert capsys.readouterr().out.strip() == str(target)
