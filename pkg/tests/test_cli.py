from __future__ import annotations

import json

import pytest
import yaml
from click.testing import CliRunner

from sumlab.cli import main

DATASET = (
    '{"document": "The cat sat on the mat. It slept.", "reference": "the cat sat",'
    ' "candidates": {"m1": "the cat sat", "m2": "it slept well"}}\n'
    '{"document": "Dogs run in the park daily.", "reference": "dogs run daily",'
    ' "candidates": {"m1": "dogs run daily", "m2": "the park"}}\n'
)

SOURCE_TEXT = (
    "The cat sat on the mat in the warm sun. "
    "A dog slept in the garden near the tree. "
    "The bird sang from the tallest tree by the river. "
    "Fish swam in the river all day long."
)

GOOD_MANIFEST = """\
name: lead_k
type: summarizer
version: 1.0.0
arguments:
  - name: k
    kind: int
    default: 3
"""


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def config_file(tmp_path, vector_file):
    path = tmp_path / "config.yaml"
    path.write_text(
        yaml.safe_dump(
            {"runs_dir": str(tmp_path / "runs"), "embeddings": {"path": str(vector_file)}}
        )
    )
    return str(path)


@pytest.fixture()
def dataset_file(tmp_path):
    path = tmp_path / "data.jsonl"
    path.write_text(DATASET)
    return str(path)


class TestSummarize:
    def test_stdin_default_budget(self, runner):
        result = runner.invoke(main, ["summarize", "--model", "textrank"], input=SOURCE_TEXT)
        assert result.exit_code == 0, result.stderr
        assert result.stdout.strip()

    def test_file_source_with_sentences_budget(self, runner, tmp_path):
        src = tmp_path / "doc.txt"
        src.write_text(SOURCE_TEXT)
        result = runner.invoke(
            main, ["summarize", "--model", "featuresum", "--sentences", "2", str(src)]
        )
        assert result.exit_code == 0
        assert result.stdout.strip() in SOURCE_TEXT

    def test_conflicting_budgets_exit_2(self, runner):
        result = runner.invoke(
            main,
            ["summarize", "--model", "textrank", "--ratio", "0.2", "--words", "10"],
            input=SOURCE_TEXT,
        )
        assert result.exit_code == 2
        assert "at most one" in result.stderr

    def test_unknown_model_exit_2_lists_known(self, runner):
        result = runner.invoke(main, ["summarize", "--model", "nope"], input=SOURCE_TEXT)
        assert result.exit_code == 2
        assert "textrank" in result.stderr
        assert result.stdout == ""

    def test_empty_input_exit_2(self, runner):
        result = runner.invoke(main, ["summarize", "--model", "textrank"], input="  ")
        assert result.exit_code == 2

    def test_focus_model_without_focus_exit_1(self, runner):
        result = runner.invoke(
            main, ["summarize", "--model", "biased_textrank"], input=SOURCE_TEXT
        )
        assert result.exit_code == 1

    def test_clustersum_needs_store(self, runner, config_file):
        without = runner.invoke(main, ["summarize", "--model", "clustersum"], input=SOURCE_TEXT)
        assert without.exit_code == 1
        with_store = runner.invoke(
            main,
            ["summarize", "--model", "clustersum", "--config", config_file],
            input=SOURCE_TEXT,
        )
        assert with_store.exit_code == 0, with_store.stderr


class TestEvaluate:
    def test_plain_table(self, runner, dataset_file):
        result = runner.invoke(
            main, ["evaluate", "--measures", "rouge", "--input", dataset_file]
        )
        assert result.exit_code == 0, result.stderr
        assert result.stdout.startswith("model")
        assert "m1" in result.stdout and "1.0000" in result.stdout

    def test_export_csv_stdout(self, runner, dataset_file):
        result = runner.invoke(
            main,
            ["evaluate", "--measures", "rouge", "--input", dataset_file, "--export", "csv"],
        )
        assert result.exit_code == 0
        lines = result.stdout.split("\n")
        assert lines[0].startswith("model,")

    def test_export_latex_to_file(self, runner, dataset_file, tmp_path):
        out = tmp_path / "table.tex"
        result = runner.invoke(
            main,
            ["evaluate", "--measures", "rouge", "--input", dataset_file,
             "--export", "latex", "--out", str(out)],
        )
        assert result.exit_code == 0
        assert out.read_bytes().startswith(b"\\begin{tabular}")

    def test_save_run_writes_run_json(self, runner, dataset_file, tmp_path):
        runs_dir = tmp_path / "runs"
        result = runner.invoke(
            main,
            ["evaluate", "--measures", "rouge", "--input", dataset_file,
             "--save-run", str(runs_dir)],
        )
        assert result.exit_code == 0
        saved = list(runs_dir.glob("*/run.json"))
        assert len(saved) == 1
        assert json.loads(saved[0].read_text())["version"] == "1"

    def test_unknown_measure_exit_2(self, runner, dataset_file):
        result = runner.invoke(
            main, ["evaluate", "--measures", "bogus", "--input", dataset_file]
        )
        assert result.exit_code == 2
        assert "rouge" in result.stderr

    def test_bad_dataset_exit_2_with_line(self, runner, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("not json\n")
        result = runner.invoke(main, ["evaluate", "--measures", "rouge", "--input", str(bad)])
        assert result.exit_code == 2
        assert "line 1" in result.stderr

    def test_missing_file_exit_2(self, runner):
        result = runner.invoke(
            main, ["evaluate", "--measures", "rouge", "--input", "/nonexistent.jsonl"]
        )
        assert result.exit_code == 2


class TestPlugins:
    def test_list_builtins(self, runner):
        result = runner.invoke(main, ["plugins", "list"])
        assert result.exit_code == 0
        names = [line.split("\t")[0] for line in result.stdout.strip().split("\n")]
        assert "textrank" in names and "rouge" in names

    def test_list_type_filter(self, runner):
        result = runner.invoke(main, ["plugins", "list", "--type", "measure"])
        rows = [line.split("\t") for line in result.stdout.strip().split("\n")]
        assert all(row[1] == "measure" for row in rows)

    def test_validate_good_manifest(self, runner, tmp_path):
        path = tmp_path / "manifest.yaml"
        path.write_text(GOOD_MANIFEST)
        result = runner.invoke(main, ["plugins", "validate", str(path)])
        assert result.exit_code == 0
        assert "valid: lead_k" in result.stdout

    def test_validate_bad_manifest_exit_1(self, runner, tmp_path):
        path = tmp_path / "manifest.yaml"
        path.write_text("type: oracle\nversion: nope\n")
        result = runner.invoke(main, ["plugins", "validate", str(path)])
        assert result.exit_code == 1
        assert "MissingField: name" in result.stdout
        assert "not semver" in result.stdout

    def test_validate_missing_file_exit_2(self, runner):
        result = runner.invoke(main, ["plugins", "validate", "/nope.yaml"])
        assert result.exit_code == 2
