from __future__ import annotations

import json

import pytest

from sumlab.pipeline import (
    CorruptRun,
    EmptyRun,
    EvalExample,
    InsufficientData,
    MalformedRecord,
    MissingReference,
    NoCandidates,
    NotFound,
    UnknownMeasure,
    compute_aggregates,
    correlate,
    export_csv,
    export_latex,
    list_runs,
    load_run,
    parse_dataset,
    plot_data,
    run_content_hash,
    run_evaluation,
    run_from_dict,
    run_to_dict,
    save_run,
    serialize_run,
)

GOOD_JSONL = (
    '{"document": "The cat sat on the mat. It slept.", "reference": "the cat sat",'
    ' "candidates": {"m1": "the cat sat", "m2": "it slept well"}}\n'
    '{"document": "Dogs run in the park daily.", "reference": "dogs run daily",'
    ' "candidates": {"m1": "dogs run daily", "m2": "the park"}}\n'
)


def make_run(registry, measures=("rouge",)):
    examples, problems = parse_dataset(GOOD_JSONL)
    assert problems == []
    return run_evaluation(examples, list(measures), registry, run_id="fixture")


class TestParseDataset:
    def test_good_lines(self):
        examples, problems = parse_dataset(GOOD_JSONL)
        assert [e.id for e in examples] == [1, 2]
        assert examples[0].candidates["m2"] == "it slept well"
        assert problems == []

    def test_blank_lines_keep_physical_numbering(self):
        text = "\n" + GOOD_JSONL.replace("\n", "\n\n")
        examples, _ = parse_dataset(text)
        assert [e.id for e in examples] == [2, 4]

    def test_strict_raises_on_bad_json(self):
        with pytest.raises(MalformedRecord, match="line 1"):
            parse_dataset("not json\n")

    def test_strict_missing_reference(self):
        with pytest.raises(MissingReference, match="line 1"):
            parse_dataset('{"document": "d", "candidates": {"m": "c"}}\n')

    def test_strict_no_candidates(self):
        with pytest.raises(NoCandidates):
            parse_dataset('{"document": "d", "reference": "r"}\n')

    def test_lenient_collects_problems(self):
        text = 'oops\n{"document": "d", "reference": "r", "candidates": {"m": "c"}}\n[1]\n'
        examples, problems = parse_dataset(text, strict=False)
        assert [e.id for e in examples] == [2]
        assert [lineno for lineno, _ in problems] == [1, 3]

    def test_documents_only_variant(self):
        examples, problems = parse_dataset(
            '{"document": "just text"}\n',
            require_reference=False,
            require_candidates=False,
        )
        assert len(examples) == 1 and problems == []

    def test_non_string_candidate(self):
        with pytest.raises(MalformedRecord):
            parse_dataset('{"document": "d", "reference": "r", "candidates": {"m": 3}}\n')


class TestRunEvaluation:
    def test_identity_candidate(self, registry):
        run = make_run(registry)
        assert run.scores[1]["m1"]["rouge_1_f1"] == 1.0
        assert run.scores[2]["m1"]["rouge_1_f1"] == 1.0

    def test_aggregates_are_means(self, registry):
        run = make_run(registry)
        for model in ("m1", "m2"):
            vals = [run.scores[i][model]["rouge_1_f1"] for i in (1, 2)]
            assert run.aggregates[model]["rouge_1_f1"] == pytest.approx(sum(vals) / 2)

    def test_unknown_measure(self, registry):
        examples, _ = parse_dataset(GOOD_JSONL)
        with pytest.raises(UnknownMeasure):
            run_evaluation(examples, ["bogus"], registry)

    def test_summarizer_id_rejected_as_measure(self, registry):
        examples, _ = parse_dataset(GOOD_JSONL)
        with pytest.raises(UnknownMeasure):
            run_evaluation(examples, ["textrank"], registry)

    def test_empty_examples(self, registry):
        with pytest.raises(EmptyRun):
            run_evaluation([], ["rouge"], registry)

    def test_multiple_measures_merge_sub_scores(self, registry):
        run = make_run(registry, measures=("rouge", "bleu"))
        keys = run.scores[1]["m1"].keys()
        assert "rouge_1_f1" in keys and "bleu" in keys

    def test_failing_measure_records_errors(self, registry, bare_registry):
        # greedy_matching without a store fails per cell but rouge still runs
        examples, _ = parse_dataset(GOOD_JSONL)
        run = run_evaluation(examples, ["rouge", "greedy_matching"], bare_registry)
        assert run.scores[1]["m1"]["rouge_1_f1"] == 1.0
        failed = {(e["example_id"], e["model"]) for e in run.errors}
        assert failed == {(1, "m1"), (1, "m2"), (2, "m1"), (2, "m2")}
        assert all(e["measure"] == "greedy_matching" for e in run.errors)

    def test_determinism(self, registry):
        a = make_run(registry, measures=("rouge", "bleu", "meteor"))
        b = make_run(registry, measures=("rouge", "bleu", "meteor"))
        assert run_content_hash(a) == run_content_hash(b)


class TestCorrelate:
    def _run_with_scores(self, pairs):
        examples = {
            i: EvalExample(id=i, document="d", reference="r", candidates={"m": "c"})
            for i in range(1, len(pairs) + 1)
        }
        scores = {
            i: {"m": {"x": float(x), "y": float(y)}}
            for i, (x, y) in enumerate(pairs, start=1)
        }
        run = __import__("sumlab.pipeline", fromlist=["EvalRun"]).EvalRun(
            run_id="r", created="t", measures=["x", "y"],
            examples=examples, scores=scores, aggregates={},
        )
        run.aggregates = compute_aggregates(run)
        return run

    def test_identity_line(self):
        run = self._run_with_scores([(1, 1), (2, 2), (3, 3)])
        r, rho, n = correlate(run, "m", "x", "y")
        assert r == pytest.approx(1.0) and rho == pytest.approx(1.0) and n == 3

    def test_reverse_ranked(self):
        run = self._run_with_scores([(1, 3), (2, 2), (3, 1)])
        _, rho, _ = correlate(run, "m", "x", "y")
        assert rho == pytest.approx(-1.0)

    def test_hand_fixture(self):
        run = self._run_with_scores([(1, 1), (2, 2), (3, 4)])
        r, _, _ = correlate(run, "m", "x", "y")
        assert r == pytest.approx(0.9820, abs=1e-3)

    def test_constant_vector_is_none(self):
        run = self._run_with_scores([(1, 5), (2, 5), (3, 5)])
        r, rho, _ = correlate(run, "m", "x", "y")
        assert r is None and rho is None

    def test_ties_average_ranks(self):
        # x has a tie; spearman should use average ranks, matching a hand value
        run = self._run_with_scores([(1, 1), (1, 2), (2, 3)])
        _, rho, _ = correlate(run, "m", "x", "y")
        # ranks x = (1.5, 1.5, 3), ranks y = (1, 2, 3) -> r = sqrt(3)/2
        assert rho == pytest.approx(3 ** 0.5 / 2, abs=1e-9)

    def test_insufficient_data(self):
        run = self._run_with_scores([(1, 1)])
        with pytest.raises(InsufficientData):
            correlate(run, "m", "x", "y")


class TestPlotData:
    def test_counts_sum_to_points(self, registry):
        run = make_run(registry, measures=("rouge", "bleu"))
        pd = plot_data(run, "m1", "rouge_1_f1", "bleu", bins=4)
        assert sum(pd.histogram_x.counts) == len(pd.points)
        assert sum(pd.histogram_y.counts) == len(pd.points)
        assert len(pd.histogram_x.edges) == 5

    def test_degenerate_range(self, registry):
        run = make_run(registry)
        pd = plot_data(run, "m1", "rouge_1_f1", "rouge_1_f1", bins=3)
        # m1 scores are all 1.0, so every point lands in bin 0
        assert pd.histogram_x.counts == (2, 0, 0)

    def test_last_bin_right_inclusive(self):
        helper = TestCorrelate()
        run = helper._run_with_scores([(0, 0), (0.5, 1), (1, 2)])
        pd = plot_data(run, "m", "x", "y", bins=2)
        # half-open bins except the last: 0 -> bin 0, 0.5 -> bin 1, and the
        # maximum 1.0 stays inside bin 1 instead of overflowing
        assert pd.histogram_x.counts == (1, 2)

    def test_unknown_model(self, registry):
        run = make_run(registry)
        with pytest.raises(InsufficientData):
            plot_data(run, "nope", "rouge_1_f1", "rouge_2_f1")


class TestExports:
    def test_csv_shape(self, registry):
        run = make_run(registry)
        text = export_csv(run).decode("utf-8")
        lines = text.split("\n")
        assert lines[0].startswith("model,")
        assert lines[1].startswith("m1,") and lines[2].startswith("m2,")
        assert lines[-1] == ""
        assert "\r" not in text

    def test_csv_four_decimals(self, registry):
        run = make_run(registry)
        row = export_csv(run).decode("utf-8").split("\n")[1]
        for cell in row.split(",")[1:]:
            whole, frac = cell.split(".")
            assert len(frac) == 4

    def test_csv_deterministic(self, registry):
        run = make_run(registry, measures=("rouge", "bleu"))
        assert export_csv(run) == export_csv(run)

    def test_latex_structure(self, registry):
        run = make_run(registry)
        text = export_latex(run).decode("utf-8")
        assert text.startswith(r"\begin{tabular}")
        for marker in (r"\toprule", r"\midrule", r"\bottomrule", r"\end{tabular}"):
            assert marker in text
        assert r"rouge\_1\_f1" in text

    def test_empty_run_raises(self):
        run = run_from_dict(
            {
                "run_id": "x", "created": "t", "measures": [],
                "examples": {}, "scores": {}, "aggregates": {},
            }
        )
        with pytest.raises(EmptyRun):
            export_csv(run)
        with pytest.raises(EmptyRun):
            export_latex(run)


class TestPersistence:
    def test_save_load_round_trip(self, registry, tmp_path):
        run = make_run(registry)
        save_run(run, tmp_path)
        loaded = load_run("fixture", tmp_path)
        assert run_to_dict(loaded) == run_to_dict(run)

    def test_serialize_stable(self, registry):
        run = make_run(registry)
        assert serialize_run(run) == serialize_run(run)

    def test_schema_version_present(self, registry):
        run = make_run(registry)
        data = json.loads(serialize_run(run))
        assert data["version"] == "1"

    def test_not_found(self, tmp_path):
        with pytest.raises(NotFound):
            load_run("missing", tmp_path)

    def test_corrupt_aggregates_detected(self, registry, tmp_path):
        run = make_run(registry)
        path = save_run(run, tmp_path)
        data = json.loads(path.read_text())
        data["aggregates"]["m1"]["rouge_1_f1"] += 0.25
        path.write_text(json.dumps(data))
        with pytest.raises(CorruptRun):
            load_run("fixture", tmp_path)

    def test_list_runs(self, registry, tmp_path):
        assert list_runs(tmp_path) == []
        run = make_run(registry)
        save_run(run, tmp_path)
        run.run_id = "another"
        save_run(run, tmp_path)
        assert list_runs(tmp_path) == ["another", "fixture"]

    def test_no_temp_files_left(self, registry, tmp_path):
        run = make_run(registry)
        save_run(run, tmp_path)
        leftovers = [p for p in (tmp_path / "fixture").iterdir() if p.suffix == ".tmp"]
        assert leftovers == []
