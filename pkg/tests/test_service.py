from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from sumlab.config import AppConfig
from sumlab.service import create_app

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


@pytest.fixture(scope="module")
def client(tmp_path_factory, vector_file):
    runs_dir = tmp_path_factory.mktemp("runs")
    config = AppConfig(runs_dir=str(runs_dir), embeddings_path=str(vector_file))
    app = create_app(config)
    with TestClient(app) as c:
        yield c


def upload(client, measures="rouge", data=DATASET):
    return client.post(
        "/api/v1/evaluate",
        files={"file": ("data.jsonl", data.encode("utf-8"), "application/jsonl")},
        data={"measures": measures},
    )


class TestSummarizeEndpoint:
    def test_single_model(self, client):
        resp = client.post(
            "/api/v1/summarize",
            json={"text": SOURCE_TEXT, "models": ["textrank"],
                  "budget": {"mode": "sentences", "value": 2}},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["results"]) == 1
        result = body["results"][0]
        assert result["error"] is None and result["summary"]
        assert len(result["selected"]) == 2
        assert body["agreement"] is None

    def test_multiple_models_agreement(self, client):
        resp = client.post(
            "/api/v1/summarize",
            json={"text": SOURCE_TEXT, "models": ["textrank", "featuresum", "clustersum"]},
        )
        assert resp.status_code == 200
        body = resp.json()
        agreement = body["agreement"]
        assert agreement["models"] == ["textrank", "featuresum", "clustersum"]
        matrix = agreement["matrix"]
        assert all(matrix[i][i] == 1.0 for i in range(3))

    def test_spans_reference_source(self, client):
        resp = client.post(
            "/api/v1/summarize",
            json={"text": SOURCE_TEXT, "models": ["textrank"],
                  "overlap": {"min_n": 2}},
        )
        spans = resp.json()["results"][0]["spans"]
        assert spans, "an extractive summary always overlaps its source"
        for span in spans:
            cs, ce = span["rights"][0]["chars"]
            assert SOURCE_TEXT[cs:ce]

    def test_unknown_model_422_lists_known(self, client):
        resp = client.post(
            "/api/v1/summarize", json={"text": SOURCE_TEXT, "models": ["nope"]}
        )
        assert resp.status_code == 422
        assert "textrank" in resp.json()["detail"]

    def test_focus_missing_422(self, client):
        resp = client.post(
            "/api/v1/summarize", json={"text": SOURCE_TEXT, "models": ["biased_textrank"]}
        )
        assert resp.status_code == 422
        assert "FocusMissing" in resp.json()["detail"]

    def test_focus_supplied_ok(self, client):
        resp = client.post(
            "/api/v1/summarize",
            json={"text": SOURCE_TEXT, "models": ["biased_textrank"], "focus": "river fish"},
        )
        assert resp.status_code == 200
        assert resp.json()["results"][0]["error"] is None

    def test_text_and_url_rejected(self, client):
        resp = client.post(
            "/api/v1/summarize",
            json={"text": "x", "url": "http://example.org", "models": ["textrank"]},
        )
        assert resp.status_code == 422

    def test_neither_text_nor_url_rejected(self, client):
        resp = client.post("/api/v1/summarize", json={"models": ["textrank"]})
        assert resp.status_code == 422

    def test_empty_text_400(self, client):
        resp = client.post(
            "/api/v1/summarize", json={"text": "   ", "models": ["textrank"]}
        )
        assert resp.status_code in (400, 422)


class TestEvaluateEndpoint:
    def test_upload_and_run(self, client):
        resp = upload(client, measures="rouge,bleu")
        assert resp.status_code == 200
        body = resp.json()
        assert body["run_id"]
        assert body["aggregates"]["m1"]["rouge_1_f1"] == pytest.approx(1.0)
        assert "bleu" in body["aggregates"]["m1"]

    def test_bad_line_400_with_line_number(self, client):
        resp = upload(client, data='{"document": "d"}\nnot json\n')
        assert resp.status_code == 400
        assert "line 1" in resp.json()["detail"]

    def test_empty_dataset_400(self, client):
        resp = upload(client, data="\n\n")
        assert resp.status_code == 400
        assert "EmptyDataset" in resp.json()["detail"]

    def test_unknown_measure_422(self, client):
        resp = upload(client, measures="bogus")
        assert resp.status_code == 422
        assert "rouge" in resp.json()["detail"]


@pytest.fixture(scope="module")
def run_id(client):
    return upload(client, measures="rouge,bleu").json()["run_id"]


class TestRunEndpoints:
    def test_runs_listed(self, client, run_id):
        assert run_id in client.get("/api/v1/runs").json()["runs"]

    def test_run_detail(self, client, run_id):
        body = client.get(f"/api/v1/runs/{run_id}").json()
        assert body["models"] == ["m1", "m2"]
        assert body["example_ids"] == [1, 2]
        assert body["measures"] == ["bleu", "rouge"]

    def test_run_missing_404(self, client):
        assert client.get("/api/v1/runs/doesnotexist").status_code == 404

    def test_plot(self, client, run_id):
        resp = client.get(
            f"/api/v1/runs/{run_id}/plot",
            params={"model": "m1", "x": "rouge_1_f1", "y": "bleu", "bins": 4},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["points"]) == 2
        assert sum(body["histogram_x"]["counts"]) == 2

    def test_plot_unknown_model_404(self, client, run_id):
        resp = client.get(
            f"/api/v1/runs/{run_id}/plot",
            params={"model": "nope", "x": "rouge_1_f1", "y": "bleu"},
        )
        assert resp.status_code == 404

    def test_example_detail_spans(self, client, run_id):
        resp = client.get(f"/api/v1/runs/{run_id}/examples/1", params={"min_n": 2})
        assert resp.status_code == 200
        body = resp.json()
        assert body["reference"] == "the cat sat"
        spans = body["candidates"]["m1"]["spans_vs_reference"]
        assert spans and spans[0]["length"] >= 2
        assert body["scores"]["m1"]["rouge_1_f1"] == 1.0

    def test_example_min_n_raised_drops_spans(self, client, run_id):
        low = client.get(f"/api/v1/runs/{run_id}/examples/1", params={"min_n": 2}).json()
        high = client.get(f"/api/v1/runs/{run_id}/examples/1", params={"min_n": 9}).json()
        assert low["candidates"]["m1"]["spans_vs_reference"]
        assert high["candidates"]["m1"]["spans_vs_reference"] == []

    def test_example_missing_404(self, client, run_id):
        assert client.get(f"/api/v1/runs/{run_id}/examples/99").status_code == 404

    def test_export_csv(self, client, run_id):
        resp = client.get(f"/api/v1/runs/{run_id}/export", params={"format": "csv"})
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("text/csv")
        lines = resp.content.decode("utf-8").split("\n")
        assert lines[0].startswith("model,")

    def test_export_latex(self, client, run_id):
        resp = client.get(f"/api/v1/runs/{run_id}/export", params={"format": "latex"})
        assert resp.status_code == 200
        assert resp.content.startswith(b"\\begin{tabular}")

    def test_export_unknown_format(self, client, run_id):
        resp = client.get(f"/api/v1/runs/{run_id}/export", params={"format": "pdf"})
        assert resp.status_code == 422


class TestPluginsEndpoint:
    def test_list_all(self, client):
        body = client.get("/api/v1/plugins").json()
        ids = [e["id"] for e in body]
        assert "textrank" in ids and "rouge" in ids
        assert all(e["origin"] == "builtin" for e in body)

    def test_type_filter(self, client):
        body = client.get("/api/v1/plugins", params={"type": "measure"}).json()
        assert all(e["manifest"]["type"] == "measure" for e in body)
        assert [e["id"] for e in body] == [
            "rouge", "bleu", "meteor", "cider", "greedy_matching", "cosine_sim"
        ]

    def test_manifest_shape(self, client):
        body = client.get("/api/v1/plugins", params={"type": "summarizer"}).json()
        by_id = {e["id"]: e["manifest"] for e in body}
        assert any(a["name"] == "damping" for a in by_id["textrank"]["arguments"])
