"""HTTP API for the workbench: summarize, evaluate, run inspection,
plugin listing, overlap/plot data, and export downloads under /api/v1."""

from __future__ import annotations

import io
from typing import Optional

from fastapi import FastAPI, File, Form, HTTPException, Query, UploadFile
from fastapi.responses import Response
from pydantic import BaseModel, Field, model_validator

from . import pipeline, summarizers as S
from .config import AppConfig, build_registry, load_config, load_store
from .overlap import OverlapOptions, agreement_matrix, lexical_spans, span_pair_payload
from .plugins import UnknownPlugin, call_summarize, manifest_to_dict
from .plugins.builtins import text_tokens
from .textcore import EmptyInput, make_document
from .webtext import FetchError, fetch_article

API_PREFIX = "/api/v1"


class BudgetBody(BaseModel):
    mode: str = "ratio"
    value: float = 0.2


class OverlapBody(BaseModel):
    min_n: int = 2
    preserve_duplicates: bool = False
    ignore_stopwords: bool = False


class SummarizeBody(BaseModel):
    text: Optional[str] = None
    url: Optional[str] = None
    title: Optional[str] = None
    models: list[str] = Field(min_length=1)
    budget: BudgetBody = BudgetBody()
    focus: Optional[str] = None
    overlap: OverlapBody = OverlapBody()

    @model_validator(mode="after")
    def _exactly_one_input(self):
        if bool(self.text) == bool(self.url):
            raise ValueError("exactly one of text/url is required")
        return self


def _run_builtin(entry, doc, budget: S.Budget, focus: str | None, store, seed: int = 0):
    name = entry.name
    if name == "featuresum":
        return S.featuresum_summarize(doc, budget=budget)
    if name in ("textrank", "positionrank", "topicrank", "biased_textrank"):
        variant = {"textrank": "plain", "positionrank": "position",
                   "topicrank": "topic", "biased_textrank": "biased"}[name]
        cfg = S.RankConfig(variant=variant, focus=focus)
        return S.textrank_summarize(doc, cfg, budget, store=store, model_id=name)
    if name == "clustersum":
        if store is None:
            raise RuntimeError("clustersum needs embeddings.path configured")
        return S.cluster_summarize(doc, store, budget, seed=seed)
    raise UnknownPlugin(name)


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or load_config()
    store = load_store(config)
    registry = build_registry(config, store)
    app = FastAPI(title="sumlab", version="0.1.0")
    app.state.config = config
    app.state.registry = registry
    app.state.store = store

    if config.cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware, allow_origins=config.cors_origins,
            allow_methods=["*"], allow_headers=["*"],
        )

    def _get_run(run_id: str) -> pipeline.EvalRun:
        try:
            return pipeline.load_run(run_id, config.runs_dir)
        except pipeline.NotFound:
            raise HTTPException(404, f"unknown run: {run_id}")
        except pipeline.CorruptRun as exc:
            raise HTTPException(500, f"corrupt run on disk: {exc}")

    @app.post(API_PREFIX + "/summarize")
    def summarize(body: SummarizeBody):
        entries = []
        for model in body.models:
            try:
                entries.append(registry.get(model, type_filter="summarizer"))
            except UnknownPlugin:
                known = [e.name for e in registry.list("summarizer", include_unhealthy=True)]
                raise HTTPException(422, f"unknown model: {model}; known: {known}")
        if body.url:
            try:
                title, text = fetch_article(body.url)
            except FetchError as exc:
                raise HTTPException(400, str(exc))
            title = body.title or title
        else:
            text, title = body.text, body.title
        try:
            budget = S.Budget(body.budget.mode, body.budget.value)
            doc = make_document(text, title=title)
        except (ValueError, EmptyInput) as exc:
            raise HTTPException(400, str(exc))
        for entry in entries:
            if entry.name == "biased_textrank" and not body.focus:
                raise HTTPException(422, "FocusMissing: biased_textrank requires a focus")

        opts = OverlapOptions(
            min_n=body.overlap.min_n,
            preserve_duplicates=body.overlap.preserve_duplicates,
            ignore_stopwords=body.overlap.ignore_stopwords,
        )
        source_tokens = [t for s in doc.sentences for t in s.tokens]
        ratio = budget.value if budget.mode == "ratio" else min(
            1.0, max(0.01, (budget.value if budget.mode == "sentences" else 1)
                     / len(doc.sentences))
        )
        results = []
        for entry in entries:
            try:
                if entry.origin == "builtin":
                    summary = _run_builtin(entry, doc, budget, body.focus, store)
                    summary_text, selected = summary.text, list(summary.selected)
                else:
                    item = {"text": text, "ratio": ratio, "arguments": {}}
                    if title:
                        item["title"] = title
                    if body.focus:
                        item["arguments"]["focus"] = body.focus
                    summary_text = call_summarize(entry.endpoint, [item])[0]
                    selected = None
                summary_tokens = text_tokens(summary_text)
                spans = [
                    span_pair_payload(p, summary_tokens, source_tokens)
                    for p in lexical_spans(summary_tokens, source_tokens, opts)
                ]
                results.append({
                    "model": entry.name, "summary": summary_text,
                    "selected": selected, "spans": spans, "error": None,
                })
            except Exception as exc:
                results.append({
                    "model": entry.name, "summary": None, "selected": None,
                    "spans": [], "error": f"{type(exc).__name__}: {exc}",
                })
        succeeded = [(r["model"], r["summary"]) for r in results if r["error"] is None]
        agreement = None
        if len(succeeded) >= 2:
            matrix = agreement_matrix(succeeded)
            agreement = {
                "models": list(matrix.model_ids),
                "matrix": [list(row) for row in matrix.matrix],
                "measure": matrix.measure,
            }
        return {"results": results, "agreement": agreement}

    @app.post(API_PREFIX + "/evaluate")
    def evaluate(file: UploadFile = File(...), measures: str = Form(...)):
        measure_ids = [m.strip() for m in measures.split(",") if m.strip()]
        if not measure_ids:
            raise HTTPException(422, "no measures requested")
        content = file.file.read().decode("utf-8")
        try:
            examples, _ = pipeline.parse_dataset(io.StringIO(content), strict=True)
        except pipeline.MalformedRecord as exc:
            raise HTTPException(400, str(exc))
        if not examples:
            raise HTTPException(400, "EmptyDataset: no examples in upload")
        try:
            run = pipeline.run_evaluation(examples, measure_ids, registry)
        except pipeline.UnknownMeasure as exc:
            known = [e.name for e in registry.list("measure", include_unhealthy=True)]
            raise HTTPException(422, f"unknown measure: {exc}; known: {known}")
        pipeline.save_run(run, config.runs_dir)
        return {"run_id": run.run_id, "measures": run.measures,
                "aggregates": run.aggregates, "errors": run.errors}

    @app.get(API_PREFIX + "/plugins")
    def plugins(type: Optional[str] = Query(default=None),
                include_unhealthy: bool = Query(default=False)):
        entries = registry.list(type_filter=type, include_unhealthy=include_unhealthy)
        return [
            {"id": e.name, "manifest": manifest_to_dict(e.manifest), "origin": e.origin}
            for e in entries
        ]

    @app.get(API_PREFIX + "/runs")
    def runs():
        return {"runs": pipeline.list_runs(config.runs_dir)}

    @app.get(API_PREFIX + "/runs/{run_id}")
    def run_detail(run_id: str):
        run = _get_run(run_id)
        return {
            "run_id": run.run_id, "created": run.created, "measures": run.measures,
            "models": sorted(run.aggregates), "aggregates": run.aggregates,
            "example_ids": sorted(run.examples), "errors": run.errors,
        }

    @app.get(API_PREFIX + "/runs/{run_id}/plot")
    def run_plot(run_id: str, model: str, x: str, y: str, bins: int = 10):
        run = _get_run(run_id)
        try:
            data = pipeline.plot_data(run, model, x, y, bins=bins)
        except pipeline.InsufficientData as exc:
            raise HTTPException(404, str(exc))
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        return {
            "model": data.model, "x": data.x, "y": data.y,
            "points": [{"example_id": i, "x": xv, "y": yv} for i, xv, yv in data.points],
            "histogram_x": {"edges": list(data.histogram_x.edges),
                            "counts": list(data.histogram_x.counts)},
            "histogram_y": {"edges": list(data.histogram_y.edges),
                            "counts": list(data.histogram_y.counts)},
            "pearson": data.pearson, "spearman": data.spearman,
        }

    @app.get(API_PREFIX + "/runs/{run_id}/examples/{example_id}")
    def run_example(run_id: str, example_id: int, min_n: int = 2,
                    preserve_duplicates: bool = False, ignore_stopwords: bool = False):
        run = _get_run(run_id)
        example = run.examples.get(example_id)
        if example is None:
            raise HTTPException(404, f"unknown example: {example_id}")
        opts = OverlapOptions(min_n=min_n, preserve_duplicates=preserve_duplicates,
                              ignore_stopwords=ignore_stopwords)
        ref_tokens = text_tokens(example.reference)
        candidates = {}
        for model, candidate in sorted(example.candidates.items()):
            cand_tokens = text_tokens(candidate)
            spans = [
                span_pair_payload(p, cand_tokens, ref_tokens)
                for p in lexical_spans(cand_tokens, ref_tokens, opts)
            ]
            candidates[model] = {"text": candidate, "spans_vs_reference": spans}
        return {
            "example_id": example.id, "document": example.document,
            "reference": example.reference, "candidates": candidates,
            "scores": run.scores.get(example.id, {}),
        }

    @app.get(API_PREFIX + "/runs/{run_id}/export")
    def run_export(run_id: str, format: str = "csv"):
        run = _get_run(run_id)
        if format == "csv":
            return Response(pipeline.export_csv(run), media_type="text/csv")
        if format == "latex":
            return Response(pipeline.export_latex(run), media_type="application/x-latex")
        raise HTTPException(422, f"unknown format: {format}")

    return app
