"""Batch evaluation: JSONL dataset ingestion, multi-measure scoring across
models, aggregation, correlation, plot data, persistence, and CSV/LaTeX
export."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .plugins.client import ArgumentValidation, ProtocolError, RemoteError, Timeout, call_evaluate
from .plugins.registry import Registry, UnknownPlugin

RUN_SCHEMA_VERSION = "1"


class MalformedRecord(ValueError):
    pass


class MissingReference(MalformedRecord):
    pass


class NoCandidates(MalformedRecord):
    pass


class UnknownMeasure(ValueError):
    pass


class InsufficientData(ValueError):
    pass


class EmptyRun(ValueError):
    pass


class NotFound(KeyError):
    pass


class CorruptRun(ValueError):
    pass


@dataclass(frozen=True)
class EvalExample:
    id: int  # physical line number, 1-based
    document: str
    reference: str
    candidates: dict[str, str]


@dataclass
class EvalRun:
    run_id: str
    created: str
    measures: list[str]
    examples: dict[int, EvalExample]
    scores: dict[int, dict[str, dict[str, float]]]  # example -> model -> sub-score -> value
    aggregates: dict[str, dict[str, float]]  # model -> sub-score -> mean
    errors: list[dict] = field(default_factory=list)


def parse_dataset(
    stream: Iterable[str] | str,
    strict: bool = True,
    require_reference: bool = True,
    require_candidates: bool = True,
) -> tuple[list[EvalExample], list[tuple[int, str]]]:
    """One JSON object per non-blank line with document/reference/candidates.
    Strict mode raises on the first bad line; lenient mode collects
    (line number, error) pairs. The documents-only upload variant relaxes
    the reference/candidates requirements."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    examples: list[EvalExample] = []
    problems: list[tuple[int, str]] = []

    def fail(lineno: int, exc_type, message: str):
        if strict:
            raise exc_type(f"line {lineno}: {message}")
        problems.append((lineno, message))

    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            fail(lineno, MalformedRecord, f"invalid JSON ({exc.msg})")
            continue
        if not isinstance(record, dict):
            fail(lineno, MalformedRecord, "record must be a JSON object")
            continue
        document = record.get("document", "")
        reference = record.get("reference", "")
        candidates = record.get("candidates", {})
        if not isinstance(document, str) or not isinstance(reference, str):
            fail(lineno, MalformedRecord, "document and reference must be strings")
            continue
        if not isinstance(candidates, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in candidates.items()
        ):
            fail(lineno, MalformedRecord, "candidates must map model ids to strings")
            continue
        if require_reference and not reference:
            fail(lineno, MissingReference, "missing reference")
            continue
        if require_candidates and not candidates:
            fail(lineno, NoCandidates, "no candidates")
            continue
        examples.append(
            EvalExample(id=lineno, document=document, reference=reference, candidates=candidates)
        )
    return examples, problems


def _new_run_id() -> str:
    return uuid.uuid4().hex[:12]


def run_evaluation(
    examples: Sequence[EvalExample],
    measure_ids: Sequence[str],
    registry: Registry,
    run_id: str | None = None,
    timeout: float = 120.0,
) -> EvalRun:
    """Score every (example, model, measure) cell; a failing measure fills
    its cells with error records and never aborts the run."""
    if not examples:
        raise EmptyRun("no examples to evaluate")
    endpoints = {}
    for mid in measure_ids:
        try:
            endpoints[mid] = registry.get(mid, type_filter="measure")
        except UnknownPlugin:
            raise UnknownMeasure(mid) from None

    models = sorted({m for ex in examples for m in ex.candidates})
    scores: dict[int, dict[str, dict[str, float]]] = {ex.id: {} for ex in examples}
    errors: list[dict] = []

    for model in models:
        cells = [ex for ex in examples if model in ex.candidates]
        batch = [
            {"candidate": ex.candidates[model], "references": [ex.reference]} for ex in cells
        ]
        for mid, entry in endpoints.items():
            try:
                results = call_evaluate(entry.endpoint, batch, timeout=timeout)
                for ex, values in zip(cells, results):
                    scores[ex.id].setdefault(model, {}).update(
                        {k: float(v) for k, v in values.items()}
                    )
            except Exception as exc:
                # batch-level failure; retry per example so one bad cell
                # cannot take down the others (pointless when the endpoint
                # itself is unreachable)
                if not isinstance(exc, Timeout):
                    for ex in cells:
                        item = {"candidate": ex.candidates[model], "references": [ex.reference]}
                        try:
                            values = call_evaluate(entry.endpoint, [item], timeout=timeout)[0]
                            scores[ex.id].setdefault(model, {}).update(
                                {k: float(v) for k, v in values.items()}
                            )
                        except Exception as cell_exc:
                            errors.append(
                                {"example_id": ex.id, "model": model, "measure": mid,
                                 "error": f"{type(cell_exc).__name__}: {cell_exc}"}
                            )
                else:
                    for ex in cells:
                        errors.append(
                            {"example_id": ex.id, "model": model, "measure": mid,
                             "error": f"{type(exc).__name__}: {exc}"}
                        )

    run = EvalRun(
        run_id=run_id or _new_run_id(),
        created=datetime.now(timezone.utc).isoformat(),
        measures=sorted(measure_ids),
        examples={ex.id: ex for ex in examples},
        scores=scores,
        aggregates={},
        errors=errors,
    )
    run.aggregates = compute_aggregates(run)
    return run


def compute_aggregates(run: EvalRun) -> dict[str, dict[str, float]]:
    sums: dict[str, dict[str, list[float]]] = {}
    for per_model in run.scores.values():
        for model, values in per_model.items():
            bucket = sums.setdefault(model, {})
            for name, value in values.items():
                bucket.setdefault(name, []).append(value)
    return {
        model: {name: sum(vals) / len(vals) for name, vals in sorted(bucket.items())}
        for model, bucket in sorted(sums.items())
    }


# --------------------------------------------------------------------------
# Correlation and plot data

def _rankdata(values: np.ndarray) -> np.ndarray:
    """Average ranks for ties (1-based)."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    sorted_vals = values[order]
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        avg = (i + j) / 2 + 1
        ranks[order[i : j + 1]] = avg
        i = j + 1
    return ranks


def _pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    if np.all(x == x[0]) or np.all(y == y[0]):
        return None
    xc = x - x.mean()
    yc = y - y.mean()
    return float(np.dot(xc, yc) / math.sqrt(np.dot(xc, xc) * np.dot(yc, yc)))


def paired_values(run: EvalRun, model: str, x: str, y: str) -> list[tuple[int, float, float]]:
    points = []
    for ex_id in sorted(run.scores):
        values = run.scores[ex_id].get(model)
        if values and x in values and y in values:
            points.append((ex_id, values[x], values[y]))
    return points


def correlate(run: EvalRun, model: str, x: str, y: str) -> tuple[float | None, float | None, int]:
    """(Pearson r, Spearman rho, n); None for a constant vector."""
    points = paired_values(run, model, x, y)
    if len(points) < 2:
        raise InsufficientData(f"need >= 2 examples with both {x} and {y}")
    xs = np.array([p[1] for p in points])
    ys = np.array([p[2] for p in points])
    r = _pearson(xs, ys)
    rho = _pearson(_rankdata(xs), _rankdata(ys))
    return r, rho, len(points)


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class PlotData:
    model: str
    x: str
    y: str
    points: tuple[tuple[int, float, float], ...]
    histogram_x: Histogram
    histogram_y: Histogram
    pearson: float | None
    spearman: float | None


def _histogram(values: list[float], bins: int) -> Histogram:
    lo, hi = min(values), max(values)
    edges = [lo + (hi - lo) * i / bins for i in range(bins + 1)]
    counts = [0] * bins
    if hi == lo:
        counts[0] = len(values)
    else:
        for v in values:
            idx = min(int((v - lo) / (hi - lo) * bins), bins - 1)  # last bin right-inclusive
            counts[idx] += 1
    return Histogram(edges=tuple(edges), counts=tuple(counts))


def plot_data(run: EvalRun, model: str, x: str, y: str, bins: int = 10) -> PlotData:
    if bins < 1:
        raise ValueError("bins must be >= 1")
    points = paired_values(run, model, x, y)
    if not points:
        raise InsufficientData(f"no examples scored for model {model} with {x} and {y}")
    xs = [p[1] for p in points]
    ys = [p[2] for p in points]
    if len(points) >= 2:
        pearson = _pearson(np.array(xs), np.array(ys))
        spearman = _pearson(_rankdata(np.array(xs)), _rankdata(np.array(ys)))
    else:
        pearson = spearman = None
    return PlotData(
        model=model, x=x, y=y, points=tuple(points),
        histogram_x=_histogram(xs, bins), histogram_y=_histogram(ys, bins),
        pearson=pearson, spearman=spearman,
    )


# --------------------------------------------------------------------------
# Exports

def _sub_score_columns(run: EvalRun) -> list[str]:
    names = set()
    for bucket in run.aggregates.values():
        names.update(bucket)
    return sorted(names)


def export_csv(run: EvalRun) -> bytes:
    """Deterministic RFC-4180 CSV: model column plus one column per
    sub-score, 4 decimal places, LF line endings."""
    if not run.aggregates:
        raise EmptyRun("run has no aggregates")
    columns = _sub_score_columns(run)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model"] + columns)
    for model in sorted(run.aggregates):
        row = [model]
        for col in columns:
            value = run.aggregates[model].get(col)
            row.append(f"{value:.4f}" if value is not None else "")
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


def _latex_escape(text: str) -> str:
    return text.replace("_", r"\_")


def export_latex(run: EvalRun) -> bytes:
    if not run.aggregates:
        raise EmptyRun("run has no aggregates")
    columns = _sub_score_columns(run)
    lines = []
    lines.append(r"\begin{tabular}{l" + "r" * len(columns) + "}")
    lines.append(r"\toprule")
    header = ["model"] + [_latex_escape(c) for c in columns]
    lines.append(" & ".join(header) + r" \\")
    lines.append(r"\midrule")
    for model in sorted(run.aggregates):
        cells = [_latex_escape(model)]
        for col in columns:
            value = run.aggregates[model].get(col)
            cells.append(f"{value:.4f}" if value is not None else "--")
        lines.append(" & ".join(cells) + r" \\")
    lines.append(r"\bottomrule")
    lines.append(r"\end{tabular}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# Persistence

def run_to_dict(run: EvalRun) -> dict:
    return {
        "version": RUN_SCHEMA_VERSION,
        "run_id": run.run_id,
        "created": run.created,
        "measures": list(run.measures),
        "examples": {
            str(ex.id): {
                "document": ex.document,
                "reference": ex.reference,
                "candidates": dict(sorted(ex.candidates.items())),
            }
            for ex in run.examples.values()
        },
        "scores": {
            str(ex_id): {
                model: dict(sorted(values.items()))
                for model, values in sorted(per_model.items())
            }
            for ex_id, per_model in sorted(run.scores.items())
        },
        "aggregates": run.aggregates,
        "errors": run.errors,
    }


def run_from_dict(data: dict) -> EvalRun:
    examples = {
        int(ex_id): EvalExample(
            id=int(ex_id),
            document=raw["document"],
            reference=raw["reference"],
            candidates=raw["candidates"],
        )
        for ex_id, raw in data["examples"].items()
    }
    return EvalRun(
        run_id=data["run_id"],
        created=data["created"],
        measures=list(data["measures"]),
        examples=examples,
        scores={
            int(ex_id): {m: dict(v) for m, v in per_model.items()}
            for ex_id, per_model in data["scores"].items()
        },
        aggregates={m: dict(v) for m, v in data["aggregates"].items()},
        errors=list(data.get("errors", [])),
    )


def serialize_run(run: EvalRun) -> bytes:
    return json.dumps(run_to_dict(run), sort_keys=True, indent=1).encode("utf-8")


def run_content_hash(run: EvalRun) -> str:
    """Deterministic content hash; created timestamp and run id excluded."""
    data = run_to_dict(run)
    data.pop("created")
    data.pop("run_id")
    blob = json.dumps(data, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def save_run(run: EvalRun, runs_dir: str | Path) -> Path:
    """Atomic write (temp file then rename) of runs_dir/<id>/run.json."""
    run_dir = Path(runs_dir) / run.run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    target = run_dir / "run.json"
    fd, tmp = tempfile.mkstemp(dir=run_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(serialize_run(run))
        os.replace(tmp, target)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return target


def load_run(run_id: str, runs_dir: str | Path) -> EvalRun:
    path = Path(runs_dir) / run_id / "run.json"
    if not path.exists():
        raise NotFound(run_id)
    run = run_from_dict(json.loads(path.read_text("utf-8")))
    recomputed = compute_aggregates(run)
    for model, bucket in recomputed.items():
        stored = run.aggregates.get(model, {})
        for name, value in bucket.items():
            if name not in stored or abs(stored[name] - value) > 1e-9:
                raise CorruptRun(f"aggregate mismatch for {model}/{name}")
    if set(run.aggregates) != set(recomputed):
        raise CorruptRun("aggregate models do not match scores")
    return run


def list_runs(runs_dir: str | Path) -> list[str]:
    root = Path(runs_dir)
    if not root.exists():
        return []
    return sorted(p.name for p in root.iterdir() if (p / "run.json").exists())
