"""Command line access to all models and the evaluation pipeline.

Exit codes: 0 ok, 1 validation failure, 2 usage/input error. Payload goes
to stdout; diagnostics to stderr.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import pipeline, summarizers as S
from .config import build_registry, load_config, load_store
from .plugins import ManifestError, parse_manifest, manifest_to_dict
from .plugins.registry import UnknownPlugin
from .service import _run_builtin
from .textcore import EmptyInput, make_document


def _read_input(source: str | None) -> str:
    if source in (None, "-"):
        return sys.stdin.read()
    return Path(source).read_text("utf-8")


def _context(config_path: str | None):
    cfg = load_config(config_path)
    store = load_store(cfg)
    return cfg, store, build_registry(cfg, store)


@click.group()
def main():
    """Text summarization and evaluation workbench."""


@main.command()
@click.option("--model", required=True, help="Summarizer id (see `plugins list`).")
@click.option("--ratio", type=float, default=None, help="Budget as a fraction of sentences.")
@click.option("--sentences", type=int, default=None, help="Budget as a sentence count.")
@click.option("--words", type=int, default=None, help="Budget as a word cap.")
@click.option("--focus", default=None, help="Focus text for guided models.")
@click.option("--title", default=None, help="Document title.")
@click.option("--config", "config_path", default=None, help="Workbench config file.")
@click.argument("source", required=False, default="-")
def summarize(model, ratio, sentences, words, focus, title, config_path, source):
    """Summarize FILE (or stdin with '-')."""
    picked = [(m, v) for m, v in (("ratio", ratio), ("sentences", sentences), ("words", words))
              if v is not None]
    if len(picked) > 1:
        click.echo("error: pick at most one of --ratio/--sentences/--words", err=True)
        sys.exit(2)
    budget = S.Budget(*picked[0]) if picked else S.Budget("ratio", 0.2)
    cfg, store, registry = _context(config_path)
    try:
        entry = registry.get(model, type_filter="summarizer")
    except UnknownPlugin:
        known = [e.name for e in registry.list("summarizer", include_unhealthy=True)]
        click.echo(f"error: unknown model {model!r}; known models: {', '.join(known)}", err=True)
        sys.exit(2)
    try:
        text = _read_input(source)
        doc = make_document(text, title=title)
    except (OSError, EmptyInput) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    try:
        if entry.origin == "builtin":
            result = _run_builtin(entry, doc, budget, focus, store)
            summary = result.text
        else:
            from .plugins import call_summarize

            ratio_value = budget.value if budget.mode == "ratio" else min(
                1.0, budget.value / len(doc.sentences))
            item = {"text": text, "ratio": ratio_value, "arguments": {}}
            if title:
                item["title"] = title
            if focus:
                item["arguments"]["focus"] = focus
            summary = call_summarize(entry.endpoint, [item])[0]
    except Exception as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    click.echo(summary)


@main.command()
@click.option("--measures", required=True, help="Comma-separated measure ids.")
@click.option("--input", "input_path", required=True, type=click.Path(), help="JSONL dataset.")
@click.option("--export", "export_format", type=click.Choice(["csv", "latex"]), default=None)
@click.option("--out", "out_path", default=None, help="Write export/table to a file.")
@click.option("--save-run", "runs_dir", default=None, help="Persist the run under this directory.")
@click.option("--config", "config_path", default=None, help="Workbench config file.")
def evaluate(measures, input_path, export_format, out_path, runs_dir, config_path):
    """Score a <document, reference, candidates> JSONL dataset."""
    cfg, store, registry = _context(config_path)
    measure_ids = [m.strip() for m in measures.split(",") if m.strip()]
    try:
        with open(input_path, encoding="utf-8") as fh:
            examples, _ = pipeline.parse_dataset(fh, strict=True)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except pipeline.MalformedRecord as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if not examples:
        click.echo("error: dataset contains no examples", err=True)
        sys.exit(2)
    try:
        run = pipeline.run_evaluation(examples, measure_ids, registry)
    except pipeline.UnknownMeasure as exc:
        known = [e.name for e in registry.list("measure", include_unhealthy=True)]
        click.echo(f"error: unknown measure {exc}; known measures: {', '.join(known)}", err=True)
        sys.exit(2)
    if runs_dir:
        pipeline.save_run(run, runs_dir)
        click.echo(f"run saved: {run.run_id}", err=True)
    if export_format == "csv":
        payload = pipeline.export_csv(run)
    elif export_format == "latex":
        payload = pipeline.export_latex(run)
    else:
        payload = _aggregate_table(run).encode("utf-8")
    if out_path:
        Path(out_path).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _aggregate_table(run: pipeline.EvalRun) -> str:
    columns = sorted({name for bucket in run.aggregates.values() for name in bucket})
    widths = [max(len("model"), *(len(m) for m in run.aggregates))]
    widths += [max(len(c), 8) for c in columns]
    lines = ["  ".join(h.ljust(w) for h, w in zip(["model"] + columns, widths))]
    for model in sorted(run.aggregates):
        cells = [model.ljust(widths[0])]
        for c, w in zip(columns, widths[1:]):
            value = run.aggregates[model].get(c)
            cells.append((f"{value:.4f}" if value is not None else "-").ljust(w))
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


@main.group()
def plugins():
    """Inspect and validate plugins."""


@plugins.command("list")
@click.option("--type", "type_filter", type=click.Choice(["summarizer", "measure"]), default=None)
@click.option("--include-unhealthy", is_flag=True, default=False)
@click.option("--config", "config_path", default=None)
def plugins_list(type_filter, include_unhealthy, config_path):
    cfg, store, registry = _context(config_path)
    rows = registry.list(type_filter=type_filter, include_unhealthy=include_unhealthy)
    for e in rows:
        click.echo(f"{e.name}\t{e.manifest.type}\t{e.manifest.version}\t{e.origin}")


@plugins.command("validate")
@click.argument("manifest_path", type=click.Path())
def plugins_validate(manifest_path):
    """Validate a plugin manifest; exits 1 when invalid."""
    try:
        data = Path(manifest_path).read_bytes()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    try:
        manifest = parse_manifest(data)
    except ManifestError as exc:
        for violation in exc.violations:
            click.echo(violation)
        sys.exit(1)
    click.echo(f"valid: {manifest.name} ({manifest.type} {manifest.version})")


@main.command()
@click.option("--config", "config_path", default=None, help="Workbench config file.")
@click.option("--host", default="127.0.0.1")
def serve(config_path, host):
    """Run the HTTP service until signaled."""
    import uvicorn

    from .service import create_app

    cfg = load_config(config_path)
    app = create_app(cfg)
    uvicorn.run(app, host=host, port=cfg.port)


if __name__ == "__main__":
    main()
