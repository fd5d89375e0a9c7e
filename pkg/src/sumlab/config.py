"""Workbench configuration: YAML file plus SWB_PORT / SWB_CONFIG overrides."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .embeddings import VectorStore, load_vectors
from .measures import load_synonym_lexicon
from .plugins import RemoteEndpoint, Registry, build_default_registry, parse_manifest

ENV_CONFIG = "SWB_CONFIG"
ENV_PORT = "SWB_PORT"


@dataclass
class AppConfig:
    runs_dir: str = "runs"
    embeddings_path: str | None = None
    synonym_lexicon: str | None = None
    plugin_urls: list[str] = field(default_factory=list)
    port: int = 8000
    cors_origins: list[str] = field(default_factory=list)


def load_config(path: str | None = None) -> AppConfig:
    path = path or os.environ.get(ENV_CONFIG)
    cfg = AppConfig()
    if path:
        raw = yaml.safe_load(Path(path).read_text("utf-8")) or {}
        cfg.runs_dir = raw.get("runs_dir", cfg.runs_dir)
        embeddings = raw.get("embeddings") or {}
        cfg.embeddings_path = embeddings.get("path") or raw.get("embeddings.path")
        cfg.synonym_lexicon = raw.get("synonym_lexicon")
        cfg.plugin_urls = list(raw.get("plugins") or [])
        cfg.port = int(raw.get("port", cfg.port))
        cfg.cors_origins = list(raw.get("cors_origins") or [])
    if os.environ.get(ENV_PORT):
        cfg.port = int(os.environ[ENV_PORT])
    return cfg


def load_store(cfg: AppConfig) -> VectorStore | None:
    if not cfg.embeddings_path:
        return None
    return load_vectors(cfg.embeddings_path)


def _fetch_remote(url: str) -> RemoteEndpoint | None:
    import httpx

    try:
        resp = httpx.get(url.rstrip("/") + "/metadata", timeout=10.0)
        resp.raise_for_status()
        manifest = parse_manifest(yaml.safe_dump(resp.json()))
    except Exception as exc:
        print(f"warning: plugin at {url} not registered: {exc}", file=sys.stderr)
        return None
    return RemoteEndpoint(base_url=url.rstrip("/"), manifest=manifest)


def build_registry(cfg: AppConfig, store: VectorStore | None = None) -> Registry:
    lexicon = load_synonym_lexicon(cfg.synonym_lexicon) if cfg.synonym_lexicon else None
    remotes = [ep for ep in (_fetch_remote(u) for u in cfg.plugin_urls) if ep is not None]
    return build_default_registry(store=store, lexicon=lexicon, remotes=remotes)
