"""Endpoint abstraction and HTTP client for the plugin wire contract.

Built-in models are wrapped in LocalEndpoint so callers see one interface
for in-process and remote plugins alike:

    GET  {base}/health     -> {"status": "ok"}
    GET  {base}/metadata   -> manifest JSON
    POST {base}/summarize  {"batch": [{"text", "title"?, "ratio", "arguments": {}}]}
                           -> {"summaries": ["..."]}
    POST {base}/evaluate   {"batch": [{"candidate", "references": [...]}],
                            "arguments": {}} -> {"scores": [{name: number}]}
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import httpx

from .manifest import PluginManifest

DEFAULT_TIMEOUT = 120.0
HEALTH_COOLDOWN = 30.0


class Timeout(RuntimeError):
    pass


class ProtocolError(RuntimeError):
    pass


class RemoteError(RuntimeError):
    pass


class ArgumentValidation(ValueError):
    pass


class PluginEndpoint(Protocol):
    manifest: PluginManifest

    def health(self) -> str: ...
    def summarize(self, batch: list[dict], timeout: float) -> list[str]: ...
    def evaluate(self, batch: list[dict], arguments: dict, timeout: float) -> list[dict]: ...


@dataclass
class LocalEndpoint:
    """In-process endpoint wrapping built-in callables; same contract,
    no serialization."""

    manifest: PluginManifest
    summarize_fn: Callable[[list[dict]], list[str]] | None = None
    evaluate_fn: Callable[[list[dict], dict], list[dict]] | None = None

    def health(self) -> str:
        return "healthy"

    def summarize(self, batch: list[dict], timeout: float = DEFAULT_TIMEOUT) -> list[str]:
        if self.summarize_fn is None:
            raise ProtocolError(f"{self.manifest.name} is not a summarizer")
        return self.summarize_fn(batch)

    def evaluate(
        self, batch: list[dict], arguments: dict | None = None, timeout: float = DEFAULT_TIMEOUT
    ) -> list[dict]:
        if self.evaluate_fn is None:
            raise ProtocolError(f"{self.manifest.name} is not a measure")
        return self.evaluate_fn(batch, arguments or {})


@dataclass
class RemoteEndpoint:
    """HTTP plugin endpoint with cached health state."""

    base_url: str
    manifest: PluginManifest
    health_state: str = "unknown"  # unknown | healthy | unreachable
    last_checked: float = 0.0
    max_connections: int = 4
    transport: httpx.BaseTransport | None = None  # injectable for tests

    def _client(self, timeout: float) -> httpx.Client:
        return httpx.Client(
            base_url=self.base_url.rstrip("/"),
            timeout=timeout,
            limits=httpx.Limits(max_connections=self.max_connections),
            transport=self.transport,
        )

    def health(self, timeout: float = 5.0, cooldown: float = HEALTH_COOLDOWN) -> str:
        now = time.monotonic()
        if self.health_state != "unknown" and now - self.last_checked < cooldown:
            return self.health_state
        try:
            with self._client(timeout) as client:
                resp = client.get("/health")
            body = resp.json()
            ok = resp.status_code == 200 and body.get("status") == "ok"
            self.health_state = "healthy" if ok else "unreachable"
        except Exception:
            self.health_state = "unreachable"
        self.last_checked = now
        return self.health_state

    def _post(self, path: str, payload: dict, timeout: float) -> dict:
        try:
            with self._client(timeout) as client:
                resp = client.post(path, json=payload)
        except httpx.TimeoutException as exc:
            self.health_state = "unreachable"
            self.last_checked = time.monotonic()
            raise Timeout(f"{self.base_url}{path} timed out after {timeout}s") from exc
        except httpx.HTTPError as exc:
            self.health_state = "unreachable"
            self.last_checked = time.monotonic()
            raise Timeout(f"{self.base_url}{path} unreachable: {exc}") from exc
        if resp.status_code >= 500:
            try:
                message = resp.json().get("error", resp.text)
            except Exception:
                message = resp.text
            raise RemoteError(f"{self.base_url}{path}: {message}")
        if resp.status_code != 200:
            raise ProtocolError(f"{self.base_url}{path}: HTTP {resp.status_code}: {resp.text}")
        try:
            return resp.json()
        except Exception as exc:
            raise ProtocolError(f"{self.base_url}{path}: non-JSON body") from exc

    def summarize(self, batch: list[dict], timeout: float = DEFAULT_TIMEOUT) -> list[str]:
        body = self._post("/summarize", {"batch": batch}, timeout)
        summaries = body.get("summaries")
        if not isinstance(summaries, list) or len(summaries) != len(batch):
            raise ProtocolError("summaries must be a list matching the batch length")
        if not all(isinstance(s, str) for s in summaries):
            raise ProtocolError("every summary must be a string")
        return summaries

    def evaluate(
        self, batch: list[dict], arguments: dict | None = None, timeout: float = DEFAULT_TIMEOUT
    ) -> list[dict]:
        body = self._post("/evaluate", {"batch": batch, "arguments": arguments or {}}, timeout)
        scores = body.get("scores")
        if not isinstance(scores, list) or len(scores) != len(batch):
            raise ProtocolError("scores must be a list matching the batch length")
        for entry in scores:
            if not isinstance(entry, dict) or not entry:
                raise ProtocolError("each score entry must be a non-empty object")
            for name, value in entry.items():
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ProtocolError(f"sub-score {name} is not a number")
        return scores


def _validate_batch_arguments(manifest: PluginManifest, batch: Sequence[dict]) -> None:
    for i, item in enumerate(batch):
        args = item.get("arguments") or {}
        try:
            manifest.validate_arguments(args)
        except ValueError as exc:
            raise ArgumentValidation(f"batch[{i}]: {exc}") from exc
        ratio = item.get("ratio")
        if ratio is not None and not 0 < ratio <= 1:
            raise ArgumentValidation(f"batch[{i}]: ratio must be in (0, 1], got {ratio}")


def call_summarize(
    ep: PluginEndpoint, batch: list[dict], timeout: float = DEFAULT_TIMEOUT
) -> list[str]:
    """Argument validation happens before any network traffic."""
    if not batch:
        return []
    _validate_batch_arguments(ep.manifest, batch)
    return ep.summarize(batch, timeout=timeout)


def call_evaluate(
    ep: PluginEndpoint,
    batch: list[dict],
    arguments: dict | None = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> list[dict]:
    if not batch:
        return []
    arguments = arguments or {}
    try:
        ep.manifest.validate_arguments(arguments)
    except ValueError as exc:
        raise ArgumentValidation(str(exc)) from exc
    scores = ep.evaluate(batch, arguments, timeout=timeout)
    bounds = ep.manifest.score_range
    if bounds is not None:
        lo, hi = bounds
        for entry in scores:
            for name, value in entry.items():
                if not lo <= value <= hi:
                    raise ProtocolError(
                        f"sub-score {name}={value} outside declared range [{lo}, {hi}]"
                    )
    return scores
