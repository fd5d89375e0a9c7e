"""Registry exposing built-in and remote models/measures uniformly."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from ..embeddings import VectorStore
from .builtins import builtin_measures, builtin_summarizers
from .client import LocalEndpoint, RemoteEndpoint
from .manifest import PluginManifest


class DuplicateName(ValueError):
    pass


class UnknownPlugin(KeyError):
    pass


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    manifest: PluginManifest
    endpoint: object  # LocalEndpoint | RemoteEndpoint
    origin: str  # builtin | remote

    def healthy(self) -> bool:
        return self.endpoint.health() == "healthy"


class Registry:
    """Concurrent reads, serialized mutations."""

    def __init__(self):
        self._entries: dict[str, RegistryEntry] = {}
        self._lock = threading.Lock()

    def register_builtin(self, endpoint: LocalEndpoint) -> RegistryEntry:
        return self._add(RegistryEntry(
            name=endpoint.manifest.name, manifest=endpoint.manifest,
            endpoint=endpoint, origin="builtin",
        ))

    def register_remote(self, endpoint: RemoteEndpoint) -> RegistryEntry:
        endpoint.health()
        return self._add(RegistryEntry(
            name=endpoint.manifest.name, manifest=endpoint.manifest,
            endpoint=endpoint, origin="remote",
        ))

    def _add(self, entry: RegistryEntry) -> RegistryEntry:
        with self._lock:
            if entry.name in self._entries:
                raise DuplicateName(f"plugin name already registered: {entry.name}")
            self._entries[entry.name] = entry
        return entry

    def get(self, name: str, type_filter: str | None = None) -> RegistryEntry:
        entry = self._entries.get(name)
        if entry is None or (type_filter and entry.manifest.type != type_filter):
            raise UnknownPlugin(name)
        return entry

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def list(
        self, type_filter: str | None = None, include_unhealthy: bool = False
    ) -> list[RegistryEntry]:
        """Stable ordering: builtins first (registration order), then remotes
        by name; unhealthy remotes omitted unless requested."""
        builtins = [e for e in self._entries.values() if e.origin == "builtin"]
        remotes = sorted(
            (e for e in self._entries.values() if e.origin == "remote"),
            key=lambda e: e.name,
        )
        out = []
        for entry in builtins + remotes:
            if type_filter and entry.manifest.type != type_filter:
                continue
            if not include_unhealthy and entry.origin == "remote" and not entry.healthy():
                continue
            out.append(entry)
        return out


def build_default_registry(
    store: VectorStore | None = None,
    lexicon: list[frozenset[str]] | None = None,
    remotes: list[RemoteEndpoint] | None = None,
) -> Registry:
    registry = Registry()
    for ep in builtin_summarizers(store):
        registry.register_builtin(ep)
    for ep in builtin_measures(store, lexicon):
        registry.register_builtin(ep)
    for remote in remotes or []:
        registry.register_remote(remote)
    return registry
