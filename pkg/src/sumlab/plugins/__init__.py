"""Plugin system: manifest parsing, the HTTP wire contract for external
summarizers and measures, and a registry unifying built-ins with remotes."""

from .manifest import (
    ArgumentSpec,
    ManifestError,
    PluginManifest,
    manifest_to_dict,
    parse_manifest,
)
from .client import (
    ArgumentValidation,
    PluginEndpoint,
    ProtocolError,
    RemoteEndpoint,
    RemoteError,
    Timeout,
    LocalEndpoint,
    call_evaluate,
    call_summarize,
)
from .conformance import run_conformance
from .registry import DuplicateName, Registry, UnknownPlugin, build_default_registry

__all__ = [
    "ArgumentSpec",
    "ArgumentValidation",
    "DuplicateName",
    "LocalEndpoint",
    "ManifestError",
    "PluginEndpoint",
    "PluginManifest",
    "ProtocolError",
    "Registry",
    "RemoteEndpoint",
    "RemoteError",
    "Timeout",
    "UnknownPlugin",
    "build_default_registry",
    "call_evaluate",
    "call_summarize",
    "manifest_to_dict",
    "parse_manifest",
    "run_conformance",
]
