"""Plugin manifest parsing and validation.

Manifests are YAML with name/type/version/source/citation plus an argument
schema; validation reports every violation at once rather than failing on
the first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import yaml

_SEMVER_RE = re.compile(
    r"^\d+\.\d+\.\d+(?:-[0-9A-Za-z.-]+)?(?:\+[0-9A-Za-z.-]+)?$"
)

_KINDS = ("string", "int", "float", "bool", "categorical")

PLUGIN_TYPES = ("summarizer", "measure")


class ManifestError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class ArgumentSpec:
    name: str
    kind: str
    default: object
    choices: tuple | None = None
    min: float | None = None
    max: float | None = None

    def validate_value(self, value) -> object:
        """Coerce and bound-check a call-time value; raises ValueError."""
        if self.kind == "string":
            if not isinstance(value, str):
                raise ValueError(f"{self.name}: expected string")
            return value
        if self.kind == "bool":
            if not isinstance(value, bool):
                raise ValueError(f"{self.name}: expected bool")
            return value
        if self.kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{self.name}: expected int")
        elif self.kind == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"{self.name}: expected float")
            value = float(value)
        if self.kind in ("int", "float"):
            if self.min is not None and value < self.min:
                raise ValueError(f"{self.name}: {value} below minimum {self.min}")
            if self.max is not None and value > self.max:
                raise ValueError(f"{self.name}: {value} above maximum {self.max}")
            return value
        # categorical
        if value not in (self.choices or ()):
            raise ValueError(f"{self.name}: {value!r} not in choices {self.choices}")
        return value


@dataclass(frozen=True)
class PluginManifest:
    name: str
    type: str
    version: str
    source: str = ""
    citation: str = ""
    arguments: tuple[ArgumentSpec, ...] = ()
    score_range: tuple[float, float] | None = None  # measure plugins only

    def argument(self, name: str) -> ArgumentSpec | None:
        for spec in self.arguments:
            if spec.name == name:
                return spec
        return None

    def validate_arguments(self, values: dict) -> dict:
        """Validate a call's argument dict; unknown names are violations."""
        out = {}
        for key, value in values.items():
            spec = self.argument(key)
            if spec is None:
                raise ValueError(f"unknown argument: {key}")
            out[key] = spec.validate_value(value)
        return out


def _check_argument(raw: dict, index: int, violations: list[str]) -> ArgumentSpec | None:
    prefix = f"BadArgumentSpec: arguments[{index}]"
    if not isinstance(raw, dict):
        violations.append(f"{prefix} must be a mapping")
        return None
    name = raw.get("name")
    kind = raw.get("kind")
    if not name or not isinstance(name, str):
        violations.append(f"{prefix} missing name")
        return None
    if kind not in _KINDS:
        violations.append(f"{prefix} ({name}): kind must be one of {_KINDS}")
        return None
    choices = raw.get("choices")
    if kind == "categorical":
        if not choices or not isinstance(choices, list):
            violations.append(f"{prefix} ({name}): categorical requires non-empty choices")
            return None
    elif choices is not None:
        violations.append(f"{prefix} ({name}): choices only valid for categorical")
        return None
    spec = ArgumentSpec(
        name=name,
        kind=kind,
        default=raw.get("default"),
        choices=tuple(choices) if choices else None,
        min=raw.get("min"),
        max=raw.get("max"),
    )
    if "default" not in raw:
        violations.append(f"{prefix} ({name}): default is required")
        return None
    try:
        spec.validate_value(spec.default)
    except ValueError as exc:
        violations.append(f"{prefix} ({name}): default invalid: {exc}")
        return None
    return spec


def parse_manifest(data: bytes | str) -> PluginManifest:
    """Parse and fully validate a YAML manifest; raises ManifestError with
    one entry per violation."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = yaml.safe_load(data)
    except yaml.YAMLError as exc:
        raise ManifestError([f"BadType: not valid YAML ({exc})"]) from exc
    if not isinstance(raw, dict):
        raise ManifestError(["BadType: manifest must be a mapping"])
    violations: list[str] = []
    for required in ("name", "type", "version"):
        value = raw.get(required)
        if value is None or value == "":
            violations.append(f"MissingField: {required}")
        elif not isinstance(value, str):
            violations.append(f"BadType: {required} must be a string")
    plugin_type = raw.get("type")
    if isinstance(plugin_type, str) and plugin_type not in PLUGIN_TYPES:
        violations.append(f"BadType: type must be one of {PLUGIN_TYPES}, got {plugin_type!r}")
    version = raw.get("version")
    if isinstance(version, str) and not _SEMVER_RE.match(version):
        violations.append(f"BadType: version is not semver: {version!r}")
    arguments = []
    raw_args = raw.get("arguments", [])
    if raw_args and not isinstance(raw_args, list):
        violations.append("BadArgumentSpec: arguments must be a list")
        raw_args = []
    for i, raw_arg in enumerate(raw_args or []):
        spec = _check_argument(raw_arg, i, violations)
        if spec is not None:
            arguments.append(spec)
    score_range = raw.get("score_range")
    if score_range is not None:
        if (
            not isinstance(score_range, list)
            or len(score_range) != 2
            or not all(isinstance(x, (int, float)) for x in score_range)
            or score_range[0] >= score_range[1]
        ):
            violations.append("BadType: score_range must be [min, max] with min < max")
            score_range = None
    if violations:
        raise ManifestError(violations)
    return PluginManifest(
        name=raw["name"],
        type=raw["type"],
        version=raw["version"],
        source=raw.get("source", "") or "",
        citation=raw.get("citation", "") or "",
        arguments=tuple(arguments),
        score_range=tuple(score_range) if score_range else None,
    )


def manifest_to_dict(manifest: PluginManifest) -> dict:
    """JSON/YAML-ready representation; round-trips through parse_manifest."""
    out = {
        "name": manifest.name,
        "type": manifest.type,
        "version": manifest.version,
        "source": manifest.source,
        "citation": manifest.citation,
        "arguments": [],
    }
    for spec in manifest.arguments:
        arg = {"name": spec.name, "kind": spec.kind, "default": spec.default}
        if spec.choices is not None:
            arg["choices"] = list(spec.choices)
        if spec.min is not None:
            arg["min"] = spec.min
        if spec.max is not None:
            arg["max"] = spec.max
        out["arguments"].append(arg)
    if manifest.score_range is not None:
        out["score_range"] = list(manifest.score_range)
    return out
