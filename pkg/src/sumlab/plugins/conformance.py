"""Protocol conformance suite for plugin endpoints.

The same checks gate built-in endpoints and external plugins: a healthy
endpoint, a manifest that survives a serialization round trip, and wire
behavior matching the contract on a fixed shared corpus. Returns a list
of violation strings; an empty list means the endpoint conforms.
"""

from __future__ import annotations

import yaml

from .client import PluginEndpoint, call_evaluate, call_summarize
from .manifest import ManifestError, manifest_to_dict, parse_manifest

# The shared corpus every endpoint is exercised on.
CONFORMANCE_CORPUS = [
    "The cat sat on the mat. A dog slept in the garden. Birds sang from the tree.",
    "Fish swam in the river. The sun warmed the house all afternoon.",
]

CONFORMANCE_PAIRS = [
    ("the cat sat on the mat", ["the cat sat on the mat"]),
    ("a dog slept", ["a dog slept in the garden", "the dog was asleep"]),
    ("birds sang", ["fish swam in the river"]),
]


def run_conformance(endpoint: PluginEndpoint, timeout: float = 30.0) -> list[str]:
    problems: list[str] = []

    if endpoint.health() != "healthy":
        return ["endpoint is not healthy"]

    manifest = endpoint.manifest
    try:
        again = parse_manifest(yaml.safe_dump(manifest_to_dict(manifest)))
    except ManifestError as exc:
        problems.append(f"manifest does not round-trip: {exc}")
    else:
        if again.name != manifest.name or again.type != manifest.type:
            problems.append("manifest round-trip changed identity fields")

    if manifest.type == "summarizer":
        problems.extend(_check_summarizer(endpoint, timeout))
    elif manifest.type == "measure":
        problems.extend(_check_measure(endpoint, timeout))
    else:
        problems.append(f"unknown plugin type: {manifest.type}")
    return problems


def _check_summarizer(endpoint: PluginEndpoint, timeout: float) -> list[str]:
    problems: list[str] = []
    # guided summarizers declare a focus argument; give them one
    arguments = {"focus": "the cat"} if endpoint.manifest.argument("focus") else {}
    batch = [{"text": text, "ratio": 0.5, "arguments": dict(arguments)}
             for text in CONFORMANCE_CORPUS]
    try:
        summaries = call_summarize(endpoint, batch, timeout=timeout)
    except Exception as exc:
        return [f"summarize call failed: {type(exc).__name__}: {exc}"]
    if len(summaries) != len(batch):
        problems.append("summary count does not match batch length")
    for i, summary in enumerate(summaries):
        if not isinstance(summary, str) or not summary.strip():
            problems.append(f"summary {i} is empty or not a string")
    try:
        if call_summarize(endpoint, [], timeout=timeout) != []:
            problems.append("empty batch must yield an empty list")
    except Exception as exc:
        problems.append(f"empty batch raised: {type(exc).__name__}: {exc}")
    return problems


def _check_measure(endpoint: PluginEndpoint, timeout: float) -> list[str]:
    problems: list[str] = []
    batch = [{"candidate": c, "references": rs} for c, rs in CONFORMANCE_PAIRS]
    try:
        scores = call_evaluate(endpoint, batch, timeout=timeout)
    except Exception as exc:
        return [f"evaluate call failed: {type(exc).__name__}: {exc}"]
    if len(scores) != len(batch):
        problems.append("score count does not match batch length")
    key_sets = {tuple(sorted(entry)) for entry in scores if isinstance(entry, dict)}
    if len(key_sets) > 1:
        problems.append("sub-score keys differ across batch entries")
    bounds = endpoint.manifest.score_range
    for i, entry in enumerate(scores):
        if not isinstance(entry, dict) or not entry:
            problems.append(f"score {i} is not a non-empty object")
            continue
        for name, value in entry.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                problems.append(f"score {i} sub-score {name} is not numeric")
            elif bounds is not None and not bounds[0] <= value <= bounds[1]:
                problems.append(f"score {i} sub-score {name} outside declared range")
    try:
        if call_evaluate(endpoint, [], timeout=timeout) != []:
            problems.append("empty batch must yield an empty list")
    except Exception as exc:
        problems.append(f"empty batch raised: {type(exc).__name__}: {exc}")
    return problems
