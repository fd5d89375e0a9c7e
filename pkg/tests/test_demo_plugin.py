"""The demo plugins run in a separate process and must pass the same
conformance suite as the built-ins."""

from __future__ import annotations

import math
import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest

from sumlab.plugins import RemoteEndpoint, call_evaluate, call_summarize, parse_manifest
from sumlab.plugins.conformance import CONFORMANCE_CORPUS, run_conformance
from sumlab.textcore import split_sentences

PLUGIN_DIR = Path(__file__).parent.parent / "plugin_demo"
SERVER = PLUGIN_DIR / "server.py"


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def _start(plugin: str):
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, str(SERVER), "--plugin", plugin, "--port", str(port)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    deadline = time.monotonic() + 10.0
    while time.monotonic() < deadline:
        try:
            if httpx.get(base + "/health", timeout=1.0).status_code == 200:
                break
        except httpx.HTTPError:
            time.sleep(0.05)
    else:
        proc.terminate()
        raise RuntimeError(f"{plugin} server did not come up")
    return proc, base


@pytest.fixture(scope="module")
def lead_k():
    proc, base = _start("lead_k")
    yield base
    proc.terminate()
    proc.wait(timeout=5)


@pytest.fixture(scope="module")
def length_ratio():
    proc, base = _start("length_ratio")
    yield base
    proc.terminate()
    proc.wait(timeout=5)


def _endpoint(base: str) -> RemoteEndpoint:
    manifest_json = httpx.get(base + "/metadata", timeout=5.0).json()
    import yaml

    return RemoteEndpoint(base_url=base, manifest=parse_manifest(yaml.safe_dump(manifest_json)))


class TestLeadK:
    def test_passes_shipped_conformance_suite(self, lead_k):
        assert run_conformance(_endpoint(lead_k)) == []

    def test_matches_core_sentence_splitter(self, lead_k):
        ep = _endpoint(lead_k)
        for ratio in (0.2, 0.4, 0.5, 1.0):
            batch = [{"text": t, "ratio": ratio, "arguments": {}} for t in CONFORMANCE_CORPUS]
            summaries = call_summarize(ep, batch)
            for text, summary in zip(CONFORMANCE_CORPUS, summaries):
                sentences = split_sentences(text)
                k = max(1, math.ceil(ratio * len(sentences)))
                expected = " ".join(text[a:b] for a, b in (s.char_span for s in sentences[:k]))
                assert summary == expected

    def test_ratio_one_returns_whole_text(self, lead_k):
        text = "One here. Two there. Three everywhere."
        out = call_summarize(
            _endpoint(lead_k), [{"text": text, "ratio": 1.0, "arguments": {}}]
        )
        assert out == [text]

    def test_five_sentences_ratio_04_gives_two(self, lead_k):
        text = "A one. B two. C three. D four. E five."
        out = call_summarize(
            _endpoint(lead_k), [{"text": text, "ratio": 0.4, "arguments": {}}]
        )
        assert out == ["A one. B two."]

    def test_empty_text_is_http_400(self, lead_k):
        resp = httpx.post(
            lead_k + "/summarize",
            json={"batch": [{"text": "   ", "ratio": 0.5, "arguments": {}}]},
            timeout=5.0,
        )
        assert resp.status_code == 400

    def test_bad_ratio_is_http_422(self, lead_k):
        resp = httpx.post(
            lead_k + "/summarize",
            json={"batch": [{"text": "A b.", "ratio": 1.5, "arguments": {}}]},
            timeout=5.0,
        )
        assert resp.status_code == 422
        assert resp.json()["errors"]


class TestLengthRatio:
    def test_passes_shipped_conformance_suite(self, length_ratio):
        assert run_conformance(_endpoint(length_ratio)) == []

    def test_equal_lengths(self, length_ratio):
        scores = call_evaluate(
            _endpoint(length_ratio),
            [{"candidate": "one two three", "references": ["uno dos tres"]}],
        )
        assert scores[0]["length_ratio"] == 1.0

    def test_half_length(self, length_ratio):
        scores = call_evaluate(
            _endpoint(length_ratio),
            [{"candidate": "one two", "references": ["uno dos tres cuatro"]}],
        )
        assert scores[0]["length_ratio"] == 0.5

    def test_empty_candidate(self, length_ratio):
        scores = call_evaluate(
            _endpoint(length_ratio), [{"candidate": "", "references": ["uno dos"]}]
        )
        assert scores[0]["length_ratio"] == 0.0

    def test_longer_candidate_clipped_to_one(self, length_ratio):
        scores = call_evaluate(
            _endpoint(length_ratio),
            [{"candidate": "a b c d e f", "references": ["a b"]}],
        )
        assert scores[0]["length_ratio"] == 1.0

    def test_registers_into_pipeline(self, length_ratio):
        """The remote measure slots into run_evaluation like a built-in."""
        from sumlab import pipeline
        from sumlab.plugins import Registry

        reg = Registry()
        reg.register_remote(_endpoint(length_ratio))
        examples, _ = pipeline.parse_dataset(
            '{"document": "d", "reference": "uno dos", "candidates": {"m": "one two"}}\n'
        )
        run = pipeline.run_evaluation(examples, ["length_ratio"], reg)
        assert run.scores[1]["m"]["length_ratio"] == 1.0
        assert run.errors == []
