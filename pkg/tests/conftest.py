from __future__ import annotations

import numpy as np
import pytest

from sumlab.embeddings import VectorStore
from sumlab.plugins import build_default_registry
from sumlab.textcore import make_document

_terminal_reporter = None


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    global _terminal_reporter
    if _terminal_reporter is None:
        _terminal_reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    outcome = yield
    report = outcome.get_result()
    info = getattr(getattr(item, "function", None), "_acceptance", None)
    if info is not None and report.when == "call":
        number, label = info
        verdict = "PASS" if report.passed else "FAIL"
        report._acceptance_line = f"acceptance {number:2d} [{label}]: {verdict}"


@pytest.hookimpl(trylast=True)
def pytest_runtest_logreport(report):
    # One visible line per acceptance criterion, immune to output capture.
    line = getattr(report, "_acceptance_line", None)
    if line is not None and _terminal_reporter is not None:
        _terminal_reporter.write_line(line)


# 8-d toy vectors: distinct animals/actions get near-orthogonal directions
TOY_WORDS = [
    "cat", "dog", "bird", "fish", "mat", "sun", "tree", "river",
    "sat", "slept", "sang", "swam", "ran", "jumped", "house", "garden",
]


@pytest.fixture(scope="session")
def store() -> VectorStore:
    rng = np.random.RandomState(42)
    vocab = {}
    for word in TOY_WORDS:
        vec = rng.randn(8)
        vocab[word] = vec / np.linalg.norm(vec)
    # a couple of deliberately aligned pairs
    vocab["kitten"] = vocab["cat"] * 0.9 + vocab["dog"] * 0.1
    vocab["puppy"] = vocab["dog"] * 0.9 + vocab["cat"] * 0.1
    return VectorStore(dimension=8, vocab=vocab)


@pytest.fixture(scope="session")
def vector_file(tmp_path_factory, store):
    path = tmp_path_factory.mktemp("vectors") / "toy.vec"
    lines = [f"{len(store.vocab)} {store.dimension}"]
    for word, vec in store.vocab.items():
        lines.append(word + " " + " ".join(f"{x:.6f}" for x in vec))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def registry(store):
    return build_default_registry(store=store)


@pytest.fixture(scope="session")
def bare_registry():
    return build_default_registry(store=None)


@pytest.fixture()
def sample_doc():
    return make_document(
        "The cat sat on the mat in the warm sun. "
        "A dog slept in the garden near the tree. "
        "The bird sang from the tallest tree by the river. "
        "Fish swam in the river all day long.",
        title="Animals in the garden",
    )
