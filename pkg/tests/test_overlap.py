from __future__ import annotations

import random

import numpy as np
import pytest

from sumlab.measures import rouge
from sumlab.overlap import (
    AgreementMatrix,
    OverlapOptions,
    SpanPair,
    UnknownMeasure,
    agreement_matrix,
    lexical_spans,
    semantic_links,
    span_pair_payload,
)
from sumlab.plugins.builtins import text_tokens
from sumlab.textcore import make_document

WORDS = ["the", "black", "cat", "sat", "mat", "dog", "ran", "tree", "sun", "a"]


def random_tokens(rng, max_len=12):
    return [rng.choice(WORDS) for _ in range(rng.randint(0, max_len))]


class TestLexicalSpans:
    def test_simple_pair(self):
        pairs = lexical_spans(
            "the black cat sat".split(), "a black cat slept".split(), OverlapOptions(min_n=2)
        )
        assert len(pairs) == 1
        assert pairs[0].left == (1, 3) and pairs[0].rights == ((1, 3),)

    def test_identical_texts_single_group(self):
        pairs = lexical_spans("a b c d e".split(), "a b c d e".split(), OverlapOptions(min_n=2))
        assert len(pairs) == 1
        assert pairs[0].left == (0, 5) and pairs[0].length == 5

    def test_preserve_duplicates(self):
        pairs = lexical_spans(
            "x y x y".split(), "x y".split(),
            OverlapOptions(min_n=2, preserve_duplicates=True),
        )
        assert len(pairs) == 2
        assert all(p.rights == ((0, 2),) for p in pairs)
        assert {p.left for p in pairs} == {(0, 2), (2, 4)}
        assert pairs[0].group == pairs[1].group

    def test_without_duplicates_consumes_b(self):
        pairs = lexical_spans(
            "x y x y".split(), "x y".split(), OverlapOptions(min_n=2)
        )
        assert len(pairs) == 1

    def test_ignore_stopwords(self):
        a = "the of and cat sat".split()
        b = "the of and dog ran".split()
        with_stops = lexical_spans(a, b, OverlapOptions(min_n=2))
        without = lexical_spans(a, b, OverlapOptions(min_n=2, ignore_stopwords=True))
        assert with_stops and not without

    def test_empty_result_allowed(self):
        assert lexical_spans(["a"], ["b"], OverlapOptions(min_n=1)) == []

    def test_group_ids_dense(self):
        pairs = lexical_spans(
            "a b q q c d".split(), "a b z z c d".split(), OverlapOptions(min_n=2)
        )
        assert sorted({p.group for p in pairs}) == list(range(len({p.group for p in pairs})))

    def _check_invariants(self, a, b, opts):
        pairs = lexical_spans(a, b, opts)
        seen_left = set()
        seen_right = set()
        for p in pairs:
            assert p.length >= opts.min_n
            ls, le = p.left
            for rs, re in p.rights:
                assert [x.lower() for x in a[ls:le]] == [x.lower() for x in b[rs:re]]
                positions = set(range(rs, re))
                if not opts.preserve_duplicates:
                    assert not positions & seen_right
                    seen_right |= positions
            left_positions = set(range(ls, le))
            assert not left_positions & seen_left
            seen_left |= left_positions
        return pairs

    def test_random_invariants(self):
        rng = random.Random(1234)
        for _ in range(200):
            a = random_tokens(rng)
            b = random_tokens(rng)
            for opts in (
                OverlapOptions(min_n=1),
                OverlapOptions(min_n=2),
                OverlapOptions(min_n=2, preserve_duplicates=True),
                OverlapOptions(min_n=1, ignore_stopwords=True),
            ):
                self._check_invariants(a, b, opts)

    def test_min_n_monotonicity(self):
        rng = random.Random(99)
        for _ in range(100):
            a = random_tokens(rng)
            b = random_tokens(rng)
            totals = []
            for n in (1, 2, 3, 4):
                pairs = lexical_spans(a, b, OverlapOptions(min_n=n))
                totals.append(sum(p.length for p in pairs))
            assert all(x >= y for x, y in zip(totals, totals[1:]))

    def test_payload_offsets(self):
        doc_a = make_document("The black cat sat.")
        doc_b = make_document("A black cat slept.")
        ta = [t for s in doc_a.sentences for t in s.tokens]
        tb = [t for s in doc_b.sentences for t in s.tokens]
        pairs = lexical_spans(ta, tb, OverlapOptions(min_n=2))
        payload = span_pair_payload(pairs[0], ta, tb)
        cs, ce = payload["left"]["chars"]
        assert doc_a.raw[cs:ce] == "black cat"
        rs, re = payload["rights"][0]["chars"]
        assert doc_b.raw[rs:re] == "black cat"


class TestSemanticLinks:
    def test_verbatim_sentence_links(self, store):
        source = make_document("The cat sat on the mat. The dog ran far away.")
        summary = make_document("The cat sat on the mat.")
        links = semantic_links(summary.sentences, source.sentences, store, threshold=0.6)
        assert links == [(0, 0, pytest.approx(1.0))]

    def test_oov_summary_no_link(self, store):
        source = make_document("The cat sat.")
        summary = make_document("Qqq zzz www.")
        assert semantic_links(summary.sentences, source.sentences, store) == []

    def test_threshold_one_filters(self, store):
        source = make_document("The cat sat on the mat.")
        summary = make_document("The dog ran in the garden.")
        assert semantic_links(summary.sentences, source.sentences, store, threshold=1.0) == []

    def test_bad_threshold(self, store):
        source = make_document("The cat sat.")
        with pytest.raises(ValueError):
            semantic_links(source.sentences, source.sentences, store, threshold=1.5)


class TestAgreementMatrix:
    def test_identical_summaries(self):
        m = agreement_matrix([("a", "The cat sat."), ("b", "The cat sat.")])
        assert m.matrix == ((1.0, 1.0), (1.0, 1.0))

    def test_disjoint_vocabulary(self):
        m = agreement_matrix([("a", "The cat sat"), ("b", "Zebras gallop fast")])
        assert m.matrix[0][1] == 0.0 and m.matrix[1][0] == 0.0
        assert m.matrix[0][0] == 1.0

    def test_matches_per_pair_rouge(self):
        texts = [("m1", "The cat sat on the mat."),
                 ("m2", "The dog sat on a log."),
                 ("m3", "Cats and dogs sat together.")]
        m = agreement_matrix(texts)
        for i, (_, ti) in enumerate(texts):
            for j, (_, tj) in enumerate(texts):
                if i == j:
                    continue
                expected = rouge(text_tokens(ti), text_tokens(tj), 1).values["rouge_1_f1"]
                assert m.matrix[i][j] == pytest.approx(expected, abs=1e-12)

    def test_symmetry(self):
        m = agreement_matrix([("a", "The cat sat here."), ("b", "A cat sat there today.")])
        assert m.matrix[0][1] == pytest.approx(m.matrix[1][0], abs=1e-9)

    def test_unknown_measure(self):
        with pytest.raises(UnknownMeasure):
            agreement_matrix([("a", "x y"), ("b", "x z")], measure="bogus")
