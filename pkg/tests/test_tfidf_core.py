import math
import random

import pytest

from stream_tfidf.batch_oracle import batch_tfidf
from stream_tfidf.errors import (
    DuplicateDocumentError,
    EmptyChunkError,
    EmptyDocumentError,
    UnknownDocumentError,
    UnknownTermError,
)
from stream_tfidf.text_pipeline import TermCounts
from stream_tfidf.tfidf_core import TfidfCorpus

from .conftest import random_stream, tc

LOG2_3 = math.log2(3)
LOG2_1_5 = math.log2(1.5)


class TestApplyChunk:

    def test_second_snapshot_summary(self):
        corpus = TfidfCorpus()
        corpus.apply_chunk([("doc1", tc(new=1, amazing=1, truck=1, impact=1, test=1, dummy=1))])
        summary = corpus.apply_chunk([("doc2", tc(car=1, impact=1, test=1, dummy=1))])

        assert summary.touched_terms == {"car", "impact", "test", "dummy"}
        assert summary.touched_docs == {"doc2"}
        assert summary.new_terms == {"car"}
        assert summary.new_docs == {"doc2"}
        assert summary.version == 2
        assert corpus.n_docs == 2

    def test_existing_document_is_merged(self, two_doc_corpus):
        summary = two_doc_corpus.apply_chunk([("doc1", tc(truck=1))])
        document = two_doc_corpus.document("doc1")

        assert document.counts.counts["truck"] == 2
        assert document.counts.total == 7
        assert document.version == 3
        assert summary.touched_terms == {"truck"}
        assert summary.new_docs == frozenset()
        assert two_doc_corpus.n_docs == 2

    def test_split_chunks_equal_merged_chunk(self):
        split = TfidfCorpus()
        split.apply_chunk([("a", tc(car=2, test=1))])
        split.apply_chunk([("b", tc(test=1, truck=1))])

        merged = TfidfCorpus()
        merged.apply_chunk([("a", tc(car=2, test=1)), ("b", tc(test=1, truck=1))])

        assert split.docs["a"].counts == merged.docs["a"].counts
        assert split.docs["b"].counts == merged.docs["b"].counts
        assert {t: split.df(t) for t in ("car", "test", "truck")} == \
               {t: merged.df(t) for t in ("car", "test", "truck")}
        assert split.n_docs == merged.n_docs

    def test_empty_chunk_rejected(self, two_doc_corpus):
        with pytest.raises(EmptyChunkError):
            two_doc_corpus.apply_chunk([])

    def test_duplicate_ids_rejected_without_side_effects(self, two_doc_corpus):
        with pytest.raises(DuplicateDocumentError):
            two_doc_corpus.apply_chunk([("doc3", tc(car=1)), ("doc3", tc(test=1))])
        assert two_doc_corpus.n_docs == 2
        assert two_doc_corpus.version == 2
        assert "doc3" not in two_doc_corpus

    def test_empty_document_rejected(self, two_doc_corpus):
        with pytest.raises(EmptyDocumentError):
            two_doc_corpus.apply_chunk([("doc3", tc(car=1)), ("doc4", TermCounts())])
        assert "doc3" not in two_doc_corpus

    def test_version_increments_per_chunk(self, two_doc_corpus):
        versions = [two_doc_corpus.apply_chunk([(f"x{i}", tc(car=1))]).version for i in range(3)]
        assert versions == [3, 4, 5]

    def test_permuted_merges_give_same_state(self):
        rng = random.Random(9)
        updates = [(f"d{rng.randrange(6)}", tc(**{f"t{rng.randrange(10)}x": rng.randint(1, 3)}))
                   for _ in range(30)]
        shuffled = list(updates)
        rng.shuffle(shuffled)

        first, second = TfidfCorpus(), TfidfCorpus()
        for doc_id, counts in updates:
            first.apply_chunk([(doc_id, counts)])
        for doc_id, counts in shuffled:
            second.apply_chunk([(doc_id, counts)])

        assert first.n_docs == second.n_docs
        for doc_id in first:
            assert first.document(doc_id).counts == second.document(doc_id).counts
        for t in range(10):
            assert first.df(f"t{t}x") == second.df(f"t{t}x")


class TestWeights:

    def test_tf(self, two_doc_corpus):
        assert two_doc_corpus.tf("doc2", "car") == 0.25
        assert two_doc_corpus.tf("doc2", "truck") == 0
        assert two_doc_corpus.tf("doc1", "impact") == pytest.approx(1 / 6)

    def test_tf_unknown_document(self, two_doc_corpus):
        with pytest.raises(UnknownDocumentError):
            two_doc_corpus.tf("doc9", "car")

    def test_idf(self, two_doc_corpus):
        assert two_doc_corpus.idf("impact") == 0.0
        assert two_doc_corpus.idf("car") == 1.0
        two_doc_corpus.apply_chunk([("doc3", tc(truck=1, test=1))])
        assert two_doc_corpus.idf("truck") == pytest.approx(0.584963, abs=1e-6)

    def test_idf_unseen_term(self, two_doc_corpus):
        with pytest.raises(UnknownTermError):
            two_doc_corpus.idf("unseen")

    def test_idf_zero_iff_term_in_every_document(self, two_doc_corpus):
        for term in ("new", "amazing", "truck", "impact", "test", "dummy", "car"):
            assert (two_doc_corpus.idf(term) == 0.0) == (two_doc_corpus.df(term) == two_doc_corpus.n_docs)

    def test_weight(self, two_doc_corpus):
        assert two_doc_corpus.weight("doc2", "car") == 0.25
        assert two_doc_corpus.weight("doc1", "impact") == 0.0
        assert two_doc_corpus.weight("doc2", "never-seen") == 0.0
        two_doc_corpus.apply_chunk([("doc3", tc(truck=1, test=1))])
        assert two_doc_corpus.weight("doc1", "truck") == pytest.approx(0.0974938, abs=1e-7)

    def test_vector_two_documents(self, two_doc_corpus):
        assert two_doc_corpus.vector("doc2") == {"car": 0.25, "impact": 0.0, "test": 0.0, "dummy": 0.0}

    def test_vector_single_document_is_all_zero(self):
        corpus = TfidfCorpus()
        corpus.apply_chunk([("only", tc(car=2, test=1))])
        assert corpus.vector("only") == {"car": 0.0, "test": 0.0}

    def test_vector_three_documents(self, two_doc_corpus):
        two_doc_corpus.apply_chunk([("doc3", tc(truck=1, test=1))])
        vector = two_doc_corpus.vector("doc1")
        expected = {
            "new": LOG2_3 / 6, "amazing": LOG2_3 / 6, "truck": LOG2_1_5 / 6,
            "impact": LOG2_1_5 / 6, "test": 0.0, "dummy": LOG2_1_5 / 6,
        }
        assert vector.keys() == expected.keys()
        for term, value in expected.items():
            assert vector[term] == pytest.approx(value, abs=1e-12)
        assert vector["new"] == pytest.approx(0.264160, abs=1e-6)

    def test_vector_matches_weight(self, two_doc_corpus):
        for doc_id in two_doc_corpus:
            for term, value in two_doc_corpus.vector(doc_id).items():
                assert value == two_doc_corpus.weight(doc_id, term)


def test_lazy_weights_match_batch_oracle():
    rng = random.Random(31)
    for _ in range(100):
        corpus = TfidfCorpus()
        for chunk in random_stream(rng):
            corpus.apply_chunk(chunk)

        accumulated = [(doc_id, doc.counts) for doc_id, doc in corpus.docs.items()]
        oracle = batch_tfidf(accumulated)
        for doc_id in corpus:
            vector = corpus.vector(doc_id)
            assert vector.keys() == oracle[doc_id].keys()
            for term, value in vector.items():
                assert abs(value - oracle[doc_id][term]) <= 1e-12

        for term in corpus.index.term_to_docs:
            assert corpus.df(term) == sum(term in d.counts for d in corpus.docs.values())
