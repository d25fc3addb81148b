#!/usr/bin/env python3
"""
Similarity Engine - Incremental Cosine Similarity
Recomputes only the document pairs adjacent to the terms a chunk touched
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .bipartite_index import DocPair
from .errors import CorpusMismatchError, UnknownDocumentError, VersionMismatchError
from .tfidf_core import ChunkSummary, TfidfCorpus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimilarityEntry:
    value: float
    computed_at: int


@dataclass(frozen=True)
class UpdateReport:
    """Work done by one update or refresh"""

    version: int
    recomputed_pairs: int
    generated_pairs: int
    stored_pairs: int


def sparse_cosine(vec_a: Dict[str, float], norm_a: float,
                  vec_b: Dict[str, float], norm_b: float) -> float:
    """
    Cosine of two sparse vectors with precomputed norms

    The dot product runs over the smaller vector and is correctly rounded
    (fsum), so the result does not depend on term iteration order. Returns 0
    when either norm is 0; the result is clamped to [0, 1].
    """
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0

    if len(vec_a) > len(vec_b):
        vec_a, vec_b = vec_b, vec_a

    dot = math.fsum(weight * vec_b[term] for term, weight in vec_a.items() if term in vec_b)

    if dot <= 0.0:
        return 0.0
    return min(1.0, dot / (norm_a * norm_b))


def vector_norm(vector: Dict[str, float]) -> float:
    return math.sqrt(math.fsum(w * w for w in vector.values()))


class SimilarityEngine:
    """
    Store of pairwise cosine similarities over a TfidfCorpus

    Only pairs sharing at least one term are ever stored; pairs whose value
    has always been 0 stay implicit. Entries carry the corpus version at
    which they were computed, so pairs not touched by recent chunks can be
    told apart (their idf-driven drift is measured by staleness_audit).

    update and refresh_all need exclusive access.
    """

    def __init__(self, corpus: TfidfCorpus, cache_vectors: bool = True):
        """
        Args:
            corpus: Corpus whose documents are compared
            cache_vectors: Reuse each document's vector and norm within one
                update instead of recomputing them per pair (same values)
        """
        self.corpus = corpus
        self.cache_vectors = cache_vectors
        self.pairs: Dict[DocPair, SimilarityEntry] = {}

    def _require(self, doc_id: str) -> None:
        if doc_id not in self.corpus:
            raise UnknownDocumentError(doc_id)

    def cosine(self, doc_a: str, doc_b: str) -> float:
        """
        Cosine similarity of the current TF-IDF vectors of two documents

        Self-comparison is 1 when the vector has a nonzero norm, else 0.

        Raises:
            UnknownDocumentError: If either document doesn't exist
        """
        self._require(doc_a)
        self._require(doc_b)

        vec_a = self.corpus.vector(doc_a)
        norm_a = vector_norm(vec_a)
        if doc_a == doc_b:
            return 1.0 if norm_a > 0.0 else 0.0

        vec_b = self.corpus.vector(doc_b)
        return sparse_cosine(vec_a, norm_a, vec_b, vector_norm(vec_b))

    def _recompute(self, pairs, version: int) -> int:
        """Recompute the given pairs at `version`; returns how many were stored"""
        cache: Dict[str, Tuple[Dict[str, float], float]] = {}

        def vector_of(doc_id: str) -> Tuple[Dict[str, float], float]:
            if self.cache_vectors:
                cached = cache.get(doc_id)
                if cached is not None:
                    return cached
            vector = self.corpus.vector(doc_id)
            entry = (vector, vector_norm(vector))
            if self.cache_vectors:
                cache[doc_id] = entry
            return entry

        stored = 0
        for pair in pairs:
            vec_a, norm_a = vector_of(pair.a)
            vec_b, norm_b = vector_of(pair.b)
            value = sparse_cosine(vec_a, norm_a, vec_b, norm_b)
            if value == 0.0 and pair not in self.pairs:
                continue
            self.pairs[pair] = SimilarityEntry(value=value, computed_at=version)
            stored += 1
        return stored

    def update(self, summary: ChunkSummary) -> UpdateReport:
        """
        Recompute every pair adjacent to the chunk's touched terms

        Pairs recomputed to 0 that were never stored stay unstored; no other
        entry is modified.

        Args:
            summary: Summary returned by the corpus for the chunk just applied

        Returns:
            UpdateReport with recomputed and generated pair counts

        Raises:
            VersionMismatchError: If the summary isn't for the current version
        """
        if summary.version != self.corpus.version:
            raise VersionMismatchError(
                f"Chunk summary v{summary.version} does not match corpus v{self.corpus.version}"
            )

        index = self.corpus.index
        pairs = index.affected_pairs(summary.touched_terms)
        generated = index.generated_pair_count(summary.touched_terms)
        stored = self._recompute(pairs, summary.version)

        logger.debug(f"Update v{summary.version}: {len(pairs)} pairs recomputed "
                     f"({generated} generated, {stored} stored)")

        return UpdateReport(
            version=summary.version,
            recomputed_pairs=len(pairs),
            generated_pairs=generated,
            stored_pairs=stored,
        )

    def get_similarity(self, doc_a: str, doc_b: str) -> Tuple[float, int]:
        """
        Stored similarity of two documents

        Returns:
            Tuple of (value, computed_at); (0.0, current version) for pairs
            that were never stored

        Raises:
            UnknownDocumentError: If either document doesn't exist
        """
        self._require(doc_a)
        self._require(doc_b)

        if doc_a == doc_b:
            return self.cosine(doc_a, doc_b), self.corpus.version

        entry = self.pairs.get(DocPair.of(doc_a, doc_b))
        if entry is None:
            return 0.0, self.corpus.version
        return entry.value, entry.computed_at

    def refresh_all(self) -> int:
        """
        Recompute every intersecting pair at the current version

        Returns:
            Number of recomputed pairs
        """
        pairs = self.corpus.index.intersecting_pairs()
        self._recompute(pairs, self.corpus.version)
        logger.info(f"Refreshed all {len(pairs)} intersecting pairs at v{self.corpus.version}")
        return len(pairs)

    def staleness_audit(self, oracle_result) -> float:
        """
        Largest deviation of the store from a batch oracle

        Args:
            oracle_result: BatchResult of the equivalent accumulated corpus

        Returns:
            Maximum absolute difference over all document pairs (implicit
            entries count as 0 on both sides)

        Raises:
            CorpusMismatchError: If the oracle holds another document set
        """
        oracle_ids = set(oracle_result.weights)
        corpus_ids = set(self.corpus.doc_ids())
        if oracle_ids != corpus_ids:
            missing = sorted(corpus_ids - oracle_ids)[:5]
            extra = sorted(oracle_ids - corpus_ids)[:5]
            raise CorpusMismatchError(
                f"Oracle corpus differs: missing {missing}, unexpected {extra}"
            )

        worst = 0.0
        for pair, value in oracle_result.similarities.items():
            entry = self.pairs.get(pair)
            stored = entry.value if entry is not None else 0.0
            worst = max(worst, abs(stored - value))

        for pair, entry in self.pairs.items():
            if pair not in oracle_result.similarities:
                worst = max(worst, abs(entry.value))

        return worst

    def stored_entry(self, doc_a: str, doc_b: str) -> Optional[SimilarityEntry]:
        """Raw store lookup without the implicit-zero convention"""
        return self.pairs.get(DocPair.of(doc_a, doc_b))

    def __len__(self) -> int:
        return len(self.pairs)
