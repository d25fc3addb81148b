#!/usr/bin/env python3
"""
TF-IDF Core for the streaming engine
Keeps raw counts and document frequencies; weights are computed on read
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple

from .bipartite_index import BipartiteIndex
from .errors import (
    DuplicateDocumentError,
    EmptyChunkError,
    EmptyDocumentError,
    UnknownDocumentError,
    UnknownTermError,
)
from .text_pipeline import TermCounts

logger = logging.getLogger(__name__)

Chunk = Sequence[Tuple[str, TermCounts]]


class Weighting(str, Enum):
    """TF-IDF weighting variants"""

    # count / document length * log2(N / df)
    TF_IDF = "tf-idf"


@dataclass(frozen=True)
class Document:
    """Read-only view of a stored document"""

    id: str
    counts: TermCounts
    version: int


@dataclass(frozen=True)
class ChunkSummary:
    """Terms and documents touched by one applied chunk"""

    touched_terms: FrozenSet[str]
    touched_docs: FrozenSet[str]
    version: int
    new_terms: FrozenSet[str] = frozenset()
    new_docs: FrozenSet[str] = frozenset()


class TfidfCorpus:
    """
    Incremental sparse TF-IDF state

    Term counts live on the bipartite index edges; per-document totals and
    versions are kept here. N and df change with every chunk, so weights are
    never stored: tf, idf and weight are evaluated against the current state
    on every read.

    apply_chunk needs exclusive access; reads may run concurrently between
    chunk applications.
    """

    def __init__(self, weighting: Weighting = Weighting.TF_IDF):
        self.weighting = Weighting(weighting)
        self.index = BipartiteIndex()
        self.version = 0
        self._totals: Dict[str, int] = {}
        self._versions: Dict[str, int] = {}

    @property
    def n_docs(self) -> int:
        return len(self._totals)

    @property
    def docs(self) -> Dict[str, Document]:
        """All documents keyed by id (materialized on each access)"""
        return {doc_id: self.document(doc_id) for doc_id in self._totals}

    def doc_ids(self) -> List[str]:
        """Document ids in insertion order"""
        return list(self._totals)

    def __contains__(self, doc_id: object) -> bool:
        return doc_id in self._totals

    def __iter__(self) -> Iterator[str]:
        return iter(self._totals)

    def _require(self, doc_id: str) -> None:
        if doc_id not in self._totals:
            raise UnknownDocumentError(doc_id)

    def document(self, doc_id: str) -> Document:
        """
        Snapshot of one document

        Raises:
            UnknownDocumentError: If the document doesn't exist
        """
        self._require(doc_id)
        counts = self.index.document_counts(doc_id)
        return Document(
            id=doc_id,
            counts=TermCounts(counts=counts, total=self._totals[doc_id]),
            version=self._versions[doc_id],
        )

    def apply_chunk(self, chunk: Chunk) -> ChunkSummary:
        """
        Apply one stream increment

        New ids create documents; existing ids get the incoming counts merged
        additively. The whole chunk is validated before anything changes.

        Args:
            chunk: List of (document id, TermCounts), ids distinct

        Returns:
            ChunkSummary with the touched terms/documents and the new version

        Raises:
            EmptyChunkError: If the chunk has no entries
            DuplicateDocumentError: If an id appears twice in the chunk
            EmptyDocumentError: If any TermCounts is empty
        """
        if not chunk:
            raise EmptyChunkError("Cannot apply an empty chunk")

        seen = set()
        for doc_id, counts in chunk:
            if doc_id in seen:
                raise DuplicateDocumentError(f"Document {doc_id!r} appears twice in one chunk")
            seen.add(doc_id)
            if counts.is_empty():
                raise EmptyDocumentError(f"Document {doc_id!r} has no terms")

        version = self.version + 1
        touched_terms = set()
        new_terms = set()
        new_docs = set()

        with self.index.lock:
            for doc_id, counts in chunk:
                if doc_id not in self._totals:
                    new_docs.add(doc_id)
                    self._totals[doc_id] = 0
                new_terms |= self.index.upsert_edges(doc_id, counts)
                self._totals[doc_id] += counts.total
                self._versions[doc_id] = version
                touched_terms.update(counts.counts)
            self.version = version

        logger.debug(f"Applied chunk v{version}: {len(seen)} docs ({len(new_docs)} new), "
                     f"{len(touched_terms)} terms ({len(new_terms)} new), N={self.n_docs}")

        return ChunkSummary(
            touched_terms=frozenset(touched_terms),
            touched_docs=frozenset(seen),
            version=version,
            new_terms=frozenset(new_terms),
            new_docs=frozenset(new_docs),
        )

    def df(self, term: str) -> int:
        """Number of distinct documents containing the term"""
        return self.index.document_frequency(term)

    def tf(self, doc_id: str, term: str) -> float:
        """
        Normalized term frequency: count / document length

        Raises:
            UnknownDocumentError: If the document doesn't exist
        """
        self._require(doc_id)
        count = self.index.edge_count(doc_id, term)
        if count == 0:
            return 0.0
        return count / self._totals[doc_id]

    def idf(self, term: str) -> float:
        """
        Inverse document frequency: log2(N / df)

        Raises:
            UnknownTermError: If no document contains the term
        """
        df = self.index.document_frequency(term)
        if df == 0:
            raise UnknownTermError(term)
        return math.log2(self.n_docs / df)

    def weight(self, doc_id: str, term: str) -> float:
        """
        TF-IDF weight of a term in a document (0 when absent)

        Raises:
            UnknownDocumentError: If the document doesn't exist
        """
        tf = self.tf(doc_id, term)
        if tf == 0.0:
            return 0.0
        return tf * self.idf(term)

    def vector(self, doc_id: str) -> Dict[str, float]:
        """
        Sparse TF-IDF vector over exactly the document's terms

        Zero weights are kept, so the support equals the term set.

        Raises:
            UnknownDocumentError: If the document doesn't exist
        """
        self._require(doc_id)
        n_docs = self.n_docs
        total = self._totals[doc_id]
        index = self.index

        vector = {}
        for term in index.doc_to_terms[doc_id]:
            tf = index.edge_counts[(doc_id, term)] / total
            vector[term] = tf * math.log2(n_docs / len(index.term_to_docs[term]))
        return vector

    def restore_document(self, doc_id: str, counts: TermCounts, version: int) -> None:
        """
        Re-insert a document exactly as it was checkpointed

        Only for rebuilding state; does not bump the corpus version.
        """
        if doc_id in self._totals:
            raise DuplicateDocumentError(f"Document {doc_id!r} already restored")
        with self.index.lock:
            self.index.upsert_edges(doc_id, counts)
            self._totals[doc_id] = counts.total
            self._versions[doc_id] = version
