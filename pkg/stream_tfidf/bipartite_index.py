#!/usr/bin/env python3
"""
Bipartite Index for the streaming TF-IDF engine
Two-way adjacency between term nodes and document nodes with per-edge counts
"""

import logging
import threading
from itertools import combinations
from typing import Dict, Iterable, NamedTuple, Set, Tuple

from .errors import EmptyDocumentError, UnknownDocumentError
from .text_pipeline import TermCounts

logger = logging.getLogger(__name__)


class DocPair(NamedTuple):
    """Unordered document pair stored in canonical order (a < b)"""

    a: str
    b: str

    @classmethod
    def of(cls, first: str, second: str) -> "DocPair":
        """
        Canonical pair of two distinct document ids

        Raises:
            ValueError: If both ids are the same
        """
        if first == second:
            raise ValueError(f"A document cannot pair with itself: {first!r}")
        if first < second:
            return cls(first, second)
        return cls(second, first)


class BipartiteIndex:
    """
    Word/document bipartite graph

    Handles:
    - Append/update of edges as chunks arrive (no eviction)
    - First-order neighbor queries in both directions
    - Affected-pair selection for incremental cosine updates

    Writers must hold `lock`; readers may run concurrently between writes.
    """

    def __init__(self):
        self.term_to_docs: Dict[str, Set[str]] = {}
        self.doc_to_terms: Dict[str, Set[str]] = {}
        self.edge_counts: Dict[Tuple[str, str], int] = {}
        self.lock = threading.RLock()

    def upsert_edges(self, doc_id: str, counts: TermCounts) -> Set[str]:
        """
        Add or strengthen the edges of one document

        Args:
            doc_id: Document id (created if absent)
            counts: New occurrences to add to the document's edges

        Returns:
            Terms that had no node before this call

        Raises:
            EmptyDocumentError: If counts is empty
        """
        if counts.is_empty():
            raise EmptyDocumentError(f"Document {doc_id!r} has no terms")

        new_terms = set()
        with self.lock:
            doc_terms = self.doc_to_terms.setdefault(doc_id, set())
            for term, count in counts.counts.items():
                docs = self.term_to_docs.get(term)
                if docs is None:
                    docs = self.term_to_docs[term] = set()
                    new_terms.add(term)
                docs.add(doc_id)
                doc_terms.add(term)

                key = (doc_id, term)
                self.edge_counts[key] = self.edge_counts.get(key, 0) + count

        logger.debug(f"Upserted {len(counts)} edges for {doc_id!r} ({len(new_terms)} new terms)")
        return new_terms

    def has_document(self, doc_id: str) -> bool:
        return doc_id in self.doc_to_terms

    def doc_neighbors(self, term: str) -> Set[str]:
        """Documents containing the term (empty set for unseen terms)"""
        return set(self.term_to_docs.get(term, ()))

    def term_neighbors(self, doc_id: str) -> Set[str]:
        """
        Terms of a document

        Raises:
            UnknownDocumentError: If the document has no node
        """
        try:
            return set(self.doc_to_terms[doc_id])
        except KeyError:
            raise UnknownDocumentError(doc_id) from None

    def document_frequency(self, term: str) -> int:
        return len(self.term_to_docs.get(term, ()))

    def edge_count(self, doc_id: str, term: str) -> int:
        """Occurrences of term in the document, 0 when there is no edge"""
        return self.edge_counts.get((doc_id, term), 0)

    def document_counts(self, doc_id: str) -> Dict[str, int]:
        """
        Term -> count mapping of one document, read off its edges

        Raises:
            UnknownDocumentError: If the document has no node
        """
        terms = self.doc_to_terms.get(doc_id)
        if terms is None:
            raise UnknownDocumentError(doc_id)
        return {term: self.edge_counts[(doc_id, term)] for term in terms}

    def affected_pairs(self, terms: Iterable[str]) -> Set[DocPair]:
        """
        Document pairs adjacent to at least one of the given terms

        Union over terms of all canonical pairs drawn from each term's
        document neighbors. Terms held by a single document contribute nothing.
        """
        pairs = set()
        for term in terms:
            docs = self.term_to_docs.get(term)
            if not docs or len(docs) < 2:
                continue
            for first, second in combinations(sorted(docs), 2):
                pairs.add(DocPair(first, second))
        return pairs

    def generated_pair_count(self, terms: Iterable[str]) -> int:
        """Pairs enumerated by affected_pairs before deduplication (sum of n(n-1)/2)"""
        total = 0
        for term in terms:
            n = len(self.term_to_docs.get(term, ()))
            total += n * (n - 1) // 2
        return total

    def intersecting_pairs(self) -> Set[DocPair]:
        """Every pair of documents that share at least one term"""
        return self.affected_pairs(self.term_to_docs.keys())

    def check_consistency(self) -> Tuple[bool, str]:
        """
        Full scan of the index invariants

        Returns:
            Tuple of (is_consistent, error_message)
        """
        for term, docs in self.term_to_docs.items():
            if not docs:
                return False, f"Term {term!r} has no documents"
            for doc_id in docs:
                if term not in self.doc_to_terms.get(doc_id, ()):
                    return False, f"Edge {doc_id!r}-{term!r} missing from doc_to_terms"
                if (doc_id, term) not in self.edge_counts:
                    return False, f"Edge {doc_id!r}-{term!r} has no count"

        for doc_id, terms in self.doc_to_terms.items():
            for term in terms:
                if doc_id not in self.term_to_docs.get(term, ()):
                    return False, f"Edge {doc_id!r}-{term!r} missing from term_to_docs"

        for (doc_id, term), count in self.edge_counts.items():
            if count < 1:
                return False, f"Edge {doc_id!r}-{term!r} has count {count}"
            if term not in self.doc_to_terms.get(doc_id, ()):
                return False, f"Count for unknown edge {doc_id!r}-{term!r}"

        return True, ""

    @property
    def n_terms(self) -> int:
        return len(self.term_to_docs)

    @property
    def n_documents(self) -> int:
        return len(self.doc_to_terms)
