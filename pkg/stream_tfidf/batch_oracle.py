"""
Batch Oracle - TF-IDF and all-pairs cosine recomputed from scratch
Ground truth for the incremental engine and the benchmark baseline
"""

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .bipartite_index import DocPair
from .errors import DuplicateDocumentError, EmptyDocumentError
from .text_pipeline import TermCounts

logger = logging.getLogger(__name__)

Corpus = Sequence[Tuple[str, TermCounts]]


@dataclass(frozen=True)
class BatchResult:
    weights: Dict[str, Dict[str, float]]
    similarities: Dict[DocPair, float]


def _validate(corpus: Corpus) -> None:
    seen = set()
    for doc_id, counts in corpus:
        if doc_id in seen:
            raise DuplicateDocumentError(f"Document {doc_id!r} appears twice in the corpus")
        seen.add(doc_id)
        if counts.is_empty():
            raise EmptyDocumentError(f"Document {doc_id!r} has no terms")


def batch_tfidf(corpus: Corpus) -> Dict[str, Dict[str, float]]:
    """
    TF-IDF weights of every document, recomputed from scratch

    Same weighting as the incremental corpus: count / length * log2(N / df).

    Raises:
        DuplicateDocumentError: If a document id repeats
        EmptyDocumentError: If a document has no terms
    """
    _validate(corpus)

    n_docs = len(corpus)
    df = Counter()
    for _, counts in corpus:
        df.update(counts.counts.keys())

    weights = {}
    for doc_id, counts in corpus:
        total = counts.total
        weights[doc_id] = {
            term: count / total * math.log2(n_docs / df[term])
            for term, count in counts.counts.items()
        }
    return weights


def _cosine(vec_a: Dict[str, float], vec_b: Dict[str, float],
            norm_a: float, norm_b: float) -> float:
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    dot = math.fsum(w * vec_b[t] for t, w in vec_a.items() if t in vec_b)
    if dot <= 0.0:
        return 0.0
    return min(1.0, dot / (norm_a * norm_b))


def _pairs_from_weights(weights: Dict[str, Dict[str, float]]) -> Dict[DocPair, float]:
    # Inverted pass: only documents sharing a term are ever compared
    postings: Dict[str, List[str]] = defaultdict(list)
    for doc_id, vector in weights.items():
        for term in vector:
            postings[term].append(doc_id)

    candidates = set()
    for docs in postings.values():
        if len(docs) < 2:
            continue
        ordered = sorted(docs)
        for i, first in enumerate(ordered):
            for second in ordered[i + 1:]:
                candidates.add(DocPair(first, second))

    norms = {doc_id: math.sqrt(math.fsum(w * w for w in vector.values()))
             for doc_id, vector in weights.items()}

    return {
        pair: _cosine(weights[pair.a], weights[pair.b], norms[pair.a], norms[pair.b])
        for pair in candidates
    }


def batch_all_pairs(corpus: Corpus) -> Dict[DocPair, float]:
    """
    Cosine of every pair of documents that share at least one term

    Raises:
        DuplicateDocumentError: If a document id repeats
        EmptyDocumentError: If a document has no terms
    """
    return _pairs_from_weights(batch_tfidf(corpus))


def batch_run(corpus: Corpus) -> BatchResult:
    """Weights and similarities in one pass"""
    weights = batch_tfidf(corpus)
    similarities = _pairs_from_weights(weights)
    logger.debug(f"Batch run: {len(weights)} documents, {len(similarities)} intersecting pairs")
    return BatchResult(weights=weights, similarities=similarities)
