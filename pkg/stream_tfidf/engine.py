"""
Stream Engine - preprocessing, corpus state and similarity store in one unit
"""

import logging
import threading
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .errors import EmptyChunkError
from .similarity_engine import SimilarityEngine, UpdateReport
from .text_pipeline import PipelineConfig, TermCounts, text_to_counts
from .tfidf_core import ChunkSummary, TfidfCorpus, Weighting

logger = logging.getLogger(__name__)


class EngineConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    pipeline: PipelineConfig = Field(default_factory=PipelineConfig)
    weighting: Weighting = Weighting.TF_IDF
    cache_vectors: bool = True


class StreamEngine:
    """
    Incremental TF-IDF + cosine engine

    Owns one TfidfCorpus and the SimilarityEngine over it. One thread drives
    ingest at a time; the lock makes that explicit.
    """

    def __init__(self, config: EngineConfig = None):
        self.config = config or EngineConfig()
        self.corpus = TfidfCorpus(self.config.weighting)
        self.similarity = SimilarityEngine(self.corpus, cache_vectors=self.config.cache_vectors)
        self.lock = threading.Lock()

    def prepare_chunk(self, texts: Sequence[Tuple[str, str]]) -> List[Tuple[str, TermCounts]]:
        """
        Preprocess (doc_id, text) records into a chunk

        Repeated ids are merged into one entry (first-occurrence order);
        documents left empty after preprocessing are dropped with a warning.
        """
        merged: Dict[str, TermCounts] = {}
        for doc_id, text in texts:
            counts = text_to_counts(text, self.config.pipeline)
            if doc_id in merged:
                merged[doc_id] = merged[doc_id].merged(counts)
            else:
                merged[doc_id] = counts

        chunk = []
        for doc_id, counts in merged.items():
            if counts.is_empty():
                logger.warning(f"Document {doc_id!r} is empty after preprocessing, skipping")
                continue
            chunk.append((doc_id, counts))
        return chunk

    def apply(self, chunk: Sequence[Tuple[str, TermCounts]]) -> Tuple[ChunkSummary, UpdateReport]:
        """apply_chunk followed by the similarity update"""
        with self.lock:
            summary = self.corpus.apply_chunk(chunk)
            report = self.similarity.update(summary)
        return summary, report

    def ingest(self, texts: Sequence[Tuple[str, str]]) -> Tuple[ChunkSummary, UpdateReport]:
        """
        Preprocess, apply and update for one chunk of raw texts

        Raises:
            EmptyChunkError: If nothing survives preprocessing
        """
        chunk = self.prepare_chunk(texts)
        if not chunk:
            raise EmptyChunkError("No document in the chunk has any terms")
        return self.apply(chunk)

    @property
    def version(self) -> int:
        return self.corpus.version

    @property
    def n_docs(self) -> int:
        return self.corpus.n_docs
