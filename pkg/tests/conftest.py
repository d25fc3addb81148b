import random
import string
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from stream_tfidf.engine import StreamEngine
from stream_tfidf.stream_driver import Snapshot, StreamRecord
from stream_tfidf.text_pipeline import TermCounts
from stream_tfidf.tfidf_core import TfidfCorpus

DOC1_TEXT = "New Amazing Truck Impact Test Dummy"
DOC2_TEXT = "Car Impact Test Dummy"
DOC3_TEXT = "Truck test"

DAY_ONE = datetime(2015, 9, 1, 9, 0, tzinfo=timezone.utc)
SAMPLE_STREAM = Path(__file__).resolve().parent.parent / "data" / "sample_stream.jsonl"


def tc(**counts) -> TermCounts:
    return TermCounts.from_mapping(counts)


def word(i: int) -> str:
    """Alphabetic, stoplist-free vocabulary word number i"""
    letters = string.ascii_lowercase
    return "w" + letters[i // 26 % 26] + letters[i % 26] + "x"


def random_counts(rng: random.Random, vocab_size: int, max_terms: int = 8) -> TermCounts:
    n_terms = rng.randint(1, max_terms)
    return TermCounts.from_mapping({
        word(rng.randrange(vocab_size)): rng.randint(1, 3) for _ in range(n_terms)
    })


def random_stream(rng: random.Random, max_docs: int = 30, vocab_size: int = 100):
    """
    Random chunk sequence mixing ODS-style chunks (one new document) and
    SDS-style chunks (several documents, some of them already seen)
    """
    vocab_size = rng.randint(5, vocab_size)
    ods = rng.random() < 0.5
    chunks = []
    known = []
    while len(known) < max_docs:
        if ods:
            doc_id = f"d{len(known):03d}"
            known.append(doc_id)
            chunks.append([(doc_id, random_counts(rng, vocab_size))])
            continue

        chunk_ids = []
        for _ in range(rng.randint(1, 5)):
            if known and rng.random() < 0.3:
                doc_id = rng.choice(known)
            else:
                doc_id = f"d{len(known):03d}"
                known.append(doc_id)
            if doc_id not in chunk_ids:
                chunk_ids.append(doc_id)
        chunks.append([(doc_id, random_counts(rng, vocab_size)) for doc_id in chunk_ids])

        if rng.random() < 0.15:
            break
    return chunks


def make_snapshots(days):
    """Snapshots from a list of per-day [(doc_id, text), ...] lists"""
    snapshots = []
    for i, records in enumerate(days, start=1):
        stamp = DAY_ONE + timedelta(days=i - 1)
        snapshots.append(Snapshot(index=i, records=tuple(
            StreamRecord(doc_id=doc_id, text=text, timestamp=stamp) for doc_id, text in records
        )))
    return snapshots


@pytest.fixture
def two_doc_corpus():
    """Corpus after the two walkthrough snapshots"""
    corpus = TfidfCorpus()
    corpus.apply_chunk([("doc1", tc(new=1, amazing=1, truck=1, impact=1, test=1, dummy=1))])
    corpus.apply_chunk([("doc2", tc(car=1, impact=1, test=1, dummy=1))])
    return corpus


@pytest.fixture
def two_doc_engine():
    engine = StreamEngine()
    engine.ingest([("doc1", DOC1_TEXT)])
    engine.ingest([("doc2", DOC2_TEXT)])
    return engine


@pytest.fixture
def three_doc_engine(two_doc_engine):
    two_doc_engine.ingest([("doc3", DOC3_TEXT)])
    return two_doc_engine
