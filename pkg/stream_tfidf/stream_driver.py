#!/usr/bin/env python3
"""
Stream Driver - turns a timestamped record stream into snapshots
Feeds snapshots to the engine as One Document Streaming (ODS) or Several
Documents Streaming (SDS) and records per-snapshot metrics
"""

import json
import logging
import math
import time
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from .batch_oracle import BatchResult, batch_run
from .checkpoint import checkpoint, restore  # noqa: F401  (part of the driver API)
from .engine import StreamEngine
from .errors import EmptyCorpusError, RecordFormatError
from .text_pipeline import PipelineConfig, counts_to_text, text_to_counts

logger = logging.getLogger(__name__)


class StreamMode(str, Enum):
    ODS = "ods"
    SDS = "sds"


@dataclass(frozen=True)
class StreamRecord:
    doc_id: str
    text: str
    timestamp: datetime  # UTC

    @property
    def day(self) -> date:
        return self.timestamp.astimezone(timezone.utc).date()


@dataclass(frozen=True)
class Snapshot:
    index: int  # 1-based
    records: Tuple[StreamRecord, ...]


@dataclass(frozen=True)
class SnapshotMetrics:
    index: int
    mode: str
    elapsed_incremental_seconds: float
    elapsed_batch_seconds: float
    cumulative_incremental_seconds: float
    cumulative_batch_seconds: float
    speedup: float
    recomputed_pairs: int
    batch_pairs: int
    generated_pairs: int = 0
    increment_speedup: float = 0.0
    max_staleness: float = math.nan
    n_docs: int = 0


def parse_timestamp(value: str) -> datetime:
    """
    Parse an ISO-8601 timestamp into an aware UTC datetime

    Naive timestamps are taken as UTC; a trailing 'Z' is accepted.
    """
    text = value.strip()
    if text.endswith(('Z', 'z')):
        text = text[:-1] + '+00:00'
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def load_records(path) -> List[StreamRecord]:
    """
    Read a line-delimited JSON corpus

    Each line holds an object with `id`, `content` and `published` fields.
    Blank lines are skipped.

    Raises:
        FileNotFoundError: If the corpus file doesn't exist
        RecordFormatError: If a line is not a valid record
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Corpus file not found: {path}")

    records = []
    with open(path, 'rb') as f:
        for line_no, raw in enumerate(f, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw.decode('utf-8'))
                doc_id = obj['id']
                content = obj['content']
                published = obj['published']
            except UnicodeDecodeError as e:
                raise RecordFormatError(f"{path}:{line_no}: not valid UTF-8: {e}") from e
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise RecordFormatError(f"{path}:{line_no}: invalid record: {e}") from e

            if not isinstance(doc_id, str) or not doc_id:
                raise RecordFormatError(f"{path}:{line_no}: 'id' must be a nonempty string")
            if not isinstance(content, str):
                raise RecordFormatError(f"{path}:{line_no}: 'content' must be a string")
            try:
                timestamp = parse_timestamp(str(published))
            except ValueError as e:
                raise RecordFormatError(f"{path}:{line_no}: bad timestamp {published!r}") from e

            records.append(StreamRecord(doc_id=doc_id, text=content, timestamp=timestamp))

    logger.info(f"Loaded {len(records)} records from {path}")
    return records


def chunk_by_day(records: List[StreamRecord], warmup_days: int = 1) -> List[Snapshot]:
    """
    Group records into daily snapshots

    The first snapshot holds the first `warmup_days` distinct UTC calendar
    days; every later snapshot holds one more day. Days without records
    produce no snapshot.

    Raises:
        EmptyCorpusError: If there are no records
        ValueError: If warmup_days < 1
    """
    if not records:
        raise EmptyCorpusError("No records to chunk")
    if warmup_days < 1:
        raise ValueError(f"warmup_days must be >= 1, got {warmup_days}")

    ordered = sorted(records, key=lambda r: r.timestamp)

    by_day: Dict[date, List[StreamRecord]] = {}
    for record in ordered:
        by_day.setdefault(record.day, []).append(record)

    days = list(by_day)
    groups = [[r for day in days[:warmup_days] for r in by_day[day]]]
    groups.extend(by_day[day] for day in days[warmup_days:])

    snapshots = [Snapshot(index=i, records=tuple(group)) for i, group in enumerate(groups, start=1)]
    logger.info(f"Chunked {len(records)} records over {len(days)} days into {len(snapshots)} snapshots")
    return snapshots


class BatchBaseline:
    """
    Batch TF-IDF + all-pairs cosine over the full accumulated text

    Every run preprocesses all text seen so far, as a batch system that
    receives everything since day 1 has to.
    """

    def __init__(self, pipeline: Optional[PipelineConfig] = None):
        self.pipeline = pipeline or PipelineConfig()
        self.texts: Dict[str, List[str]] = {}

    def add(self, doc_id: str, text: str) -> None:
        self.texts.setdefault(doc_id, []).append(text)

    def run(self) -> BatchResult:
        corpus = []
        for doc_id, parts in self.texts.items():
            counts = text_to_counts(" ".join(parts), self.pipeline)
            if not counts.is_empty():
                corpus.append((doc_id, counts))
        return batch_run(corpus)

    @classmethod
    def from_engine(cls, engine: StreamEngine) -> "BatchBaseline":
        """
        Seed a baseline with the documents of an existing (e.g. restored) engine

        Texts are rebuilt from term counts; they preprocess back to the
        same counts.
        """
        baseline = cls(engine.config.pipeline)
        for doc_id, document in engine.corpus.docs.items():
            baseline.add(doc_id, counts_to_text(document.counts))
        return baseline


def engine_oracle(engine: StreamEngine) -> BatchResult:
    """Batch oracle over the engine's accumulated counts"""
    corpus = [(doc_id, document.counts) for doc_id, document in engine.corpus.docs.items()]
    return batch_run(corpus)


def _quantize(seconds: float) -> float:
    # Microsecond resolution; a positive interval never reads as zero
    if seconds <= 0:
        return 0.0
    return max(round(seconds, 6), 1e-6)


class StreamDriver:
    """
    Drives one engine through a snapshot sequence

    Incremental and batch sections are timed one after the other, never
    interleaved. Refreshes and staleness audits run outside both timers.
    """

    def __init__(self,
                 engine: StreamEngine,
                 mode: StreamMode,
                 baseline: Optional[BatchBaseline] = None,
                 refresh_every: int = 0,
                 audit_staleness: bool = False,
                 clock: Callable[[], float] = time.perf_counter):
        """
        Args:
            engine: Engine to feed
            mode: ODS or SDS
            baseline: Batch baseline to time alongside, or None for no comparison
            refresh_every: Call refresh_all every k snapshots (0 = never)
            audit_staleness: Measure store deviation from the batch oracle per snapshot
            clock: Monotonic clock in seconds
        """
        self.engine = engine
        self.mode = StreamMode(mode)
        self.baseline = baseline
        self.refresh_every = refresh_every
        self.audit_staleness = audit_staleness
        self.clock = clock

        self.metrics: List[SnapshotMetrics] = []
        self.cumulative_incremental = 0.0
        self.cumulative_batch = 0.0

    def _snapshot_texts(self, snapshot: Snapshot) -> List[Tuple[str, str]]:
        if self.mode == StreamMode.ODS:
            text = " ".join(record.text for record in snapshot.records)
            return [(f"snapshot-{snapshot.index}", text)]
        return [(record.doc_id, record.text) for record in snapshot.records]

    def process(self, snapshot: Snapshot) -> Optional[SnapshotMetrics]:
        """
        Feed one snapshot and record its metrics

        Returns:
            SnapshotMetrics, or None if the snapshot had no terms and was skipped
        """
        texts = self._snapshot_texts(snapshot)

        start = self.clock()
        chunk = self.engine.prepare_chunk(texts)
        if not chunk:
            logger.warning(f"Snapshot {snapshot.index} has no terms after preprocessing, skipping")
            return None
        summary, report = self.engine.apply(chunk)
        elapsed_incremental = _quantize(self.clock() - start)

        elapsed_batch = 0.0
        batch_pairs = 0
        if self.baseline is not None:
            for doc_id, text in texts:
                self.baseline.add(doc_id, text)
            start = self.clock()
            result = self.baseline.run()
            elapsed_batch = _quantize(self.clock() - start)
            batch_pairs = len(result.similarities)
        else:
            batch_pairs = len(self.engine.corpus.index.intersecting_pairs())

        if self.refresh_every and snapshot.index % self.refresh_every == 0:
            self.engine.similarity.refresh_all()

        staleness = math.nan
        if self.audit_staleness:
            staleness = self.engine.similarity.staleness_audit(engine_oracle(self.engine))

        self.cumulative_incremental = _quantize(self.cumulative_incremental + elapsed_incremental)
        self.cumulative_batch = _quantize(self.cumulative_batch + elapsed_batch)

        metrics = SnapshotMetrics(
            index=snapshot.index,
            mode=self.mode.value,
            elapsed_incremental_seconds=elapsed_incremental,
            elapsed_batch_seconds=elapsed_batch,
            cumulative_incremental_seconds=self.cumulative_incremental,
            cumulative_batch_seconds=self.cumulative_batch,
            speedup=_ratio(self.cumulative_batch, self.cumulative_incremental),
            recomputed_pairs=report.recomputed_pairs,
            batch_pairs=batch_pairs,
            generated_pairs=report.generated_pairs,
            increment_speedup=_ratio(elapsed_batch, elapsed_incremental),
            max_staleness=staleness,
            n_docs=self.engine.n_docs,
        )
        self.metrics.append(metrics)

        logger.info(f"Snapshot {snapshot.index} ({self.mode.value}): "
                    f"{len(chunk)} docs in chunk, N={metrics.n_docs}, "
                    f"pairs {metrics.recomputed_pairs}/{metrics.batch_pairs}, "
                    f"inc {elapsed_incremental:.6f}s, batch {elapsed_batch:.6f}s")
        return metrics

    def run(self, snapshots: List[Snapshot]) -> List[SnapshotMetrics]:
        for snapshot in snapshots:
            self.process(snapshot)
        return list(self.metrics)


def _ratio(numerator: float, denominator: float) -> float:
    if denominator > 0:
        return numerator / denominator
    return 0.0


def run_ods(snapshots: List[Snapshot], engine: StreamEngine,
            baseline: Optional[BatchBaseline] = None, **options) -> List[SnapshotMetrics]:
    """Each snapshot becomes one new document 'snapshot-<index>'"""
    return StreamDriver(engine, StreamMode.ODS, baseline=baseline, **options).run(snapshots)


def run_sds(snapshots: List[Snapshot], engine: StreamEngine,
            baseline: Optional[BatchBaseline] = None, **options) -> List[SnapshotMetrics]:
    """Each record keeps its doc_id; repeated ids append to the existing document"""
    return StreamDriver(engine, StreamMode.SDS, baseline=baseline, **options).run(snapshots)
