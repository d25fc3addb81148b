#!/usr/bin/env python3
"""
Benchmark Harness - batch vs incremental over a record stream
Writes the elapsed / cumulative / speedup tables and the raw metrics
"""

import csv
import dataclasses
import json
import logging
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .config_manager import BenchConfig, ConfigManager
from .engine import EngineConfig, StreamEngine
from .errors import EmptyCorpusError
from .stream_driver import (
    BatchBaseline,
    SnapshotMetrics,
    StreamDriver,
    chunk_by_day,
    load_records,
)
from .synthetic import generate_synthetic
from .system_monitor import SystemMonitor
from .text_pipeline import PipelineConfig

logger = logging.getLogger(__name__)

ELAPSED_TABLE = "elapsed_time.txt"
CUMULATIVE_TABLE = "cum_time.txt"
SPEEDUP_TABLE = "speedup.txt"
RAW_METRICS = "raw_metrics.csv"
RUN_INFO = "run_info.json"
SYNTHETIC_CORPUS = "synthetic_corpus.jsonl"

RAW_FIELDS = [f.name for f in dataclasses.fields(SnapshotMetrics)]


def engine_config_for(config: BenchConfig) -> EngineConfig:
    pipeline = PipelineConfig(stoplist_path=config.stoplist_path,
                              min_token_length=config.min_token_length)
    return EngineConfig(pipeline=pipeline, weighting=config.weighting,
                        cache_vectors=config.cache_vectors)


def resolve_input(config: BenchConfig) -> Path:
    """
    Path of the corpus to stream, generating it first when a synthetic spec is set
    """
    if not config.synthetic_spec_path:
        return Path(config.input_path)

    spec = ConfigManager().load_synthetic_spec(config.synthetic_spec_path)
    if config.seed is not None:
        spec = spec.model_copy(update={'seed': config.seed})

    out_path = Path(config.output_dir) / SYNTHETIC_CORPUS
    generate_synthetic(spec, out_path)
    return out_path


def combine_repetitions(runs: Sequence[List[SnapshotMetrics]]) -> List[SnapshotMetrics]:
    """
    Per-snapshot median of the timing columns over repetitions

    Cumulative and speedup columns are rebuilt from the medians; work counts
    are taken from the first run.
    """
    first = runs[0]
    if len(runs) == 1:
        return list(first)

    for rep, run in enumerate(runs[1:], start=2):
        counts = [(m.index, m.recomputed_pairs, m.batch_pairs) for m in run]
        if counts != [(m.index, m.recomputed_pairs, m.batch_pairs) for m in first]:
            logger.warning(f"Repetition {rep} produced different work counts than repetition 1")

    incremental = np.median([[m.elapsed_incremental_seconds for m in run] for run in runs], axis=0)
    batch = np.median([[m.elapsed_batch_seconds for m in run] for run in runs], axis=0)

    combined = []
    cumulative_incremental = 0.0
    cumulative_batch = 0.0
    for metrics, inc, bat in zip(first, incremental, batch):
        inc = round(float(inc), 6)
        bat = round(float(bat), 6)
        cumulative_incremental = round(cumulative_incremental + inc, 6)
        cumulative_batch = round(cumulative_batch + bat, 6)
        combined.append(dataclasses.replace(
            metrics,
            elapsed_incremental_seconds=inc,
            elapsed_batch_seconds=bat,
            cumulative_incremental_seconds=cumulative_incremental,
            cumulative_batch_seconds=cumulative_batch,
            speedup=cumulative_batch / cumulative_incremental if cumulative_incremental > 0 else 0.0,
            increment_speedup=bat / inc if inc > 0 else 0.0,
        ))
    return combined


def emit_tables(metrics: Sequence[SnapshotMetrics], output_dir) -> None:
    """
    Write elapsed_time.txt, cum_time.txt and speedup.txt

    Semicolon-separated, one row per snapshot, 6 decimal places.

    Raises:
        ValueError: If metrics is empty
        OSError: If the directory is not writable
    """
    if not metrics:
        raise ValueError("No metrics to emit")

    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    elapsed = ["snapshot;batch;istfidf_ics"]
    cumulative = ["snapshot;batch;istfidf_ics"]
    speedup = ["snapshot;speedup"]
    for m in metrics:
        elapsed.append(f"{m.index};{m.elapsed_batch_seconds:.6f};{m.elapsed_incremental_seconds:.6f}")
        cumulative.append(f"{m.index};{m.cumulative_batch_seconds:.6f};{m.cumulative_incremental_seconds:.6f}")
        speedup.append(f"{m.index};{m.speedup:.6f}")

    for name, lines in ((ELAPSED_TABLE, elapsed), (CUMULATIVE_TABLE, cumulative), (SPEEDUP_TABLE, speedup)):
        with open(output_dir / name, 'w', encoding='utf-8', newline='\n') as f:
            f.write("\n".join(lines) + "\n")

    logger.info(f"Wrote {len(metrics)}-row tables to {output_dir}")


def write_raw_metrics(metrics: Sequence[SnapshotMetrics], path) -> None:
    """Comma-separated dump of every SnapshotMetrics field, full precision"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=RAW_FIELDS)
        writer.writeheader()
        for m in metrics:
            writer.writerow(dataclasses.asdict(m))


def read_raw_metrics(path) -> List[SnapshotMetrics]:
    """Inverse of write_raw_metrics"""
    types = {f.name: f.type for f in dataclasses.fields(SnapshotMetrics)}
    casts = {'int': int, 'float': float, 'str': str, int: int, float: float, str: str}
    metrics = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for row in csv.DictReader(f):
            metrics.append(SnapshotMetrics(**{k: casts[types[k]](v) for k, v in row.items()}))
    return metrics


def run_benchmark(config: BenchConfig) -> List[SnapshotMetrics]:
    """
    Incremental run and batch baseline over identical snapshots

    Writes the three tables, raw_metrics.csv, run_info.json and the effective
    configuration into config.output_dir.

    Raises:
        FileNotFoundError: If the corpus doesn't exist
        EmptyCorpusError: If the corpus has no records or no usable snapshot
    """
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    input_path = resolve_input(config)
    records = load_records(input_path)
    if not records:
        raise EmptyCorpusError(f"Corpus {input_path} has no records")
    snapshots = chunk_by_day(records, config.warmup_days)

    engine_config = engine_config_for(config)
    runs = []
    for rep in range(1, config.repetitions + 1):
        logger.info(f"Repetition {rep}/{config.repetitions}: {len(snapshots)} snapshots, mode {config.mode.value}")
        engine = StreamEngine(engine_config)
        baseline = BatchBaseline(engine_config.pipeline) if config.compare_batch else None
        driver = StreamDriver(engine, config.mode, baseline=baseline,
                              refresh_every=config.refresh_every,
                              audit_staleness=config.audit_staleness)
        runs.append(driver.run(snapshots))

    if not runs[0]:
        raise EmptyCorpusError(f"No snapshot of {input_path} produced any terms")

    metrics = combine_repetitions(runs)

    emit_tables(metrics, output_dir)
    write_raw_metrics(metrics, output_dir / RAW_METRICS)
    ConfigManager().save_config(config, output_dir / "config.json")
    with open(output_dir / RUN_INFO, 'w', encoding='utf-8') as f:
        json.dump(SystemMonitor().get_all_stats(), f, indent=2)

    last = metrics[-1]
    logger.info(f"Done: {len(metrics)} snapshots, cumulative batch {last.cumulative_batch_seconds:.6f}s, "
                f"incremental {last.cumulative_incremental_seconds:.6f}s, speedup {last.speedup:.3f}")
    return metrics
