#!/usr/bin/env python3
"""
Checkpoint - persist and restore a StreamEngine

File format:
- Header: 4 bytes magic 'ISTF'
- Format version: 2 bytes (uint16, big-endian)
- Payload length: 8 bytes (uint64, big-endian)
- Payload: UTF-8 JSON (engine config, corpus version, documents, similarities)
- Trailer: 4 bytes CRC32 of the payload (uint32, big-endian)
"""

import json
import logging
import struct
import zlib
from pathlib import Path
from typing import Any, Dict

from pydantic import ValidationError

from .bipartite_index import DocPair
from .engine import EngineConfig, StreamEngine
from .errors import CheckpointFormatError
from .similarity_engine import SimilarityEntry
from .text_pipeline import TermCounts

logger = logging.getLogger(__name__)

MAGIC = b'ISTF'
FORMAT_VERSION = 1
HEADER = struct.Struct('>4sHQ')
TRAILER = struct.Struct('>I')


def _engine_to_payload(engine: StreamEngine) -> Dict[str, Any]:
    corpus = engine.corpus
    documents = []
    for doc_id in corpus.doc_ids():
        document = corpus.document(doc_id)
        documents.append({
            'id': doc_id,
            'version': document.version,
            'counts': dict(sorted(document.counts.counts.items())),
        })

    similarities = [
        [pair.a, pair.b, entry.value, entry.computed_at]
        for pair, entry in sorted(engine.similarity.pairs.items())
    ]

    return {
        'config': engine.config.model_dump(mode='json'),
        'version': corpus.version,
        'documents': documents,
        'similarities': similarities,
    }


def checkpoint(engine: StreamEngine, path) -> None:
    """
    Write the engine's full observable state to a file

    Args:
        engine: Quiescent engine (no chunk in flight)
        path: Output file path
    """
    with engine.lock:
        payload = _engine_to_payload(engine)

    body = json.dumps(payload, sort_keys=True, separators=(',', ':')).encode('utf-8')
    header = HEADER.pack(MAGIC, FORMAT_VERSION, len(body))
    trailer = TRAILER.pack(zlib.crc32(body) & 0xFFFFFFFF)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(header)
        f.write(body)
        f.write(trailer)

    logger.info(f"Checkpoint written to {path}: {engine.n_docs} documents, "
                f"{len(engine.similarity)} stored pairs, v{engine.version}")


def _parse(data: bytes) -> Dict[str, Any]:
    if len(data) < HEADER.size + TRAILER.size:
        raise CheckpointFormatError(f"File too small: {len(data)} bytes")

    magic, version, length = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CheckpointFormatError(f"Invalid magic: {magic.hex()}")
    if version != FORMAT_VERSION:
        raise CheckpointFormatError(f"Unsupported format version {version}, expected {FORMAT_VERSION}")

    expected_size = HEADER.size + length + TRAILER.size
    if len(data) != expected_size:
        raise CheckpointFormatError(f"Invalid file size: {len(data)} bytes, expected {expected_size}")

    body = data[HEADER.size:HEADER.size + length]
    (crc,) = TRAILER.unpack_from(data, HEADER.size + length)
    if zlib.crc32(body) & 0xFFFFFFFF != crc:
        raise CheckpointFormatError("Payload checksum mismatch")

    try:
        return json.loads(body.decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointFormatError(f"Payload is not valid JSON: {e}") from e


def restore(path) -> StreamEngine:
    """
    Rebuild an engine from a checkpoint file

    Raises:
        FileNotFoundError: If the file doesn't exist
        CheckpointFormatError: If the file is malformed or of another version
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint file not found: {path}")

    payload = _parse(path.read_bytes())

    try:
        engine = StreamEngine(EngineConfig.model_validate(payload['config']))
        corpus = engine.corpus

        for document in payload['documents']:
            counts = TermCounts.from_mapping(document['counts'])
            corpus.restore_document(document['id'], counts, int(document['version']))
        corpus.version = int(payload['version'])

        for doc_a, doc_b, value, computed_at in payload['similarities']:
            engine.similarity.pairs[DocPair.of(doc_a, doc_b)] = SimilarityEntry(
                value=float(value), computed_at=int(computed_at)
            )
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise CheckpointFormatError(f"Invalid checkpoint content: {e}") from e

    logger.info(f"Restored checkpoint {path}: {engine.n_docs} documents, v{engine.version}")
    return engine
