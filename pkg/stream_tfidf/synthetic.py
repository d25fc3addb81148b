"""
Synthetic corpus generator
Zipf-distributed pseudo-word documents, one day per snapshot
"""

import json
import logging
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import List

import numpy as np

from .config_manager import SyntheticSpec
from .text_pipeline import load_stoplist

logger = logging.getLogger(__name__)

CONSONANTS = "bcdfghjklmnprstvz"
VOWELS = "aeiou"


def build_vocabulary(size: int, rng: np.random.Generator) -> List[str]:
    """
    Distinct pronounceable words, none of them a stop word

    Words are 2-4 consonant-vowel syllables, so every word survives
    preprocessing unchanged.
    """
    stopwords = load_stoplist()
    words = []
    seen = set()
    while len(words) < size:
        n_syllables = int(rng.integers(2, 5))
        consonants = rng.integers(0, len(CONSONANTS), size=n_syllables)
        vowels = rng.integers(0, len(VOWELS), size=n_syllables)
        word = "".join(CONSONANTS[c] + VOWELS[v] for c, v in zip(consonants, vowels))
        if word in seen or word in stopwords:
            continue
        seen.add(word)
        words.append(word)
    return words


def zipf_probabilities(size: int, exponent: float) -> np.ndarray:
    """p(rank k) proportional to k^-exponent over a finite vocabulary"""
    ranks = np.arange(1, size + 1, dtype=np.float64)
    weights = np.power(ranks, -exponent)
    return weights / weights.sum()


def generate_synthetic(spec: SyntheticSpec, out_path) -> int:
    """
    Write a line-delimited synthetic corpus

    Identical specs produce byte-identical files.

    Args:
        spec: Generator parameters
        out_path: Output .jsonl path

    Returns:
        Number of records written
    """
    rng = np.random.default_rng(spec.seed)
    vocabulary = np.array(build_vocabulary(spec.vocab_size, rng))
    probabilities = zipf_probabilities(spec.vocab_size, spec.zipf_exponent)

    start = datetime.fromisoformat(spec.start_date).replace(tzinfo=timezone.utc)
    seconds_per_doc = 86400 // spec.docs_per_snapshot

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    doc_ids: List[str] = []
    n_records = 0
    with open(out_path, 'w', encoding='utf-8', newline='\n') as f:
        for snapshot in range(spec.n_snapshots):
            for slot in range(spec.docs_per_snapshot):
                revisit = rng.random() < spec.revisit_probability
                if revisit and doc_ids:
                    doc_id = doc_ids[int(rng.integers(0, len(doc_ids)))]
                else:
                    doc_id = f"doc-{len(doc_ids) + 1:05d}"
                    doc_ids.append(doc_id)

                length = max(1, int(rng.poisson(spec.doc_length_mean)))
                words = rng.choice(vocabulary, size=length, p=probabilities)

                published = start + timedelta(days=snapshot, seconds=slot * seconds_per_doc)
                record = {
                    'id': doc_id,
                    'content': " ".join(words.tolist()),
                    'published': published.strftime('%Y-%m-%dT%H:%M:%SZ'),
                }
                f.write(json.dumps(record, sort_keys=True) + "\n")
                n_records += 1

    logger.info(f"Generated {n_records} records ({len(doc_ids)} documents, "
                f"{spec.n_snapshots} snapshots) to {out_path}")
    return n_records
