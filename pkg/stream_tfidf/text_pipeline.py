#!/usr/bin/env python3
"""
Text Pipeline for the streaming TF-IDF engine
Turns raw text into lowercase term lists and term-count vectors
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

BUNDLED_STOPLIST = Path(__file__).parent / "data" / "snowball_english.txt"

# Runs of letters; digits, punctuation and whitespace are boundaries
_WORD_RE = re.compile(r"[^\W\d_]+")

TokenList = List[str]


class PipelineConfig(BaseModel):
    """Preprocessing settings"""

    model_config = ConfigDict(frozen=True)

    stoplist_path: Optional[str] = None  # None = bundled Snowball English list
    min_token_length: int = Field(default=2, ge=1)

    def stopwords(self) -> FrozenSet[str]:
        return load_stoplist(self.stoplist_path)


@dataclass(frozen=True)
class TermCounts:
    """
    Raw term-count vector of a document

    counts maps each term to its (positive) number of occurrences and total is
    the sum of all counts.
    """

    counts: Dict[str, int] = field(default_factory=dict)
    total: int = 0

    @classmethod
    def from_mapping(cls, counts: Mapping[str, int]) -> "TermCounts":
        """
        Build from a plain term -> count mapping

        Raises:
            ValueError: If any count is below 1
        """
        for term, count in counts.items():
            if not isinstance(count, int) or count < 1:
                raise ValueError(f"Count for {term!r} must be a positive integer, got {count!r}")
        return cls(counts=dict(counts), total=sum(counts.values()))

    def merged(self, other: "TermCounts") -> "TermCounts":
        """Additive merge of two count vectors"""
        merged = Counter(self.counts)
        merged.update(other.counts)
        return TermCounts(counts=dict(merged), total=self.total + other.total)

    def is_empty(self) -> bool:
        return self.total == 0

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, term: object) -> bool:
        return term in self.counts


@lru_cache(maxsize=16)
def load_stoplist(path: Optional[str] = None) -> FrozenSet[str]:
    """
    Load a stoplist file

    Format: one term per line, UTF-8, lines starting with "#" ignored.

    Args:
        path: Stoplist file, or None for the bundled Snowball English list

    Returns:
        Frozen set of lowercase stop words

    Raises:
        FileNotFoundError: If the stoplist file doesn't exist
    """
    stoplist_path = Path(path) if path else BUNDLED_STOPLIST

    if not stoplist_path.exists():
        raise FileNotFoundError(f"Stoplist file not found: {stoplist_path}")

    words = set()
    with open(stoplist_path, 'r', encoding='utf-8') as f:
        for line in f:
            word = line.strip()
            if not word or word.startswith('#'):
                continue
            words.add(word.lower())

    logger.debug(f"Loaded {len(words)} stop words from {stoplist_path}")
    return frozenset(words)


def preprocess(raw_text: str, config: Optional[PipelineConfig] = None) -> TokenList:
    """
    Normalize raw text into a token list

    Lowercases, splits on anything that is not a letter (so "mp3player" gives
    "mp" and "player"), drops stop words and tokens shorter than the minimum
    length. Token order is preserved.

    Args:
        raw_text: Input text
        config: Pipeline settings (defaults when None)

    Returns:
        List of lowercase alphabetic tokens
    """
    if config is None:
        config = PipelineConfig()

    stopwords = config.stopwords()
    min_length = config.min_token_length

    tokens = []
    for token in _WORD_RE.findall(raw_text.lower()):
        # combining marks match the pattern but are not letters
        if not token.isalpha():
            continue
        if len(token) < min_length or token in stopwords:
            continue
        tokens.append(token)
    return tokens


def term_counts(tokens: TokenList) -> TermCounts:
    """Count term multiplicities; total equals len(tokens)"""
    return TermCounts(counts=dict(Counter(tokens)), total=len(tokens))


def text_to_counts(raw_text: str, config: Optional[PipelineConfig] = None) -> TermCounts:
    """preprocess followed by term_counts"""
    return term_counts(preprocess(raw_text, config))


def counts_to_text(counts: TermCounts) -> str:
    """
    Rebuild a text whose preprocessing yields exactly these counts

    Relies on normalization being idempotent: every term in a TermCounts is
    already a surviving token.
    """
    return " ".join(" ".join([term] * count) for term, count in sorted(counts.counts.items()))
