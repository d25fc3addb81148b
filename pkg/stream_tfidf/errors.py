"""
Exceptions raised by the streaming TF-IDF engine

Lookup failures also derive from KeyError and contract violations from
ValueError, so callers that only know the builtins still catch them.
"""


class StreamTfidfError(Exception):
    """Base class for all engine errors"""


class UnknownDocumentError(StreamTfidfError, KeyError):
    """A document id is not present in the corpus"""

    def __init__(self, doc_id: str):
        super().__init__(doc_id)
        self.doc_id = doc_id

    def __str__(self) -> str:
        return f"Unknown document: {self.doc_id!r}"


class UnknownTermError(StreamTfidfError, KeyError):
    """A term has no node in the bipartite index (df = 0)"""

    def __init__(self, term: str):
        super().__init__(term)
        self.term = term

    def __str__(self) -> str:
        return f"Unknown term: {self.term!r}"


class EmptyDocumentError(StreamTfidfError, ValueError):
    """A document with no terms reached the index; filter these upstream"""


class EmptyChunkError(StreamTfidfError, ValueError):
    """A chunk with no documents was applied"""


class DuplicateDocumentError(StreamTfidfError, ValueError):
    """The same document id appears twice where ids must be distinct"""


class VersionMismatchError(StreamTfidfError, ValueError):
    """A chunk summary does not belong to the current corpus version"""


class CorpusMismatchError(StreamTfidfError, ValueError):
    """Two corpora that should hold the same documents do not"""


class CheckpointFormatError(StreamTfidfError, ValueError):
    """A checkpoint file is truncated, corrupted or of another format version"""


class RecordFormatError(StreamTfidfError, ValueError):
    """A line of the input corpus is not a valid stream record"""


class EmptyCorpusError(StreamTfidfError, ValueError):
    """There is nothing to stream"""
