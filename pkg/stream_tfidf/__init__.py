"""
Streaming TF-IDF
Incremental sparse TF-IDF and cosine similarity over evolving text corpora
"""

__version__ = "1.0.0"
