"""sentembed: mean-pooled sentence vectors in the EMB1 interchange format."""

from .emb_writer import read_emb1, write_emb1
from .extract import DEFAULT_MODEL, Encoder, ExtractOptions, extract, read_corpus

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MODEL",
    "Encoder",
    "ExtractOptions",
    "extract",
    "read_corpus",
    "read_emb1",
    "write_emb1",
]
