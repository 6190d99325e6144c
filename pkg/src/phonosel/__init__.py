"""phonosel: corpus selection by phoneme-subword perplexity and
embedding-centroid distance, for TTS data preparation."""

from .corpus import (
    Lexicon,
    ScoredSentence,
    Utterance,
    load_corpus,
    load_lexicon,
    normalize_text,
    read_scores,
    write_scores,
)
from .errors import DataError
from .phonemizer import PhonemizedUtterance, phonemize, phonemize_corpus
from .bpe import MergeTable, bpe_decode, bpe_encode, bpe_train, load_merges, save_merges
from .lm import BigramModel, Perplexity, lm_load, lm_perplexity, lm_save, lm_train
from .select import (
    EmbeddingSet,
    SelectionManifest,
    centroid,
    make_testsets,
    read_embeddings,
    read_manifest,
    select_by_centroid,
    select_by_perplexity,
    write_embeddings,
    write_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "BigramModel",
    "DataError",
    "EmbeddingSet",
    "Lexicon",
    "MergeTable",
    "Perplexity",
    "PhonemizedUtterance",
    "ScoredSentence",
    "SelectionManifest",
    "Utterance",
    "bpe_decode",
    "bpe_encode",
    "bpe_train",
    "centroid",
    "lm_load",
    "lm_perplexity",
    "lm_save",
    "lm_train",
    "load_corpus",
    "load_lexicon",
    "load_merges",
    "make_testsets",
    "normalize_text",
    "phonemize",
    "phonemize_corpus",
    "read_embeddings",
    "read_manifest",
    "read_scores",
    "save_merges",
    "select_by_centroid",
    "select_by_perplexity",
    "write_embeddings",
    "write_manifest",
    "write_scores",
]
