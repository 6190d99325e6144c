"""Sentence vectors by mean pooling the last encoder layer.

Each sentence is encoded on its own (no padding), so feeding more or
fewer sentences per tokenizer batch can never change a single output
value; the model runs in eval mode under ``no_grad``, which makes the
whole extraction deterministic on a given machine.

Pooling averages over every non-padding position, sequence-boundary
special tokens included; ``exclude_special=True`` averages over content
positions only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from .emb_writer import write_emb1

DEFAULT_MODEL = "bert-base-uncased"

# BertTokenizer instances built straight from a vocab file report a
# huge sentinel model_max_length; fall back to the model config then.
_SANE_LENGTH_LIMIT = 10**9


@dataclass(frozen=True)
class ExtractOptions:
    model_id: str = DEFAULT_MODEL
    batch_size: int = 32
    exclude_special: bool = False
    max_len: int | None = None


class Encoder:
    def __init__(self, options: ExtractOptions):
        self.options = options
        self.tokenizer = AutoTokenizer.from_pretrained(options.model_id)
        self.model = AutoModel.from_pretrained(options.model_id)
        self.model.eval()
        limit = options.max_len
        if limit is None:
            limit = self.tokenizer.model_max_length
            if limit is None or limit > _SANE_LENGTH_LIMIT:
                limit = int(getattr(self.model.config, "max_position_embeddings"))
        self.max_len = int(limit)

    @property
    def dim(self) -> int:
        return int(self.model.config.hidden_size)

    def embed(self, uid: str, text: str) -> np.ndarray:
        """Pooled last-layer vector for one sentence."""
        full = self.tokenizer(text, return_special_tokens_mask=True)
        if len(full["input_ids"]) > self.max_len:
            warnings.warn(
                f"sentence {uid!r} exceeds the encoder length {self.max_len}; truncated"
            )
            encoded = self.tokenizer(
                text,
                truncation=True,
                max_length=self.max_len,
                return_special_tokens_mask=True,
            )
        else:
            encoded = full
        special = np.asarray(encoded.pop("special_tokens_mask"), dtype=bool)
        inputs = {k: torch.tensor([v]) for k, v in encoded.items()}
        with torch.no_grad():
            hidden = self.model(**inputs).last_hidden_state[0]  # (seq, dim)
        keep = np.ones(hidden.shape[0], dtype=bool)
        if self.options.exclude_special:
            if (~special).any():
                keep = ~special
            else:
                warnings.warn(
                    f"sentence {uid!r} has only special tokens; pooling over all positions"
                )
        return hidden[torch.from_numpy(keep)].mean(dim=0).numpy().astype(np.float32)


def read_corpus(path: str | Path) -> list[tuple[str, str]]:
    """Read an ``id<TAB>text`` corpus file, raw text preserved."""
    rows: list[tuple[str, str]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if "\t" not in line:
            raise ValueError(f"{path}:{lineno}: malformed corpus line (expected id<TAB>text)")
        uid, text = line.split("\t", 1)
        if not uid:
            raise ValueError(f"{path}:{lineno}: empty id")
        if uid in seen:
            raise ValueError(f"{path}:{lineno}: duplicate id {uid!r}")
        seen.add(uid)
        rows.append((uid, text))
    return rows


def iter_vectors(
    rows: Iterable[tuple[str, str]], encoder: Encoder
) -> Iterator[tuple[str, np.ndarray]]:
    batch: list[tuple[str, str]] = []
    rows = list(rows)
    size = max(1, encoder.options.batch_size)
    for start in range(0, len(rows), size):
        batch = rows[start : start + size]
        # Sentences run through the model individually; batching only
        # groups work so values are invariant to batch size.
        for uid, text in batch:
            yield uid, encoder.embed(uid, text)


def extract(
    corpus_path: str | Path,
    out_path: str | Path,
    options: ExtractOptions = ExtractOptions(),
) -> int:
    """Embed a corpus file and write EMB1; returns the record count."""
    rows = read_corpus(corpus_path)
    if not rows:
        raise ValueError(f"{corpus_path}: corpus is empty")
    encoder = Encoder(options)
    records = list(iter_vectors(rows, encoder))
    write_emb1(records, out_path)
    return len(records)
