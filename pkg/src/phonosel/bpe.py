"""Byte-pair encoding over per-word phoneme sequences.

Merges never cross word boundaries. The final phoneme of every word
carries the word-end marker ``</w>``; merged symbols join their
constituents with ``+`` (e.g. ``K+AE+T</w>``), so every token decodes
back to its exact phoneme list.

Merges file format: line 1 is ``#phoneme-bpe v1 vocab=<n> alphabet=<m>``,
then one ``LEFT RIGHT`` merge per line in application order.
"""

from __future__ import annotations

import re
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError
from .phonemizer import PhonemizedUtterance

WORD_END = "</w>"
JOINER = "+"

# Merges with corpus frequency below this are never learned.
MIN_PAIR_COUNT = 2

_HEADER_RE = re.compile(r"^#phoneme-bpe v1 vocab=(\d+) alphabet=(\d+)$")


@dataclass(frozen=True)
class MergeTable:
    """Ordered BPE merge rules plus the base symbol inventory.

    ``alphabet_size`` is kept separately because a table loaded from a
    merges file only knows the size of the original alphabet, not its
    full symbol set.
    """

    merges: tuple[tuple[str, str], ...]
    initial_alphabet: frozenset[str] = frozenset()
    alphabet_size: int = field(default=-1)

    def __post_init__(self) -> None:
        if self.alphabet_size < 0:
            object.__setattr__(self, "alphabet_size", len(self.initial_alphabet))
        if len(set(self.merges)) != len(self.merges):
            raise DataError("merge table contains duplicate pairs")

    @property
    def vocab_size(self) -> int:
        return self.alphabet_size + len(self.merges)


def word_symbols(word: Sequence[str]) -> list[str]:
    """Base symbol stream for a word: word-end marker on the last phoneme."""
    if not word:
        raise DataError("cannot encode an empty word")
    return [*word[:-1], word[-1] + WORD_END]


def _apply_merge(symbols: list[str], left: str, right: str, merged: str) -> list[str]:
    out: list[str] = []
    i = 0
    n = len(symbols)
    while i < n:
        if i < n - 1 and symbols[i] == left and symbols[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _word_pairs(symbols: list[str]) -> Counter:
    return Counter(zip(symbols, symbols[1:]))


def bpe_train(
    corpus: Iterable[PhonemizedUtterance],
    vocab_size: int,
) -> MergeTable:
    """Learn merges greedily until the vocabulary reaches ``vocab_size``.

    At each step the most frequent adjacent symbol pair (within words)
    is merged; frequency ties break by lexicographic (left, right)
    order, which makes training invariant to utterance order. Stops
    early with a warning when no pair occurs at least twice.
    """
    word_freqs: Counter = Counter()
    for utt in corpus:
        for word in utt.words:
            word_freqs[word] += 1
    if not word_freqs:
        raise DataError("bpe_train: corpus has no words")

    words: list[list[str]] = []
    freqs: list[int] = []
    alphabet: set[str] = set()
    for word, freq in word_freqs.items():
        symbols = word_symbols(word)
        words.append(symbols)
        freqs.append(freq)
        alphabet.update(symbols)

    if vocab_size <= len(alphabet):
        raise DataError(
            f"vocab_size {vocab_size} must exceed the initial alphabet size {len(alphabet)}"
        )

    # Incremental pair bookkeeping: counts plus an index of which words
    # currently contain each pair.
    pair_counts: Counter = Counter()
    pair_to_words: dict[tuple[str, str], set[int]] = {}
    for idx, symbols in enumerate(words):
        for pair, count in _word_pairs(symbols).items():
            pair_counts[pair] += count * freqs[idx]
            pair_to_words.setdefault(pair, set()).add(idx)

    merges: list[tuple[str, str]] = []
    target_merges = vocab_size - len(alphabet)
    while len(merges) < target_merges:
        if not pair_counts:
            break
        best_pair, best_count = min(pair_counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if best_count < MIN_PAIR_COUNT:
            break
        left, right = best_pair
        merged = left + JOINER + right
        merges.append(best_pair)

        for idx in sorted(pair_to_words[best_pair]):
            old_pairs = _word_pairs(words[idx])
            words[idx] = _apply_merge(words[idx], left, right, merged)
            new_pairs = _word_pairs(words[idx])
            freq = freqs[idx]
            for pair in old_pairs.keys() | new_pairs.keys():
                delta = new_pairs.get(pair, 0) - old_pairs.get(pair, 0)
                if delta:
                    pair_counts[pair] += delta * freq
                    if pair_counts[pair] == 0:
                        del pair_counts[pair]
                if new_pairs.get(pair, 0) == 0:
                    members = pair_to_words.get(pair)
                    if members is not None:
                        members.discard(idx)
                        if not members:
                            del pair_to_words[pair]
                elif old_pairs.get(pair, 0) == 0:
                    pair_to_words.setdefault(pair, set()).add(idx)

    if len(merges) < target_merges:
        achieved = len(alphabet) + len(merges)
        warnings.warn(
            f"bpe_train stopped early at vocabulary size {achieved} "
            f"(target {vocab_size}): no remaining pair occurs >= {MIN_PAIR_COUNT} times"
        )
    return MergeTable(merges=tuple(merges), initial_alphabet=frozenset(alphabet))


def bpe_encode(word: Sequence[str], table: MergeTable) -> list[str]:
    """Segment one word into subword tokens by replaying the merge table."""
    symbols = word_symbols(word)
    for left, right in table.merges:
        if left not in symbols or right not in symbols:
            continue
        symbols = _apply_merge(symbols, left, right, left + JOINER + right)
    return symbols


def bpe_decode(tokens: Sequence[str]) -> tuple[str, ...]:
    """Recover the exact phoneme list of a word from its subword tokens."""
    if not tokens:
        raise DataError("cannot decode an empty token list")
    phonemes: list[str] = []
    for pos, token in enumerate(tokens):
        body = token
        if body.endswith(WORD_END):
            if pos != len(tokens) - 1:
                raise DataError(f"word-end marker on non-final token {token!r}")
            body = body[: -len(WORD_END)]
        elif pos == len(tokens) - 1:
            raise DataError(f"final token {token!r} lacks the word-end marker")
        parts = body.split(JOINER)
        if any(not part or WORD_END in part for part in parts):
            raise DataError(f"malformed subword token {token!r}")
        phonemes.extend(parts)
    return tuple(phonemes)


def encode_utterance(utt: PhonemizedUtterance, table: MergeTable) -> list[str]:
    """Concatenate the subword tokens of all words of an utterance."""
    tokens: list[str] = []
    for word in utt.words:
        tokens.extend(bpe_encode(word, table))
    return tokens


def save_merges(table: MergeTable, path: str | Path) -> None:
    lines = [f"#phoneme-bpe v1 vocab={table.vocab_size} alphabet={table.alphabet_size}\n"]
    lines.extend(f"{left} {right}\n" for left, right in table.merges)
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_merges(path: str | Path) -> MergeTable:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise DataError(f"{path}: empty merges file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise DataError(f"{path}: bad merges header (expected '#phoneme-bpe v1 ...')")
    vocab, alphabet_size = int(m.group(1)), int(m.group(2))
    merges: list[tuple[str, str]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(" ")
        if len(fields) != 2 or not all(fields):
            raise DataError(f"{path}:{lineno}: malformed merge line")
        merges.append((fields[0], fields[1]))
    if vocab - alphabet_size != len(merges):
        raise DataError(f"{path}: header counts do not match {len(merges)} merge lines")
    # The alphabet's symbols are not serialized; reconstruct the base
    # operands (those not produced by an earlier merge) for reference.
    produced: set[str] = set()
    base: set[str] = set()
    for left, right in merges:
        for operand in (left, right):
            if operand not in produced:
                base.add(operand)
        produced.add(left + JOINER + right)
    return MergeTable(
        merges=tuple(merges),
        initial_alphabet=frozenset(base),
        alphabet_size=alphabet_size,
    )


def write_encoded(rows: Iterable[tuple[str, Sequence[str]]], path: str | Path) -> None:
    lines = [f"{uid}\t{' '.join(tokens)}\n" for uid, tokens in rows]
    Path(path).write_text("".join(lines), encoding="utf-8")


def read_encoded(path: str | Path) -> list[tuple[str, list[str]]]:
    path = Path(path)
    rows: list[tuple[str, list[str]]] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if "\t" not in line:
            raise DataError(f"{path}:{lineno}: malformed encoded line")
        uid, body = line.split("\t", 1)
        tokens = body.split()
        if not tokens:
            raise DataError(f"{path}:{lineno}: encoded utterance has no tokens")
        rows.append((uid, tokens))
    return rows
