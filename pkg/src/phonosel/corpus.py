"""Corpus and lexicon ingestion, text normalization, score file IO.

File formats (all UTF-8, LF line endings, no BOM):

* corpus / manifest TSV: one ``id<TAB>text`` record per line
* lexicon: CMUdict-style ``WORD  PH1 PH2 ...``, comments start with ``;;;``
* scores TSV: ``id<TAB>perplexity<TAB>token_count``, perplexity printed
  with 9 significant digits
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import DataError

_STRESS_RE = re.compile(r"^([A-Z]+)([0-2])$")
_VARIANT_RE = re.compile(r"^(.*)\(\d+\)$")


@dataclass(frozen=True)
class Utterance:
    """One corpus record: unique id plus normalized sentence text."""

    id: str
    text: str
    has_digits: bool = False


@dataclass(frozen=True)
class Lexicon:
    """Pronunciation lexicon: word -> phoneme sequence, stress stripped."""

    entries: dict[str, tuple[str, ...]]
    alphabet: frozenset[str]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ScoredSentence:
    id: str
    perplexity: float
    token_count: int


def normalize_text(text: str) -> str:
    """Normalize raw sentence text for lexicon lookup.

    Uppercases, keeps apostrophes only between two alphanumeric
    characters, replaces all other punctuation with a space and
    collapses whitespace. Idempotent by construction. Digits are kept
    verbatim (no number expansion); see :func:`has_digit_tokens`.
    """
    text = text.upper()
    chars = []
    last = len(text) - 1
    for i, ch in enumerate(text):
        if ch.isalnum() or ch.isspace():
            chars.append(ch)
        elif ch == "'" and 0 < i < last and text[i - 1].isalnum() and text[i + 1].isalnum():
            chars.append(ch)
        else:
            chars.append(" ")
    return " ".join("".join(chars).split())


def has_digit_tokens(normalized_text: str) -> bool:
    """True when any token of the normalized text contains a digit."""
    return any(ch.isdigit() for ch in normalized_text)


def load_corpus(path: str | Path) -> list[Utterance]:
    """Load an ``id<TAB>text`` corpus file, normalizing each sentence.

    Raises DataError on malformed lines or duplicate ids. Returns
    utterances in file order; deterministic for fixed file content.
    """
    path = Path(path)
    utterances: list[Utterance] = []
    seen: set[str] = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if "\t" not in line:
            raise DataError(f"{path}:{lineno}: malformed corpus line (expected id<TAB>text)")
        uid, raw = line.split("\t", 1)
        if not uid:
            raise DataError(f"{path}:{lineno}: empty utterance id")
        if uid in seen:
            raise DataError(f"{path}:{lineno}: duplicate utterance id {uid!r}")
        seen.add(uid)
        text = normalize_text(raw)
        utterances.append(Utterance(uid, text, has_digits=has_digit_tokens(text)))
    return utterances


def write_corpus(utterances: Iterable[Utterance], path: str | Path) -> None:
    lines = [f"{u.id}\t{u.text}\n" for u in utterances]
    Path(path).write_text("".join(lines), encoding="utf-8")


def strip_stress(phoneme: str) -> str:
    """Drop a trailing stress digit: AH0 -> AH."""
    m = _STRESS_RE.match(phoneme)
    return m.group(1) if m else phoneme


def load_lexicon(path: str | Path) -> Lexicon:
    """Parse a CMUdict-style lexicon.

    Keeps the first pronunciation per word, drops ``WORD(2)`` variant
    entries, strips stress digits from phonemes.
    """
    path = Path(path)
    entries: dict[str, tuple[str, ...]] = {}
    alphabet: set[str] = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if line.startswith(";;;") or not line.strip():
            continue
        fields = line.split()
        word, phonemes = fields[0], fields[1:]
        if not phonemes:
            raise DataError(f"{path}:{lineno}: lexicon entry {word!r} has no phonemes")
        if _VARIANT_RE.match(word):
            continue
        if word in entries:
            continue
        pron = tuple(strip_stress(p) for p in phonemes)
        entries[word] = pron
        alphabet.update(pron)
    return Lexicon(entries=entries, alphabet=frozenset(alphabet))


def format_score(value: float) -> str:
    """Render a score with 9 significant digits, trailing zeros kept."""
    return format(value, "#.9g")


def write_scores(scores: Iterable[ScoredSentence], path: str | Path) -> None:
    lines = [f"{s.id}\t{format_score(s.perplexity)}\t{s.token_count}\n" for s in scores]
    Path(path).write_text("".join(lines), encoding="utf-8")


def read_scores(path: str | Path) -> list[ScoredSentence]:
    path = Path(path)
    scores: list[ScoredSentence] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        fields = line.split("\t")
        if len(fields) != 3:
            raise DataError(f"{path}:{lineno}: malformed score line")
        uid, ppl_s, count_s = fields
        try:
            ppl = float(ppl_s)
            count = int(count_s)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: unparseable score fields") from exc
        if ppl <= 0:
            raise DataError(f"{path}:{lineno}: perplexity must be positive")
        if count < 1:
            raise DataError(f"{path}:{lineno}: token_count must be >= 1")
        scores.append(ScoredSentence(uid, ppl, count))
    return scores
