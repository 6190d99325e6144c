"""Word-to-phoneme conversion with configurable out-of-vocabulary policy.

Phonemized corpus file format: ``id<TAB>w1p1 w1p2|w2p1 ...`` with words
separated by ``|`` and phonemes by single spaces. The OOV report written
alongside the output is a TSV of ``id<TAB>oov_words``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .corpus import Lexicon, Utterance
from .errors import DataError

UNK = "UNK"

OOV_POLICIES = ("unk", "skip-word", "drop-utterance")


@dataclass(frozen=True)
class PhonemizedUtterance:
    """Utterance as per-word phoneme sequences."""

    id: str
    words: tuple[tuple[str, ...], ...]
    oov_count: int = 0


def oov_words(utterance: Utterance, lexicon: Lexicon) -> list[str]:
    """Words of the (normalized) utterance missing from the lexicon."""
    return [w for w in utterance.text.split() if w not in lexicon.entries]


def phonemize(
    utterance: Utterance,
    lexicon: Lexicon,
    oov_policy: str = "unk",
) -> PhonemizedUtterance | None:
    """Map each word of the utterance to its phoneme sequence.

    OOV handling: ``unk`` replaces the word with a single UNK symbol,
    ``skip-word`` omits it, ``drop-utterance`` discards the whole
    utterance (returns None). Utterances that end up with no words at
    all are also dropped, since they cannot be scored.
    """
    if oov_policy not in OOV_POLICIES:
        raise DataError(f"unknown oov policy {oov_policy!r}")
    words: list[tuple[str, ...]] = []
    n_oov = 0
    for word in utterance.text.split():
        pron = lexicon.entries.get(word)
        if pron is not None:
            words.append(pron)
            continue
        n_oov += 1
        if oov_policy == "unk":
            words.append((UNK,))
        elif oov_policy == "drop-utterance":
            return None
        # skip-word: omit
    if not words:
        return None
    return PhonemizedUtterance(utterance.id, tuple(words), oov_count=n_oov)


def phonemize_corpus(
    utterances: Iterable[Utterance],
    lexicon: Lexicon,
    oov_policy: str = "unk",
    threads: int = 1,
) -> tuple[list[PhonemizedUtterance], list[tuple[str, list[str]]]]:
    """Phonemize a corpus, preserving input order.

    Returns the kept utterances plus a report of every utterance that
    had OOV words or was dropped, as (id, oov_words) rows. Phonemizing
    is pure per utterance, so ``threads`` never changes the result.
    """
    utterances = list(utterances)

    def one(utt: Utterance) -> tuple[list[str], PhonemizedUtterance | None]:
        return oov_words(utt, lexicon), phonemize(utt, lexicon, oov_policy)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, utterances))
    else:
        results = [one(utt) for utt in utterances]

    kept: list[PhonemizedUtterance] = []
    report: list[tuple[str, list[str]]] = []
    for utt, (missing, result) in zip(utterances, results):
        if missing or result is None:
            report.append((utt.id, missing))
        if result is not None:
            kept.append(result)
    return kept, report


def write_phonemized(items: Iterable[PhonemizedUtterance], path: str | Path) -> None:
    lines = []
    for item in items:
        body = "|".join(" ".join(word) for word in item.words)
        lines.append(f"{item.id}\t{body}\n")
    Path(path).write_text("".join(lines), encoding="utf-8")


def read_phonemized(path: str | Path) -> list[PhonemizedUtterance]:
    path = Path(path)
    items: list[PhonemizedUtterance] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if "\t" not in line:
            raise DataError(f"{path}:{lineno}: malformed phonemized line")
        uid, body = line.split("\t", 1)
        if not body:
            raise DataError(f"{path}:{lineno}: phonemized utterance has no words")
        words = tuple(tuple(chunk.split()) for chunk in body.split("|"))
        if any(not w for w in words):
            raise DataError(f"{path}:{lineno}: empty word in phonemized utterance")
        n_oov = sum(1 for w in words if w == (UNK,))
        items.append(PhonemizedUtterance(uid, words, oov_count=n_oov))
    return items


def write_oov_report(report: Iterable[tuple[str, list[str]]], path: str | Path) -> None:
    lines = [f"{uid}\t{' '.join(words)}\n" for uid, words in report]
    Path(path).write_text("".join(lines), encoding="utf-8")
