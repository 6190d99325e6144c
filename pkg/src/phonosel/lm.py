"""Smoothed bigram language model over subword tokens.

Probabilities use absolute discounting with interpolation:

    p(w|h) = max(c(h,w) - d, 0) / c(h) + (d * N1+(h) / c(h)) * p_uni(w)

where ``c(h)`` is the total count of transitions out of context ``h``,
``N1+(h)`` the number of distinct continuations of ``h``, and ``p_uni``
an add-one smoothed unigram distribution over the scoreable vocabulary
(everything except BOS). Unseen contexts fall back to ``p_uni``
directly, so every probability is strictly positive and each context's
next-token distribution sums to one.

Sentences are wrapped as ``BOS t1 ... tn EOS``; EOS is scored, BOS is
context only, so a sentence of n tokens contributes n + 1 transitions.
Perplexity is exp of the negative mean natural log-probability.

Model file format: header ``#bigram-lm v1 discount=<d> vocab=<n>``, a
``[unigrams]`` section of ``token<TAB>count`` lines (every vocab member,
zero counts included) and a ``[bigrams]`` section of
``tok1<TAB>tok2<TAB>count`` lines, both in lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

DEFAULT_DISCOUNT = 0.75


@dataclass(frozen=True)
class Perplexity:
    value: float
    token_count: int


@dataclass(frozen=True)
class BigramModel:
    """Raw counts plus smoothing parameter; probabilities are computed
    at query time."""

    unigram_counts: Mapping[str, int]
    bigram_counts: Mapping[tuple[str, str], int]
    vocab: frozenset[str]
    discount: float
    # Derived tables, filled in __post_init__.
    total_tokens: int = field(init=False, default=0, compare=False)
    _context_totals: Mapping[str, int] = field(init=False, default_factory=dict, compare=False, repr=False)
    _continuations: Mapping[str, int] = field(init=False, default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not (0.0 < self.discount < 1.0):
            raise DataError(f"discount must lie in (0, 1), got {self.discount}")
        for special in (BOS, EOS, UNK):
            if special not in self.vocab:
                raise DataError(f"vocab is missing the reserved token {special!r}")
        for token, count in self.unigram_counts.items():
            if token not in self.vocab:
                raise DataError(f"unigram token {token!r} is outside the vocab")
            if count < 0:
                raise DataError(f"negative unigram count for {token!r}")
        context_totals: dict[str, int] = {}
        continuations: dict[str, int] = {}
        for (left, right), count in self.bigram_counts.items():
            if left not in self.vocab or right not in self.vocab:
                raise DataError(f"bigram ({left!r}, {right!r}) uses a token outside the vocab")
            if count < 0:
                raise DataError(f"negative bigram count for ({left!r}, {right!r})")
            context_totals[left] = context_totals.get(left, 0) + count
            continuations[left] = continuations.get(left, 0) + 1
        total = sum(c for t, c in self.unigram_counts.items() if t != BOS)
        object.__setattr__(self, "total_tokens", total)
        object.__setattr__(self, "_context_totals", context_totals)
        object.__setattr__(self, "_continuations", continuations)

    @property
    def scoreable_vocab_size(self) -> int:
        """Number of tokens that can appear as a prediction target."""
        return len(self.vocab) - 1  # BOS is context-only

    def unigram_prob(self, token: str) -> float:
        """Add-one smoothed unigram probability over vocab minus BOS."""
        count = self.unigram_counts.get(token, 0)
        return (count + 1) / (self.total_tokens + self.scoreable_vocab_size)

    def prob(self, context: str, token: str) -> float:
        """Interpolated absolute-discounting probability p(token|context)."""
        c_h = self._context_totals.get(context, 0)
        if c_h == 0:
            return self.unigram_prob(token)
        c_hw = self.bigram_counts.get((context, token), 0)
        lam = self.discount * self._continuations[context] / c_h
        return max(c_hw - self.discount, 0.0) / c_h + lam * self.unigram_prob(token)


def lm_train(corpus: Iterable[Sequence[str]], discount: float = DEFAULT_DISCOUNT) -> BigramModel:
    """Count unigrams and bigrams over BOS/EOS-wrapped token sequences."""
    unigrams: dict[str, int] = {}
    bigrams: dict[tuple[str, str], int] = {}
    n_sentences = 0
    for tokens in corpus:
        n_sentences += 1
        seq = [BOS, *tokens, EOS]
        for tok in seq:
            unigrams[tok] = unigrams.get(tok, 0) + 1
        for pair in zip(seq, seq[1:]):
            bigrams[pair] = bigrams.get(pair, 0) + 1
    if n_sentences == 0:
        raise DataError("lm_train: empty corpus")
    vocab = frozenset(unigrams) | {BOS, EOS, UNK}
    return BigramModel(
        unigram_counts=unigrams,
        bigram_counts=bigrams,
        vocab=vocab,
        discount=discount,
    )


def lm_perplexity(model: BigramModel, tokens: Sequence[str]) -> Perplexity:
    """Score a token sequence; tokens outside the vocab map to UNK."""
    if not tokens:
        raise DataError("cannot score an empty token sequence")
    mapped = [t if t in model.vocab and t != BOS else UNK for t in tokens]
    seq = [BOS, *mapped, EOS]
    log_sum = 0.0
    for context, token in zip(seq, seq[1:]):
        log_sum += math.log(model.prob(context, token))
    n = len(tokens) + 1  # EOS is scored, BOS is context only
    return Perplexity(value=math.exp(-log_sum / n), token_count=n)


def lm_save(model: BigramModel, path: str | Path) -> None:
    lines = [f"#bigram-lm v1 discount={model.discount!r} vocab={len(model.vocab)}\n"]
    lines.append("[unigrams]\n")
    for token in sorted(model.vocab):
        lines.append(f"{token}\t{model.unigram_counts.get(token, 0)}\n")
    lines.append("[bigrams]\n")
    for (left, right), count in sorted(model.bigram_counts.items()):
        lines.append(f"{left}\t{right}\t{count}\n")
    Path(path).write_text("".join(lines), encoding="utf-8")


def lm_load(path: str | Path) -> BigramModel:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#bigram-lm v1 "):
        raise DataError(f"{path}: not a v1 bigram model file")
    header = lines[0].split()
    try:
        fields = dict(part.split("=", 1) for part in header[2:])
        discount = float(fields["discount"])
        declared_vocab = int(fields["vocab"])
    except (ValueError, KeyError) as exc:
        raise DataError(f"{path}: malformed model header") from exc

    unigrams: dict[str, int] = {}
    bigrams: dict[tuple[str, str], int] = {}
    section = None
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "[unigrams]":
            section = "uni"
            continue
        if line == "[bigrams]":
            section = "bi"
            continue
        fields_ = line.split("\t")
        try:
            if section == "uni" and len(fields_) == 2:
                unigrams[fields_[0]] = int(fields_[1])
            elif section == "bi" and len(fields_) == 3:
                bigrams[(fields_[0], fields_[1])] = int(fields_[2])
            else:
                raise ValueError
            if int(fields_[-1]) < 0:
                raise ValueError
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: corrupt model line") from exc
    vocab = frozenset(unigrams)
    if len(vocab) != declared_vocab:
        raise DataError(
            f"{path}: header declares vocab={declared_vocab} but "
            f"{len(vocab)} unigram entries were found"
        )
    # Zero-count vocab members are serialized, so drop them from counts
    # again for an exact roundtrip of the training counts.
    unigrams = {t: c for t, c in unigrams.items() if c > 0}
    return BigramModel(
        unigram_counts=unigrams,
        bigram_counts=bigrams,
        vocab=vocab,
        discount=discount,
    )
