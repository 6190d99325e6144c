"""Command-line pipeline: phonemize -> bpe -> bigram LM -> selection.

Every subcommand writes byte-deterministic outputs (no timestamps or
hostnames) plus a sidecar ``.log`` file holding the resolved run
configuration, so any artifact can be traced to its exact invocation.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import bpe, corpus, lm, phonemizer, select
from .errors import DataError

DEFAULT_VOCAB_SIZE = 200
DEFAULT_TESTSET_SIZE = 60
DEFAULT_K = 40_000
DEFAULT_SEED = 0


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: subcommand plus every flag value."""

    subcommand: str
    options: dict[str, object]

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        options = {
            key: value
            for key, value in sorted(vars(args).items())
            if key not in ("func", "subcommand") and not callable(value)
        }
        return cls(subcommand=args.subcommand, options=options)

    def lines(self) -> list[str]:
        out = [f"subcommand={self.subcommand}\n"]
        for key, value in self.options.items():
            if value is None:
                rendered = "-"
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            else:
                rendered = str(value)
            out.append(f"{key}={rendered}\n")
        return out

    def write_log(self, primary_output: str | Path) -> None:
        log_path = Path(str(primary_output) + ".log")
        log_path.write_text("".join(self.lines()), encoding="utf-8")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract is 1.
    def error(self, message: str) -> "None":
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map; thread count never changes the result."""
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _oov_report_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".oov.tsv")


def _cmd_phonemize(args: argparse.Namespace) -> None:
    utterances = corpus.load_corpus(args.corpus)
    lexicon = corpus.load_lexicon(args.lexicon)
    kept, report = phonemizer.phonemize_corpus(
        utterances, lexicon, args.oov_policy, threads=args.threads
    )
    phonemizer.write_phonemized(kept, args.out)
    phonemizer.write_oov_report(report, _oov_report_path(args.out))
    RunConfig.from_args(args).write_log(args.out)


def _cmd_bpe_train(args: argparse.Namespace) -> None:
    items = phonemizer.read_phonemized(args.phonemized)
    table = bpe.bpe_train(items, vocab_size=args.vocab_size)
    bpe.save_merges(table, args.out)
    RunConfig.from_args(args).write_log(args.out)


def _cmd_bpe_encode(args: argparse.Namespace) -> None:
    items = phonemizer.read_phonemized(args.phonemized)
    table = bpe.load_merges(args.merges)
    encoded = _pmap(lambda item: bpe.encode_utterance(item, table), items, args.threads)
    bpe.write_encoded(zip((item.id for item in items), encoded), args.out)
    RunConfig.from_args(args).write_log(args.out)


def _cmd_lm_train(args: argparse.Namespace) -> None:
    rows = bpe.read_encoded(args.encoded)
    model = lm.lm_train((tokens for _, tokens in rows), discount=args.discount)
    lm.lm_save(model, args.out)
    RunConfig.from_args(args).write_log(args.out)


def _cmd_lm_score(args: argparse.Namespace) -> None:
    model = lm.lm_load(args.lm)
    rows = bpe.read_encoded(args.encoded)
    ppls = _pmap(lambda row: lm.lm_perplexity(model, row[1]), rows, args.threads)
    scores = [
        corpus.ScoredSentence(uid, ppl.value, ppl.token_count)
        for (uid, _), ppl in zip(rows, ppls)
    ]
    corpus.write_scores(scores, args.out)
    RunConfig.from_args(args).write_log(args.out)


def _cmd_select(args: argparse.Namespace) -> None:
    scores = corpus.read_scores(args.scores)
    manifest = select.select_by_perplexity(scores, k=args.k, mode=args.mode, name=args.name)
    select.write_manifest(manifest, args.out)
    RunConfig.from_args(args).write_log(args.out)


def _cmd_testsets(args: argparse.Namespace) -> None:
    scores = corpus.read_scores(args.scores)
    t_sim, t_diff, t_ran = select.make_testsets(
        scores, size=args.size, seed=args.seed, allow_overlap=args.allow_overlap
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    select.write_manifest(t_sim, out_dir / "t-sim.tsv")
    select.write_manifest(t_diff, out_dir / "t-diff.tsv")
    select.write_manifest(t_ran, out_dir / "t-ran.tsv")
    RunConfig.from_args(args).write_log(out_dir / "run")


def _cmd_embed_centroid(args: argparse.Namespace) -> None:
    embeddings = select.read_embeddings(args.embeddings)
    center = select.centroid(embeddings)
    select.write_centroid(center, args.out)
    RunConfig.from_args(args).write_log(args.out)


def _cmd_embed_rank(args: argparse.Namespace) -> None:
    pool = select.read_embeddings(args.pool)
    center = select.read_centroid(args.centroid)
    manifest = select.select_by_centroid(pool, center, k=args.k, name=args.name)
    select.write_manifest(manifest, args.out)
    RunConfig.from_args(args).write_log(args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phonosel", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("phonemize", help="convert a corpus to per-word phoneme sequences")
    p.add_argument("--corpus", required=True, help="input id<TAB>text corpus")
    p.add_argument("--lexicon", required=True, help="CMUdict-style pronunciation lexicon")
    p.add_argument("--out", required=True, help="output phonemized corpus")
    p.add_argument("--oov-policy", choices=phonemizer.OOV_POLICIES, default="unk")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_phonemize)

    p = sub.add_parser("bpe-train", help="learn a phoneme-subword merge table")
    p.add_argument("--phonemized", required=True)
    p.add_argument("--out", required=True, help="output merges file")
    p.add_argument("--vocab-size", type=int, default=DEFAULT_VOCAB_SIZE)
    p.set_defaults(func=_cmd_bpe_train)

    p = sub.add_parser("bpe-encode", help="apply a merge table to a phonemized corpus")
    p.add_argument("--phonemized", required=True)
    p.add_argument("--merges", required=True)
    p.add_argument("--out", required=True, help="output encoded corpus")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_bpe_encode)

    p = sub.add_parser("lm-train", help="train the subword bigram language model")
    p.add_argument("--encoded", required=True)
    p.add_argument("--out", required=True, help="output model file")
    p.add_argument("--discount", type=float, default=lm.DEFAULT_DISCOUNT)
    p.set_defaults(func=_cmd_lm_train)

    p = sub.add_parser("lm-score", help="compute per-sentence perplexities")
    p.add_argument("--lm", required=True)
    p.add_argument("--encoded", required=True)
    p.add_argument("--out", required=True, help="output scores TSV")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_lm_score)

    p = sub.add_parser("select", help="top-k selection by perplexity")
    p.add_argument("--scores", required=True)
    p.add_argument("--out", required=True, help="output manifest TSV")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--mode", choices=("lowest", "highest"), default="lowest")
    p.add_argument("--name", default=None)
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("testsets", help="build the T-SIM / T-DIFF / T-RAN test sets")
    p.add_argument("--scores", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--size", "--testset-size", dest="size", type=int, default=DEFAULT_TESTSET_SIZE)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--allow-overlap", action="store_true")
    p.set_defaults(func=_cmd_testsets)

    p = sub.add_parser("embed-centroid", help="mean vector of a domain embedding file")
    p.add_argument("--embeddings", required=True, help="EMB1 file of domain sentences")
    p.add_argument("--out", required=True, help="output EMB1 centroid file")
    p.set_defaults(func=_cmd_embed_centroid)

    p = sub.add_parser("embed-rank", help="top-k selection by centroid distance")
    p.add_argument("--pool", required=True, help="EMB1 file of candidate sentences")
    p.add_argument("--centroid", required=True, help="EMB1 centroid file")
    p.add_argument("--out", required=True, help="output manifest TSV")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--name", default=None)
    p.set_defaults(func=_cmd_embed_rank)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"phonosel: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and argparse internals
        return int(exc.code or 0)
    try:
        args.func(args)
    except (DataError, OSError) as exc:
        print(f"phonosel: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
