"""Shared definition of the end-to-end golden CLI run.

``tests/gen_golden.py`` executes it once to produce the checked-in
golden outputs; the acceptance suite executes the identical invocations
into a scratch directory and compares every byte.
"""

from __future__ import annotations

import warnings
from pathlib import Path

from phonosel import cli

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"

TESTSET_SEED = 17


def run_golden_pipeline(out_dir: Path) -> None:
    """Run the full CLI pipeline on the checked-in fixtures."""
    out_dir.mkdir(parents=True, exist_ok=True)
    lexicon = DATA / "lexicon_fixture.dict"
    target = DATA / "target_corpus.tsv"
    general = DATA / "general_corpus.tsv"
    emb = DATA / "emb"

    def run(argv: list[str]) -> None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            code = cli.main(argv)
        if code != 0:
            raise RuntimeError(f"golden pipeline step failed ({code}): {argv}")

    run(["phonemize", "--corpus", str(target), "--lexicon", str(lexicon),
         "--oov-policy", "drop-utterance", "--out", str(out_dir / "target_phonemized.tsv")])
    run(["phonemize", "--corpus", str(general), "--lexicon", str(lexicon),
         "--oov-policy", "unk", "--out", str(out_dir / "general_phonemized.tsv")])
    run(["bpe-train", "--phonemized", str(out_dir / "target_phonemized.tsv"),
         "--vocab-size", "200", "--out", str(out_dir / "merges.txt")])
    run(["bpe-encode", "--phonemized", str(out_dir / "target_phonemized.tsv"),
         "--merges", str(out_dir / "merges.txt"), "--out", str(out_dir / "target_encoded.tsv")])
    run(["bpe-encode", "--phonemized", str(out_dir / "general_phonemized.tsv"),
         "--merges", str(out_dir / "merges.txt"), "--out", str(out_dir / "general_encoded.tsv")])
    run(["lm-train", "--encoded", str(out_dir / "target_encoded.tsv"),
         "--discount", "0.75", "--out", str(out_dir / "model.lm")])
    run(["lm-score", "--lm", str(out_dir / "model.lm"),
         "--encoded", str(out_dir / "general_encoded.tsv"),
         "--out", str(out_dir / "scores.tsv")])
    run(["testsets", "--scores", str(out_dir / "scores.tsv"), "--size", "60",
         "--seed", str(TESTSET_SEED), "--out-dir", str(out_dir / "testsets")])
    run(["select", "--scores", str(out_dir / "scores.tsv"), "--k", "50",
         "--mode", "lowest", "--name", "pretrain-ppl", "--out", str(out_dir / "select_low.tsv")])
    run(["embed-centroid", "--embeddings", str(emb / "domain.emb"),
         "--out", str(out_dir / "centroid.emb")])
    run(["embed-rank", "--pool", str(emb / "pool.emb"),
         "--centroid", str(out_dir / "centroid.emb"), "--k", "40",
         "--name", "pretrain-bert", "--out", str(out_dir / "embed_rank.tsv")])


def golden_files() -> list[Path]:
    """Relative paths of every file the golden run produces."""
    return sorted(p.relative_to(GOLDEN) for p in GOLDEN.rglob("*") if p.is_file())
