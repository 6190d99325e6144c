import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizer

# Wordpiece vocabulary covering the test sentences; everything else
# tokenizes to [UNK], which is fine for these tests.
VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "cat", "sat", "on", "mat", "moon", "was", "yellow",
    "hello", "world", "dog", "ran", "far", "night", "sea", "ship",
    "king", "queen", "water", "long", "good", "book", "##s", "##ing",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory) -> str:
    """A small randomly initialized bidirectional encoder saved to disk,
    so tests never need network access."""
    model_dir = tmp_path_factory.mktemp("tiny-encoder")
    vocab_file = model_dir / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(str(vocab_file), do_lower_case=True)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=48,
    )
    torch.manual_seed(20260809)
    model = BertModel(config)
    model.save_pretrained(model_dir)
    tokenizer.save_pretrained(model_dir)
    return str(model_dir)


@pytest.fixture()
def small_corpus(tmp_path):
    p = tmp_path / "corpus.tsv"
    p.write_text(
        "u1\tThe cat sat on the mat.\n"
        "u2\tThe moon was yellow.\n"
        "u3\tHello world!\n"
        "u4\tThe moon was yellow.\n",  # duplicate of u2
        encoding="utf-8",
    )
    return p
