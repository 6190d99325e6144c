import pytest

from phonosel import corpus

from pathlib import Path

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def lexicon_path() -> Path:
    return DATA / "lexicon_fixture.dict"


@pytest.fixture(scope="session")
def lexicon(lexicon_path) -> corpus.Lexicon:
    return corpus.load_lexicon(lexicon_path)


@pytest.fixture(scope="session")
def target_corpus_path() -> Path:
    return DATA / "target_corpus.tsv"


@pytest.fixture(scope="session")
def general_corpus_path() -> Path:
    return DATA / "general_corpus.tsv"
