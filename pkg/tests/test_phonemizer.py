import pytest
from hypothesis import given, strategies as st

from phonosel.corpus import Lexicon, Utterance
from phonosel.errors import DataError
from phonosel.phonemizer import (
    UNK,
    PhonemizedUtterance,
    oov_words,
    phonemize,
    phonemize_corpus,
    read_phonemized,
    write_oov_report,
    write_phonemized,
)

TOY_LEXICON = Lexicon(
    entries={
        "HELLO": ("HH", "AH", "L", "OW"),
        "WORLD": ("W", "ER", "L", "D"),
        "CAT": ("K", "AE", "T"),
    },
    alphabet=frozenset("HH AH L OW W ER D K AE T".split()),
)


def test_hello_world_lookup(lexicon):
    utt = Utterance("u1", "HELLO WORLD")
    result = phonemize(utt, lexicon)
    assert result.words == (("HH", "AH", "L", "OW"), ("W", "ER", "L", "D"))
    assert result.oov_count == 0


def test_oov_under_unk_policy():
    result = phonemize(Utterance("u1", "QZXQ"), TOY_LEXICON, "unk")
    assert result == PhonemizedUtterance("u1", ((UNK,),), oov_count=1)


def test_oov_under_drop_policy():
    assert phonemize(Utterance("u1", "QZXQ"), TOY_LEXICON, "drop-utterance") is None


def test_partial_oov_under_drop_policy():
    assert phonemize(Utterance("u1", "HELLO QZXQ"), TOY_LEXICON, "drop-utterance") is None


def test_skip_word_policy():
    result = phonemize(Utterance("u1", "HELLO QZXQ WORLD"), TOY_LEXICON, "skip-word")
    assert result.words == (("HH", "AH", "L", "OW"), ("W", "ER", "L", "D"))
    assert result.oov_count == 1


def test_all_oov_under_skip_word_drops_with_report():
    utts = [Utterance("u1", "QZXQ ZZYZX")]
    kept, report = phonemize_corpus(utts, TOY_LEXICON, "skip-word")
    assert kept == []
    assert report == [("u1", ["QZXQ", "ZZYZX"])]


def test_empty_text_dropped_and_reported():
    kept, report = phonemize_corpus([Utterance("u1", "")], TOY_LEXICON, "unk")
    assert kept == []
    assert report == [("u1", [])]


def test_unknown_policy_rejected():
    with pytest.raises(DataError):
        phonemize(Utterance("u1", "CAT"), TOY_LEXICON, "bogus")


def test_unk_preserves_word_count():
    utt = Utterance("u1", "HELLO QZXQ CAT GLORPH")
    result = phonemize(utt, TOY_LEXICON, "unk")
    assert len(result.words) == 4
    assert result.oov_count == 2


def test_oov_count_identical_across_unk_and_skip():
    utt = Utterance("u1", "HELLO QZXQ CAT GLORPH")
    a = phonemize(utt, TOY_LEXICON, "unk")
    b = phonemize(utt, TOY_LEXICON, "skip-word")
    assert a.oov_count == b.oov_count == len(oov_words(utt, TOY_LEXICON))


@given(st.lists(st.sampled_from(["HELLO", "WORLD", "CAT", "QZXQ", "BLURGH"]), min_size=1, max_size=12))
def test_purity_and_policy_relations(words):
    utt = Utterance("u", " ".join(words))
    first = phonemize(utt, TOY_LEXICON, "unk")
    second = phonemize(utt, TOY_LEXICON, "unk")
    assert first == second
    assert len(first.words) == len(words)
    skipped = phonemize(utt, TOY_LEXICON, "skip-word")
    if skipped is not None:
        assert skipped.oov_count == first.oov_count


def test_corpus_order_preserved(lexicon, target_corpus_path):
    from phonosel.corpus import load_corpus

    utts = load_corpus(target_corpus_path)
    kept, _ = phonemize_corpus(utts, lexicon, "unk")
    assert [u.id for u in kept] == [u.id for u in utts]


def test_threads_never_change_result(lexicon, target_corpus_path):
    from phonosel.corpus import load_corpus

    utts = load_corpus(target_corpus_path)
    serial = phonemize_corpus(utts, lexicon, "skip-word", threads=1)
    parallel = phonemize_corpus(utts, lexicon, "skip-word", threads=4)
    assert serial == parallel


def test_file_roundtrip(tmp_path):
    items = [
        PhonemizedUtterance("u1", (("HH", "AH", "L", "OW"), ("W", "ER", "L", "D"))),
        PhonemizedUtterance("u2", ((UNK,),), oov_count=1),
    ]
    p = tmp_path / "ph.tsv"
    write_phonemized(items, p)
    assert p.read_text(encoding="utf-8") == "u1\tHH AH L OW|W ER L D\nu2\tUNK\n"
    back = read_phonemized(p)
    assert back == items


def test_read_phonemized_rejects_empty_word(tmp_path):
    p = tmp_path / "ph.tsv"
    p.write_text("u1\tHH AH||K\n", encoding="utf-8")
    with pytest.raises(DataError):
        read_phonemized(p)


def test_oov_report_format(tmp_path):
    p = tmp_path / "report.tsv"
    write_oov_report([("u7", ["QZXQ", "ZZYZX"]), ("u9", [])], p)
    assert p.read_text(encoding="utf-8") == "u7\tQZXQ ZZYZX\nu9\t\n"
