from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simbench.errors import InputError
from simbench.tokenization import (
    BpeTokenizer,
    SimpleTokenizer,
    dump_bpe_vocab,
    load_tokenizer,
    split_pieces,
    train_bpe_vocab,
)

TRAINING_TEXT = [
    "The quiet harbor supports the bright signal across the valley.",
    "A narrow bridge was stable before the survey, and the engine can track it.",
    "Lorem ipsum dolor sit amet, consectetur adipiscing elit.",
]


@pytest.fixture(scope="module")
def bpe() -> BpeTokenizer:
    return BpeTokenizer(train_bpe_vocab(TRAINING_TEXT, merges=120))


def test_empty_text_encodes_to_empty(tok, bpe):
    for tokenizer in (tok, bpe):
        seq = tokenizer.encode("")
        assert len(seq) == 0
        assert tokenizer.decode(seq) == ""


@given(st.text(max_size=200))
@settings(max_examples=200, deadline=None)
def test_simple_roundtrip(text):
    tokenizer = SimpleTokenizer()
    assert tokenizer.decode(tokenizer.encode(text)) == text


def test_split_pieces_partitions():
    for text in ["a b", "  x  ", "one, two!", "\n\ntabs\there\n", "trailing   "]:
        assert "".join(split_pieces(text)) == text


def test_bpe_roundtrip_on_varied_text(bpe):
    for text in TRAINING_TEXT + ["completely unseen zebra text?!", "  spaces  ", "12:30"]:
        assert bpe.decode(bpe.encode(text)) == text


def test_encode_deterministic(tok, bpe):
    text = "the same text every time"
    for tokenizer in (tok, bpe):
        assert tokenizer.encode(text).tokens == tokenizer.encode(text).tokens


def test_repeated_word_uses_whitespace_prefixed_token(tok):
    seq = tok.encode("hi hello hello")
    assert len(seq.tokens) == 3
    assert seq.tokens[1] == seq.tokens[2]
    assert tok.decode([seq.tokens[1]]) == " hello"
    two = tok.encode("hello hello")
    assert len(two.tokens) == 2
    assert two.tokens[0] != two.tokens[1]


def test_truncated_prefix_decodes_to_text_prefix(tok, bpe):
    text = "The quiet harbor supports the bright signal."
    for tokenizer in (tok, bpe):
        tokens = tokenizer.encode(text).tokens
        for cut in range(len(tokens) + 1):
            assert text.startswith(tokenizer.decode(tokens[:cut]))


def test_token_set_matches_encode_dedup(tok):
    for text in ["", "a a a", "one two one", "x y z"]:
        assert tok.token_set(text) == set(tok.encode(text).tokens)
        assert len(tok.token_set(text)) <= len(tok.encode(text).tokens)


def test_simple_decode_rejects_bad_ids(tok):
    with pytest.raises(InputError):
        tok.decode([0])
    with pytest.raises(InputError):
        tok.decode([int.from_bytes(b"\x02zz", "big")])  # wrong sentinel


def test_bpe_decode_rejects_unknown_id(bpe):
    with pytest.raises(InputError):
        bpe.decode([10**9])


def test_bpe_vocab_file_roundtrip(tmp_path, bpe):
    ranks = train_bpe_vocab(TRAINING_TEXT, merges=50)
    path = tmp_path / "vocab.txt"
    path.write_text(dump_bpe_vocab(ranks), "utf-8")
    loaded = BpeTokenizer.from_file(path)
    text = "the bright signal, again"
    assert loaded.decode(loaded.encode(text)) == text
    assert loaded.encode(text).tokens == BpeTokenizer(ranks).encode(text).tokens


def test_bpe_requires_all_single_bytes():
    ranks = {bytes([b]): b for b in range(255)}  # byte 255 missing
    with pytest.raises(InputError):
        BpeTokenizer(ranks)


def test_load_tokenizer_selects_fallback_without_vocab(tmp_path):
    assert isinstance(load_tokenizer(None), SimpleTokenizer)
    path = tmp_path / "v.txt"
    path.write_text(dump_bpe_vocab(train_bpe_vocab(["ab"], merges=1)), "utf-8")
    assert isinstance(load_tokenizer(path), BpeTokenizer)


def test_bundled_vocab_roundtrips(fixtures_dir):
    tokenizer = BpeTokenizer.from_file(fixtures_dir / "bpe_vocab.txt")
    text = "The archive tracks the quiet meadow. Lorem ipsum dolor sit amet."
    assert tokenizer.decode(tokenizer.encode(text)) == text
    # merges actually fire: fewer tokens than bytes
    assert len(tokenizer.encode(text).tokens) < len(text.encode("utf-8"))


@given(st.text(alphabet=st.characters(codec="utf-8"), max_size=60))
@settings(max_examples=100, deadline=None)
def test_bpe_roundtrip_property(text):
    tokenizer = BpeTokenizer(train_bpe_vocab(["seed text"], merges=10))
    assert tokenizer.decode(tokenizer.encode(text)) == text
