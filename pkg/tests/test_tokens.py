from hypothesis import given
from hypothesis import strategies as st

from segfilter.tokens import normalize_token, tokenize


def test_normalize_strips_punctuation_and_lowercases():
    assert normalize_token("Games!") == "games"


def test_normalize_rejects_non_alphanumeric():
    assert normalize_token("—") is None
    assert normalize_token("") is None
    assert normalize_token("   ") is None


def test_normalize_keeps_digits():
    assert normalize_token("Web2") == "web2"


def test_normalize_rejects_multi_run_input():
    assert normalize_token("a-b") is None


def test_tokenize_splits_words():
    assert tokenize("Entertainment Software") == ["entertainment", "software"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_splits_on_any_non_alphanumeric():
    assert tokenize("a-b_c") == ["a", "b", "c"]


def test_tokenize_url_style():
    assert tokenize("/fun/games?id=3") == ["fun", "games", "id", "3"]


@given(st.text())
def test_tokens_are_lowercase_alnum(text):
    for token in tokenize(text):
        assert token
        assert token == token.lower()
        assert all(ch.isalnum() for ch in token)


@given(st.text())
def test_tokenize_is_idempotent_per_token(text):
    for token in tokenize(text):
        assert tokenize(token) == [token]
