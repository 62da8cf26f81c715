"""Shared fixtures and page generators for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from segfilter.profiles import ProfileBag

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
PAGES = CORPUS / "pages"

LIKE_WORDS = ["health", "news", "science", "sports", "weather"]
UNLIKE_WORDS = ["betting", "casino", "games", "gossip", "poker"]
NEUTRAL_WORDS = [
    "anchor", "bridge", "city", "daily", "evening", "field", "garden",
    "harbor", "island", "jungle", "kettle", "lantern", "meadow", "night",
    "orchard", "petal", "quarry", "river", "stone", "tunnel", "under",
    "valley", "window", "yellow", "zephyr",
]
VOCAB = LIKE_WORDS + UNLIKE_WORDS + NEUTRAL_WORDS


@pytest.fixture
def corpus_profile() -> ProfileBag:
    return ProfileBag(
        like=frozenset(LIKE_WORDS),
        unlike=frozenset(UNLIKE_WORDS),
        threshold=0,
    )


def corpus_page_paths() -> list[Path]:
    return sorted(PAGES.glob("*.html"))


def labeled_page_paths() -> list[Path]:
    return sorted(PAGES.glob("p*.html"))


def random_words(rng: random.Random, low: int = 1, high: int = 8) -> str:
    return " ".join(rng.choice(VOCAB) for _ in range(rng.randint(low, high)))


def random_block(rng: random.Random) -> str:
    kind = rng.randrange(6)
    if kind == 0:
        return f"<p>{random_words(rng)}</p>"
    if kind == 1:
        words = random_words(rng, 1, 3)
        href = "/" + words.replace(" ", "/")
        return f'<div>{random_words(rng, 0, 4)} <a href="{href}">{words}</a></div>'
    if kind == 2:
        return f'<div><img src="x.png" alt="{random_words(rng, 1, 4)}"></div>'
    if kind == 3:
        items = "".join(
            f"<li>{random_words(rng, 1, 4)}</li>" for _ in range(rng.randint(1, 3))
        )
        return f"<ul>{items}</ul>"
    if kind == 4:
        return f"<h2>{random_words(rng, 1, 4)}</h2>"
    return random_words(rng)  # bare inline run


def random_page(rng: random.Random, max_blocks: int = 8) -> bytes:
    blocks = "\n".join(random_block(rng) for _ in range(rng.randint(1, max_blocks)))
    return f"<html><body>\n{blocks}\n</body></html>".encode("utf-8")


def random_profile(rng: random.Random) -> ProfileBag:
    pool = VOCAB[:]
    rng.shuffle(pool)
    n_like = rng.randint(0, 4)
    n_unlike = rng.randint(0, 4)
    return ProfileBag(
        like=frozenset(pool[:n_like]),
        unlike=frozenset(pool[n_like:n_like + n_unlike]),
        threshold=rng.randint(-2, 2),
    )
