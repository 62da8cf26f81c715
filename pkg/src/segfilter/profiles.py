"""Personalization profiles: a "like" keyword track, an "unlike" keyword
track, and the display threshold. Profiles are immutable after load."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .tokens import tokenize


class ProfileError(ValueError):
    """Base class for profile validation failures."""


class MalformedProfile(ProfileError):
    pass


class EmptyKeyword(ProfileError):
    def __init__(self, raw: str):
        super().__init__(f"keyword {raw!r} contains no alphanumeric characters")
        self.raw = raw


class MultiTokenKeyword(ProfileError):
    def __init__(self, raw: str):
        super().__init__(f"keyword {raw!r} splits into multiple tokens; single tokens only")
        self.raw = raw


class OverlappingTracks(ProfileError):
    def __init__(self, keywords: list[str]):
        listing = ", ".join(sorted(keywords))
        super().__init__(f"keyword(s) in both tracks: {listing}")
        self.keywords = sorted(keywords)


@dataclass(frozen=True)
class ProfileBag:
    """Immutable profile: disjoint like/unlike token sets plus threshold."""

    like: frozenset[str]
    unlike: frozenset[str]
    threshold: int = 0


def _normalize_track(entries: Iterable[str], track: str) -> frozenset[str]:
    keywords: set[str] = set()
    for raw in entries:
        if not isinstance(raw, str):
            raise MalformedProfile(f"{track} entries must be strings, got {raw!r}")
        tokens = tokenize(raw)
        if not tokens:
            raise EmptyKeyword(raw)
        if len(tokens) > 1:
            raise MultiTokenKeyword(raw)
        keywords.add(tokens[0])
    return frozenset(keywords)


def make_profile(like: Iterable[str], unlike: Iterable[str], threshold: int = 0) -> ProfileBag:
    """Validate and normalize raw keyword lists into a ProfileBag."""
    if isinstance(threshold, bool) or not isinstance(threshold, int):
        raise MalformedProfile(f"threshold must be an integer, got {threshold!r}")
    like_set = _normalize_track(like, "like")
    unlike_set = _normalize_track(unlike, "unlike")
    overlap = like_set & unlike_set
    if overlap:
        raise OverlappingTracks(list(overlap))
    return ProfileBag(like=like_set, unlike=unlike_set, threshold=threshold)


def load_profile(data: bytes | str) -> ProfileBag:
    """Parse profile JSON: {"like": [...], "unlike": [...], "threshold": n}.

    Keywords are normalized (lowercase, punctuation stripped) and
    deduplicated; threshold defaults to 0.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedProfile(f"profile is not valid UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedProfile(f"profile is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedProfile("profile must be a JSON object")
    unknown = set(obj) - {"like", "unlike", "threshold"}
    if unknown:
        raise MalformedProfile(f"unknown profile keys: {sorted(unknown)}")
    like = obj.get("like", [])
    unlike = obj.get("unlike", [])
    if not isinstance(like, list) or not isinstance(unlike, list):
        raise MalformedProfile('"like" and "unlike" must be arrays of strings')
    return make_profile(like, unlike, obj.get("threshold", 0))


def save_profile(bag: ProfileBag) -> bytes:
    """Canonical profile serialization: sorted tracks, two-space indent,
    trailing newline. load_profile(save_profile(bag)) == bag."""
    payload = {
        "like": sorted(bag.like),
        "unlike": sorted(bag.unlike),
        "threshold": bag.threshold,
    }
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
