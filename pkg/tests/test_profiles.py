import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from segfilter.profiles import (
    EmptyKeyword,
    MalformedProfile,
    MultiTokenKeyword,
    OverlappingTracks,
    ProfileBag,
    load_profile,
    make_profile,
    save_profile,
)


def test_load_normalizes_and_deduplicates():
    bag = load_profile(b'{"like":["News"],"unlike":["Games","games!"],"threshold":0}')
    assert bag.like == frozenset({"news"})
    assert bag.unlike == frozenset({"games"})
    assert bag.threshold == 0


def test_load_empty_profile():
    bag = load_profile(b'{"like":[],"unlike":[]}')
    assert bag.like == frozenset() and bag.unlike == frozenset()
    assert bag.threshold == 0


def test_overlapping_tracks_rejected_with_keyword():
    with pytest.raises(OverlappingTracks) as err:
        load_profile(b'{"like":["fun"],"unlike":["fun"]}')
    assert err.value.keywords == ["fun"]


def test_malformed_json_rejected():
    with pytest.raises(MalformedProfile):
        load_profile(b"{nope")


def test_wrong_shape_rejected():
    with pytest.raises(MalformedProfile):
        load_profile(b"[1,2,3]")
    with pytest.raises(MalformedProfile):
        load_profile(b'{"like":"news","unlike":[]}')
    with pytest.raises(MalformedProfile):
        load_profile(b'{"like":[],"unlike":[],"threshold":"high"}')
    with pytest.raises(MalformedProfile):
        load_profile(b'{"like":[],"unlike":[],"threshold":true}')
    with pytest.raises(MalformedProfile):
        load_profile(b'{"like":[],"unlike":[],"extra":1}')


def test_empty_keyword_rejected():
    with pytest.raises(EmptyKeyword):
        load_profile(b'{"like":["!!!"],"unlike":[]}')


def test_multi_token_keyword_rejected():
    with pytest.raises(MultiTokenKeyword):
        load_profile(b'{"like":["entertainment software"],"unlike":[]}')


def test_save_is_canonical():
    bag = make_profile(["sports", "news"], [], 0)
    data = save_profile(bag)
    assert data == b'{\n  "like": [\n    "news",\n    "sports"\n  ],\n  "unlike": [],\n  "threshold": 0\n}\n'


def test_save_empty_bag():
    data = save_profile(ProfileBag(frozenset(), frozenset(), 0))
    payload = json.loads(data)
    assert payload == {"like": [], "unlike": [], "threshold": 0}
    assert data.endswith(b"\n")


def test_round_trip_identity():
    bag = make_profile(["News", "sports"], ["games"], 2)
    assert load_profile(save_profile(bag)) == bag


keywords = st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Nd")), min_size=1, max_size=8
).filter(lambda s: s.isalnum())


@given(st.sets(keywords, max_size=6), st.sets(keywords, max_size=6), st.integers(-5, 5))
def test_load_save_round_trip_property(like, unlike, threshold):
    like = like - unlike
    bag = make_profile(sorted(like), sorted(unlike), threshold)
    assert load_profile(save_profile(bag)) == bag
    assert save_profile(load_profile(save_profile(bag))) == save_profile(bag)
