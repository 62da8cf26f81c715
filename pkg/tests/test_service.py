import pytest
from fastapi.testclient import TestClient

from segfilter.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


PROFILE = {
    "like": ["news", "sports"],
    "unlike": ["games", "poker"],
    "threshold": 0,
}


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"


def test_segment_endpoint(client):
    response = client.post("/segment", json={
        "html": '<p>alpha beta</p><div><a href="/x/y">link text</a> words here more</div>'
    })
    assert response.status_code == 200
    segments = response.json()["segments"]
    assert len(segments) == 2
    assert segments[0]["text_tokens"] == ["alpha", "beta"]
    assert segments[1]["links"][0]["url_tokens"] == ["x", "y"]


def test_segment_endpoint_rejects_bad_config(client):
    response = client.post("/segment", json={"html": "<p>x</p>", "wrap_width": 0})
    assert response.status_code == 400


def test_filter_endpoint_block_mode(client):
    response = client.post("/filter", json={
        "html": "<p>great news day</p><p>poker poker corner den floor hall room</p>",
        "profile": PROFILE,
    })
    assert response.status_code == 200
    body = response.json()
    assert 'data-segfilter="blocked"' in body["html"]
    assert "poker" not in body["html"].replace("data-segfilter", "")
    assert [row["disposition"] for row in body["report"]] == ["display", "block"]


def test_filter_endpoint_linkhide_mode(client):
    response = client.post("/filter", json={
        "html": '<div>news roundup with <a href="/fun/games">arcade games corner</a> for kids</div>',
        "profile": PROFILE,
        "mode": "linkhide",
    })
    assert response.status_code == 200
    body = response.json()
    assert "arcade games corner" in body["html"]
    assert "href" not in body["html"]
    assert body["report"][0]["disposition"] == "linkhide"


def test_filter_endpoint_threshold_override(client):
    response = client.post("/filter", json={
        "html": "<p>neutral words</p>",
        "profile": PROFILE,
        "threshold": 1,
    })
    assert response.status_code == 200
    assert 'data-segfilter="blocked"' in response.json()["html"]


def test_filter_endpoint_rejects_bad_mode(client):
    response = client.post("/filter", json={
        "html": "<p>x</p>", "profile": PROFILE, "mode": "shred"
    })
    assert response.status_code == 400


def test_profile_check_endpoint(client):
    response = client.post("/profile/check", json={
        "like": ["News", "news"], "unlike": ["Games!"], "threshold": 2
    })
    assert response.status_code == 200
    assert response.json() == {"like": ["news"], "unlike": ["games"], "threshold": 2}


def test_profile_check_rejects_overlap(client):
    response = client.post("/profile/check", json={"like": ["fun"], "unlike": ["fun"]})
    assert response.status_code == 400
    assert "fun" in response.json()["detail"]


def test_metrics_session_endpoint(client):
    pages = [
        {"page_id": "a", "segment_count": 9, "filtered_count": 3,
         "false_positives": 0, "false_negatives": 1},
        {"page_id": "b", "segment_count": 9, "filtered_count": 4,
         "false_positives": 1, "false_negatives": 0},
        {"page_id": "c", "segment_count": 8, "filtered_count": 3,
         "false_positives": 1, "false_negatives": 1},
        {"page_id": "d", "segment_count": 9, "filtered_count": 3,
         "false_positives": 0, "false_negatives": 0},
    ]
    response = client.post("/metrics/session", json={"session_id": "1", "pages": pages})
    assert response.status_code == 200
    row = response.json()
    assert row["msc"] == 8.75
    assert row["mfsc"] == 3.25
    assert row["accuracy_percent"] == 88.571


def test_metrics_session_rejects_empty(client):
    response = client.post("/metrics/session", json={"session_id": "1", "pages": []})
    assert response.status_code == 400


def test_metrics_aggregate_endpoint(client):
    rows = [
        {"session_id": "1", "msc": 10, "mfsc": 2, "mfp": 1, "mfn": 0.5,
         "accuracy_percent": 85.0},
        {"session_id": "2", "msc": 20, "mfsc": 4, "mfp": 2, "mfn": 1.5,
         "accuracy_percent": 82.5},
    ]
    response = client.post("/metrics/aggregate", json={"rows": rows})
    assert response.status_code == 200
    assert response.json() == {
        "mean_mfsc": 3.0, "mean_mfp": 1.5, "mean_mfn": 1.0, "mean_accuracy": 83.75,
    }
