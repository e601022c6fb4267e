"""HTTP service endpoints over a live threaded server."""

from __future__ import annotations

import threading

import httpx
import pytest

from kwspot.index import build_index
from kwspot.relevance import Method
from kwspot.service import make_server


@pytest.fixture(scope="module")
def sample_index(tmp_path_factory):
    from conftest import SAMPLE_TEXT

    d = tmp_path_factory.mktemp("lat")
    (d / "r1.lat").write_text(SAMPLE_TEXT, encoding="utf-8")
    return build_index(d, Method.FRAME_MAX, prune_epsilon=0.0)


@pytest.fixture(scope="module")
def base_url(sample_index):
    server = make_server(sample_index, host="127.0.0.1", port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def test_healthz(base_url):
    response = httpx.get(f"{base_url}/healthz")
    assert response.status_code == 200
    assert response.text == "ok"


def test_search_endpoint(base_url):
    response = httpx.get(f"{base_url}/api/search", params={"q": "cloud", "tau": 0.5})
    assert response.status_code == 200
    payload = response.json()
    assert payload["query"] == "cloud"
    assert payload["out_of_lexicon"] is False
    assert payload["detected_count"] == 1
    (result,) = payload["results"]
    assert result["rank"] == 1
    assert result["region_id"] == "r1"
    assert result["score"] == pytest.approx(0.6, abs=1e-9)
    assert result["span"] == {"begin": 8, "end": 22}


def test_search_oov(base_url):
    payload = httpx.get(f"{base_url}/api/search", params={"q": "zzz"}).json()
    assert payload["out_of_lexicon"] is True and payload["results"] == []


def test_search_param_validation(base_url):
    assert httpx.get(f"{base_url}/api/search?q=cloud&tau=abc").status_code == 400
    assert httpx.get(f"{base_url}/api/search?q=cloud&limit=abc").status_code == 400
    assert httpx.get(f"{base_url}/api/search?q=cloud&tau=1.8").status_code == 400
    assert httpx.get(f"{base_url}/api/search").status_code == 400


def test_search_identical_requests_identical_bytes(base_url):
    url = f"{base_url}/api/search?q=cloud&tau=0.1"
    assert httpx.get(url).content == httpx.get(url).content


def test_suggest_endpoint(base_url):
    assert httpx.get(f"{base_url}/api/suggest?prefix=clo").json() == ["cloud", "clouds"]
    assert httpx.get(f"{base_url}/api/suggest?prefix=zz").json() == []
    assert httpx.get(f"{base_url}/api/suggest?prefix=&limit=3").json() == [
        "cloud", "clouds", "is"]


def test_stats_endpoint(base_url):
    payload = httpx.get(f"{base_url}/api/stats").json()
    assert payload == {"regions": 1, "vocabulary_size": 4, "total_spots": 4,
                       "spots_per_line": 4.0}


def test_unknown_path_404(base_url):
    assert httpx.get(f"{base_url}/api/nothing").status_code == 404


def test_cors_headers_present(base_url):
    response = httpx.get(f"{base_url}/api/stats")
    assert response.headers.get("access-control-allow-origin") == "*"
    preflight = httpx.options(f"{base_url}/api/search")
    assert preflight.status_code == 204
    assert "GET" in preflight.headers.get("access-control-allow-methods", "")


def test_503_before_index_loaded():
    server = make_server(None, host="127.0.0.1", port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        url = f"http://127.0.0.1:{server.server_address[1]}"
        assert httpx.get(f"{url}/api/search?q=cloud").status_code == 503
        assert httpx.get(f"{url}/healthz").status_code == 200
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)
