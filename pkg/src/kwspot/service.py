"""Read-only HTTP query service over a loaded spot index.

Endpoints (JSON unless noted):
    GET /healthz                          -> 200 "ok"
    GET /api/search?q=&tau=&limit=        -> ranked hits for one keyword
    GET /api/suggest?prefix=&limit=       -> word list for autocomplete
    GET /api/stats                        -> index statistics

The index is immutable after startup, so request handling is lock-free and
identical requests always produce identical responses.  CORS is open for the
browser UI.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from kwspot.index import SpotIndex, load_index, stats
from kwspot.query import search, suggest


class BadRequest(ValueError):
    pass


def _one(params: dict[str, list[str]], key: str, default: str | None = None) -> str | None:
    values = params.get(key)
    return values[-1] if values else default


def _parse_float(params, key, default: float) -> float:
    raw = _one(params, key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise BadRequest(f"parameter {key}={raw!r} is not a number")


def _parse_int(params, key, default: int) -> int:
    raw = _one(params, key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise BadRequest(f"parameter {key}={raw!r} is not an integer")


class KwsRequestHandler(BaseHTTPRequestHandler):
    server: KwsServer

    def do_GET(self):  # noqa: N802 - http.server API
        url = urlsplit(self.path)
        params = parse_qs(url.query)
        try:
            if url.path == "/healthz":
                self._respond(200, "ok", content_type="text/plain; charset=utf-8")
                return
            if self.server.index is None:
                self._respond(503, {"error": "index not loaded yet"})
                return
            if url.path == "/api/search":
                self._respond(200, self._search(params))
            elif url.path == "/api/suggest":
                self._respond(200, self._suggest(params))
            elif url.path == "/api/stats":
                self._respond(200, stats(self.server.index).as_dict())
            else:
                self._respond(404, {"error": f"unknown path {url.path}"})
        except BadRequest as exc:
            self._respond(400, {"error": str(exc)})

    def do_OPTIONS(self):  # noqa: N802 - CORS preflight
        self.send_response(204)
        self._cors_headers()
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def _search(self, params) -> dict:
        query = _one(params, "q")
        if not query:
            raise BadRequest("missing required parameter q")
        tau = _parse_float(params, "tau", 0.5)
        limit = _parse_int(params, "limit", 100)
        try:
            result = search(self.server.index, query, tau=tau, limit=limit)
        except ValueError as exc:
            raise BadRequest(str(exc))
        return {
            "query": result.query,
            "tau": result.tau,
            "out_of_lexicon": result.out_of_lexicon,
            "detected_count": result.detected_count,
            "results": [
                {"rank": h.rank, "region_id": h.region_id, "score": h.score,
                 "span": None if h.span is None else {"begin": h.span[0], "end": h.span[1]}}
                for h in result.hits
            ],
        }

    def _suggest(self, params) -> list[str]:
        prefix = _one(params, "prefix", "")
        limit = _parse_int(params, "limit", 20)
        try:
            return suggest(self.server.index, prefix, limit=limit)
        except ValueError as exc:
            raise BadRequest(str(exc))

    def _cors_headers(self):
        self.send_header("Access-Control-Allow-Origin", "*")

    def _respond(self, status: int, body, content_type: str = "application/json"):
        raw = body.encode("utf-8") if isinstance(body, str) else json.dumps(body).encode("utf-8")
        self.send_response(status)
        self._cors_headers()
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(raw)))
        self.end_headers()
        self.wfile.write(raw)

    def log_message(self, format, *args):  # noqa: A002 - http.server API
        pass  # keep request logs quiet; tests and the CLI own stdout


class KwsServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], index: SpotIndex | None = None):
        super().__init__(address, KwsRequestHandler)
        self.index = index


def make_server(index: SpotIndex | None, host: str = "127.0.0.1", port: int = 7878) -> KwsServer:
    return KwsServer((host, port), index)


def serve(index_path, host: str = "127.0.0.1", port: int = 7878) -> None:
    """Bind, load the index, then serve until interrupted."""
    server = make_server(None, host, port)
    server.index = load_index(index_path)
    st = stats(server.index)
    print(f"serving {st.regions} regions / {st.vocabulary_size} words "
          f"on http://{host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
