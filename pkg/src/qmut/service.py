"""Stateless JSON-over-HTTP service exposing the engine.

Every endpoint is a thin adapter over the library: requests carry qmut/1
documents, responses return them, and nothing is kept between requests
(core values are immutable, so concurrent requests share nothing but
configuration).  Errors map to HTTP status codes: 400 for malformed
requests, 422 for domain errors, 500 for anything unexpected; the body
is always the same machine-readable error object the CLI prints.  The
``X-Qmut-Schema`` response header names the document schema.
"""

from __future__ import annotations

import json
import os
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any
from urllib.parse import parse_qs, urlparse

from . import documents
from .catalog import canonical_graded, squid_graded, squid_sequence, validate_weights
from .errors import DocumentError, QmutError, ValidationError
from .exseq import MutKind, apply_move, left_mutate, right_mutate
from .graded import (GradedQuiver, Tag, forget_grading, fz_mutate,
                     graded_mutate, validate)
from .ranks import check_additivity, solve_unknown_ranks, with_inferred_tags
from .recovery import recover, recover_sequence, tilting_sequence_from_graded

DEFAULT_ADDR = "127.0.0.1:8175"
#: Upper bound on per-step state snapshots returned by /api/recover.
MAX_RECOVER_STATES = 500


def _field(body: dict[str, Any], key: str, types: type | tuple, *,
           optional: bool = False, default: Any = None) -> Any:
    if key not in body:
        if optional:
            return default
        raise DocumentError("missing request field", field=key)
    value = body[key]
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise DocumentError("wrong request field type", field=key)
    if not isinstance(value, types):
        raise DocumentError("wrong request field type", field=key)
    return value


def _graded_doc(body: dict[str, Any]) -> GradedQuiver:
    doc = documents.parse_value(_field(body, "doc", dict))
    return doc.graded_quiver()


def _sequence_doc(body: dict[str, Any]):
    doc = documents.parse_value(_field(body, "doc", dict))
    return doc.sequence_quiver()


def _doc_json(doc: documents.Document) -> dict[str, Any]:
    return documents.document_to_json(doc)


# ---------------------------------------------------------------------------
# Endpoint bodies (shared by the HTTP handler and the conformance tests)


def op_mutate(body: dict[str, Any]) -> dict[str, Any]:
    q = _graded_doc(body)
    vertex = _field(body, "vertex", int)
    graded = _field(body, "graded", bool, optional=True, default=True)
    if not graded:
        plain = fz_mutate(forget_grading(q), vertex)
        result = GradedQuiver(
            n=plain.n,
            arrows={pair: (0, count) for pair, count in plain.arrows.items()},
            ranks=plain.ranks,
            tags=tuple(Tag.UNKNOWN for _ in range(plain.n)),
            labels=plain.labels)
        return {"doc": _doc_json(documents.from_graded(result)),
                "move": {"vertex": vertex, "fz": True}}
    result, move = graded_mutate(q, vertex)
    return {"doc": _doc_json(documents.from_graded(result)),
            "move": documents.graded_move_json(vertex, move)}


def op_exmutate(body: dict[str, Any]) -> dict[str, Any]:
    q = _sequence_doc(body)
    position = _field(body, "position", int)
    side = _field(body, "side", str)
    kind_name = _field(body, "kind", str, optional=True)
    kind = MutKind(kind_name) if kind_name else None
    if side == "left":
        result, move = left_mutate(q, position, kind)
    elif side == "right":
        result, move = right_mutate(q, position, kind)
    else:
        raise DocumentError("side must be left or right", field="side", value=side)
    return {"doc": _doc_json(documents.from_sequence(result)),
            "move": move.as_json()}


def op_ranks_solve(body: dict[str, Any]) -> dict[str, Any]:
    q = _graded_doc(body)
    solved_q, solved = solve_unknown_ranks(q)
    return {"doc": _doc_json(documents.from_graded(solved_q)),
            "solved": {str(v): r for v, r in sorted(solved.items())}}


def op_tags(body: dict[str, Any]) -> dict[str, Any]:
    q = with_inferred_tags(_graded_doc(body))
    return {"doc": _doc_json(documents.from_graded(q)),
            "tags": {str(v): q.tag(v).value for v in range(1, q.n + 1)}}


def op_verify(body: dict[str, Any]) -> dict[str, Any]:
    doc = documents.parse_value(_field(body, "doc", dict))
    checks: dict[str, str] = {"schema": "ok"}
    if doc.kind == "graded_quiver":
        q = doc.graded_quiver()
        validate(q)
        checks["structure"] = "ok"
        if any(q.rank(v) is None for v in range(1, q.n + 1)):
            checks["additivity"] = "skipped: unknown ranks"
        else:
            report = check_additivity(q)
            if not report.ok:
                raise ValidationError("rank additivity fails",
                                      vertices=report.failing_vertices())
            checks["additivity"] = "ok"
    return {"ok": True, "kind": doc.kind, "checks": checks}


def op_recover(body: dict[str, Any]) -> dict[str, Any]:
    doc = documents.parse_value(_field(body, "doc", dict))
    limit = _field(body, "max_states", int, optional=True,
                   default=MAX_RECOVER_STATES)
    limit = max(0, min(limit, MAX_RECOVER_STATES))
    if doc.kind == "exc_sequence":
        result = recover_sequence(doc.sequence_quiver())
    else:
        result = recover(doc.graded_quiver())
    out = documents.recovery_to_json(result)
    states = [documents.document_to_json(documents.from_sequence(result.initial))]
    state = result.initial
    for move in result.word:
        if len(states) >= limit:
            break
        state, _ = apply_move(state, move)
        states.append(documents.document_to_json(documents.from_sequence(state)))
    out["states"] = states
    out["states_truncated"] = len(states) < len(result.word) + 1
    return out


def op_generate(params: dict[str, Any]) -> dict[str, Any]:
    kind = _field(params, "type", str)
    if kind not in ("squid", "canonical"):
        raise DocumentError("type must be squid or canonical", field="type", value=kind)
    raw = _field(params, "weights", str)
    try:
        weights = validate_weights(tuple(int(x) for x in raw.split(",")))
    except ValueError:
        raise DocumentError("weights must be comma-separated integers",
                            field="weights", value=raw)
    emit_as = _field(params, "as", str, optional=True, default="graded")
    if emit_as not in ("graded", "sequence"):
        raise DocumentError("as must be graded or sequence", field="as", value=emit_as)
    if kind == "squid":
        if emit_as == "sequence":
            doc = documents.from_sequence(squid_sequence(weights))
        else:
            doc = documents.from_graded(squid_graded(weights))
    elif emit_as == "sequence":
        doc = documents.from_sequence(
            tilting_sequence_from_graded(canonical_graded(weights)))
    else:
        doc = documents.from_graded(canonical_graded(weights))
    return _doc_json(doc)


POST_ROUTES = {
    "/api/mutate": op_mutate,
    "/api/exmutate": op_exmutate,
    "/api/ranks/solve": op_ranks_solve,
    "/api/tags": op_tags,
    "/api/verify": op_verify,
    "/api/recover": op_recover,
}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "qmut"

    def log_message(self, format: str, *args: Any) -> None:
        if os.environ.get("QMUT_LOG"):
            super().log_message(format, *args)

    def _respond(self, status: int, value: dict[str, Any]) -> None:
        payload = documents.dumps(value).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("X-Qmut-Schema", documents.SCHEMA)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def _run(self, op, argument: dict[str, Any]) -> None:
        try:
            value = op(argument)
        except DocumentError as exc:
            self._respond(400, exc.as_json())
        except QmutError as exc:
            self._respond(422, exc.as_json())
        except Exception as exc:  # noqa: BLE001 - boundary of the process
            self._respond(500, {"error": {"code": "internal", "message": str(exc),
                                          "details": {}}})
        else:
            self._respond(200, value)

    def do_POST(self) -> None:
        op = POST_ROUTES.get(urlparse(self.path).path)
        if op is None:
            self._respond(404, {"error": {"code": "not_found",
                                          "message": "unknown endpoint",
                                          "details": {"path": self.path}}})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length).decode("utf-8"))
            if not isinstance(body, dict):
                raise DocumentError("request body must be a JSON object", field="$")
        except (ValueError, UnicodeDecodeError):
            self._respond(400, {"error": {"code": "bad_document",
                                          "message": "request body is not valid JSON",
                                          "details": {}}})
            return
        except DocumentError as exc:
            self._respond(400, exc.as_json())
            return
        self._run(op, body)

    def do_GET(self) -> None:
        url = urlparse(self.path)
        if url.path != "/api/generate":
            self._respond(404, {"error": {"code": "not_found",
                                          "message": "unknown endpoint",
                                          "details": {"path": self.path}}})
            return
        params = {key: values[-1] for key, values in parse_qs(url.query).items()}
        self._run(op_generate, params)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()


def make_server(addr: str | None = None) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server; addr is ``host:port``."""
    addr = addr or os.environ.get("QMUT_ADDR") or DEFAULT_ADDR
    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValidationError("listen address must look like host:port", addr=addr)
    return ThreadingHTTPServer((host, int(port_text)), _Handler)


def serve(addr: str | None = None) -> None:
    """Run the service until interrupted."""
    server = make_server(addr)
    host, port = server.server_address[:2]
    print(f"qmut service listening on {host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
