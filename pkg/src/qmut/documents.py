"""The qmut/1 JSON interchange format.

A document wraps one of three payloads under a ``"schema": "qmut/1"``
marker: a graded quiver (``kind: "graded_quiver"``), a sequence quiver
(``kind: "exc_sequence"``), or a mutation word (``kind: "mutation_word"``).
Serialization is byte-stable: keys appear in a fixed order, vertices are
sorted by id and arrows/entries by endpoints, so identical values always
produce identical text (golden files can be compared bytewise).

Free-form ``meta`` survives a round-trip untouched.  Recovery results are
serialized through :func:`recovery_to_json` (they embed sequence payloads
and a mutation word, and parse back far enough to replay).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import DocumentError, QmutError
from .exseq import ExcSeqQuiver, MutKind, SeqMove
from .graded import GradedQuiver, Tag
from .recovery import RecoveryResult
from .symbols import Term, term_from_json, term_to_json

SCHEMA = "qmut/1"


@dataclass(frozen=True)
class Document:
    """A parsed qmut/1 document: exactly one payload plus free-form meta."""

    kind: str
    graded: GradedQuiver | None = None
    sequence: ExcSeqQuiver | None = None
    moves: tuple[SeqMove, ...] | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def graded_quiver(self) -> GradedQuiver:
        if self.graded is None:
            raise DocumentError("expected a graded_quiver document", kind=self.kind)
        return self.graded

    def sequence_quiver(self) -> ExcSeqQuiver:
        if self.sequence is None:
            raise DocumentError("expected an exc_sequence document", kind=self.kind)
        return self.sequence

    def word(self) -> tuple[SeqMove, ...]:
        if self.moves is None:
            raise DocumentError("expected a mutation_word document", kind=self.kind)
        return self.moves


def from_graded(q: GradedQuiver, meta: dict[str, Any] | None = None) -> Document:
    return Document(kind="graded_quiver", graded=q, meta=dict(meta or {}))


def from_sequence(q: ExcSeqQuiver, meta: dict[str, Any] | None = None) -> Document:
    return Document(kind="exc_sequence", sequence=q, meta=dict(meta or {}))


def from_word(moves: tuple[SeqMove, ...] | list[SeqMove],
              meta: dict[str, Any] | None = None) -> Document:
    return Document(kind="mutation_word", moves=tuple(moves), meta=dict(meta or {}))


# ---------------------------------------------------------------------------
# Building JSON values (canonical key order throughout)


def graded_payload(q: GradedQuiver) -> dict[str, Any]:
    vertices = [{"id": v, "label": q.labels[v - 1], "rank": q.rank(v),
                 "tag": q.tag(v).value} for v in range(1, q.n + 1)]
    arrows = [{"from": i, "to": j, "degree": deg, "count": count}
              for (i, j), (deg, count) in sorted(q.arrows.items())]
    return {"vertices": vertices, "arrows": arrows}


def sequence_payload(q: ExcSeqQuiver) -> dict[str, Any]:
    vertices = [{"id": v, "label": term_to_json(q.labels[v - 1]),
                 "rank": q.rank(v), "tag": None} for v in range(1, q.n + 1)]
    entries = [{"i": i, "j": j, "a": a} for (i, j), a in sorted(q.entries.items())]
    return {"vertices": vertices, "entries": entries}


def document_to_json(doc: Document) -> dict[str, Any]:
    out: dict[str, Any] = {"schema": SCHEMA, "kind": doc.kind}
    if doc.kind == "graded_quiver":
        out.update(graded_payload(doc.graded_quiver()))
    elif doc.kind == "exc_sequence":
        out.update(sequence_payload(doc.sequence_quiver()))
    elif doc.kind == "mutation_word":
        out["moves"] = [m.as_json() for m in doc.word()]
    else:
        raise DocumentError("unknown document kind", kind=doc.kind)
    out["meta"] = doc.meta
    return out


def recovery_to_json(result: RecoveryResult) -> dict[str, Any]:
    """Recovery result as a JSON value (kind ``recovery_result``)."""
    return {
        "schema": SCHEMA,
        "kind": "recovery_result",
        "weights": list(result.weights),
        "squid": {
            "bundle_positions": list(result.squid.bundle_positions),
            "arms": [list(arm) for arm in result.squid.arms],
            "weights": list(result.squid.weights),
        },
        "word": {"schema": SCHEMA, "kind": "mutation_word",
                 "moves": [m.as_json() for m in result.word], "meta": {}},
        "reconstruction": [term_to_json(t) for t in result.reconstruction],
        "log": [{"step": e.step, "phase": e.phase, "move": e.move.as_json(),
                 "ranks": list(e.ranks)} for e in result.log],
        "initial": {"schema": SCHEMA, "kind": "exc_sequence",
                    **sequence_payload(result.initial), "meta": {}},
        "final": {"schema": SCHEMA, "kind": "exc_sequence",
                  **sequence_payload(result.final), "meta": {}},
        "meta": {},
    }


def graded_move_json(vertex: int, move: Any) -> dict[str, Any]:
    """JSON record of one graded mutation (enough to display, not to undo;
    clients undo by keeping the previous document)."""
    return {"vertex": vertex, "pre_tag": move.pre_tag.value,
            "pre_rank": move.pre_rank, "pre_label": move.pre_label}


def serialize(doc: Document) -> str:
    """Byte-stable text form of a document."""
    return dumps(document_to_json(doc))


def dumps(value: dict[str, Any]) -> str:
    """Byte-stable JSON text for any canonically built value."""
    return json.dumps(value, indent=2, ensure_ascii=True) + "\n"


# ---------------------------------------------------------------------------
# Parsing


def _expect(obj: Any, key: str, types: type | tuple, path: str, *,
            optional: bool = False) -> Any:
    if not isinstance(obj, dict):
        raise DocumentError("expected an object", field=path)
    if key not in obj:
        if optional:
            return None
        raise DocumentError("missing field", field=f"{path}.{key}")
    value = obj[key]
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise DocumentError("wrong type", field=f"{path}.{key}", expected=str(types))
    if value is not None and not isinstance(value, types):
        raise DocumentError("wrong type", field=f"{path}.{key}", expected=str(types))
    return value


def _parse_vertices(obj: dict, path: str, *, labels_are_terms: bool
                    ) -> tuple[int, list[Term | str], list[int | None], list[Tag]]:
    raw = _expect(obj, "vertices", list, path)
    if not raw:
        raise DocumentError("a document needs at least one vertex", field=f"{path}.vertices")
    seen: dict[int, tuple[int, dict]] = {}
    for idx, entry in enumerate(raw):
        vid = _expect(entry, "id", int, f"{path}.vertices[{idx}]")
        if vid in seen:
            raise DocumentError("duplicate vertex id", field=f"{path}.vertices[{idx}].id",
                                id=vid)
        seen[vid] = (idx, entry)
    n = len(seen)
    if sorted(seen) != list(range(1, n + 1)):
        raise DocumentError("vertex ids must be 1..n", field=f"{path}.vertices",
                            ids=sorted(seen))
    labels: list[Term | str] = []
    ranks: list[int | None] = []
    tags: list[Tag] = []
    for v in range(1, n + 1):
        idx, entry = seen[v]
        label = entry.get("label")
        if labels_are_terms:
            try:
                labels.append(term_from_json(label))
            except Exception as exc:
                raise DocumentError("bad label term", field=f"{path}.vertices[{idx}].label"
                                    ) from exc
        else:
            if not isinstance(label, str):
                raise DocumentError("label must be a string",
                                    field=f"{path}.vertices[{idx}].label")
            labels.append(label)
        rank = _expect(entry, "rank", int, f"{path}.vertices[{idx}]", optional=True)
        if rank is not None and rank < 0:
            raise DocumentError("rank must be nonnegative",
                                field=f"{path}.vertices[{idx}].rank", value=rank)
        ranks.append(rank)
        tag = _expect(entry, "tag", str, f"{path}.vertices[{idx}]", optional=True)
        if tag is None:
            tags.append(Tag.UNKNOWN)
        else:
            try:
                tags.append(Tag(tag))
            except ValueError:
                raise DocumentError("tag must be sink, source, or unknown",
                                    field=f"{path}.vertices[{idx}].tag", value=tag)
    return n, labels, ranks, tags


def _parse_graded(obj: dict, path: str) -> GradedQuiver:
    n, labels, ranks, tags = _parse_vertices(obj, path, labels_are_terms=False)
    raw = _expect(obj, "arrows", list, path)
    arrows: dict[tuple[int, int], tuple[int, int]] = {}
    for idx, entry in enumerate(raw):
        here = f"{path}.arrows[{idx}]"
        i = _expect(entry, "from", int, here)
        j = _expect(entry, "to", int, here)
        degree = _expect(entry, "degree", int, here)
        count = _expect(entry, "count", int, here)
        for v, which in ((i, "from"), (j, "to")):
            if not 1 <= v <= n:
                raise DocumentError("arrow endpoint is not a vertex id",
                                    field=f"{here}.{which}", value=v)
        if degree not in (0, 1):
            raise DocumentError("degree must be 0 or 1", field=f"{here}.degree",
                                value=degree)
        if count < 1:
            raise DocumentError("count must be at least 1", field=f"{here}.count",
                                value=count)
        if (i, j) in arrows:
            raise DocumentError("duplicate arrow pair", field=here, pair=[i, j])
        arrows[(i, j)] = (degree, count)
    try:
        return GradedQuiver(n=n, arrows=arrows, ranks=tuple(ranks),
                            tags=tuple(tags), labels=tuple(labels))
    except QmutError as exc:
        details = {k: v for k, v in exc.details.items() if k != "field"}
        raise DocumentError(f"invalid graded quiver: {exc.message}",
                            field=path, **details) from exc


def _parse_sequence(obj: dict, path: str) -> ExcSeqQuiver:
    n, labels, ranks, _tags = _parse_vertices(obj, path, labels_are_terms=True)
    for v, rank in enumerate(ranks, start=1):
        if rank is None:
            raise DocumentError("sequence vertices need a rank",
                                field=f"{path}.vertices[{v - 1}].rank")
    raw = _expect(obj, "entries", list, path)
    entries: dict[tuple[int, int], int] = {}
    for idx, entry in enumerate(raw):
        here = f"{path}.entries[{idx}]"
        i = _expect(entry, "i", int, here)
        j = _expect(entry, "j", int, here)
        a = _expect(entry, "a", int, here)
        if not (1 <= i < j <= n):
            raise DocumentError("entry needs 1 <= i < j <= n", field=here, pair=[i, j])
        if a == 0:
            raise DocumentError("entry value must be nonzero", field=f"{here}.a")
        if (i, j) in entries:
            raise DocumentError("duplicate entry pair", field=here, pair=[i, j])
        entries[(i, j)] = a
    try:
        return ExcSeqQuiver(n=n, entries=entries, ranks=tuple(ranks),
                            labels=tuple(labels))
    except QmutError as exc:
        details = {k: v for k, v in exc.details.items() if k != "field"}
        raise DocumentError(f"invalid sequence quiver: {exc.message}",
                            field=path, **details) from exc


def _parse_word(obj: dict, path: str) -> tuple[SeqMove, ...]:
    raw = _expect(obj, "moves", list, path)
    moves = []
    for idx, entry in enumerate(raw):
        here = f"{path}.moves[{idx}]"
        side = _expect(entry, "side", str, here)
        pos = _expect(entry, "pos", int, here)
        kind = _expect(entry, "kind", str, here)
        if side not in ("L", "R"):
            raise DocumentError("side must be L or R", field=f"{here}.side", value=side)
        if pos < 1:
            raise DocumentError("pos must be at least 1", field=f"{here}.pos", value=pos)
        try:
            moves.append(SeqMove(side=side, pos=pos, kind=MutKind(kind)))
        except ValueError:
            raise DocumentError("kind must be one of T, E, M, X",
                                field=f"{here}.kind", value=kind)
    return tuple(moves)


def parse_value(obj: Any) -> Document:
    """Parse an already-decoded JSON value into a document."""
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object", field="$")
    schema = _expect(obj, "schema", str, "$")
    if schema != SCHEMA:
        raise DocumentError("unsupported schema", field="$.schema", value=schema)
    kind = _expect(obj, "kind", str, "$")
    meta = _expect(obj, "meta", dict, "$", optional=True) or {}
    if kind == "graded_quiver":
        return Document(kind=kind, graded=_parse_graded(obj, "$"), meta=meta)
    if kind == "exc_sequence":
        return Document(kind=kind, sequence=_parse_sequence(obj, "$"), meta=meta)
    if kind == "mutation_word":
        return Document(kind=kind, moves=_parse_word(obj, "$"), meta=meta)
    if kind == "recovery_result":
        word = _expect(obj, "word", dict, "$")
        return Document(kind="mutation_word", moves=_parse_word(word, "$.word"),
                        meta=meta)
    raise DocumentError("unknown document kind", field="$.kind", value=kind)


def parse(text: str) -> Document:
    """Parse qmut/1 text; errors carry the JSON line or the failing field."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("not valid JSON", line=exc.lineno, column=exc.colno,
                            reason=exc.msg) from exc
    return parse_value(obj)
