"""Shared builders and random generators for the test suite."""

from __future__ import annotations

import json
import random
import threading
from pathlib import Path

import pytest

from qmut import documents, service
from qmut.catalog import canonical_graded
from qmut.errors import DocumentError, MutationError, QmutError
from qmut.exseq import (ExcSeqQuiver, MutKind, SeqMove, classify_left,
                        classify_right, left_mutate, right_mutate)
from qmut.graded import GradedQuiver, Quiver, Tag, graded_mutate
from qmut.ranks import solve_unknown_ranks
from qmut.recovery import tilting_sequence_from_graded

FIXTURES = Path(__file__).parent / "fixtures"

CATALOG_WEIGHTS = [(2, 2, 2), (2, 2, 2, 2), (3, 3, 4), (2, 3, 7)]


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


def fixture_quiver(name: str) -> GradedQuiver:
    return documents.parse(fixture_text(name)).graded_quiver()


def make_q1() -> GradedQuiver:
    """Canonical (3,3,4) mutated at the line-bundle vertex, ranks solved."""
    q, _ = graded_mutate(canonical_graded((3, 3, 4)), 1)
    q, _ = solve_unknown_ranks(q)
    return q


def make_q2() -> GradedQuiver:
    q, _ = graded_mutate(make_q1(), 2)
    q, _ = solve_unknown_ranks(q)
    return q


def random_plain_quiver(rng: random.Random, n_max: int = 8,
                        mult_max: int = 3) -> Quiver:
    """Random loop-free, 2-cycle-free quiver with bounded multiplicities."""
    n = rng.randint(2, n_max)
    arrows: dict[tuple[int, int], int] = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            count = rng.randint(0, mult_max)
            if count == 0:
                continue
            pair = (i, j) if rng.random() < 0.5 else (j, i)
            arrows[pair] = count
    return Quiver(n=n, arrows=arrows)


def random_exseq(rng: random.Random, n_max: int = 6, a_max: int = 3,
                 rank_max: int = 5) -> ExcSeqQuiver:
    """Random sequence quiver with bounded entries and ranks."""
    n = rng.randint(2, n_max)
    entries = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            a = rng.randint(-a_max, a_max)
            if a != 0:
                entries[(i, j)] = a
    ranks = tuple(rng.randint(0, rank_max) for _ in range(n))
    return ExcSeqQuiver(n=n, entries=entries, ranks=ranks)


def random_document(rng: random.Random) -> documents.Document:
    """Random document of any kind, for serialization round-trips."""
    kind = rng.choice(["graded", "sequence", "word"])
    if kind == "graded":
        weights = tuple(rng.randint(2, 4) for _ in range(rng.randint(0, 4)))
        q = canonical_graded(weights)
        for _ in range(rng.randint(0, 3)):
            movable = [v for v in range(1, q.n + 1)
                       if q.tag(v) is not Tag.UNKNOWN]
            if not movable:
                break
            q, _ = graded_mutate(q, rng.choice(movable))
            q, _ = solve_unknown_ranks(q)
        return documents.from_graded(q)
    if kind == "sequence":
        return documents.from_sequence(random_exseq(rng))
    moves = [SeqMove(side=rng.choice("LR"), pos=rng.randint(1, 5),
                     kind=MutKind(rng.choice("EMXT")))
             for _ in range(rng.randint(0, 6))]
    return documents.from_word(tuple(moves))


def realizable_instances(rng: random.Random, weights: tuple[int, ...],
                         walk_length: int, count: int) -> list[ExcSeqQuiver]:
    """Random mutation walks away from a catalog tilting sequence.

    Arbitrary integer data need not satisfy the braid relations; instances
    reached by classified mutations from genuine tilting data do.
    """
    base = tilting_sequence_from_graded(canonical_graded(weights))
    out = []
    for _ in range(count):
        q = base
        for _ in range(walk_length):
            l = rng.randint(1, q.n - 1)
            side = rng.choice("LR")
            classify = classify_left if side == "L" else classify_right
            if classify(q, l) is None:
                continue
            try:
                q, _ = (left_mutate if side == "L" else right_mutate)(q, l)
            except MutationError:
                continue
        out.append(q)
    return out


def normalize(value):
    """Value as the service would emit it: through the same serializer."""
    return json.loads(documents.dumps(value))


def doc_json(doc: documents.Document) -> dict:
    return normalize(documents.document_to_json(doc))


def run_op(op, argument):
    """Invoke an endpoint body directly, applying the service's status map."""
    try:
        value = op(argument)
    except DocumentError as exc:
        return 400, normalize(exc.as_json())
    except QmutError as exc:
        return 422, normalize(exc.as_json())
    return 200, normalize(value)


@pytest.fixture(scope="session")
def live_service():
    """A running HTTP service bound to an ephemeral port."""
    srv = service.make_server("127.0.0.1:0")
    host, port = srv.server_address[:2]
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://{host}:{port}"
    srv.shutdown()
    srv.server_close()


def http_json(base: str, method: str, path: str, body=None):
    """Issue a request, returning (status, parsed body, headers)."""
    import urllib.error
    import urllib.request

    data = None if body is None else json.dumps(body).encode()
    req = urllib.request.Request(base + path, data=data, method=method)
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read()), dict(resp.headers)
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read()), dict(err.headers)
