"""Rank additivity, unknown-rank solving, and sink/source inference.

For a graded quiver of a tilting object, twice the rank at each vertex
equals the rank-weighted count of adjacent degree-0 arrows minus the
rank-weighted count of adjacent degree-1 arrows (in either direction).
This linear condition checks a fully ranked quiver, recovers missing
ranks after mutation, and — together with the degree data — decides
which vertices are sinks and which are sources.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from . import linalg
from .errors import RankSolveError, TagError, ValidationError
from .graded import GradedQuiver, Quiver, Tag, validate


@dataclass(frozen=True)
class AdditivityReport:
    """Per-vertex residuals of the additivity equation; ok iff all zero."""

    residuals: tuple[int, ...]
    ok: bool

    def failing_vertices(self) -> list[int]:
        return [v for v, r in enumerate(self.residuals, start=1) if r != 0]


def _pair_weight(q: GradedQuiver, i: int, j: int, degree: int) -> int:
    """Total multiplicity of arrows of the given degree between i and j."""
    total = 0
    for pair in ((i, j), (j, i)):
        bundle = q.arrows.get(pair)
        if bundle is not None and bundle[0] == degree:
            total += bundle[1]
    return total


def check_additivity(q: GradedQuiver) -> AdditivityReport:
    """Evaluate 2*rank(v) - sum_j a(j,v)*rank(j) + sum_j b(j,v)*rank(j) at
    every vertex, where a counts adjacent degree-0 and b adjacent degree-1
    arrows in either direction.  All ranks must be present."""
    missing = [v for v in range(1, q.n + 1) if q.rank(v) is None]
    if missing:
        raise ValidationError("additivity needs all ranks", missing=missing)
    residuals = []
    for v in range(1, q.n + 1):
        acc = 2 * q.rank(v)
        for j in range(1, q.n + 1):
            if j == v:
                continue
            acc -= _pair_weight(q, j, v, 0) * q.rank(j)
            acc += _pair_weight(q, j, v, 1) * q.rank(j)
        residuals.append(acc)
    return AdditivityReport(residuals=tuple(residuals), ok=all(r == 0 for r in residuals))


def solve_unknown_ranks(q: GradedQuiver) -> tuple[GradedQuiver, dict[int, int]]:
    """Complete the unknown ranks of ``q`` from the additivity equations.

    Builds one equation per vertex and solves for the unknowns exactly over
    the rationals.  Returns the completed quiver and the solved values.
    Raises :class:`RankSolveError` when the system is underdetermined
    (reporting the free directions), inconsistent, or when the unique
    solution is non-integral or negative.
    """
    unknown = [v for v in range(1, q.n + 1) if q.rank(v) is None]
    if not unknown:
        return q, {}
    col_of = {v: c for c, v in enumerate(unknown)}
    matrix: list[list[int]] = []
    rhs: list[int] = []
    for i in range(1, q.n + 1):
        row = [0] * len(unknown)
        b = 0
        if i in col_of:
            row[col_of[i]] += 2
        else:
            b -= 2 * q.rank(i)
        for j in range(1, q.n + 1):
            if j == i:
                continue
            w = _pair_weight(q, i, j, 0) - _pair_weight(q, i, j, 1)
            if w == 0:
                continue
            if j in col_of:
                row[col_of[j]] -= w
            else:
                b += w * q.rank(j)
        matrix.append(row)
        rhs.append(b)
    sol = linalg.solve(matrix, rhs)
    if sol.status == "inconsistent":
        raise RankSolveError("additivity equations have no solution",
                             reason="inconsistent", unknown_vertices=unknown)
    if sol.status == "underdetermined":
        directions = [
            {unknown[c]: str(d[c]) for c in range(len(unknown)) if d[c] != 0}
            for d in sol.free_directions
        ]
        raise RankSolveError("additivity equations do not determine the ranks",
                             reason="underdetermined", unknown_vertices=unknown,
                             free_directions=directions)
    solved: dict[int, int] = {}
    for v, value in zip(unknown, sol.values):
        if value.denominator != 1:
            raise RankSolveError("solved rank is not an integer",
                                 reason="non_integral", vertex=v, value=str(value))
        if value < 0:
            raise RankSolveError("solved rank is negative",
                                 reason="negative", vertex=v, value=str(value))
        solved[v] = int(value)
    ranks = list(q.ranks)
    for v, r in solved.items():
        ranks[v - 1] = r
    return replace(q, ranks=tuple(ranks)), solved


def infer_sink_source(q: GradedQuiver) -> tuple[Tag, ...]:
    """Decide each vertex's sink/source tag from degrees and ranks.

    Rule 1: a degree-1 arrow runs from a sink to a source, so its tail is
    tagged sink and its head source.  Rule 2: a positive-rank vertex all of
    whose adjacent arrows have degree 0 is a source if its rank is at most
    the rank-weighted sum over its outgoing arrows, and a sink if the
    rank-weighted sum over its incoming arrows exceeds its rank.  Vertices
    matched by neither rule stay unknown.  Conflicting demands raise
    :class:`TagError`.
    """
    missing = [v for v in range(1, q.n + 1) if q.rank(v) is None]
    if missing:
        raise ValidationError("sink/source inference needs all ranks", missing=missing)
    tags: list[Tag] = [Tag.UNKNOWN] * q.n

    def assign(v: int, tag: Tag, why: str) -> None:
        if tags[v - 1] not in (Tag.UNKNOWN, tag):
            raise TagError("vertex is forced to be both sink and source",
                           vertex=v, first=tags[v - 1].value, second=tag.value, rule=why)
        tags[v - 1] = tag

    for (i, j), (deg, _count) in q.arrows.items():
        if deg == 1:
            assign(i, Tag.SINK, "degree-1 tail")
            assign(j, Tag.SOURCE, "degree-1 head")

    for v in range(1, q.n + 1):
        if tags[v - 1] is not Tag.UNKNOWN or q.rank(v) == 0:
            continue
        incident = [(pair, bundle) for pair, bundle in q.arrows.items() if v in pair]
        if any(bundle[0] == 1 for _, bundle in incident):
            continue
        out_sum = sum(c * q.rank(j) for (i, j), (_, c) in incident if i == v)
        in_sum = sum(c * q.rank(i) for (i, j), (_, c) in incident if j == v)
        is_source = q.rank(v) <= out_sum
        is_sink = in_sum > q.rank(v)
        if is_source and is_sink:
            raise TagError("rank comparison forces both sink and source",
                           vertex=v, out_sum=out_sum, in_sum=in_sum, rank=q.rank(v))
        if is_source:
            assign(v, Tag.SOURCE, "outgoing rank sum")
        elif is_sink:
            assign(v, Tag.SINK, "incoming rank sum")

    return tuple(tags)


def with_inferred_tags(q: GradedQuiver) -> GradedQuiver:
    """Convenience: ``q`` with tags replaced by the inferred ones."""
    return replace(q, tags=infer_sink_source(q))


def grading_from_sink_source(q: Quiver, tags: tuple[Tag, ...]) -> GradedQuiver:
    """Recover the grading of an ungraded quiver from full sink/source tags.

    An arrow i -> j gets degree 1 exactly when i is a sink and j a source;
    every other arrow gets degree 0.  Every vertex must carry a sink or
    source tag.
    """
    if len(tags) != q.n:
        raise ValidationError("need one tag per vertex", n=q.n, got=len(tags))
    unknown = [v for v in range(1, q.n + 1) if tags[v - 1] not in (Tag.SINK, Tag.SOURCE)]
    if unknown:
        raise TagError("grading recovery needs every vertex tagged sink or source",
                       unknown=unknown)
    arrows = {}
    for (i, j), count in q.arrows.items():
        degree = 1 if (tags[i - 1] is Tag.SINK and tags[j - 1] is Tag.SOURCE) else 0
        arrows[(i, j)] = (degree, count)
    out = GradedQuiver(n=q.n, arrows=arrows, ranks=q.ranks, tags=tags, labels=q.labels)
    validate(out)
    return out
