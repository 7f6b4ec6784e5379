"""Graded quivers and their mutation.

A graded quiver records, for every ordered pair of distinct vertices, at most
one bundle of parallel arrows, each bundle carrying a single degree in {0, 1}.
Degree-0 arrows are irreducible morphisms of the underlying tilting object;
degree-1 arrows point opposite to minimal relations and always run from a
sink summand to a source summand. Vertices optionally carry a rank and a
sink/source tag.

All operations are pure: they return new values and never mutate arguments.
Vertex ids are 1-based everywhere, matching the CLI and wire format.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import permutations
from typing import Iterable, Mapping, Optional

from .errors import GradingError, MutationError, ValidationError

Pair = tuple[int, int]
Bundle = tuple[int, int]  # (degree, count)


class Tag(str, Enum):
    SINK = "sink"
    SOURCE = "source"
    UNKNOWN = "unknown"


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(v) for v in range(1, n + 1))


@dataclass(frozen=True)
class Quiver:
    """Plain (ungraded) quiver with arrow multiplicities and optional ranks."""

    n: int
    arrows: dict[Pair, int]
    ranks: tuple[Optional[int], ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.ranks:
            object.__setattr__(self, "ranks", (None,) * self.n)
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(self.n))
        _check_shape(self.n, self.arrows, self.ranks, self.labels)


@dataclass(frozen=True)
class GradedQuiver:
    """Quiver whose arrow bundles carry degrees, with ranks and tags."""

    n: int
    arrows: dict[Pair, Bundle]
    ranks: tuple[Optional[int], ...] = ()
    tags: tuple[Tag, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.ranks:
            object.__setattr__(self, "ranks", (None,) * self.n)
        if not self.tags:
            object.__setattr__(self, "tags", (Tag.UNKNOWN,) * self.n)
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(self.n))
        validate(self)

    def rank(self, v: int) -> Optional[int]:
        return self.ranks[v - 1]

    def tag(self, v: int) -> Tag:
        return self.tags[v - 1]

    def degree0(self) -> dict[Pair, int]:
        return {p: c for p, (d, c) in self.arrows.items() if d == 0}

    def degree1(self) -> dict[Pair, int]:
        return {p: c for p, (d, c) in self.arrows.items() if d == 1}


@dataclass(frozen=True)
class GradedMove:
    """Record of one graded mutation, with everything needed to undo it."""

    vertex: int
    pre_tag: Tag
    pre_rank: Optional[int]
    pre_tags: tuple[Tag, ...]
    pre_label: str


def _check_shape(n: int, arrows: Mapping[Pair, object], ranks: tuple, labels: tuple) -> None:
    if n < 1:
        raise ValidationError("quiver needs at least one vertex", n=n)
    if len(ranks) != n or len(labels) != n:
        raise ValidationError("ranks/labels length must equal vertex count", n=n)
    for (i, j) in arrows:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValidationError("arrow endpoint out of range", arrow=[i, j], n=n)
        if i == j:
            raise ValidationError("loops are not allowed", vertex=i)
        if (j, i) in arrows:
            raise ValidationError("2-cycles are not allowed", pair=[i, j])
    for r in ranks:
        if r is not None and (not isinstance(r, int) or r < 0):
            raise ValidationError("ranks must be nonnegative integers or unknown", rank=r)


def validate(q: GradedQuiver) -> None:
    """Check all structural invariants; raise ValidationError/GradingError."""
    _check_shape(q.n, q.arrows, q.ranks, q.labels)
    for (i, j), (deg, count) in q.arrows.items():
        if deg not in (0, 1):
            raise GradingError("arrow degree must be 0 or 1", arrow=[i, j], degree=deg)
        if not isinstance(count, int) or count < 1:
            raise ValidationError("arrow multiplicity must be a positive integer",
                                  arrow=[i, j], count=count)
        if deg == 1:
            if q.tags[i - 1] == Tag.SOURCE:
                raise GradingError("degree-1 arrow leaving a source", arrow=[i, j])
            if q.tags[j - 1] == Tag.SINK:
                raise GradingError("degree-1 arrow entering a sink", arrow=[i, j])


def forget_grading(q: GradedQuiver) -> Quiver:
    """Drop degrees (and tags), keeping multiplicities and ranks."""
    return Quiver(n=q.n, arrows={p: c for p, (_, c) in q.arrows.items()},
                  ranks=q.ranks, labels=q.labels)


def _signed(arrows: Mapping[Pair, int], i: int, j: int) -> int:
    if (i, j) in arrows:
        return arrows[(i, j)]
    if (j, i) in arrows:
        return -arrows[(j, i)]
    return 0


def fz_mutate(q: Quiver, k: int) -> Quiver:
    """Plain quiver mutation at vertex k (exact integer arithmetic).

    With r arrows i->k, s arrows k->j and (signed) t arrows j->i, the result
    has r arrows k->i, s arrows j->k and t - r*s arrows j->i; arrows not
    incident to k and not part of such a triangle are unchanged.
    """
    if not (1 <= k <= q.n):
        raise MutationError("mutation vertex out of range", vertex=k, n=q.n)
    new: dict[Pair, int] = {}
    ins = [(i, c) for (i, kk), c in q.arrows.items() if kk == k]
    outs = [(j, c) for (kk, j), c in q.arrows.items() if kk == k]
    for (i, j), c in q.arrows.items():
        if i != k and j != k:
            new[(i, j)] = c
    for i, c in ins:
        new[(k, i)] = c
    for j, c in outs:
        new[(j, k)] = c
    for i, ci in ins:
        for j, cj in outs:
            t = _signed(new, j, i) - ci * cj
            new.pop((j, i), None)
            new.pop((i, j), None)
            if t > 0:
                new[(j, i)] = t
            elif t < 0:
                new[(i, j)] = -t
    return Quiver(n=q.n, arrows=new, ranks=q.ranks, labels=q.labels)


def _toggle_star(label: str) -> str:
    return label[:-1] if label.endswith("*") else label + "*"


def graded_mutate(q: GradedQuiver, k: int) -> tuple[GradedQuiver, GradedMove]:
    """Graded mutation at a tagged vertex k.

    At a sink k: incoming degree-0 arrows reverse to degree-0, outgoing
    arrows reverse with degree flipped, and a composite i->k->j is created
    with the sum of the leg degrees. At a source the dual rule applies.
    A created composite cancels an existing opposite arrow only when their
    degrees are complementary (sum to one); any other meeting of degrees is a
    grading inconsistency. k's tag flips; a neighbor keeps its tag only in
    the one configuration where that is guaranteed (sink feeding a sink /
    source fed by a source); all other neighbor tags become unknown. k's
    rank is cleared for later re-solving.
    """
    if not (1 <= k <= q.n):
        raise MutationError("mutation vertex out of range", vertex=k, n=q.n)
    tag = q.tags[k - 1]
    if tag not in (Tag.SINK, Tag.SOURCE):
        raise MutationError("vertex must be tagged sink or source to mutate",
                            vertex=k, tag=tag.value)
    ins = [(i, d, c) for (i, kk), (d, c) in q.arrows.items() if kk == k]
    outs = [(j, d, c) for (kk, j), (d, c) in q.arrows.items() if kk == k]
    if tag == Tag.SINK and any(d == 1 for _, d, _ in ins):
        raise GradingError("degree-1 arrow into a sink", vertex=k)
    if tag == Tag.SOURCE and any(d == 1 for _, d, _ in outs):
        raise GradingError("degree-1 arrow out of a source", vertex=k)

    new: dict[Pair, Bundle] = {p: b for p, b in q.arrows.items()
                               if p[0] != k and p[1] != k}
    if tag == Tag.SINK:
        for i, d, c in ins:           # degree-0 i->k becomes degree-0 k*->i
            new[(k, i)] = (0, c)
        for j, d, c in outs:          # k->j of degree e becomes j->k* of degree 1-e
            new[(j, k)] = (1 - d, c)
    else:
        for j, d, c in outs:          # degree-0 k->j becomes degree-0 j->k*
            new[(j, k)] = (0, c)
        for i, d, c in ins:           # i->k of degree e becomes k*->i of degree 1-e
            new[(k, i)] = (1 - d, c)

    for i, di, ci in ins:
        for j, dj, cj in outs:
            dcomp = di + dj
            count = ci * cj
            if dcomp > 1:
                # composition of two degree-1 morphisms vanishes
                continue
            existing_fwd = new.get((i, j))
            existing_bwd = new.get((j, i))
            if existing_bwd is not None:
                deg_b, count_b = existing_bwd
                if deg_b != 1 - dcomp:
                    raise GradingError(
                        "composite and opposite arrow have non-complementary degrees",
                        pair=[i, j], composite_degree=dcomp, existing_degree=deg_b)
                net = count_b - count
                del new[(j, i)]
                if net > 0:
                    new[(j, i)] = (deg_b, net)
                elif net < 0:
                    new[(i, j)] = (dcomp, -net)
            elif existing_fwd is not None:
                deg_f, count_f = existing_fwd
                if deg_f != dcomp:
                    raise GradingError("parallel arrows of mixed degree after mutation",
                                       pair=[i, j], degrees=[deg_f, dcomp])
                new[(i, j)] = (deg_f, count_f + count)
            else:
                new[(i, j)] = (dcomp, count)

    neighbors = {i for i, _, _ in ins} | {j for j, _, _ in outs}
    new_tags = list(q.tags)
    new_tags[k - 1] = Tag.SOURCE if tag == Tag.SINK else Tag.SINK
    for v in neighbors:
        keep = False
        if tag == Tag.SINK:
            # a sink with an irreducible arrow into the mutated sink stays a sink
            keep = (v, k) in q.arrows and q.tags[v - 1] == Tag.SINK
            kept_tag = Tag.SINK
        else:
            # a source receiving an irreducible arrow from the mutated source stays
            keep = (k, v) in q.arrows and q.tags[v - 1] == Tag.SOURCE
            kept_tag = Tag.SOURCE
        new_tags[v - 1] = kept_tag if keep else Tag.UNKNOWN

    new_ranks = list(q.ranks)
    new_ranks[k - 1] = None
    new_labels = list(q.labels)
    new_labels[k - 1] = _toggle_star(q.labels[k - 1])
    move = GradedMove(vertex=k, pre_tag=tag, pre_rank=q.ranks[k - 1],
                      pre_tags=q.tags, pre_label=q.labels[k - 1])
    result = GradedQuiver(n=q.n, arrows=new, ranks=tuple(new_ranks),
                          tags=tuple(new_tags), labels=tuple(new_labels))
    return result, move


def undo_graded_move(q: GradedQuiver, move: GradedMove) -> GradedQuiver:
    """Replay a recorded graded move backward, restoring the prior value exactly."""
    back, _ = graded_mutate(q, move.vertex)
    ranks = list(back.ranks)
    ranks[move.vertex - 1] = move.pre_rank
    labels = list(back.labels)
    labels[move.vertex - 1] = move.pre_label
    return GradedQuiver(n=back.n, arrows=back.arrows, ranks=tuple(ranks),
                        tags=move.pre_tags, labels=tuple(labels))


def labeled_equal(a: GradedQuiver, b: GradedQuiver) -> bool:
    """Equality under the identity vertex indexing: arrows (with degrees and
    multiplicities) and ranks. Tags and display labels are derived data and
    are compared by their own operations, not here."""
    return a.n == b.n and a.arrows == b.arrows and a.ranks == b.ranks


def _vertex_signature(q: GradedQuiver, v: int):
    outs = sorted((d, c) for (i, j), (d, c) in q.arrows.items() if i == v)
    ins = sorted((d, c) for (i, j), (d, c) in q.arrows.items() if j == v)
    return (q.ranks[v - 1], tuple(outs), tuple(ins))


def is_isomorphic(a: GradedQuiver, b: GradedQuiver) -> bool:
    """Search for a vertex bijection preserving arrows, degrees, and ranks.

    Backtracking with signature pruning; intended for small quivers (n <= 12).
    """
    if a.n != b.n or len(a.arrows) != len(b.arrows):
        return False
    sig_a = {v: _vertex_signature(a, v) for v in range(1, a.n + 1)}
    sig_b = {v: _vertex_signature(b, v) for v in range(1, b.n + 1)}
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return False
    candidates = {v: [w for w in sig_b if sig_b[w] == sig_a[v]] for v in sig_a}
    order = sorted(candidates, key=lambda v: len(candidates[v]))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(v: int, w: int) -> bool:
        for (i, j), bundle in a.arrows.items():
            if i == v and j in mapping and b.arrows.get((w, mapping[j])) != bundle:
                return False
            if j == v and i in mapping and b.arrows.get((mapping[i], w)) != bundle:
                return False
        # arrows of b between already-mapped vertices must be hit too
        for (i, j), bundle in b.arrows.items():
            if i == w and j in used:
                src = next(x for x, y in mapping.items() if y == j)
                if a.arrows.get((v, src)) != bundle:
                    return False
            if j == w and i in used:
                src = next(x for x, y in mapping.items() if y == i)
                if a.arrows.get((src, v)) != bundle:
                    return False
        return True

    def backtrack(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        for w in candidates[v]:
            if w not in used and consistent(v, w):
                mapping[v] = w
                used.add(w)
                if backtrack(idx + 1):
                    return True
                del mapping[v]
                used.remove(w)
        return False

    return backtrack(0)
