"""Integer quivers of exceptional sequences and their left/right mutation.

A sequence quiver stores, for positions ``1..n``, the signed arrow counts
``a(i, j)`` for ``i < j`` (positive values count morphism arrows ``i -> j``,
negative values extension arrows), together with the rank of the object at
each position and a formal label term.

Mutation at position ``l`` acts on the adjacent pair ``(l, l+1)``.  Its
kind is one of:

* ``T`` -- transposition, requires ``a(l, l+1) == 0``;
* ``E`` -- the approximation map is epi, requires ``a(l, l+1) > 0``;
* ``M`` -- the approximation map is mono, requires ``a(l, l+1) > 0``;
* ``X`` -- the pair is glued by an extension, requires ``a(l, l+1) < 0``.

When the sign of the entry does not force the kind (positive entries), it
is decided from the ranks; the all-ranks-zero case is undetermined and the
caller must supply the kind explicitly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .errors import MutationError, UndeterminedError, ValidationError
from .symbols import Atom, Term, left_of, right_of


class MutKind(enum.Enum):
    """Kind of a sequence mutation at an adjacent pair."""

    T = "T"
    E = "E"
    M = "M"
    X = "X"


@dataclass(frozen=True)
class SeqMove:
    """Record of one applied sequence mutation.

    ``side`` is ``"L"`` or ``"R"``, ``pos`` the mutated position ``l``
    (acting on the pair ``(l, l+1)``) and ``kind`` the kind that was used.
    """

    side: str
    pos: int
    kind: MutKind

    def as_json(self) -> dict:
        return {"side": self.side, "pos": self.pos, "kind": self.kind.value}


#: Kind of the inverse move: undoing a left mutation of the key kind takes a
#: right mutation of the value kind, and vice versa (``T`` is self-inverse).
INVERSE_OF_LEFT = {
    MutKind.T: MutKind.T,
    MutKind.E: MutKind.M,
    MutKind.M: MutKind.X,
    MutKind.X: MutKind.E,
}
INVERSE_OF_RIGHT = {v: k for k, v in INVERSE_OF_LEFT.items()}


def inverse_move(move: SeqMove) -> SeqMove:
    """The move that undoes ``move``."""
    if move.side == "L":
        return SeqMove("R", move.pos, INVERSE_OF_LEFT[move.kind])
    return SeqMove("L", move.pos, INVERSE_OF_RIGHT[move.kind])


@dataclass(frozen=True)
class ExcSeqQuiver:
    """Quiver of an exceptional sequence with ranks and formal labels.

    ``entries`` maps ``(i, j)`` with ``1 <= i < j <= n`` to the nonzero
    signed arrow count; absent pairs are zero.  A positive entry means the
    pair has morphisms and no extensions, a negative entry the reverse.
    ``ranks`` are nonnegative integers, one per position.  ``labels`` are
    formal terms tracking how each object was produced from the starting
    objects.
    """

    n: int
    entries: dict[tuple[int, int], int]
    ranks: tuple[int, ...]
    labels: tuple[Term, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"need at least one position, got n={self.n}")
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(Atom(f"E{i}") for i in range(1, self.n + 1))
            )
        entries = {}
        for (i, j), a in self.entries.items():
            if not (1 <= i < j <= self.n):
                raise ValidationError(f"entry index ({i},{j}) out of range for n={self.n}")
            if not isinstance(a, int):
                raise ValidationError(f"entry a({i},{j})={a!r} is not an integer")
            if a != 0:
                entries[(i, j)] = a
        object.__setattr__(self, "entries", entries)
        if len(self.ranks) != self.n:
            raise ValidationError(f"expected {self.n} ranks, got {len(self.ranks)}")
        for i, r in enumerate(self.ranks, start=1):
            if not isinstance(r, int) or r < 0:
                raise ValidationError(f"rank at position {i} must be a nonnegative integer, got {r!r}")
        if len(self.labels) != self.n:
            raise ValidationError(f"expected {self.n} labels, got {len(self.labels)}")

    def a(self, i: int, j: int) -> int:
        """Signed arrow count for the ordered pair ``i < j``."""
        if not (1 <= i < j <= self.n):
            raise ValidationError(f"entry index ({i},{j}) out of range for n={self.n}")
        return self.entries.get((i, j), 0)

    def rank(self, i: int) -> int:
        return self.ranks[i - 1]

    def numeric_equal(self, other: "ExcSeqQuiver") -> bool:
        """Equality of sizes, entries and ranks, ignoring labels."""
        return (
            self.n == other.n
            and self.entries == other.entries
            and self.ranks == other.ranks
        )


def hom_dim(q: ExcSeqQuiver, i: int, j: int) -> int:
    """Dimension of the morphism space for the ordered pair ``i < j``."""
    return max(q.a(i, j), 0)


def ext_dim(q: ExcSeqQuiver, i: int, j: int) -> int:
    """Dimension of the extension space for the ordered pair ``i < j``."""
    return max(-q.a(i, j), 0)


def classify_left(q: ExcSeqQuiver, l: int) -> MutKind | None:
    """Kind of the left mutation at ``l``, or ``None`` if undetermined.

    A zero entry is a transposition and a negative entry an extension.  For
    a positive entry ``a`` the mutation is epi (``E``) exactly when
    ``a * rank(l) > rank(l+1)``; when both ranks vanish the kind cannot be
    read off and ``None`` is returned.
    """
    _check_pos(q, l)
    a = q.a(l, l + 1)
    if a == 0:
        return MutKind.T
    if a < 0:
        return MutKind.X
    rl, rr = q.rank(l), q.rank(l + 1)
    if rl == 0 and rr == 0:
        return None
    return MutKind.E if a * rl > rr else MutKind.M


def classify_right(q: ExcSeqQuiver, l: int) -> MutKind | None:
    """Kind of the right mutation at ``l``, or ``None`` if undetermined.

    Dual to :func:`classify_left`: for a positive entry ``a`` the
    approximation is epi (``E``) exactly when ``rank(l) > a * rank(l+1)``.
    """
    _check_pos(q, l)
    a = q.a(l, l + 1)
    if a == 0:
        return MutKind.T
    if a < 0:
        return MutKind.X
    rl, rr = q.rank(l), q.rank(l + 1)
    if rl == 0 and rr == 0:
        return None
    return MutKind.E if rl > a * rr else MutKind.M


def _check_pos(q: ExcSeqQuiver, l: int) -> None:
    if not (1 <= l <= q.n - 1):
        raise ValidationError(f"mutation position {l} out of range 1..{q.n - 1}")


def _check_kind(a: int, kind: MutKind, side: str, l: int) -> None:
    if kind is MutKind.T and a != 0:
        raise MutationError(f"{side}-mutation at {l}: transposition needs a zero entry, got {a}")
    if kind in (MutKind.E, MutKind.M) and a <= 0:
        raise MutationError(f"{side}-mutation at {l}: kind {kind.value} needs a positive entry, got {a}")
    if kind is MutKind.X and a >= 0:
        raise MutationError(f"{side}-mutation at {l}: kind X needs a negative entry, got {a}")


def _resolve_kind(q: ExcSeqQuiver, l: int, side: str, kind: MutKind | None) -> MutKind:
    if kind is None:
        classified = classify_left(q, l) if side == "L" else classify_right(q, l)
        if classified is None:
            raise UndeterminedError(
                f"{side}-mutation at {l}: positive entry between two rank-zero objects; "
                "the kind must be supplied explicitly"
            )
        return classified
    _check_kind(q.a(l, l + 1), kind, side, l)
    return kind


def left_mutate(
    q: ExcSeqQuiver, l: int, kind: MutKind | None = None
) -> tuple[ExcSeqQuiver, SeqMove]:
    """Left mutation at position ``l``: the pair ``(l, l+1)`` becomes
    ``(mutated, old l)``.

    With ``kind=None`` the kind is classified from the quiver; passing a
    kind overrides the classification (it must still agree with the sign
    of the entry).  Raises :class:`MutationError` if the mutated rank
    would be negative.
    """
    kind = _resolve_kind(q, l, "L", kind)
    a = q.a(l, l + 1)
    s = -1 if kind is MutKind.E else 1
    new_entries: dict[tuple[int, int], int] = {}
    for (i, j), v in q.entries.items():
        if i not in (l, l + 1) and j not in (l, l + 1):
            new_entries[(i, j)] = v
    for i in range(1, l):
        _put(new_entries, i, l, s * (q.a(i, l + 1) - a * q.a(i, l)))
        _put(new_entries, i, l + 1, q.a(i, l))
    if kind is not MutKind.T:
        _put(new_entries, l, l + 1, a if kind is MutKind.E else -a)
    for j in range(l + 2, q.n + 1):
        _put(new_entries, l, j, s * (q.a(l + 1, j) - a * q.a(l, j)))
        _put(new_entries, l + 1, j, q.a(l, j))

    rl, rr = q.rank(l), q.rank(l + 1)
    if kind is MutKind.T:
        new_rank_l = rr
    else:
        new_rank_l = s * (rr - a * rl)
        if new_rank_l < 0:
            raise MutationError(
                f"L-mutation of kind {kind.value} at {l} gives negative rank {new_rank_l}"
            )
    ranks = list(q.ranks)
    ranks[l - 1], ranks[l] = new_rank_l, rl

    labels = list(q.labels)
    if kind is MutKind.T:
        labels[l - 1], labels[l] = labels[l], labels[l - 1]
    else:
        labels[l - 1], labels[l] = left_of(labels[l - 1], labels[l]), labels[l - 1]

    out = ExcSeqQuiver(q.n, new_entries, tuple(ranks), tuple(labels))
    return out, SeqMove("L", l, kind)


def right_mutate(
    q: ExcSeqQuiver, l: int, kind: MutKind | None = None
) -> tuple[ExcSeqQuiver, SeqMove]:
    """Right mutation at position ``l``: the pair ``(l, l+1)`` becomes
    ``(old l+1, mutated)``.  Exact inverse of :func:`left_mutate` with the
    paired kind (``E -> M -> X -> E`` cycle, ``T`` self-paired)."""
    kind = _resolve_kind(q, l, "R", kind)
    a = q.a(l, l + 1)
    s = -1 if kind is MutKind.M else 1
    new_entries: dict[tuple[int, int], int] = {}
    for (i, j), v in q.entries.items():
        if i not in (l, l + 1) and j not in (l, l + 1):
            new_entries[(i, j)] = v
    for i in range(1, l):
        _put(new_entries, i, l, q.a(i, l + 1))
        _put(new_entries, i, l + 1, s * (q.a(i, l) - a * q.a(i, l + 1)))
    if kind is not MutKind.T:
        _put(new_entries, l, l + 1, a if kind is MutKind.M else -a)
    for j in range(l + 2, q.n + 1):
        _put(new_entries, l, j, q.a(l + 1, j))
        _put(new_entries, l + 1, j, s * (q.a(l, j) - a * q.a(l + 1, j)))

    rl, rr = q.rank(l), q.rank(l + 1)
    if kind is MutKind.T:
        new_rank_r = rl
    else:
        new_rank_r = s * (rl - a * rr)
        if new_rank_r < 0:
            raise MutationError(
                f"R-mutation of kind {kind.value} at {l} gives negative rank {new_rank_r}"
            )
    ranks = list(q.ranks)
    ranks[l - 1], ranks[l] = rr, new_rank_r

    labels = list(q.labels)
    if kind is MutKind.T:
        labels[l - 1], labels[l] = labels[l], labels[l - 1]
    else:
        labels[l - 1], labels[l] = labels[l], right_of(labels[l], labels[l - 1])

    out = ExcSeqQuiver(q.n, new_entries, tuple(ranks), tuple(labels))
    return out, SeqMove("R", l, kind)


def _put(entries: dict[tuple[int, int], int], i: int, j: int, v: int) -> None:
    if v != 0:
        entries[(i, j)] = v


def apply_move(q: ExcSeqQuiver, move: SeqMove) -> tuple[ExcSeqQuiver, SeqMove]:
    """Apply a recorded move to a quiver."""
    if move.side == "L":
        return left_mutate(q, move.pos, move.kind)
    if move.side == "R":
        return right_mutate(q, move.pos, move.kind)
    raise ValidationError(f"unknown move side {move.side!r}")


def undo_moves(q: ExcSeqQuiver, moves: list[SeqMove]) -> ExcSeqQuiver:
    """Undo a list of moves (applied in order) by replaying their inverses."""
    for move in reversed(moves):
        q, _ = apply_move(q, inverse_move(move))
    return q


def braid_check(q: ExcSeqQuiver, i: int) -> bool:
    """Check the braid identity at adjacent positions ``i``, ``i+1``.

    Applies the two length-three left-mutation words with classified kinds
    and compares entries and ranks (labels are formal terms and differ
    syntactically).  Raises :class:`UndeterminedError` if any of the six
    constituent mutations cannot be classified.
    """
    if not (1 <= i <= q.n - 2):
        raise ValidationError(f"braid position {i} out of range 1..{q.n - 2}")
    lhs = q
    for pos in (i, i + 1, i):
        lhs, _ = left_mutate(lhs, pos)
    rhs = q
    for pos in (i + 1, i, i + 1):
        rhs, _ = left_mutate(rhs, pos)
    return lhs.numeric_equal(rhs)


def kronecker_t_search(
    q: ExcSeqQuiver, l: int, cap: int = 64
) -> tuple[int, ExcSeqQuiver, list[SeqMove]]:
    """Mutate the adjacent pair at ``l`` until its entry is no longer positive.

    The pair spans a two-object subcategory of Kronecker type.  When
    ``rank(l) <= rank(l+1)`` the reduction walks left (a chain of epi
    mutations ending in a mono one), otherwise right (mono mutations ending
    in an epi one); this is the direction in which the sorted rank pair
    decreases.  Returns the signed step count ``t`` (negative for left
    walks, positive for right walks), the reduced quiver and the moves.
    Raises :class:`MutationError` after ``cap`` steps; an entry that never
    becomes nonpositive means the pair is not realizable inside a
    tilting-reachable sequence.
    """
    _check_pos(q, l)
    moves: list[SeqMove] = []
    if q.a(l, l + 1) <= 0:
        return 0, q, moves
    leftward = q.rank(l) <= q.rank(l + 1)
    for _ in range(cap):
        if q.a(l, l + 1) <= 0:
            break
        if leftward:
            q, mv = left_mutate(q, l)
        else:
            q, mv = right_mutate(q, l)
        moves.append(mv)
    else:
        raise MutationError(
            f"pair at ({l},{l + 1}) did not reduce within {cap} mutations",
            entry=q.a(l, l + 1),
            ranks=[q.rank(l), q.rank(l + 1)],
            direction="L" if leftward else "R",
        )
    t = -len(moves) if leftward else len(moves)
    return t, q, moves


def relabel(q: ExcSeqQuiver, labels: tuple[Term, ...]) -> ExcSeqQuiver:
    """Same quiver with replaced labels."""
    if len(labels) != q.n:
        raise ValidationError(f"expected {q.n} labels, got {len(labels)}")
    return replace(q, labels=labels)
