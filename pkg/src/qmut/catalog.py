"""Generators for the named quivers: canonical and squid, graded and
as sequence quivers, parameterized by a weight sequence.

A weight sequence is a (possibly empty) list of integers, each at least 2.
Both families have ``n = 2 + sum(p_i - 1)`` vertices.
"""

from __future__ import annotations

from .errors import ValidationError
from .exseq import ExcSeqQuiver
from .graded import GradedQuiver
from .ranks import with_inferred_tags
from .symbols import Atom


def validate_weights(p: tuple[int, ...]) -> tuple[int, ...]:
    p = tuple(p)
    for w in p:
        if not isinstance(w, int) or w < 2:
            raise ValidationError("weights must be integers >= 2", weights=list(p))
    return p


def vertex_count(p: tuple[int, ...]) -> int:
    return 2 + sum(w - 1 for w in p)


def canonical_graded(p: tuple[int, ...]) -> GradedQuiver:
    """Graded quiver of the canonical tilting bundle for weights ``p``.

    Vertex order: the line bundle O first, then each arm
    O(x_i), O(2 x_i), ..., O((p_i - 1) x_i) in input order, then O(c) last.
    Degree-0 arrows run down the arms from O to O(c).  For fewer than two
    arms the missing arm paths are replaced by direct arrows O -> O(c)
    (two for no arms, one for a single arm), so that rank additivity holds;
    for three or more arms there are t - 2 degree-1 arrows O(c) -> O.
    All ranks are 1; tags are inferred.
    """
    p = validate_weights(p)
    t = len(p)
    n = vertex_count(p)
    labels = ["O"]
    arrows: dict[tuple[int, int], tuple[int, int]] = {}
    v = 1
    for i, w in enumerate(p, start=1):
        prev = 1
        for j in range(1, w):
            v += 1
            labels.append(f"O(x{i})" if j == 1 else f"O({j}x{i})")
            arrows[(prev, v)] = (0, 1)
            prev = v
        arrows[(prev, n)] = (0, 1)
    labels.append("O(c)")
    if t == 0:
        arrows[(1, n)] = (0, 2)
    elif t == 1:
        arrows[(1, n)] = (0, 1)
    if t >= 3:
        arrows[(n, 1)] = (1, t - 2)
    q = GradedQuiver(n=n, arrows=arrows, ranks=(1,) * n, labels=tuple(labels))
    return with_inferred_tags(q)


def _arm_positions(p: tuple[int, ...], first: int) -> list[list[int]]:
    """Vertex ids of each arm when arms start at ``first`` and every arm i
    contributes ``p_i - 1`` consecutive ids."""
    arms = []
    v = first
    for w in p:
        arms.append(list(range(v, v + w - 1)))
        v += w - 1
    return arms


def squid_graded(p: tuple[int, ...]) -> GradedQuiver:
    """Graded quiver of the squid tilting sheaf for weights ``p``.

    Vertices: O, O(c), then each arm's torsion sheaves in descending order
    S_i^(p_i - 1), ..., S_i^(1).  Two degree-0 arrows O -> O(c); one
    degree-0 arrow O(c) -> S_i^(p_i - 1) per arm; degree-0 chains down each
    arm; one degree-1 arrow S_i^(p_i - 1) -> O per arm (opposite to the
    defining relation).  Ranks are (1, 1, 0, ..., 0); tags are inferred.
    """
    p = validate_weights(p)
    n = vertex_count(p)
    labels = ["O", "O(c)"]
    for i, w in enumerate(p, start=1):
        for j in range(w - 1, 0, -1):
            labels.append(f"S{i}^({j})")
    arrows: dict[tuple[int, int], tuple[int, int]] = {(1, 2): (0, 2)}
    for arm in _arm_positions(p, first=3):
        head = arm[0]
        arrows[(2, head)] = (0, 1)
        for a, b in zip(arm, arm[1:]):
            arrows[(a, b)] = (0, 1)
        arrows[(head, 1)] = (1, 1)
    ranks = (1, 1) + (0,) * (n - 2)
    q = GradedQuiver(n=n, arrows=arrows, ranks=ranks, labels=tuple(labels))
    return with_inferred_tags(q)


def squid_sequence(p: tuple[int, ...]) -> ExcSeqQuiver:
    """Sequence quiver of the terminal squid-shaped tilting sequence.

    Positions: O(c), O(2c), then each arm's torsion objects in descending
    order.  Entries count paths in the squid algebra: 2 between the two
    line bundles, 1 from each line bundle to every torsion position, 1
    between every ordered pair within an arm, 0 across arms.  Ranks are
    (1, 1, 0, ..., 0).
    """
    p = validate_weights(p)
    n = vertex_count(p)
    labels: list[Atom] = [Atom("O(c)"), Atom("O(2c)")]
    for i, w in enumerate(p, start=1):
        for j in range(w - 1, 0, -1):
            labels.append(Atom(f"S{i}^({j})"))
    entries: dict[tuple[int, int], int] = {(1, 2): 2}
    for arm in _arm_positions(p, first=3):
        for v in arm:
            entries[(1, v)] = 1
            entries[(2, v)] = 1
        for idx, a in enumerate(arm):
            for b in arm[idx + 1:]:
                entries[(a, b)] = 1
    ranks = (1, 1) + (0,) * (n - 2)
    return ExcSeqQuiver(n=n, entries=entries, ranks=ranks, labels=tuple(labels))
