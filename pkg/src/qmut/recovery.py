"""Recovery pipeline: from a graded quiver with ranks to the squid.

The pipeline rebuilds the quiver of a tilting sequence from the graded
data (via the Cartan matrix), then drives that sequence to the terminal
squid shape in four phases, recording an invertible word of sequence
mutations:

1. obtain a rank-one object at position 1 (pushing torsion right and
   reducing morphism pairs of higher rank),
2. reduce remaining morphism pairs among positive-rank positions until
   only two rank-one positions survive,
3. remove extension entries among the torsion tail,
4. remove torsion sources by tilting mutations.

The terminal state is recognized as a squid, its weights extracted, and
the original objects reconstructed symbolically by replaying the word
backward from the canonically named squid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import PipelineError, RecognitionError, ValidationError
from .exseq import (
    ExcSeqQuiver,
    MutKind,
    SeqMove,
    apply_move,
    classify_right,
    kronecker_t_search,
    left_mutate,
    relabel,
    right_mutate,
    undo_moves,
)
from .graded import GradedQuiver
from .ranks import check_additivity, solve_unknown_ranks
from .symbols import Atom, Term

#: Default per-phase budget of elementary moves.
PHASE_BUDGET = 10_000


# ---------------------------------------------------------------------------
# From graded data to a tilting-sequence quiver


def cartan_from_graded(q: GradedQuiver) -> list[list[int]]:
    """Cartan matrix of the underlying algebra: C = (I - A0 + R)^(-1).

    ``A0`` counts degree-0 arrows i -> j and ``R`` counts minimal
    relations, which run opposite to the degree-1 arrows.  The inverse
    must exist and be integral, unit-diagonal and nonnegative; anything
    else means the graded quiver is not tilting data.
    """
    n = q.n
    m = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for (i, j), (deg, count) in q.arrows.items():
        if deg == 0:
            m[i - 1][j - 1] -= count
        else:
            m[j - 1][i - 1] += count
    try:
        inv = linalg.invert(m)
    except ValueError as exc:
        raise PipelineError("relation-adjusted incidence matrix is singular",
                            phase="cartan") from exc
    cartan: list[list[int]] = []
    for i, row in enumerate(inv):
        out_row = []
        for j, value in enumerate(row):
            if value.denominator != 1:
                raise PipelineError("Cartan matrix is not integral", phase="cartan",
                                    entry=[i + 1, j + 1], value=str(value))
            value = int(value)
            if i == j and value != 1:
                raise PipelineError("Cartan matrix diagonal is not 1", phase="cartan",
                                    vertex=i + 1, value=value)
            if value < 0:
                raise PipelineError("Cartan matrix has a negative entry", phase="cartan",
                                    entry=[i + 1, j + 1], value=value)
            out_row.append(value)
        cartan.append(out_row)
    return cartan


def _lex_topological_order(q: GradedQuiver) -> list[int]:
    """Smallest-id-first topological order of the degree-0 subquiver."""
    import heapq

    succ: dict[int, list[int]] = {v: [] for v in range(1, q.n + 1)}
    indeg = {v: 0 for v in range(1, q.n + 1)}
    for (i, j), (deg, _count) in q.arrows.items():
        if deg == 0:
            succ[i].append(j)
            indeg[j] += 1
    heap = [v for v in indeg if indeg[v] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != q.n:
        raise PipelineError("degree-0 arrows contain a cycle", phase="cartan")
    return order


def tilting_sequence_from_graded(q: GradedQuiver) -> ExcSeqQuiver:
    """Sequence quiver of the tilting object underlying a graded quiver.

    Positions follow the smallest-id-first topological order of the
    degree-0 arrows; the entry for i < j is the Cartan value (all
    extensions between summands of a tilting object vanish, so entries
    are morphism dimensions).  The Cartan matrix must be unitriangular
    in the chosen order.
    """
    missing = [v for v in range(1, q.n + 1) if q.rank(v) is None]
    if missing:
        raise ValidationError("tilting sequence needs all ranks", missing=missing)
    cartan = cartan_from_graded(q)
    order = _lex_topological_order(q)
    entries: dict[tuple[int, int], int] = {}
    for i in range(q.n):
        for j in range(q.n):
            if i == j:
                continue
            value = cartan[order[i] - 1][order[j] - 1]
            if i < j:
                if value:
                    entries[(i + 1, j + 1)] = value
            elif value:
                raise PipelineError(
                    "Cartan matrix is not unitriangular in the degree-0 order",
                    phase="cartan", positions=[i + 1, j + 1], value=value)
    ranks = tuple(q.rank(v) for v in order)
    labels = tuple(Atom(q.labels[v - 1]) for v in order)
    return ExcSeqQuiver(n=q.n, entries=entries, ranks=ranks, labels=labels)


# ---------------------------------------------------------------------------
# Phase plumbing


class _Budget:
    def __init__(self, phase: str, limit: int) -> None:
        self.phase = phase
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise PipelineError("move budget exhausted", phase=self.phase,
                                limit=self.limit)


def _positive_positions(q: ExcSeqQuiver) -> list[int]:
    return [v for v in range(1, q.n + 1) if q.rank(v) > 0]


def _push_torsion_right(q: ExcSeqQuiver, moves: list[SeqMove], budget: _Budget
                        ) -> ExcSeqQuiver:
    """Left-mutate rank-0 entries past positive-rank successors until all
    torsion sits to the right of all positive ranks."""
    while True:
        spots = [i for i in range(1, q.n) if q.rank(i) == 0 and q.rank(i + 1) > 0]
        if not spots:
            return q
        i = spots[-1]
        budget.spend()
        q, mv = left_mutate(q, i)
        moves.append(mv)


def _transpose(q: ExcSeqQuiver, l: int, moves: list[SeqMove], budget: _Budget,
               phase: str) -> ExcSeqQuiver:
    """Apply one right mutation that is required to be a transposition."""
    kind = classify_right(q, l)
    if kind is not MutKind.T:
        raise PipelineError(
            "expected a transposition while shuttling objects",
            phase=phase, position=l, entry=q.a(l, l + 1),
            classified=None if kind is None else kind.value)
    budget.spend()
    q, mv = right_mutate(q, l, MutKind.T)
    moves.append(mv)
    return q


def _innermost_hom_pair(q: ExcSeqQuiver, low: int) -> tuple[int, int] | None:
    """Positive-entry pair (a, b) with both ranks positive and a >= low,
    minimizing b - a then a.  Inner-first selection makes every entry
    strictly between them nonpositive automatically."""
    best: tuple[int, int] | None = None
    for (a, b), value in q.entries.items():
        if a < low or value <= 0:
            continue
        if q.rank(a) <= 0 or q.rank(b) <= 0:
            continue
        if best is None or (b - a, a) < (best[1] - best[0], best[0]):
            best = (a, b)
    return best


# ---------------------------------------------------------------------------
# Phase 1: obtain a rank-one object at position 1


def step1_obtain_line_bundle(q: ExcSeqQuiver, budget_limit: int = PHASE_BUDGET
                             ) -> tuple[ExcSeqQuiver, list[SeqMove]]:
    """Drive the sequence until position 1 carries a rank-one object.

    (a) push torsion right; (b) while no rank-one object exists, reduce an
    innermost morphism pair between positive ranks (transpositions plus a
    single real mutation, mono side left / epi side right), re-normalizing
    torsion; the sorted positive rank vector must strictly decrease each
    round; (c) bring the leftmost rank-one object to position 1 by right
    mutations.
    """
    budget = _Budget("step1", budget_limit)
    moves: list[SeqMove] = []
    q = _push_torsion_right(q, moves, budget)
    while True:
        positives = _positive_positions(q)
        if not positives:
            raise PipelineError("no positive-rank object left", phase="step1")
        if any(q.rank(v) == 1 for v in positives):
            break
        pair = _innermost_hom_pair(q, low=1)
        if pair is None:
            raise PipelineError(
                "no morphism pair available among positive ranks and no "
                "rank-one object; cannot reduce further",
                phase="step1", ranks=list(q.ranks))
        a, b = pair
        before = sorted(q.ranks)
        if q.rank(a) <= q.rank(b):
            for l in range(a, b - 1):          # walk E_a rightward to b-1
                if q.a(l, l + 1) != 0:
                    raise PipelineError("expected a transposition while shuttling objects",
                                        phase="step1", position=l, entry=q.a(l, l + 1))
                budget.spend()
                q, mv = left_mutate(q, l, MutKind.T)
                moves.append(mv)
            budget.spend()
            q, mv = left_mutate(q, b - 1)      # the one real mutation
            moves.append(mv)
        else:
            for l in range(b - 1, a, -1):      # walk E_b leftward to a+1
                q = _transpose(q, l, moves, budget, "step1")
            budget.spend()
            q, mv = right_mutate(q, a)         # the one real mutation
            moves.append(mv)
        after = sorted(q.ranks)
        if not (after != before and all(x <= y for x, y in zip(after, before))):
            raise PipelineError("rank reduction did not decrease the sorted rank vector",
                                phase="step1", before=before, after=after)
        q = _push_torsion_right(q, moves, budget)
    ones = [v for v in range(1, q.n + 1) if q.rank(v) == 1]
    v = ones[0]
    for l in range(v - 1, 0, -1):              # bring it to the front
        budget.spend()
        q, mv = right_mutate(q, l)
        moves.append(mv)
    if q.rank(1) != 1:
        raise PipelineError("position 1 did not end with rank one", phase="step1",
                            ranks=list(q.ranks))
    return q, moves


# ---------------------------------------------------------------------------
# Phase 2: reduce morphism pairs among the remaining positive ranks


def step2_hom_reduce(q: ExcSeqQuiver, budget_limit: int = PHASE_BUDGET
                     ) -> tuple[ExcSeqQuiver, list[SeqMove]]:
    """Reduce every morphism pair among positive-rank positions beyond 1.

    Torsion is kept pushed right; each round picks the innermost pair,
    makes it adjacent by transpositions (mono side: walk the source right;
    epi side: walk the target left), and runs the Kronecker reduction.
    Ends with exactly two positive-rank positions, both of rank one.
    """
    budget = _Budget("step2", budget_limit)
    moves: list[SeqMove] = []
    q = _push_torsion_right(q, moves, budget)
    while True:
        pair = _innermost_hom_pair(q, low=2)
        if pair is None:
            break
        a, b = pair
        if q.rank(a) <= q.rank(b):
            for l in range(a, b - 1):          # walk E_a rightward, pair at b-1
                q = _transpose(q, l, moves, budget, "step2")
            l = b - 1
        else:
            for l in range(b - 1, a, -1):      # walk E_b leftward, pair at a
                q = _transpose(q, l, moves, budget, "step2")
            l = a
        _t, q, kmoves = kronecker_t_search(q, l)
        for mv in kmoves:
            budget.spend()
        moves.extend(kmoves)
        q = _push_torsion_right(q, moves, budget)
    positives = _positive_positions(q)
    if len(positives) != 2 or any(q.rank(v) != 1 for v in positives):
        raise PipelineError(
            "morphism reduction should end with exactly two rank-one objects",
            phase="step2", positives={v: q.rank(v) for v in positives})
    return q, moves


# ---------------------------------------------------------------------------
# Phase 3: remove extension entries among the torsion tail


def step3_ext_reduce(q: ExcSeqQuiver, budget_limit: int = PHASE_BUDGET
                     ) -> tuple[ExcSeqQuiver, list[SeqMove]]:
    """Remove negative entries by one extension-type right mutation each.

    Pairs are handled closest-first.  While the pair is not adjacent, the
    obstruction with the highest position t in [a, b) having a positive
    entry from a is walked past b by transpositions (t = a meaning: walk
    a itself next to b).  Resolving one extension can relocate a chained
    extension onto the mutated object, so the count of negative entries
    may momentarily stall; it must never increase, and the move budget
    bounds the whole phase.  Positions 1 and 2 are never involved.
    """
    budget = _Budget("step3", budget_limit)
    moves: list[SeqMove] = []

    def negatives() -> list[tuple[int, int]]:
        return sorted(((a, b) for (a, b), v in q.entries.items() if v < 0),
                      key=lambda ab: (ab[1] - ab[0], ab[0]))

    while True:
        negs = negatives()
        if not negs:
            return q, moves
        a, b = negs[0]
        if a <= 2:
            raise PipelineError("extension entry touches a line-bundle position",
                                phase="step3", pair=[a, b])
        count_before = len(negs)
        while b - a > 1:
            t = a
            for cand in range(a + 1, b):
                if q.a(a, cand) > 0:
                    t = cand
            if t > a:
                for l in range(t, b):          # walk E_t past E_b
                    q = _transpose(q, l, moves, budget, "step3")
                b -= 1
            else:
                for l in range(a, b - 1):      # walk E_a adjacent to E_b
                    q = _transpose(q, l, moves, budget, "step3")
                a = b - 1
        budget.spend()
        q, mv = right_mutate(q, a)             # the extension-type move
        if mv.kind is not MutKind.X:
            raise PipelineError("adjacent negative pair did not mutate as extension",
                                phase="step3", position=a, kind=mv.kind.value)
        moves.append(mv)
        if len(negatives()) > count_before:
            raise PipelineError("extension count increased", phase="step3",
                                before=count_before, after=len(negatives()))


# ---------------------------------------------------------------------------
# Phase 4: remove torsion sources


def _torsion_sources(q: ExcSeqQuiver) -> list[int]:
    out = []
    for v in range(1, q.n + 1):
        if q.rank(v) != 0:
            continue
        incoming = any(q.a(i, v) > 0 for i in range(1, v))
        outgoing = any(q.a(v, j) > 0 for j in range(v + 1, q.n + 1))
        if outgoing and not incoming:
            out.append(v)
    return out


def step4_remove_sources(q: ExcSeqQuiver, budget_limit: int = PHASE_BUDGET
                         ) -> tuple[ExcSeqQuiver, list[SeqMove]]:
    """Right-mutate each torsion source past all its irreducible targets.

    A target j of the source v is irreducible when a(v, j) > 0 and the
    morphism does not factor through another target.  The source walks
    right up to its last irreducible target.  All ranks involved are
    zero, so kinds are forced, not classified: the first target is
    passed as a mono-type mutation; that exchange turns the entry to
    each later irreducible target negative, so those are passed as
    extension-type mutations (completing one simultaneous approximation
    step by step).  Entries to reducible targets cancel by the time the
    mover reaches them, and unrelated positions are passed as
    transpositions.  Removing a source can expose the next object of a
    chain as a new source, so rounds are bounded by the budget, not by
    a per-round count; at the end no source and no negative entry may
    remain.
    """
    budget = _Budget("step4", budget_limit)
    moves: list[SeqMove] = []
    while True:
        sources = _torsion_sources(q)
        if not sources:
            leftover = {pair: v for pair, v in sorted(q.entries.items()) if v < 0}
            if leftover:
                raise PipelineError("extension entries remain after source removal",
                                    phase="step4", entries=list(leftover))
            return q, moves
        v = sources[0]
        targets = [j for j in range(v + 1, q.n + 1) if q.a(v, j) > 0]
        irreducible = [j for j in targets
                       if not any(q.a(k, j) > 0 for k in targets if k < j)]
        for pos in range(v, max(irreducible)):
            entry = q.a(pos, pos + 1)
            if pos + 1 in irreducible:
                if entry == 0:
                    raise PipelineError("entry to an irreducible target vanished",
                                        phase="step4", source=v, position=pos + 1)
                kind = MutKind.M if entry > 0 else MutKind.X
            else:
                if entry != 0:
                    raise PipelineError("entry to a reducible target did not cancel",
                                        phase="step4", source=v, position=pos + 1,
                                        entry=entry)
                kind = MutKind.T
            budget.spend()
            q, mv = right_mutate(q, pos, kind)
            moves.append(mv)


# ---------------------------------------------------------------------------
# Recognition and the full pipeline


@dataclass(frozen=True)
class SquidDescriptor:
    """Shape certificate of a terminal squid sequence."""

    bundle_positions: tuple[int, int]
    arms: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]


def recognize_squid(q: ExcSeqQuiver) -> SquidDescriptor:
    """Check that a sequence quiver has the exact squid shape.

    Requires ranks (1, 1, 0, ..., 0), a(1,2) = 2, every torsion position
    receiving 1 from both line-bundle positions, and the torsion tail
    splitting into chains (arms) whose ordered pairs are all 1, with no
    entries across arms.  Returns the arms (longest first) and the weight
    sequence they define.
    """
    if q.n < 2:
        raise RecognitionError("a squid needs at least the two line bundles", n=q.n)
    if q.rank(1) != 1 or q.rank(2) != 1 or any(q.rank(v) != 0 for v in range(3, q.n + 1)):
        raise RecognitionError("ranks are not (1, 1, 0, ..., 0)", ranks=list(q.ranks))
    if q.a(1, 2) != 2:
        raise RecognitionError("the line-bundle pair must have entry 2", value=q.a(1, 2))
    torsion = list(range(3, q.n + 1))
    for v in torsion:
        if q.a(1, v) != 1 or q.a(2, v) != 1:
            raise RecognitionError(
                "every torsion position must receive exactly one arrow from "
                "each line bundle", position=v, from_first=q.a(1, v), from_second=q.a(2, v))
    # split the torsion tail into connected components of nonzero entries
    parent = {v: v for v in torsion}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in torsion:
        for j in torsion:
            if i < j and q.a(i, j) != 0:
                parent[find(i)] = find(j)
    components: dict[int, list[int]] = {}
    for v in torsion:
        components.setdefault(find(v), []).append(v)
    arms = sorted((tuple(sorted(c)) for c in components.values()),
                  key=lambda arm: (-len(arm), arm))
    for arm in arms:
        for x in range(len(arm)):
            for y in range(x + 1, len(arm)):
                if q.a(arm[x], arm[y]) != 1:
                    raise RecognitionError("arm positions must form a chain of 1-entries",
                                           arm=list(arm), pair=[arm[x], arm[y]],
                                           value=q.a(arm[x], arm[y]))
    weights = tuple(len(arm) + 1 for arm in arms)
    return SquidDescriptor(bundle_positions=(1, 2), arms=tuple(arms), weights=weights)


def squid_labels(desc: SquidDescriptor, n: int) -> tuple[Term, ...]:
    """Canonical names for a recognized squid: O(c), O(2c), then S_i^(j)
    decreasing down each arm (arm numbering follows the descriptor)."""
    names: dict[int, Term] = {1: Atom("O(c)"), 2: Atom("O(2c)")}
    for arm_index, arm in enumerate(desc.arms, start=1):
        for offset, pos in enumerate(arm):
            names[pos] = Atom(f"S{arm_index}^({len(arm) - offset})")
    return tuple(names[v] for v in range(1, n + 1))


@dataclass(frozen=True)
class LogEntry:
    """One applied move with its phase and the rank vector after it."""

    step: int
    phase: int
    move: SeqMove
    ranks: tuple[int, ...]


@dataclass(frozen=True)
class RecoveryResult:
    """Everything the pipeline produced, enough to replay it both ways."""

    initial: ExcSeqQuiver
    final: ExcSeqQuiver
    word: tuple[SeqMove, ...]
    squid: SquidDescriptor
    weights: tuple[int, ...]
    reconstruction: tuple[Term, ...]
    log: tuple[LogEntry, ...]


def recover(q: GradedQuiver, budget_limit: int = PHASE_BUDGET) -> RecoveryResult:
    """Run the full pipeline on a graded quiver with complete ranks.

    Builds the tilting sequence, applies phases 1-4, recognizes the squid,
    names it canonically, and reconstructs the original objects as formal
    terms by replaying the recorded word backward.  The backward replay is
    also verified to reproduce the initial sequence exactly.  Missing
    ranks are solved from the additivity relations first.
    """
    if any(q.rank(v) is None for v in range(1, q.n + 1)):
        q, _ = solve_unknown_ranks(q)
    report = check_additivity(q)
    if not report.ok:
        raise PipelineError("rank additivity fails on the input", phase="input",
                            vertices=report.failing_vertices())
    return recover_sequence(tilting_sequence_from_graded(q), budget_limit)


def recover_sequence(seq0: ExcSeqQuiver, budget_limit: int = PHASE_BUDGET
                     ) -> RecoveryResult:
    """Run phases 1-4 on a sequence quiver directly (see :func:`recover`)."""
    state = seq0
    word: list[SeqMove] = []
    phases: list[int] = []
    for phase_number, step in ((1, step1_obtain_line_bundle), (2, step2_hom_reduce),
                               (3, step3_ext_reduce), (4, step4_remove_sources)):
        state, moves = step(state, budget_limit)
        word.extend(moves)
        phases.extend([phase_number] * len(moves))
    desc = recognize_squid(state)
    final = relabel(state, squid_labels(desc, state.n))

    replay = seq0
    log: list[LogEntry] = []
    for idx, (mv, phase) in enumerate(zip(word, phases), start=1):
        replay, _ = apply_move(replay, mv)
        log.append(LogEntry(step=idx, phase=phase, move=mv, ranks=replay.ranks))
    if not replay.numeric_equal(final):
        raise PipelineError("forward replay of the word diverged", phase="replay")
    undone = undo_moves(final, word)
    if not undone.numeric_equal(seq0):
        raise PipelineError("backward replay did not restore the input", phase="replay")
    return RecoveryResult(initial=seq0, final=final, word=tuple(word),
                          squid=desc, weights=desc.weights,
                          reconstruction=undone.labels, log=tuple(log))
