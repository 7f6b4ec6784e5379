import random

import pytest

from conftest import make_q1, make_q2
from qmut.catalog import canonical_graded, squid_graded, squid_sequence
from qmut.errors import PipelineError, RecognitionError, ValidationError
from qmut.exseq import ExcSeqQuiver, MutKind, apply_move, undo_moves
from qmut.graded import GradedQuiver, Tag, graded_mutate
from qmut.ranks import solve_unknown_ranks
from qmut.recovery import (cartan_from_graded, recognize_squid, recover,
                           recover_sequence, squid_labels,
                           tilting_sequence_from_graded)
from qmut.symbols import Atom


def test_cartan_rejects_unsolved_ranks_later_not_needed():
    # The Cartan matrix only needs arrows, so missing ranks are fine here.
    q, _ = graded_mutate(canonical_graded((2, 2, 2)), 1)
    cartan_from_graded(q)


def test_cartan_rejects_nonpositive_structure():
    # An isolated 2-cycle-free quiver whose incidence inverse goes negative.
    q = GradedQuiver(n=2, arrows={(1, 2): (1, 1)}, ranks=(1, 1),
                     tags=(Tag.SINK, Tag.SOURCE))
    with pytest.raises(PipelineError) as err:
        cartan_from_graded(q)
    assert err.value.details["phase"] == "cartan"


def test_tilting_sequence_of_canonical_334():
    seq = tilting_sequence_from_graded(canonical_graded((3, 3, 4)))
    assert seq.n == 9
    assert seq.ranks == (1,) * 9
    assert seq.entries == {
        (1, 2): 1, (1, 3): 1, (1, 4): 1, (1, 5): 1, (1, 6): 1, (1, 7): 1,
        (1, 8): 1, (1, 9): 2,
        (2, 3): 1, (2, 9): 1, (3, 9): 1,
        (4, 5): 1, (4, 9): 1, (5, 9): 1,
        (6, 7): 1, (6, 8): 1, (6, 9): 1, (7, 8): 1, (7, 9): 1, (8, 9): 1,
    }
    assert seq.labels[0] == Atom("O")
    assert seq.labels[8] == Atom("O(c)")


def test_tilting_sequence_requires_ranks():
    q, _ = graded_mutate(canonical_graded((2, 2, 2)), 1)
    with pytest.raises(ValidationError):
        tilting_sequence_from_graded(q)


def test_recognize_squid_on_catalog():
    desc = recognize_squid(squid_sequence((2, 3)))
    assert desc.weights == (3, 2)
    assert desc.arms == ((4, 5), (3,))
    desc2 = recognize_squid(squid_sequence((2, 2, 2, 2)))
    assert desc2.weights == (2, 2, 2, 2)


def test_recognize_squid_rejects_wrong_shape():
    seq = tilting_sequence_from_graded(canonical_graded((2, 2, 2)))
    with pytest.raises(RecognitionError):
        recognize_squid(seq)


def test_squid_labels_fix_coordinates():
    desc = recognize_squid(squid_sequence((2, 3)))
    names = squid_labels(desc, 5)
    # Longest arm first: arm at positions (4, 5) has weight 3.
    assert names == (Atom("O(c)"), Atom("O(2c)"), Atom("S2^(1)"),
                     Atom("S1^(2)"), Atom("S1^(1)"))


@pytest.mark.parametrize("weights", [(2, 3), (2, 2, 2), (2, 2, 2, 2)])
def test_squid_is_a_fixed_point(weights):
    result = recover_sequence(squid_sequence(weights))
    assert all(mv.kind is MutKind.T for mv in result.word)
    assert len(result.word) == 0
    assert sorted(result.weights, reverse=True) == sorted(weights, reverse=True)


@pytest.mark.parametrize("weights,expected_moves", [
    ((2, 2, 2), 6),
    ((2, 2, 2, 2), 8),
    ((3, 3, 4), 47),
    ((2, 3, 7), 118),
])
def test_recover_canonical_round_trip(weights, expected_moves):
    seq0 = tilting_sequence_from_graded(canonical_graded(weights))
    result = recover_sequence(seq0)
    assert len(result.word) == expected_moves
    assert sorted(result.weights) == sorted(weights)
    # Forward replay of the recorded word reaches the squid exactly.
    state = result.initial
    for move in result.word:
        state, _ = apply_move(state, move)
    assert state.numeric_equal(result.final)
    # Backward replay restores the input exactly.
    assert undo_moves(result.final, list(result.word)).numeric_equal(seq0)


def test_recover_versus_graded_entry_point():
    q1 = make_q1()
    result = recover(q1)
    assert sorted(result.weights) == [3, 3, 4]
    assert len(result.word) == 41

    q2 = make_q2()
    result2 = recover(q2)
    assert sorted(result2.weights) == [3, 3, 4]
    assert len(result2.word) == 51


def test_recover_solves_missing_ranks_itself():
    q, _ = graded_mutate(canonical_graded((3, 3, 4)), 1)
    assert q.rank(1) is None
    result = recover(q)
    assert sorted(result.weights) == [3, 3, 4]


def test_recover_log_and_reconstruction():
    seq0 = tilting_sequence_from_graded(canonical_graded((2, 2, 2)))
    result = recover_sequence(seq0)
    assert len(result.log) == len(result.word)
    assert [entry.step for entry in result.log] == \
        list(range(1, len(result.word) + 1))
    for entry in result.log:
        assert entry.phase in (1, 2, 3, 4)
        assert all(r >= 0 for r in entry.ranks)
    # The reconstruction names every input position in squid coordinates.
    assert len(result.reconstruction) == seq0.n


def test_recover_random_graded_walks():
    rng = random.Random(11)
    for weights in [(2, 2, 2), (2, 2, 2, 2), (3, 3, 4)]:
        for _ in range(4):
            q = canonical_graded(weights)
            for _ in range(rng.randint(1, 6)):
                movable = [v for v in range(1, q.n + 1)
                           if q.tag(v) is not Tag.UNKNOWN]
                if not movable:
                    break
                q, _ = graded_mutate(q, rng.choice(movable))
                q, _ = solve_unknown_ranks(q)
            result = recover(q)
            assert sorted(result.weights) == sorted(weights)


def test_recover_budget_exhaustion():
    seq0 = tilting_sequence_from_graded(canonical_graded((3, 3, 4)))
    with pytest.raises(PipelineError) as err:
        recover_sequence(seq0, budget_limit=3)
    assert "budget" in str(err.value)


def test_recover_rejects_inconsistent_ranks():
    q = canonical_graded((2, 2, 2))
    bad = GradedQuiver(n=q.n, arrows=q.arrows,
                       ranks=(5,) + q.ranks[1:], tags=q.tags, labels=q.labels)
    with pytest.raises(PipelineError) as err:
        recover(bad)
    assert err.value.details["phase"] == "input"
