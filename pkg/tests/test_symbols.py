from qmut.symbols import (Atom, LTerm, RTerm, left_of, right_of,
                          term_from_json, term_to_json)


def test_atom_str():
    assert str(Atom("E3")) == "E3"


def test_left_right_build_terms():
    a, b = Atom("a"), Atom("b")
    assert left_of(a, b) == LTerm(a, b)
    assert right_of(a, b) == RTerm(a, b)
    assert str(left_of(a, b)) == "L[a](b)"
    assert str(right_of(a, b)) == "R[a](b)"


def test_left_cancels_right():
    a, b = Atom("a"), Atom("b")
    assert left_of(a, right_of(a, b)) == b
    assert right_of(a, left_of(a, b)) == b


def test_no_cancellation_across_different_bases():
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    t = left_of(a, right_of(c, b))
    assert t == LTerm(a, RTerm(c, b))


def test_json_round_trip():
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    for t in (a, left_of(a, b), right_of(b, left_of(c, a))):
        assert term_from_json(term_to_json(t)) == t
