"""Formal object terms carried as labels on exceptional-sequence positions.

A term is either a named atom or a formal left/right mutation of two terms.
The only rewriting ever applied is the exact-inverse cancellation

    L(b, R(b, e)) == e        R(b, L(b, f)) == f

performed at construction time, which is what makes a backward replay of a
recorded mutation word restore the original labels verbatim. No other
normalization is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

Term = Union["Atom", "LTerm", "RTerm"]


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class LTerm:
    by: Term
    arg: Term

    def __str__(self) -> str:
        return f"L[{self.by}]({self.arg})"


@dataclass(frozen=True)
class RTerm:
    by: Term
    arg: Term

    def __str__(self) -> str:
        return f"R[{self.by}]({self.arg})"


def left_of(by: Term, arg: Term) -> Term:
    """Formal L_by(arg), cancelling L(b, R(b, e)) -> e."""
    if isinstance(arg, RTerm) and arg.by == by:
        return arg.arg
    return LTerm(by, arg)


def right_of(by: Term, arg: Term) -> Term:
    """Formal R_by(arg), cancelling R(b, L(b, f)) -> f."""
    if isinstance(arg, LTerm) and arg.by == by:
        return arg.arg
    return RTerm(by, arg)


def term_to_json(t: Term) -> object:
    if isinstance(t, Atom):
        return t.name
    op = "L" if isinstance(t, LTerm) else "R"
    return {"op": op, "by": term_to_json(t.by), "arg": term_to_json(t.arg)}


def term_from_json(obj: object) -> Term:
    if isinstance(obj, str):
        return Atom(obj)
    if isinstance(obj, dict) and {"op", "by", "arg"} <= set(obj):
        by = term_from_json(obj["by"])
        arg = term_from_json(obj["arg"])
        if obj["op"] == "L":
            return LTerm(by, arg)
        if obj["op"] == "R":
            return RTerm(by, arg)
    raise ValueError(f"not a formal term: {obj!r}")
