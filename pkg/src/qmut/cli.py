"""The ``qmut`` command line.

Subcommands read a qmut/1 document from standard input where one is
needed, write the resulting document to standard output, and report
failures as a JSON error object on standard error.  Exit codes: 0 on
success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import documents
from .catalog import canonical_graded, squid_graded, squid_sequence, validate_weights
from .errors import DocumentError, QmutError, ValidationError
from .exseq import MutKind, apply_move, inverse_move, left_mutate, right_mutate
from .graded import (GradedQuiver, Tag, forget_grading, fz_mutate,
                     graded_mutate, validate)
from .ranks import check_additivity, solve_unknown_ranks, with_inferred_tags
from .recovery import recover, recover_sequence, tilting_sequence_from_graded


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as JSON on stderr."""

    def error(self, message: str) -> None:
        sys.stderr.write(documents.dumps(
            {"error": {"code": "usage", "message": message, "details": {}}}))
        raise SystemExit(2)


def _weights(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"weights must be comma-separated integers, got {text!r}")
    return parts


def _read_stdin(kind: str) -> documents.Document:
    doc = documents.parse(sys.stdin.read())
    if doc.kind != kind:
        raise DocumentError(f"this command needs a {kind} document",
                            field="$.kind", value=doc.kind)
    return doc


def _emit(value: dict) -> None:
    sys.stdout.write(documents.dumps(value))


def _emit_doc(doc: documents.Document) -> None:
    sys.stdout.write(documents.serialize(doc))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_generate(args: argparse.Namespace) -> int:
    weights = validate_weights(args.weights)
    if args.type == "squid":
        if args.emit_as == "sequence":
            _emit_doc(documents.from_sequence(squid_sequence(weights)))
        else:
            _emit_doc(documents.from_graded(squid_graded(weights)))
    else:
        q = canonical_graded(weights)
        if args.emit_as == "sequence":
            _emit_doc(documents.from_sequence(tilting_sequence_from_graded(q)))
        else:
            _emit_doc(documents.from_graded(q))
    return 0


def _cmd_mutate(args: argparse.Namespace) -> int:
    doc = _read_stdin("graded_quiver")
    q = doc.graded_quiver()
    if args.fz:
        plain = fz_mutate(forget_grading(q), args.at)
        result = GradedQuiver(
            n=plain.n,
            arrows={pair: (0, count) for pair, count in plain.arrows.items()},
            ranks=plain.ranks,
            tags=tuple(Tag.UNKNOWN for _ in range(plain.n)),
            labels=plain.labels)
        _emit_doc(documents.from_graded(result, meta={"move": {"vertex": args.at,
                                                               "fz": True}}))
        return 0
    result, move = graded_mutate(q, args.at)
    _emit_doc(documents.from_graded(
        result, meta={"move": documents.graded_move_json(args.at, move)}))
    return 0


def _cmd_ranks(args: argparse.Namespace) -> int:
    doc = _read_stdin("graded_quiver")
    q = doc.graded_quiver()
    if args.solve:
        solved_q, solved = solve_unknown_ranks(q)
        _emit_doc(documents.from_graded(
            solved_q, meta={"solved": {str(v): r for v, r in sorted(solved.items())}}))
        return 0
    report = check_additivity(q)
    _emit({"ok": report.ok,
           "residuals": {str(v): r for v, r in
                         enumerate(report.residuals, start=1)},
           "failing": report.failing_vertices()})
    return 0 if report.ok else 1


def _cmd_tags(args: argparse.Namespace) -> int:
    doc = _read_stdin("graded_quiver")
    _emit_doc(documents.from_graded(with_inferred_tags(doc.graded_quiver())))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    doc = documents.parse(sys.stdin.read())
    checks: dict[str, str] = {"schema": "ok"}
    if doc.kind == "graded_quiver":
        q = doc.graded_quiver()
        validate(q)
        checks["structure"] = "ok"
        if any(q.rank(v) is None for v in range(1, q.n + 1)):
            checks["additivity"] = "skipped: unknown ranks"
        else:
            report = check_additivity(q)
            if not report.ok:
                raise ValidationError("rank additivity fails",
                                      vertices=report.failing_vertices())
            checks["additivity"] = "ok"
    _emit({"ok": True, "kind": doc.kind, "checks": checks})
    return 0


def _cmd_exmutate(args: argparse.Namespace) -> int:
    doc = _read_stdin("exc_sequence")
    q = doc.sequence_quiver()
    kind = MutKind(args.kind) if args.kind else None
    if args.side == "left":
        result, move = left_mutate(q, args.at, kind)
    else:
        result, move = right_mutate(q, args.at, kind)
    _emit_doc(documents.from_sequence(result, meta={"move": move.as_json()}))
    return 0


def _cmd_recover(args: argparse.Namespace) -> int:
    doc = documents.parse(sys.stdin.read())
    if doc.kind == "exc_sequence":
        result = recover_sequence(doc.sequence_quiver())
    else:
        result = recover(doc.graded_quiver())
    _emit(documents.recovery_to_json(result))
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    doc = _read_stdin("exc_sequence")
    q = doc.sequence_quiver()
    with open(args.word, encoding="utf-8") as handle:
        word_doc = documents.parse(handle.read())
    moves = word_doc.word()
    if args.backward:
        for move in reversed(moves):
            q, _ = apply_move(q, inverse_move(move))
    else:
        for move in moves:
            q, _ = apply_move(q, move)
    _emit_doc(documents.from_sequence(
        q, meta={"replayed": len(moves),
                 "direction": "backward" if args.backward else "forward"}))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve
    serve(args.addr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmut",
                     description="Graded quiver mutation and squid recovery.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="emit a catalog quiver document")
    p.add_argument("--type", required=True, choices=["squid", "canonical"])
    p.add_argument("--weights", required=True, type=_weights,
                   help="comma-separated weights, e.g. 2,3,4")
    p.add_argument("--as", dest="emit_as", choices=["graded", "sequence"],
                   default="graded")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("mutate", help="mutate a graded document at a vertex")
    p.add_argument("--at", required=True, type=int, metavar="K")
    p.add_argument("--fz", action="store_true",
                   help="plain (ungraded) mutation of the underlying quiver")
    p.set_defaults(func=_cmd_mutate)

    p = sub.add_parser("ranks", help="check rank additivity or solve unknown ranks")
    p.add_argument("--solve", action="store_true")
    p.set_defaults(func=_cmd_ranks)

    p = sub.add_parser("tags", help="infer sink/source tags from degrees and ranks")
    p.set_defaults(func=_cmd_tags)

    p = sub.add_parser("verify", help="validate a document and its rank relations")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("exmutate", help="mutate a sequence document at a position")
    p.add_argument("--at", required=True, type=int, metavar="L")
    p.add_argument("--side", required=True, choices=["left", "right"])
    p.add_argument("--kind", choices=[k.value for k in MutKind])
    p.set_defaults(func=_cmd_exmutate)

    p = sub.add_parser("recover", help="drive a graded document to squid form")
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("replay", help="replay a mutation word over a sequence document")
    p.add_argument("--word", required=True, metavar="FILE")
    p.add_argument("--backward", action="store_true")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default=None, metavar="HOST:PORT")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except QmutError as exc:
        sys.stderr.write(documents.dumps(exc.as_json()))
        return 1
    except OSError as exc:
        sys.stderr.write(documents.dumps(
            {"error": {"code": "io_error", "message": str(exc), "details": {}}}))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
