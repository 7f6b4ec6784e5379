import io
import json

import pytest

from conftest import fixture_text, make_q1
from qmut import documents
from qmut.catalog import canonical_graded, squid_sequence
from qmut.cli import main
from qmut.graded import labeled_equal


def run_cli(capsys, monkeypatch, argv, stdin_text=""):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, monkeypatch, argv, stdin_text=""):
    code, out, err = run_cli(capsys, monkeypatch, argv, stdin_text)
    assert code == 0, err
    return json.loads(out)


def test_generate_graded_default(capsys, monkeypatch):
    payload = run_json(capsys, monkeypatch,
                       ["generate", "--type", "canonical", "--weights", "3,3,4"])
    assert payload["kind"] == "graded_quiver"
    assert len(payload["vertices"]) == 9


def test_generate_matches_fixture_after_pipeline(capsys, monkeypatch):
    # generate | mutate --at 1 | ranks --solve reproduces the worked example.
    code, gen_out, _ = run_cli(capsys, monkeypatch,
                               ["generate", "--type", "canonical",
                                "--weights", "3,3,4"])
    assert code == 0
    code, mut_out, _ = run_cli(capsys, monkeypatch, ["mutate", "--at", "1"],
                               stdin_text=gen_out)
    assert code == 0
    code, solve_out, _ = run_cli(capsys, monkeypatch, ["ranks", "--solve"],
                                 stdin_text=mut_out)
    assert code == 0
    doc = documents.parse(solve_out)
    assert labeled_equal(doc.graded_quiver(), make_q1())
    assert doc.meta["solved"] == {"1": 2}


def test_generate_sequence(capsys, monkeypatch):
    payload = run_json(capsys, monkeypatch,
                       ["generate", "--type", "squid", "--weights", "2,3",
                        "--as", "sequence"])
    assert payload["kind"] == "exc_sequence"
    assert [v["rank"] for v in payload["vertices"]] == [1, 1, 0, 0, 0]


def test_generate_rejects_bad_weights(capsys, monkeypatch):
    code, out, err = run_cli(capsys, monkeypatch,
                             ["generate", "--type", "canonical",
                              "--weights", "2,x"])
    assert code == 2
    assert json.loads(err)["error"]["code"] == "usage"


def test_mutate_fz_flag_drops_grading(capsys, monkeypatch):
    gen = documents.serialize(documents.from_graded(canonical_graded((2, 2, 2))))
    payload = run_json(capsys, monkeypatch, ["mutate", "--at", "1", "--fz"],
                       stdin_text=gen)
    assert all(arrow["degree"] == 0 for arrow in payload["arrows"])
    assert payload["meta"]["move"] == {"vertex": 1, "fz": True}
    assert all(v["tag"] == "unknown" for v in payload["vertices"])


def test_mutate_records_move_metadata(capsys, monkeypatch):
    gen = documents.serialize(documents.from_graded(canonical_graded((2, 2, 2))))
    payload = run_json(capsys, monkeypatch, ["mutate", "--at", "1"],
                       stdin_text=gen)
    assert payload["meta"]["move"]["vertex"] == 1
    assert payload["meta"]["move"]["pre_tag"] == "source"


def test_mutate_unknown_tag_is_domain_error(capsys, monkeypatch):
    gen = documents.serialize(documents.from_graded(canonical_graded((2, 2, 2))))
    code, mut_out, _ = run_cli(capsys, monkeypatch, ["mutate", "--at", "1"],
                               stdin_text=gen)
    # Vertex 5 lost its tag during the first mutation.
    code, out, err = run_cli(capsys, monkeypatch, ["mutate", "--at", "5"],
                             stdin_text=mut_out)
    assert code == 1
    assert json.loads(err)["error"]["code"] == "mutation_error"


def test_ranks_reports_residuals(capsys, monkeypatch):
    q = canonical_graded((2, 2, 2))
    gen = documents.serialize(documents.from_graded(q))
    payload = run_json(capsys, monkeypatch, ["ranks"], stdin_text=gen)
    assert payload["ok"] is True
    assert payload["residuals"] == {str(v): 0 for v in range(1, q.n + 1)}


def test_tags_infers(capsys, monkeypatch):
    gen = fixture_text("q2_334.json")
    payload = run_json(capsys, monkeypatch, ["tags"], stdin_text=gen)
    tags = {v["id"]: v["tag"] for v in payload["vertices"]}
    assert tags[1] == "source" and tags[3] == "source" and tags[2] == "sink"


def test_verify_ok(capsys, monkeypatch):
    payload = run_json(capsys, monkeypatch, ["verify"],
                       stdin_text=fixture_text("q1_334.json"))
    assert payload == {"ok": True, "kind": "graded_quiver",
                       "checks": {"schema": "ok", "structure": "ok",
                                  "additivity": "ok"}}


def test_verify_rejects_failing_additivity(capsys, monkeypatch):
    payload = json.loads(fixture_text("q1_334.json"))
    payload["vertices"][0]["rank"] = 7
    code, out, err = run_cli(capsys, monkeypatch, ["verify"],
                             stdin_text=json.dumps(payload))
    assert code == 1
    assert json.loads(err)["error"]["code"] == "invalid_value"


def test_exmutate_left(capsys, monkeypatch):
    gen = documents.serialize(documents.from_sequence(squid_sequence((2, 3))))
    payload = run_json(capsys, monkeypatch,
                       ["exmutate", "--at", "1", "--side", "left"],
                       stdin_text=gen)
    assert payload["kind"] == "exc_sequence"
    assert payload["meta"]["move"]["side"] == "L"


def test_recover_squid_sequence_is_empty_word(capsys, monkeypatch):
    code, gen_out, _ = run_cli(capsys, monkeypatch,
                               ["generate", "--type", "squid",
                                "--weights", "2,3", "--as", "sequence"])
    payload = run_json(capsys, monkeypatch, ["recover"], stdin_text=gen_out)
    assert payload["kind"] == "recovery_result"
    assert payload["word"]["moves"] == []
    assert payload["weights"] == [3, 2]


def test_recover_accepts_graded_document(capsys, monkeypatch):
    code, gen_out, _ = run_cli(capsys, monkeypatch,
                               ["generate", "--type", "canonical",
                                "--weights", "2,2,2"])
    payload = run_json(capsys, monkeypatch, ["recover"], stdin_text=gen_out)
    assert sorted(payload["weights"]) == [2, 2, 2]
    assert len(payload["word"]["moves"]) == 6


def test_replay_forward_and_backward(tmp_path, capsys, monkeypatch):
    code, seq_out, _ = run_cli(capsys, monkeypatch,
                               ["generate", "--type", "canonical",
                                "--weights", "2,2,2", "--as", "sequence"])
    code, rec_out, _ = run_cli(capsys, monkeypatch, ["recover"],
                               stdin_text=seq_out)
    rec = json.loads(rec_out)
    word_file = tmp_path / "word.json"
    word_file.write_text(documents.dumps(rec["word"]))

    fwd = run_json(capsys, monkeypatch,
                   ["replay", "--word", str(word_file)], stdin_text=seq_out)
    final = documents.parse_value(rec["final"]).sequence_quiver()
    assert documents.parse_value(fwd).sequence_quiver().numeric_equal(final)

    bwd = run_json(capsys, monkeypatch,
                   ["replay", "--word", str(word_file), "--backward"],
                   stdin_text=documents.dumps(fwd))
    restored = documents.parse_value(bwd).sequence_quiver()
    assert restored.numeric_equal(
        documents.parse(seq_out).sequence_quiver())


def test_replay_accepts_recovery_result_as_word_file(tmp_path, capsys,
                                                     monkeypatch):
    code, seq_out, _ = run_cli(capsys, monkeypatch,
                               ["generate", "--type", "canonical",
                                "--weights", "2,2,2", "--as", "sequence"])
    code, rec_out, _ = run_cli(capsys, monkeypatch, ["recover"],
                               stdin_text=seq_out)
    rec_file = tmp_path / "recovery.json"
    rec_file.write_text(rec_out)
    fwd = run_json(capsys, monkeypatch,
                   ["replay", "--word", str(rec_file)], stdin_text=seq_out)
    rec = json.loads(rec_out)
    final = documents.parse_value(rec["final"]).sequence_quiver()
    assert documents.parse_value(fwd).sequence_quiver().numeric_equal(final)


def test_bad_document_is_domain_error(capsys, monkeypatch):
    code, out, err = run_cli(capsys, monkeypatch, ["verify"],
                             stdin_text='{"schema": "qmut/1", "kind": "no"}')
    assert code == 1
    assert json.loads(err)["error"]["code"] == "bad_document"


def test_missing_required_argument_is_usage_error(capsys, monkeypatch):
    code, out, err = run_cli(capsys, monkeypatch, ["mutate"])
    assert code == 2
    assert json.loads(err)["error"]["code"] == "usage"


def test_unknown_command_is_usage_error(capsys, monkeypatch):
    code, out, err = run_cli(capsys, monkeypatch, ["frobnicate"])
    assert code == 2
