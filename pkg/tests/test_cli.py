import functools
import json
from fractions import Fraction

import pytest

from freearr import acceptance, catalog, cli
from freearr.errors import ArrangementSyntaxError, BadDiscriminantError, DuplicateLineError
from freearr.fileformat import parse_arrangement, parse_replay, serialize_arrangement, serialize_replay
from freearr.geometry import Arrangement, Triple
from freearr.search import inductive_certificate


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in ("dual_hesse", "pentagonal", "g443_affine", "ch13"):
        p = tmp_path / f"{name}.txt"
        p.write_text(serialize_arrangement(catalog.get(name).arrangement))
        paths[name] = str(p)
    return paths


# file format ---------------------------------------------------------------

def test_parse_simple():
    A = parse_arrangement("field rational\n1 0 0 0 0 0\n0 0 1 0 0 0")
    assert A == Arrangement.from_rows([(1, 0, 0), (0, 1, 0)])


def test_parse_comments_and_normalization():
    text = "# two lines\n\nfield d = 5   # golden\n2 0 4 2 0 0\n\n0 0 0 0 3 -1  # z-ish\n"
    A = parse_arrangement(text)
    assert A.ctx.d == 5 and len(A) == 2
    assert A.line(1).coords[0] == 1


@pytest.mark.parametrize("name", catalog.NAMES)
def test_round_trip(name):
    A = catalog.get(name).arrangement
    assert parse_arrangement(serialize_arrangement(A, comment="x\ny")) == A


@pytest.mark.parametrize("text,line,col", [
    ("field rational\n1 0 1 0\n", 2, 7),
    ("field rational\n1 0 0 0 x 0\n", 2, 9),
    ("field rational\n1 1 0 0 0 0\n", 2, 3),
    ("field rational\n0 0 0 0 0 0\n", 2, 1),
    ("fields rational\n", 1, 1),
    ("", 1, 1),
    ("field rational\n1/0 0 0 0 0 0\n", 2, 1),
])
def test_syntax_errors(text, line, col):
    with pytest.raises(ArrangementSyntaxError) as e:
        parse_arrangement(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_duplicate_and_discriminant():
    with pytest.raises(DuplicateLineError):
        parse_arrangement("field rational\n1 0 0 0 0 0\n2 0 0 0 0 0\n")
    for d in (0, 1, 8):
        with pytest.raises(BadDiscriminantError):
            parse_arrangement(f"field d = {d}\n")


def test_replay_round_trip():
    A = catalog.near_pencil(5)
    recs = inductive_certificate(A).records()
    ctx, back = parse_replay(serialize_replay(A.ctx, recs, comment="chain"))
    assert ctx == A.ctx and back == recs
    with pytest.raises(ArrangementSyntaxError):
        parse_replay("field rational\n* 1 0 0 0 0 0 1 0 0\n")
    with pytest.raises(ArrangementSyntaxError):
        parse_replay("field rational\n+ 1 0 0 0 0 0 2 0 0\n")


# commands ------------------------------------------------------------------

def test_analyze(capsys, files):
    code, out, _ = run(capsys, "--json", "analyze", files["dual_hesse"])
    doc = json.loads(out)
    assert code == 0 and doc["f_vector"] == [0, 12] and doc["q"] == [1, -8, 16]
    assert doc["verdict"]["exponents"] == [1, 4, 4]
    assert [p["n"] for p in doc["profiles"]] == [4] * 9
    code, out, _ = run(capsys, "analyze", files["dual_hesse"])
    assert "F         [0, 12]" in out and "Free (1, 4, 4)" in out


def test_json_flag_after_command(capsys, files):
    code, out, _ = run(capsys, "free", files["pentagonal"], "--json")
    assert code == 0 and json.loads(out)["exponents"] == [1, 5, 5]


def test_free_methods(capsys, files):
    code, out, _ = run(capsys, "--json", "free", files["ch13"], "--method", "yoshinaga", "--pivot", "13")
    doc = json.loads(out)
    assert doc["method"] == "Yoshinaga" and doc["witness"] == {"pivot": 13, "ziegler": [6, 6]}
    code, out, _ = run(capsys, "free", files["pentagonal"], "--cross-check")
    assert code == 0 and out.strip() == "Free (1, 5, 5) [ClassifiedBalanced]"
    code, _, err = run(capsys, "free", files["pentagonal"], "--method", "abt")
    assert code == 1 and "inapplicable" in err


def test_deterministic_json(capsys, files):
    outs = {run(capsys, "--json", "stuck", files["ch13"])[1] for _ in range(2)}
    assert len(outs) == 1
    doc = json.loads(outs.pop())
    assert doc["stuck"] and doc["additions"] == {"7": []} and len(doc["deletions"]) == 13


def test_inductive_and_replay(capsys, tmp_path):
    P = catalog.pentagonal()
    A1 = P.add(Triple(1, -1, 0, ctx=P.ctx))
    f = tmp_path / "a1.txt"
    f.write_text(serialize_arrangement(A1))
    cert = tmp_path / "a1.cert"
    code, out, _ = run(capsys, "inductive", str(f), "--out", str(cert))
    assert code == 0 and out.count("\n") == 12
    code, out, _ = run(capsys, "--json", "replay", str(cert), "--expect", str(f))
    doc = json.loads(out)
    assert code == 0 and doc["valid"] and doc["matches"] and doc["ell"] == 12
    other = tmp_path / "p.txt"
    other.write_text(serialize_arrangement(P))
    code, _, _ = run(capsys, "replay", str(cert), "--expect", str(other))
    assert code == 1


def test_inductive_none(capsys, files):
    code, out, _ = run(capsys, "--json", "inductive", files["dual_hesse"])
    assert code == 0 and json.loads(out) == {"inductive": False, "chain": None}


def test_tampered_replay_exits_2(capsys, tmp_path):
    A = catalog.pencil(3)
    text = serialize_replay(A.ctx, inductive_certificate(A).records())
    bad = tmp_path / "bad.cert"
    bad.write_text(text.replace("1 0 2\n", "1 1 1\n"))
    code, _, err = run(capsys, "replay", str(bad))
    assert code == 2 and "claimed exponents" in err


def test_profiles(capsys):
    code, out, _ = run(capsys, "--json", "profiles", "--max", "12")
    doc = json.loads(out)
    assert [(p["ell"], p["a"]) for p in doc["profiles"]] == [(9, 4)] + [(11, 5)] * 4 + [(12, 5)]
    code, out, _ = run(capsys, "profiles", "--max", "8")
    assert out.strip() == "none"


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert out.split() == list(catalog.NAMES)
    code, out, _ = run(capsys, "catalog", "emit", "ch13", "--lambda", "3/5")
    A = parse_arrangement(out)
    assert A == catalog.ch13(Fraction(3, 5))
    code, _, err = run(capsys, "catalog", "emit", "ch13", "--lambda", "1")
    assert code == 1 and "not generic" in err
    code, _, _ = run(capsys, "catalog", "emit", "nope")
    assert code == 1
    code, out, _ = run(capsys, "catalog", "emit", "near_pencil", "--k", "4")
    assert len(parse_arrangement(out)) == 4


@pytest.mark.parametrize("argv", [[], ["bogus"], ["free"], ["profiles"], ["free", "x", "--method", "magic"],
                                  ["catalog", "emit", "ch13", "--lambda", "abc"], ["analyze", "/no/such/file"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_parse_error_exit(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("field rational\n1 0 1 0\n")
    code, _, err = run(capsys, "analyze", str(f))
    assert code == 1 and "line 2, column 7" in err


def test_verify_paper_cli(capsys, monkeypatch):
    monkeypatch.setattr(cli, "verify_paper", functools.partial(acceptance.verify_paper, cases=30))
    code, out, _ = run(capsys, "--json", "verify-paper")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and len(doc["items"]) == 10
    code, out, _ = run(capsys, "--json", "verify-paper", "--corrupt", "g443")
    doc = json.loads(out)
    failed = {i["number"] for i in doc["items"] if not i["passed"]}
    assert code != 0 and {2, 10} <= failed
    code, _, _ = run(capsys, "verify-paper", "--corrupt", "nothing")
    assert code == 1
