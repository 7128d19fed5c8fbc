import json

import pytest
from click.testing import CliRunner

from main import EXIT_CAP_EXCEEDED, EXIT_FAILED, EXIT_INPUT_ERROR, EXIT_OK, cli

EXAMPLE = "sig f:2 comm;\nnew c. {(d e c) fix X, (a b) fix Y} |- f([d]X, (a b).Y) = f(Y, [e]X)\n"
WEDGE = "sig and:2 comm;\n[a]and(X, Y) =? [b]and(Y, X)\n"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    def write_problem(text, name="problem.nom"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write_problem


class TestCheck:
    def test_derivable(self, runner, write):
        result = runner.invoke(cli, ["check", write(EXAMPLE)])
        assert result.exit_code == EXIT_OK
        assert result.output.strip() == "derivable"

    def test_not_derivable(self, runner, write):
        result = runner.invoke(cli, ["check", write("{} |- (a b).X = X")])
        assert result.exit_code == EXIT_FAILED
        assert result.output.strip() == "not derivable"

    def test_proof(self, runner, write):
        result = runner.invoke(cli, ["check", "--proof", write(EXAMPLE)])
        lines = result.output.splitlines()
        assert lines[0] == "derivable"
        assert lines[1].startswith("FunC(swapped): ")
        assert any("AbsDiff(new c1)" in line for line in lines)

    def test_json(self, runner, write):
        result = runner.invoke(cli, ["check", "--json", "--proof", write(EXAMPLE)])
        payload = json.loads(result.output)
        assert payload["derivable"] is True
        proof = payload["proof"]
        assert proof["rule"] == "FunC"
        assert proof["branch"] == "swapped"
        assert proof["conclusion"]["context"]["new"] == ["c"]
        abstraction = proof["premises"][0]
        assert abstraction["fresh"] == "c1"
        assert abstraction["premises"][0]["membership"]["residual"] == [["c1", "d", "e"]]

    def test_goal_is_rejected(self, runner, write):
        result = runner.invoke(cli, ["check", write(WEDGE)])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_group_cap(self, runner, write):
        path = write("{(a b) fix X, (b d) fix X} |- (a d).X = X")
        assert runner.invoke(cli, ["check", path]).exit_code == EXIT_OK
        result = runner.invoke(cli, ["--max-group-order", "2", "check", path])
        assert result.exit_code == EXIT_CAP_EXCEEDED


class TestUnify:
    def test_solutions(self, runner, write):
        result = runner.invoke(cli, ["unify", write(WEDGE)])
        assert result.exit_code == EXIT_OK
        assert result.output.splitlines() == [
            "2 solutions",
            "new c1. <{(a c1 b) fix X}, [Y -> (a c1 b).X]>",
            "new c1. <{(a b c1) fix X, (a b c1) fix Y}, Id>",
        ]

    def test_json(self, runner, write):
        result = runner.invoke(cli, ["unify", "--json", write(WEDGE)])
        payload = json.loads(result.output)
        assert payload["solvable"] is True
        assert payload["reasons"] == []
        first = payload["solutions"][0]
        assert first == {
            "new": ["c1"],
            "context": [{"perm": [["a", "c1", "b"]], "var": "X"}],
            "subst": {"Y": "(a c1 b).X"},
        }

    def test_trace(self, runner, write):
        result = runner.invoke(cli, ["unify", "--trace", write(WEDGE)])
        lines = result.output.splitlines()
        assert lines[0] == "abs-diff: [a]and(X, Y) =? [b]and(Y, X)  (2, {8}) > (2, {6})"
        assert lines[1].startswith("fun-c: ")
        assert "2 solutions" in lines

    def test_unsolvable(self, runner, write):
        result = runner.invoke(cli, ["unify", write("sig f:2; X =? f(X, a)")])
        assert result.exit_code == EXIT_FAILED
        assert result.output.strip() == "unsolvable: Occurs"

    def test_unsolvable_json(self, runner, write):
        result = runner.invoke(cli, ["unify", "--json", write("a =? b")])
        assert result.exit_code == EXIT_FAILED
        assert json.loads(result.output) == {"solvable": False, "solutions": [], "reasons": ["AtomClash"]}

    def test_syntax_error(self, runner, write):
        result = runner.invoke(cli, ["unify", write("[a =? b")])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "error:" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["unify", str(tmp_path / "absent.nom")])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_undecodable_file(self, runner, tmp_path):
        path = tmp_path / "latin.nom"
        path.write_bytes(b"\xff\xfe a =? a")
        result = runner.invoke(cli, ["unify", str(path)])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "not valid UTF-8" in result.output

    def test_generated_name_cannot_escape(self, runner, write):
        result = runner.invoke(cli, ["unify", "--json", write("[b]X =? [a]b")])
        assert result.exit_code == EXIT_FAILED
        assert json.loads(result.output) == {"solvable": False, "solutions": [], "reasons": ["NameEscape"]}


class TestNormalize:
    def test_text(self, runner, write):
        path = write("new c. {(a c) fix X, (a b)(d e) fix X} |- X = X")
        result = runner.invoke(cli, ["normalize", path])
        assert result.exit_code == EXIT_OK
        assert result.output.strip() == "new c. {(a b c) fix X, (d e) fix X}"

    def test_json(self, runner, write):
        path = write("new c. {(a c)(d e) fix Z} |- Z = Z")
        payload = json.loads(runner.invoke(cli, ["normalize", "--json", path]).output)
        assert payload == {
            "new": ["c"],
            "constraints": [{"perm": [["a", "c"]], "var": "Z"}, {"perm": [["d", "e"]], "var": "Z"}],
        }

    def test_reverse_merge_order(self, runner, write):
        path = write("{(a b) fix X, (c d) fix Y} |- X = X")
        result = runner.invoke(cli, ["normalize", "--reverse", path])
        assert result.exit_code == EXIT_OK
        assert result.output.strip() == "{(a b) fix X, (c d) fix Y}"
