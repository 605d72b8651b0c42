"""
Tests for command execution and the command-line entry point.
"""

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from domkit.__main__ import DomkitCLI
from domkit.basis import lift_antichain, poset_from_relation
from domkit.codec import export_dot, parse_basis
from domkit.context import WorkbenchContextProvider
from domkit.workflow import Command, CommandRunner, split_labels
from tests.conftest import A, B


def run(runner, verb, *inputs, **options):
    return runner.run(Command(verb=verb, inputs=inputs, options=options))


class TestCommand:
    """Tests for Command validation and label parsing."""

    def test_input_count(self):
        """Test that each verb takes a fixed number of files."""
        with pytest.raises(ValidationError):
            Command(verb="iso", inputs=("a.json",))

    def test_am_requirements(self):
        """Test that am needs a known action and pairs to check."""
        with pytest.raises(ValidationError):
            Command(verb="am", inputs=("a", "b"), options={"action": "apply"})
        with pytest.raises(ValidationError):
            Command(verb="am", inputs=("a", "b"), options={"action": "close"})
        Command(verb="am", inputs=("a", "b"), options={"action": "enumerate"})

    def test_coop_requirements(self):
        """Test that coop needs a base and labels."""
        with pytest.raises(ValidationError):
            Command(verb="coop", options={"base": "b.json"})

    def test_unknown_verb(self):
        """Test that unknown verbs are rejected."""
        with pytest.raises(ValidationError):
            Command(verb="solve", inputs=())

    @pytest.mark.parametrize(
        "value, expected",
        [("l", ("l",)), ("l1, l2", ("l1", "l2")), (("l1", "l2"), ("l1", "l2")), (None, ())],
    )
    def test_split_labels(self, value, expected):
        """Test the forms a labels flag may take."""
        assert split_labels(value) == expected


class TestCheckAndProps:
    """Tests for the check and props verbs."""

    def test_check_flat3(self, runner, write_basis, flat3):
        """Test that a flat basis passes."""
        result = run(runner, "check", write_basis(flat3))
        payload = json.loads(result.output)
        assert result.exit_status == 0
        assert payload["size"] == 3
        assert [d["predicate"] for d in payload["report"]["details"]] == [
            "partial-order",
            "pointed",
            "finitary-basis",
        ]

    def test_check_butterfly(self, runner, write_basis, butterfly):
        """Test that the butterfly fails."""
        assert run(runner, "check", write_basis(butterfly)).exit_status == 1

    def test_check_unpointed(self, runner, write_basis):
        """Test that a poset without bottom fails the pointed detail."""
        vee = poset_from_relation([A, B], [], "pair")
        payload = json.loads(run(runner, "check", write_basis(vee)).output)
        assert payload["report"]["details"][1]["holds"] is False

    def test_props_finitary_witness(self, runner, write_basis, butterfly):
        """Test the butterfly witness."""
        result = run(runner, "props", write_basis(butterfly), predicate="finitary-basis")
        assert result.exit_status == 1
        assert json.loads(result.output)["report"]["witness"] == ["atom:a", "atom:b"]

    def test_props_subset(self, runner, write_basis, flat3):
        """Test a subset predicate given as a term list."""
        path = write_basis(flat3)
        assert run(runner, "props", path, predicate="ideal", subset="bot,atom:t").exit_status == 0
        assert run(runner, "props", path, predicate="ideal", subset="atom:t").exit_status == 1
        assert run(runner, "props", path, predicate="chain", subset=["bot", "atom:f"]).exit_status == 0

    def test_props_all(self, runner, write_basis, diamond):
        """Test that no predicate reports every whole-poset predicate."""
        payload = json.loads(run(runner, "props", write_basis(diamond)).output)
        assert [d["predicate"] for d in payload["report"]["details"]] == [
            "finitary-basis",
            "cpo",
            "domain",
        ]

    def test_props_weak_ideal_cap(self, write_basis, flat3):
        """Test that a capped chain scan exits 3."""
        runner = CommandRunner(WorkbenchContextProvider.get_context_from_params(subset_cap=2))
        path = write_basis(flat3)
        result = run(runner, "props", path, predicate="weak-ideal", subset="bot,atom:t,atom:f")
        assert result.exit_status == 3

    def test_props_errors(self, runner, write_basis, flat3):
        """Test unknown predicates and missing subsets."""
        path = write_basis(flat3)
        assert run(runner, "props", path, predicate="lattice").exit_status == 2
        assert run(runner, "props", path, predicate="directed").exit_status == 2


class TestDomainVerbs:
    """Tests for complete, iso, subdomain and export."""

    def test_complete(self, runner, write_basis, flat3):
        """Test the completion of a flat basis."""
        result = run(runner, "complete", write_basis(flat3))
        assert len(json.loads(result.output)["elements"]) == 3

    def test_iso(self, runner, write_basis, flat3, xy_flat3, chain3):
        """Test isomorphic and non-isomorphic pairs."""
        result = run(runner, "iso", write_basis(flat3), write_basis(xy_flat3))
        payload = json.loads(result.output)
        assert result.exit_status == 0 and payload["isomorphic"] is True
        assert dict(map(tuple, payload["witness"]))["bot"] == "bot"
        assert run(runner, "iso", write_basis(flat3), write_basis(chain3)).exit_status == 1

    def test_subdomain(self, runner, write_basis, flat3, flat2):
        """Test subdomain checks between files."""
        single = lift_antichain(["t"], "flat-t")
        assert run(runner, "subdomain", write_basis(single), write_basis(flat3)).exit_status == 0
        assert run(runner, "subdomain", write_basis(flat2), write_basis(flat3)).exit_status == 1

    def test_export(self, runner, write_basis, flat3):
        """Test that export prints the DOT rendering."""
        assert run(runner, "export", write_basis(flat3)).output == export_dot(flat3)
        completed = run(runner, "export", write_basis(flat3), completion=True).output
        assert completed.count("->") == 2


class TestAmVerb:
    """Tests for the am verb."""

    def test_enumerate(self, runner, write_basis, flat2):
        """Test that three mappings exist between two-element flat bases."""
        path = write_basis(flat2)
        payload = json.loads(run(runner, "am", path, path, action="enumerate").output)
        assert payload["count"] == 3

    def test_check(self, runner, write_basis, flat2):
        """Test checking a relation that is not downward closed."""
        path = write_basis(flat2)
        result = run(runner, "am", path, path, action="check", pairs="am{(atom:a,atom:a)}")
        assert result.exit_status == 1

    def test_close(self, runner, write_basis, flat2):
        """Test closing a one-step seed."""
        path = write_basis(flat2)
        result = run(runner, "am", path, path, action="close", pairs="am{(atom:a,atom:a)}")
        payload = json.loads(result.output)
        assert result.exit_status == 0
        assert payload["size"] == 3
        assert payload["generators"] == "am{(atom:a,atom:a)}"

    def test_close_without_lub(self, runner, write_basis, flat3):
        """Test that a seed needing a missing lub exits 1 with a witness."""
        path = write_basis(flat3)
        result = run(
            runner, "am", path, path, action="close", pairs="am{(atom:t,atom:t),(atom:t,atom:f)}"
        )
        assert result.exit_status == 1
        witness = json.loads(result.output)["witness"]
        assert witness[0] == "atom:t"
        assert sorted(witness[1:]) == ["atom:f", "atom:t"]

    def test_pairs_must_be_mapping_term(self, runner, write_basis, flat2):
        """Test that pairs must be an am term."""
        path = write_basis(flat2)
        assert run(runner, "am", path, path, action="check", pairs="atom:a").exit_status == 2

    def test_product_cap(self, write_basis, flat3):
        """Test that the enumeration cap exits 3."""
        runner = CommandRunner(WorkbenchContextProvider.get_context_from_params(am_product_cap=1))
        path = write_basis(flat3)
        assert run(runner, "am", path, path, action="enumerate").exit_status == 3


class TestConstructorVerbs:
    """Tests for sum, prod, fun, star and rec."""

    def test_sum_and_prod(self, runner, write_basis, flat2, flat3):
        """Test the sizes of written sums and products."""
        a, b = write_basis(flat2), write_basis(flat3)
        assert len(parse_basis(run(runner, "sum", a, b).output)) == 4
        assert len(parse_basis(run(runner, "prod", b, b).output)) == 5

    def test_fun(self, runner, write_basis, flat2):
        """Test strict and full function spaces."""
        path = write_basis(flat2)
        assert len(parse_basis(run(runner, "fun", path, path).output)) == 2
        assert len(parse_basis(run(runner, "fun", path, path, strict=False).output)) == 3

    def test_star_and_rec(self, runner, write_basis, flat2):
        """Test bounded stars and records."""
        path = write_basis(flat2)
        assert len(parse_basis(run(runner, "star", path, max_len=0).output)) == 2
        assert len(parse_basis(run(runner, "star", path).output)) == 4
        assert len(parse_basis(run(runner, "rec", path, labels="l,m").output)) == 4

    def test_full_order(self, runner, write_basis, flat2):
        """Test that full_order writes the given relation."""
        path = write_basis(flat2)
        output = run(runner, "star", path, max_len=1, full_order=True).output
        assert json.loads(output)["closure"] == "given"

    def test_cardinality_cap(self, write_basis, flat3):
        """Test that a constructor cap exits 3."""
        runner = CommandRunner(WorkbenchContextProvider.get_context_from_params(cardinality_cap=4))
        path = write_basis(flat3)
        result = run(runner, "prod", path, path)
        assert result.exit_status == 3
        assert "prod" in result.diagnostics


class TestCoopVerb:
    """Tests for the coop verb."""

    def test_flat2(self, runner, write_basis, flat2):
        """Test the two-stage run over the flat-2 base."""
        result = run(runner, "coop", base=write_basis(flat2), labels="l", max_seq_len=1, iters=2)
        payload = json.loads(result.output)
        assert result.exit_status == 0
        assert payload["stage_sizes"] == [1, 2, 5]
        assert payload["stop_reason"] == "iter_cap"
        assert payload["verification"]["holds"] is True

    def test_emit_stages(self, runner, write_basis, flat2, tmp_path):
        """Test that every stage is written as a basis file."""
        out = tmp_path / "stages"
        run(runner, "coop", base=write_basis(flat2), labels="l", iters=2, emit_stages=str(out))
        assert sorted(p.name for p in out.iterdir()) == ["O_0.json", "O_1.json", "O_2.json"]
        assert len(parse_basis((out / "O_2.json").read_text())) == 5

    def test_cap(self, runner, write_basis, flat2):
        """Test that a cap exits 3 with the completed prefix."""
        result = run(runner, "coop", base=write_basis(flat2), labels="l", iters=3, max_card=3)
        assert result.exit_status == 3
        trace = json.loads(result.output)["trace"]
        assert trace["stage_sizes"] == [1, 2]
        assert trace["stop_reason"] == "card_cap"

    def test_bad_base(self, runner, write_basis, butterfly):
        """Test that a base that is not finitary exits 2."""
        assert run(runner, "coop", base=write_basis(butterfly), labels="l").exit_status == 2


class TestInputErrors:
    """Tests for unreadable and malformed inputs."""

    def test_missing_file(self, runner, tmp_path):
        """Test that a missing file exits 2."""
        result = run(runner, "check", str(tmp_path / "absent.json"))
        assert result.exit_status == 2
        assert "cannot read" in result.diagnostics

    def test_malformed_json(self, runner, tmp_path):
        """Test that malformed JSON exits 2."""
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        assert run(runner, "check", str(path)).exit_status == 2

    def test_invalid_utf8(self, runner, tmp_path):
        """Test that a file that is not UTF-8 exits 2."""
        path = tmp_path / "binary.json"
        path.write_bytes(b"\xff\xfe")
        result = run(runner, "check", str(path))
        assert result.exit_status == 2
        assert "UTF-8" in result.diagnostics

    @pytest.mark.parametrize(
        "verb, elements, order",
        [
            ("star", ["bot", "rec{}"], [["bot", "rec{}"]]),
            ("star", ["atom:z", "bot"], [["atom:z", "bot"]]),
            ("rec", ["am{}", "atom:a"], [["atom:a", "am{}"]]),
        ],
    )
    def test_misplaced_bottom_term(self, runner, tmp_path, verb, elements, order):
        """Test that a bottom term above another element exits 2."""
        path = tmp_path / "odd.json"
        path.write_text(json.dumps({"elements": elements, "order": order}), encoding="utf-8")
        result = run(runner, verb, str(path), labels="l")
        assert result.exit_status == 2
        assert "least element" in result.diagnostics


class TestCLI:
    """Tests for the fire entry point."""

    @pytest.fixture
    def cli(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        return DomkitCLI()

    def test_check(self, cli, write_basis, flat3, capsys):
        """Test that check prints a report and exits 0."""
        with pytest.raises(SystemExit) as excinfo:
            cli.check(write_basis(flat3))
        assert excinfo.value.code == 0
        assert json.loads(capsys.readouterr().out)["report"]["holds"] is True

    def test_usage_error(self, cli, capsys):
        """Test that an invalid command exits 2."""
        with pytest.raises(SystemExit) as excinfo:
            cli.coop(labels="l")
        assert excinfo.value.code == 2
        assert "usage error" in capsys.readouterr().err

    def test_no_strict(self, cli, write_basis, flat2, capsys):
        """Test the no_strict flag."""
        path = write_basis(flat2)
        with pytest.raises(SystemExit):
            cli.fun(path, path, no_strict=True)
        assert len(parse_basis(capsys.readouterr().out)) == 3

    def test_config_file(self, tmp_path, write_basis, flat2, capsys):
        """Test that caps come from the configuration file."""
        config = Path(tmp_path) / "domkit.toml"
        config.write_text("[coop]\ncardinality_cap = 3\n", encoding="utf-8")
        with pytest.raises(SystemExit) as excinfo:
            DomkitCLI(config_path=str(config)).coop(base=write_basis(flat2), labels="l")
        assert excinfo.value.code == 3
