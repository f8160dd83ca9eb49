import json
from fractions import Fraction

import pytest

from modcount import main as cli
from modcount.middleware.errors import UsageError, exit_code_for
from modcount.schemas import CheckRow, VerifyReport
from modcount.services import moduli_service, verify_service
from modcount.services.fatgraph_service import UnsupportedSize
from modcount.services.moduli_service import InvariantViolation, UnstableType


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out.strip()


def test_parse_command_collects_options():
    command = cli.parse_command(["count", "--genus", "0", "--lengths", "2,2,2,2", "--method", "belyi", "--jobs", "2"])
    assert command.verb == "count"
    assert command.action is None
    assert command.options == {"genus": 0, "lengths": [2, 2, 2, 2], "method": "belyi"}
    assert command.jobs == 2
    assert command.output_format == "table"


def test_parse_command_nested_action():
    command = cli.parse_command(["hurwitz", "trace", "--degree", "4", "--classes", "4;2,2;4"])
    assert (command.verb, command.action) == ("hurwitz", "trace")
    assert command.options["classes"] == [(4,), (2, 2), (4,)]


def test_parse_command_rational_list():
    command = cli.parse_command(["laplace", "asymptotic", "--genus", "1", "--boundaries", "1", "--s", "1/10,1/50"])
    assert command.options["s"] == [Fraction(1, 10), Fraction(1, 50)]


def test_environment_cache_wins(monkeypatch):
    monkeypatch.setattr(cli, "CACHE_DIR", "/tmp/from-env")
    command = cli.parse_command(["poly", "--genus", "1", "--boundaries", "1", "--cache-dir", "/tmp/from-flag"])
    assert command.cache_dir == "/tmp/from-env"


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--genus", "-1", "--lengths", "2"],
        ["count", "--genus", "0", "--genus", "1", "--lengths", "2,2,2"],
        ["count", "--genus", "0", "--lengths", "2,x"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        cli.parse_command(argv)


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["count", "--genus", "0", "--lengths", "2,2,2,2", "--method", "belyi"], "3"),
        (["count", "--genus", "0", "--lengths", "2,2,2,2", "--method", "direct"], "3"),
        (["count", "--genus", "1", "--lengths", "6", "--method", "hz"], "2/3"),
        (["count", "--genus", "1", "--lengths", "4,2"], "1/2"),
        (["euler", "--genus", "2", "--boundaries", "1", "--method", "zeta"], "1/120"),
        (["euler", "--genus", "1", "--boundaries", "1"], "-1/12"),
        (["vpf", "count", "--matrix", "1,2,2;1,0,0", "--b", "7,3", "--strict"], "1"),
        (["vpf", "index", "--matrix", "1,2,2;1,0,0"], "2"),
        (["vpf", "volume", "--matrix", "1,2,2;1,0,0", "--b", "9,2"], "7/4"),
        (["hurwitz", "trace", "--degree", "4", "--classes", "4;2,2;4"], "1/4"),
        (["hurwitz", "elsv", "--genus", "0", "--mu", "1,3"], "27"),
        (["hurwitz", "simple", "--genus", "1", "--mu", "2"], "1/2"),
    ],
)
def test_table_output(capsys, argv, expected):
    code, out = run_cli(capsys, *argv, "--jobs", "1")
    assert code == 0
    assert out == expected


def test_fatgraph_table(capsys):
    code, out = run_cli(capsys, "fatgraphs", "--genus", "0", "--boundaries", "3", "--jobs", "1")
    assert code == 0
    assert out.splitlines()[-1] == "# 7 labeled from 3 unlabeled"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["count", "--genus", "-1", "--lengths", "2"], 1),
        (["count", "--genus", "0", "--lengths", "1,1"], 1),
        (["fatgraphs", "--genus", "2", "--boundaries", "2"], 2),
        (["count", "--genus", "0", "--lengths", "4,4,6", "--method", "belyi"], 2),
        (["hurwitz", "elsv", "--genus", "2", "--mu", "3"], 2),
        (["vpf", "index", "--matrix", "1,1;1,1"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run_cli(capsys, *argv, "--jobs", "1")[0] == code


def test_exit_code_mapping():
    assert exit_code_for(UnsupportedSize("x")) == 2
    assert exit_code_for(InvariantViolation("x")) == 3
    assert exit_code_for(UnstableType("x")) == 1
    assert exit_code_for(KeyError("x")) == 3


def test_json_output_is_deterministic(capsys, fresh_memo):
    argv = ["poly", "--genus", "1", "--boundaries", "1", "--format", "json", "--jobs", "1"]
    _, first = run_cli(capsys, *argv)
    _, second = run_cli(capsys, *argv)
    assert first == second
    payload = json.loads(first)
    assert payload["vars"] == 1
    monomials = payload["classes"][0]["poly"]["monomials"]
    assert {m["coef"] for m in monomials} == {"-1/12", "1/48"}


def test_json_value_response(capsys):
    _, out = run_cli(capsys, "count", "--genus", "1", "--lengths", "4", "--format", "json", "--jobs", "1")
    payload = json.loads(out)
    assert payload["value"] == "1/4"
    assert payload["method"] == "recursive"
    assert list(payload) == sorted(payload)


def test_asymptotic_passes(capsys):
    code, _ = run_cli(capsys, "laplace", "asymptotic", "--genus", "1", "--boundaries", "1", "--jobs", "1")
    assert code == 0


def test_verify_fails_with_exit_three(capsys, monkeypatch):
    report = VerifyReport(quick=True, rows=[CheckRow(name="always", passed=False, detail="forced")])
    monkeypatch.setattr(verify_service, "run_checks", lambda quick, jobs: report)
    code, out = run_cli(capsys, "verify", "--quick", "--jobs", "1")
    assert code == 3
    assert "FAIL" in out


def test_asymptotic_table_is_exact(capsys):
    code, out = run_cli(capsys, "laplace", "asymptotic", "--genus", "1", "--boundaries", "1", "--s", "1/10", "--jobs", "1")
    assert code == 0
    first, verdict = out.splitlines()
    assert first.startswith("s=1/10 |ratio|-1 ~ 0.095017 ratio=")
    assert "/" in first.split("ratio=")[1]
    assert "e-" not in out
    assert verdict == "PASS"


def test_dilaton_uses_cache_dir(capsys, monkeypatch, tmp_path, fresh_memo):
    monkeypatch.setattr(cli, "CACHE_DIR", None)
    code, out = run_cli(
        capsys, "dilaton", "--genus", "0", "--lengths", "2,2,2", "--cache-dir", str(tmp_path), "--jobs", "1"
    )
    assert code == 0
    assert out.splitlines()[-1] == "PASS"
    assert (tmp_path / "N_g0_n4.json").is_file()


def test_poly_spot_checks_against_enumeration(capsys, monkeypatch, fresh_memo):
    checked = []
    monkeypatch.setattr(moduli_service, "_spot_check", lambda g, n, qp: checked.append((g, n)))
    code, _ = run_cli(capsys, "poly", "--genus", "0", "--boundaries", "4", "--jobs", "1")
    assert code == 0
    assert checked == [(0, 4)]
