import json
import os
from pathlib import Path

import pytest

from mfkit import cli
from mfkit.mfcore import read_mf, validate

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"

# (golden name, argv); file arguments are relative to the tests directory
CASES = [
    ("validate_x3", ["validate", "data/x3.json"]),
    ("validate_bad", ["validate", "data/bad.json"]),
    ("milnor_x3y3", ["milnor", "x^3+y^3"]),
    ("milnor_x2y", ["milnor", "x^2*y", "--dmax", "10"]),
    ("global_milnor", ["global-milnor", "x^3-3*x"]),
    ("ext_self_stab", ["ext", "--self", "stab", "x^2"]),
    ("ext_k_trivial", ["ext", "--self", "trivial", "x^2", "--mode", "k"]),
    ("ext_beta_x2", ["ext-beta", "--self", "stab", "x^2", "--nmax", "3", "--dmax", "10"]),
    ("hh_x3", ["hh", "x^3"]),
    ("hh_cochain_x3", ["hh-cochain", "x^3"]),
    ("hc_x2", ["hc", "x^2", "-K", "2"]),
    ("hkr_x2", ["hkr-check", "x^2", "--mmax", "2", "--degmax", "2"]),
    ("socle_x3", ["socle", "x^3"]),
    ("ts_x3_y2", ["ts", "data/x3.json", "data/y2.json"]),
    ("dual_x3", ["dual", "data/x3.json"]),
    ("knorrer_y2", ["knorrer", "data/y2.json"]),
    ("clifford_xy", ["clifford", "--quadric", "x*y", "-N", "3", "-D", "6"]),
    ("clifford_compare", ["clifford-compare", "--gram", "1,0;0,3", "-N", "3", "-D", "6"]),
    ("hyperbolic_1", ["hyperbolic", "1"]),
    ("syntax_error", ["milnor", "x^^2"]),
]


def canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


@pytest.fixture
def in_tests(monkeypatch):
    monkeypatch.chdir(HERE)
    monkeypatch.delenv("MFKIT_FIELD", raising=False)
    monkeypatch.delenv("MFKIT_DMAX", raising=False)


@pytest.mark.parametrize("name,argv", CASES, ids=[c[0] for c in CASES])
def test_golden(in_tests, name, argv):
    doc, code = cli.run(argv)
    assert doc["exit_code"] == code
    path = GOLDEN / f"{name}.json"
    text = canonical(doc)
    if os.environ.get("MFKIT_REGEN_GOLDEN"):
        path.write_text(text)
    assert path.read_bytes() == text.encode()


def test_output_is_deterministic(in_tests):
    a, _ = cli.run(["hh", "x^3+y^3"])
    b, _ = cli.run(["hh", "x^3+y^3"])
    assert canonical(a) == canonical(b)


# --- exit codes

@pytest.mark.parametrize("argv,code", [
    (["milnor", "x^4"], 0),
    (["milnor", "x^2*y", "--dmax", "8"], 2),
    (["hh", "x^2*y", "--dmax", "8"], 2),
    (["validate", "data/bad.json"], 1),
    (["validate", "data/missing.json"], 1),
    (["milnor", "x^^2"], 1),
    (["milnor", "3"], 1),
    (["ext-beta", "--self", "stab", "x^2", "--nmax", "1"], 1),
    (["nonsense-verb"], 1),
])
def test_exit_codes(in_tests, argv, code):
    assert cli.run(argv)[1] == code


def test_main_prints_json_and_returns_code(in_tests, capsys):
    assert cli.main(["milnor", "x^3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["milnor"] == 2 and doc["stabilized"] is True


def test_main_reports_errors_on_stderr(in_tests, capsys):
    assert cli.main(["validate", "data/bad.json"]) == 1
    out = capsys.readouterr()
    assert json.loads(out.out)["code"] == "invalid_factorization"
    assert "factorization identity fails at (0,0)" in out.err


def test_syntax_error_has_position(in_tests):
    doc, code = cli.run(["milnor", "x +\n y^^2"])
    assert code == 1 and doc["code"] == "syntax"
    assert doc["line"] == 2 and doc["column"] >= 1


def test_unknown_variable(in_tests):
    doc, code = cli.run(["milnor", "x^2+z^2", "--vars", "x,y"])
    assert code == 1 and doc["code"] == "unknown_variable"


def test_unknown_flag_rejected(in_tests, capsys):
    doc, code = cli.run(["milnor", "x^2", "--frobnicate"])
    assert code == 1 and doc["code"] == "usage"


# --- configuration

def test_provenance_echoes_command_and_config(in_tests):
    doc, _ = cli.run(["milnor", "x^3", "--field", "Fp:101", "--dmax", "9"])
    prov = doc["provenance"]
    assert prov["command"] == ["mfkit", "milnor", "x^3", "--field", "Fp:101", "--dmax", "9"]
    assert prov["config"]["field"] == "Fp:101" and prov["config"]["D_max"] == 9
    assert doc["certificate"] is not None


def test_options_accepted_before_or_after_verb(in_tests):
    a, _ = cli.run(["--dmax", "9", "milnor", "x^3"])
    b, _ = cli.run(["milnor", "x^3", "--dmax", "9"])
    assert a["provenance"]["config"] == b["provenance"]["config"]
    assert a["milnor"] == b["milnor"] == 2


def test_env_configuration(in_tests, monkeypatch):
    monkeypatch.setenv("MFKIT_FIELD", "Fp:7")
    monkeypatch.setenv("MFKIT_DMAX", "11")
    doc, code = cli.run(["milnor", "x^3"])
    assert code == 0 and doc["provenance"]["config"]["field"] == "Fp:7"
    assert doc["provenance"]["config"]["D_max"] == 11
    # explicit flags win over the environment
    doc, _ = cli.run(["milnor", "x^3", "--dmax", "12"])
    assert doc["provenance"]["config"]["D_max"] == 12


def test_bad_env_is_an_error(in_tests, monkeypatch):
    monkeypatch.setenv("MFKIT_DMAX", "lots")
    doc, code = cli.run(["milnor", "x^3"])
    assert code == 1 and doc["code"] == "config"


def test_bad_field_flag(in_tests):
    assert cli.run(["milnor", "x^3", "--field", "Fp:8"])[1] == 1


def test_weights_flag(in_tests):
    doc, code = cli.run(["socle", "x^2*y+y^4", "--weights", "3,2"])
    assert code == 0 and len(doc["matrix"]) == 5
    assert cli.run(["socle", "x^3", "--weights", "1,2"])[1] == 1


def test_table_output(in_tests, capsys):
    assert cli.main(["milnor", "x^3", "--table"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert any(line.split()[:2] == ["milnor", "2"] for line in lines)
    assert any(line.startswith("provenance.config.D_max") for line in lines)


# --- factorization files

def test_written_factorization_round_trips(in_tests, tmp_path):
    out = tmp_path / "k.json"
    doc, code = cli.run(["knorrer", "data/y2.json", "-o", str(out)])
    assert code == 0 and doc["written"] == str(out)
    m = read_mf(str(out))
    assert validate(m) and m.rank == 2
    doc2, code2 = cli.run(["validate", str(out)])
    assert code2 == 0 and doc2["rank"] == 2


def test_ts_collision_requires_rename(in_tests, tmp_path):
    doc, code = cli.run(["ts", "data/x3.json", "data/x3.json"])
    assert code == 1 and doc["code"] == "variable_collision"
    out = tmp_path / "t.json"
    doc, code = cli.run(["ts", "data/x3.json", "data/x3.json", "--rename", "x=y", "-o", str(out)])
    assert code == 0 and doc["renamed"] == {"x": "y"}
    assert doc["mf"]["f"] == "x^3 + y^3" and validate(read_mf(str(out)))


def test_ext_from_files_matches_self(in_tests):
    a, _ = cli.run(["ext", "data/x3.json"])
    b, _ = cli.run(["ext", "--self", "stab", "x^3"])
    assert (a["even"], a["odd"]) == (b["even"], b["odd"]) == (1, 1)


def test_ext_needs_input(in_tests):
    doc, code = cli.run(["ext"])
    assert code == 1 and doc["code"] == "usage"


def test_clifford_requires_form(in_tests):
    assert cli.run(["clifford"])[1] == 1
    assert cli.run(["clifford", "--quadric", "x^2", "--gram", "1"])[1] == 1
