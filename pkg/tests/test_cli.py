import json

import pytest
from click.testing import CliRunner

from odekit.cli import main
from odekit.engine import NAMES


@pytest.fixture
def run(monkeypatch):
    monkeypatch.delenv("ODEKIT_SEED", raising=False)
    runner = CliRunner()

    def go(*args, env=None):
        return runner.invoke(main, list(args), env=env)
    return go


E4 = ("--P", "y^2", "--Q", "0", "--R", "1", "--S", "0")


def test_classify_E4(run):
    res = run("classify", *E4)
    assert res.exit_code == 0
    assert "shr_label: ShrID1" in res.output


def test_classify_zero_equation(run):
    res = run("classify", "--P", "0", "--Q", "0", "--R", "0", "--S", "0")
    assert res.exit_code == 0
    assert "ShrMD" in res.output and "BgdET9" in res.output


def test_parse_error_exit_code(run):
    res = run("classify", "--P", "1/(")
    assert res.exit_code == 2
    assert "position 3" in res.output and "^" in res.output


def test_classify_json_is_reproducible(run):
    a = run("classify", *E4, "--json", "--seed", "3").output
    b = run("classify", *E4, "--json", "--seed", "3").output
    assert a == b
    assert json.loads(a)["shr_label"] == "ShrID1"


def test_invariants(run):
    res = run("invariants", "--P", "y^2", "--S", "x^2", "--name", "F5", "--name", "A")
    assert res.exit_code == 0
    assert "A = 2 + 4*x*y^2" in res.output
    res = run("invariants", *E4, "--name", "j4", "--json")
    assert json.loads(res.output)["values"]["j4"]["expr"] == "-18*y"


def test_invariants_errors(run):
    res = run("invariants", "--P", "0", "--name", "Omega")
    assert res.exit_code == 2 and "error" in res.output
    res = run("invariants", "--P", "0", "--name", "Nope")
    assert res.exit_code == 2
    assert "valid names" in res.output and NAMES[0] in res.output


def test_transform_identity(run):
    res = run("transform", *E4, "--xt", "x", "--yt", "y")
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert "P = y^2" in lines and "R = 1" in lines and "mode: new-coordinates" in lines


def test_transform_singular_and_pulled_back(run):
    assert run("transform", *E4, "--xt", "x", "--yt", "x").exit_code == 2
    res = run("transform", "--P", "y^2", "--xt", "x + y^3", "--yt", "y + x^3")
    assert res.exit_code == 0 and "mode: pulled-back" in res.output


def test_reduce(run):
    res = run("reduce", "--expr", "S[1,2] + Q[0,2]")
    assert res.output.strip() == "2*R[1,1] - 3*R*Q[0,1] + 6*R*R[1,0]"


def test_input_files(run, tmp_path):
    ode = tmp_path / "e4.txt"
    ode.write_text("# example\nP = y^2\nR: 1\n")
    mp = tmp_path / "map.txt"
    mp.write_text("xt = x + y^2\nyt = y\n")
    assert "ShrID1" in run("classify", "--input", str(ode)).output
    res = run("transform", "--input", str(ode), "--map", str(mp))
    assert res.exit_code == 0 and "mode: new-coordinates" in res.output
    bad = tmp_path / "bad.txt"
    bad.write_text("T = x\n")
    res = run("classify", "--input", str(bad))
    assert res.exit_code == 2 and "unknown key" in res.output


def test_verify_suites(run):
    res = run("verify", "--suite", "unconditional")
    assert res.exit_code == 0
    a = run("verify", "--suite", "special", "--json").output
    b = run("verify", "--suite", "special", "--json").output
    assert a == b and json.loads(a)["ok"]


def test_seed_env_override(run):
    plain = run("verify", "--suite", "expressibility", "--json", "--seed", "1").output
    env = run("verify", "--suite", "expressibility", "--json", "--seed", "5",
              env={"ODEKIT_SEED": "1"}).output
    assert json.loads(env)["seed"] == 1
    assert plain == env
    assert run("verify", "--suite", "expressibility", env={"ODEKIT_SEED": "x"}).exit_code == 2


def test_table(run):
    res = run("table")
    assert res.exit_code == 0 and "ShrGP" in res.output and "BgdET9" in res.output
