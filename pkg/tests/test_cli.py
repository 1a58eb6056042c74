import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from hyperjac.cli import main

SCHEMA = json.loads(resources.files("hyperjac").joinpath("report_schema.json").read_text())


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("HYPERJAC_MAX_ELEMENTS", None)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "hyperjac", *args], capture_output=True, text=True, env=full_env)


def json_lines(out):
    rows = [json.loads(line) for line in out.splitlines() if line.strip()]
    for row in rows:
        jsonschema.validate(row, SCHEMA)
    return rows


def strip_time(out):
    rows = [json.loads(line) for line in out.splitlines()]
    for row in rows:
        row.pop("elapsed_ms")
    return rows


@pytest.mark.parametrize(
    "args,expected",
    [
        (["theorem", "--genus", "1", "--level", "2"], 8),
        (["mod2-quotient", "--genus", "2"], 120),
        (["full-sp-g1", "--level", "3"], 384),
        (["mod4-rank", "--genus", "2"], 10),
        (["radical-independence", "--genus", "1"], 7),
        (["braid-relations", "--genus", "3"], 15),
        (["orders", "--genus", "2", "--level", "1"], 720),
        (["torsion4"], 12),
    ],
)
def test_single_commands_pass(args, expected):
    res = run(*args, "--json")
    assert res.returncode == 0, res.stdout + res.stderr
    rows = json_lines(res.stdout)
    assert rows[-1]["computed"] == expected and rows[-1]["passed"]
    assert all(r["schema"] == "1" for r in rows)


def test_purity_emits_two_checks():
    res = run("purity", "--genus", "2", "--samples", "200", "--seed", "4", "--json")
    assert res.returncode == 0
    rows = json_lines(res.stdout)
    assert [r["command"] for r in rows] == ["symplecticity", "purity"]
    assert all(r["seed"] == 4 for r in rows)


def test_human_output():
    res = run("theorem", "--genus", "1", "--level", "3", "-v")
    assert res.returncode == 0
    assert res.stdout.startswith("[PASS] theorem g=1 n=3: expected 64, computed 64")
    assert "minimum congruence level" in res.stdout


@pytest.mark.parametrize(
    "args",
    [
        ["theorem", "--genus", "1", "--level", "2"],
        ["braid-relations", "--genus", "2"],
        ["purity", "--genus", "1", "--samples", "100"],
        ["mod2-quotient", "--genus", "1"],
        ["full-sp-g1", "--level", "2"],
        ["mod4-rank", "--genus", "1"],
        ["radical-independence", "--genus", "1"],
        ["torsion4"],
        ["orders", "--genus", "1", "--level", "1"],
    ],
)
def test_injected_fault_fails(args):
    res = run(*args, "--inject-fault", "--json")
    assert res.returncode == 1, res.stdout + res.stderr
    assert not all(r["passed"] for r in json_lines(res.stdout))


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["nonsense"],
        ["theorem", "--genus", "1"],
        ["theorem", "--genus", "1", "--level", "1"],
        ["theorem", "--genus", "0", "--level", "2"],
        ["theorem", "--genus", "1", "--level", "99"],
        ["braid-relations", "--genus", "x"],
        ["braid-relations", "--genus", "1", "--unknown"],
        ["torsion4", "--specialize", "1,1,2"],
        ["torsion4", "--specialize", "1,2"],
        ["purity", "--genus", "1", "--samples", "0"],
    ],
)
def test_usage_errors(args):
    res = run(*args)
    assert res.returncode == 3, res.stderr
    assert res.stdout == ""


def test_help_exits_cleanly():
    assert run("--help").returncode == 0
    res = run("theorem", "--help")
    assert res.returncode == 0 and "--inject-fault" not in res.stdout


def test_resource_cap():
    res = run("theorem", "--genus", "2", "--level", "3", "--max-elements", "1000", "--json")
    assert res.returncode == 2
    row = json_lines(res.stdout)[0]
    assert row["expected"] == 2**20 and row["computed"] is None and row["data"]["aborted"]


def test_flag_beats_environment():
    env = {"HYPERJAC_MAX_ELEMENTS": "10"}
    assert run("theorem", "--genus", "1", "--level", "3", env=env).returncode == 2
    assert run("theorem", "--genus", "1", "--level", "3", "--max-elements", "64", env=env).returncode == 0


def test_dump(tmp_path):
    path = tmp_path / "closure.hex"
    res = run("theorem", "--genus", "1", "--level", "2", "--dump", str(path))
    assert res.returncode == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 8 and lines == sorted(lines)


def test_specialize():
    res = run("torsion4", "--specialize", "1/2,-3,7", "--json")
    assert res.returncode == 0
    row = json_lines(res.stdout)[0]
    assert "seed" not in row
    assert any("specialization (1/2,-3,7): ok" in d for d in row["details"])


def test_main_in_process(capsys):
    assert main(["theorem", "--genus", "1", "--level", "2", "--json"]) == 0
    row = json.loads(capsys.readouterr().out)
    assert row["expected"] == row["computed"] == 8
    assert main(["bogus"]) == 3


def test_all_is_deterministic():
    args = ("all", "--genus", "1", "--level", "2", "--seed", "3", "--samples", "200", "--json")
    a, b = run(*args), run(*args)
    assert a.returncode == b.returncode == 0
    json_lines(a.stdout)
    assert strip_time(a.stdout) == strip_time(b.stdout)
    commands = [r["command"] for r in strip_time(a.stdout)]
    assert commands == ["orders", "braid-relations", "symplecticity", "purity", "mod2-quotient",
                        "full-sp-g1", "theorem", "mod4-rank", "radical-independence", "torsion4"]
