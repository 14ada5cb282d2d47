import json
import subprocess

import pytest


def run(cli, *args, stdin=None):
    return subprocess.run([cli, *args], input=stdin, capture_output=True, text=True)


@pytest.fixture()
def instance(tmp_path, cli):
    path = tmp_path / "inst.json"
    r = run(cli, "gen", "random", "--seed", "3", "--regime", "small", "--K", "2", "--out", str(path))
    assert r.returncode == 0, r.stderr
    return str(path)


def test_envelope_and_schemas(cli, instance, schema):
    out = json.loads(run(cli, "validate", instance).stdout)
    schema(out, "envelope.schema.json")
    assert out["result"]["valid"]
    relax = json.loads(run(cli, "relax", instance).stdout)
    schema(relax, "envelope.schema.json")
    schema(relax["result"], "fractional_plan.schema.json")
    rnd = json.loads(run(cli, "round", instance, "--algorithm", "LC", "--trials", "20", "--budget-audit").stdout)
    schema(rnd["result"], "trial_stats.schema.json")
    orc = json.loads(run(cli, "oracle", instance).stdout)
    schema(orc["result"], "oracle_result.schema.json")


def test_round_is_byte_identical(cli, tmp_path):
    path = str(tmp_path / "zero.json")
    assert run(cli, "gen", "random", "--seed", "5", "--out", path).returncode == 0
    args = ("round", path, "--algorithm", "NC", "--trials", "1", "--seed", "7")
    a, b = run(cli, *args), run(cli, *args)
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_csv_output(cli, instance, tmp_path):
    csv = tmp_path / "t.csv"
    r = run(cli, "round", instance, "--algorithm", "LC", "--trials", "5", "--csv", str(csv))
    assert r.returncode == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "seed,reward,discarded,usage_1,usage_2"
    assert len(lines) == 6


def test_exit_codes(cli, tmp_path):
    bad = run(cli, "validate", "-", stdin="{")
    assert bad.returncode == 1
    diag = json.loads(bad.stderr.strip().splitlines()[-1])
    assert diag["error"]
    path = tmp_path / "k.json"
    assert run(cli, "gen", "kcover", "--n", "9", "--sets", "1,3,9;2,4;5,6,7", "--k", "2", "--out", str(path)).returncode == 0
    assert run(cli, "oracle", str(path), "--max-assignments", "2").returncode == 2
    assert run(cli, "round", str(path), "--algorithm", "LC", "--eta", "0.6").returncode == 1
    opt = json.loads(run(cli, "oracle", str(path)).stdout)
    assert opt["result"]["opt_value"] == "6"


def test_bench_rows(cli):
    r = run(cli, "bench", "--suite", "kcover", "--count", "2", "--trials", "50")
    assert r.returncode == 0, r.stderr
    rows = json.loads(r.stdout)["result"]["rows"]
    assert len(rows) == 2
    for row in rows:
        assert float(row["gamma"]) >= float(row["opt"]) - 1e-9

