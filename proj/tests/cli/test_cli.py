# SPDX-License-Identifier: Apache-2.0
"""End-to-end tests of the lipnet command line tool."""

import csv
import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("LIPNET_CLI", "lipnet")


def run(*args, cwd=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, cwd=cwd)


def generate(tmp_path, name, *args):
    out = tmp_path / name
    result = run("generate", *args, "--output", out)
    assert result.returncode == 0, result.stderr
    return out


def test_generate_one_dimensional_spiderweb(tmp_path):
    path = generate(tmp_path, "w.txt", "--kind", "spiderweb", "--dim", 1, "--a", 1, "--radius", 4)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("dim=1 norm=LINF a=1 b=2 radius=4")
    # The origin is implicit; dyadic layers {+-1}, {+-2}, {+-4} are stored and shell 3 is derived.
    assert len(lines) == 7
    report = json.loads(run("verify", path).stdout)
    assert report["spiderweb"]["points"] == 9


def test_generate_is_deterministic(tmp_path):
    for kind in ("spiderweb", "net", "grid"):
        args = ["--kind", kind, "--dim", 2, "--radius", 4, "--seed", 7, "--cap", 2]
        first = generate(tmp_path, f"{kind}1.txt", *args).read_bytes()
        second = generate(tmp_path, f"{kind}2.txt", *args).read_bytes()
        assert first == second


def test_usage_errors_exit_2(tmp_path):
    assert run("generate", "--a", 0).returncode == 2
    assert run("generate", "--a", -1).returncode == 2
    assert run("generate", "--kind", "bogus").returncode == 2
    assert run("sweep", "--sweep-dims", "").returncode == 2
    assert run("nonexistent-command").returncode == 2
    assert run().returncode == 2


def test_parse_errors_exit_3(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    result = run("verify", empty)
    assert result.returncode == 3
    assert result.stderr
    garbage = tmp_path / "garbage.txt"
    garbage.write_text("dim=1 norm=LINF a=1 b=2\nnot-a-number\n")
    assert run("verify", garbage).returncode == 3
    assert run("verify", tmp_path / "missing.txt").returncode == 3


def test_verify_spiderweb_reports_and_gates(tmp_path):
    path = generate(tmp_path, "w.txt", "--kind", "spiderweb", "--dim", 1, "--a", 1, "--radius", 4)
    report_path = tmp_path / "r.json"
    csv_path = tmp_path / "r.csv"
    result = run("verify", path, "--report", report_path, "--csv", csv_path)
    assert result.returncode == 0, result.stderr
    report = json.loads(report_path.read_text())
    assert report["schema_version"] == 1
    assert report["config"]["seed"] == 1
    assert report["pass"] is True
    assert report["family_constant"]["measured"] <= 26
    assert report["family_constant"]["gate"] == 26
    rows = list(csv.DictReader(csv_path.open()))
    assert [int(r["level"]) for r in rows] == list(range(5))


def test_verify_mutated_family_fails_with_witness(tmp_path):
    path = generate(tmp_path, "f.txt", "--kind", "spiderweb", "--dim", 1, "--a", 1, "--radius", 4, "--rule", "flipped")
    result = run("verify", path)
    assert result.returncode == 1
    report = json.loads(result.stdout)
    assert report["pass"] is False
    failed = [a for a in report["certification"]["axioms"] if not a["pass"]]
    assert failed
    assert any(a["witness"] is not None for a in failed)


def test_reports_are_byte_identical_across_thread_counts(tmp_path):
    path = generate(tmp_path, "w.txt", "--kind", "spiderweb", "--dim", 2, "--a", 1, "--radius", 4)
    outputs = []
    for threads in ("1", "3"):
        env = dict(os.environ, LIPNET_THREADS=threads)
        result = subprocess.run([CLI, "verify", str(path)], capture_output=True, env=env)
        assert result.returncode == 0
        outputs.append(result.stdout)
    assert outputs[0] == outputs[1]


def test_sweep_rows_and_bound_column(tmp_path):
    csv_path = tmp_path / "s.csv"
    result = run("sweep", "--a", 1, "--radius", 8, "--sweep-dims", "1,2,3", "--norm", "LINF", "--csv", csv_path)
    assert result.returncode == 0, result.stderr
    rows = list(csv.DictReader(csv_path.open()))
    assert [r["dimension"] for r in rows] == ["1", "2", "3"]
    assert {r["bound"] for r in rows} == {"26"}
    for r in rows:
        assert float(r["measured_k"]) <= 26
        assert float(r["max_radial_gap"]) <= 12
    single = tmp_path / "one.csv"
    assert run("sweep", "--a", 1, "--radius", 8, "--sweep-dims", "1", "--csv", single).returncode == 0
    assert len(list(csv.DictReader(single.open()))) == 1


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"a": 1, "radius": 8, "sweep-dims": [1, 2], "norm": "L2", "seed": 9}))
    csv_path = tmp_path / "s.csv"
    result = run("sweep", "--config", config, "--norm", "L1", "--csv", csv_path)
    assert result.returncode == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["config"]["seed"] == 9
    rows = list(csv.DictReader(csv_path.open()))
    assert [r["norm"] for r in rows] == ["L1", "L1"]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("sweep", "--config", bad).returncode == 2


def test_basis_constant(tmp_path):
    path = generate(tmp_path, "w.txt", "--kind", "spiderweb", "--dim", 2, "--a", 1, "--radius", 8)
    result = run("basis-constant", path, "--points", 40, "--samples", 100)
    assert result.returncode == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["free_norm"]["value"] <= report["measured_k"] + 1e-9
    assert report["free_norm"]["max_duality_gap"] <= 1e-8


def test_verify_net_file(tmp_path):
    path = generate(tmp_path, "n.txt", "--kind", "net", "--dim", 2, "--a", 1, "--radius", 13, "--seed", 2)
    result = run("verify", path)
    assert result.returncode == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["transfer"]["distortion"] <= 45
    assert report["transfer"]["max_displacement"] <= 1 / 3
    assert report["transported_family"]["measured"] <= 1170


def test_grid_verify_small(tmp_path):
    path = generate(tmp_path, "g.txt", "--kind", "grid", "--cap", 2)
    report_path = tmp_path / "g.json"
    result = run("grid-verify", path, "--contrast", "--grid-samples", 2000, "--report", report_path)
    assert result.returncode == 0, result.stderr
    report = json.loads(report_path.read_text())
    assert report["grid"]["points"] == 625
    assert all(i["pass"] for i in report["identities"])
    assert report["griddability"]["pass"]
    assert report["griddability_contrast"]["l1_strictly_worse"]
    # The same grid built from options gives the same report body.
    direct = json.loads(run("grid-verify", "--cap", 2, "--contrast", "--grid-samples", 2000).stdout)
    for key in ("grid", "identities", "proximity", "F_lipschitz", "griddability"):
        assert direct[key] == report[key]


def test_incomplete_grid_file_is_rejected(tmp_path):
    path = generate(tmp_path, "g.txt", "--kind", "grid", "--cap", 2)
    lines = path.read_text().splitlines()
    truncated = tmp_path / "t.txt"
    truncated.write_text("\n".join(lines[:-3]) + "\n")
    assert run("grid-verify", truncated).returncode == 3
