import json
import subprocess
import sys

import pytest

from tconvex import (
    cyclic_group,
    multiplication_endo,
    serialize_endo,
    serialize_fn,
    serialize_group,
    table_fn,
    whole_group_set,
)

PY = [sys.executable, "-m", "tconvex.cli"]


def run_cli(*args, stdin=None):
    return subprocess.run(
        PY + list(args), capture_output=True, text=True, input=stdin
    )


@pytest.fixture()
def z5_files(tmp_path):
    g = cyclic_group(5)
    f = table_fn(whole_group_set(g), [0, 1, 2, 1, 0])
    fn_path = tmp_path / "f.json"
    fn_path.write_text(json.dumps(
        {"group": serialize_group(g), "fn": serialize_fn(f)}
    ))
    endo_path = tmp_path / "e.json"
    endo_path.write_text(json.dumps(
        {"endo": serialize_endo(multiplication_endo(g, 3)), "t": "1/2"}
    ))
    endos_path = tmp_path / "ts.json"
    endos_path.write_text(json.dumps(
        {"endos": [serialize_endo(multiplication_endo(g, 3))]}
    ))
    return fn_path, endo_path, endos_path


def test_check_violation_exits_one(z5_files):
    fn_path, endo_path, _ = z5_files
    proc = run_cli("check", "--kind", "quasiconvex", "--fn", str(fn_path),
                   "--endo", str(endo_path))
    assert proc.returncode == 1
    out = json.loads(proc.stdout)
    assert out["verdict"] is False and out["witness"]


def test_envelope_then_check_passes(z5_files, tmp_path):
    fn_path, endo_path, endos_path = z5_files
    proc = run_cli("envelope", "--fn", str(fn_path), "--endos", str(endos_path))
    assert proc.returncode == 0
    env_doc = json.loads(proc.stdout)
    assert env_doc["fn"]["values"] == ["0"] * 5
    env_path = tmp_path / "env.json"
    env_path.write_text(json.dumps(env_doc))
    proc2 = run_cli("check", "--kind", "quasiconvex", "--fn", str(env_path),
                    "--endo", str(endo_path))
    assert proc2.returncode == 0


def test_reads_from_stdin(z5_files):
    fn_path, endo_path, _ = z5_files
    proc = run_cli("check", "--kind", "quasiconvex", "--fn", "-",
                   "--endo", str(endo_path), stdin=fn_path.read_text())
    assert proc.returncode == 1


def test_semigroup_counts_endos(z5_files, tmp_path):
    g = cyclic_group(5)
    from tconvex import serialize_ground_set, whole_group_set as wgs

    path = tmp_path / "s.json"
    path.write_text(json.dumps({
        "group": serialize_group(g),
        "set": serialize_ground_set(wgs(g)),
    }))
    proc = run_cli("semigroup", "--input", str(path))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 5


def test_support_certificate(tmp_path):
    from tconvex import finite_set, lattice_group

    g = lattice_group(1)
    window = finite_set(g, [g.reduce([i]) for i in range(-4, 5)])
    f = table_fn(window, [x * x for x in range(-4, 5)])
    path = tmp_path / "sup.json"
    path.write_text(json.dumps({
        "group": serialize_group(g), "fn": serialize_fn(f), "p": ["2"],
    }))
    proc = run_cli("support", "--input", str(path))
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["status"] == "certificate"
    assert out["A"] == ["4"] and out["c"] == "-4"


def test_suite_exit_codes():
    proc = run_cli("suite", "--id", "empty", "--seed", "3")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["cases"] == 0
    proc2 = run_cli("suite", "--id", "does-not-exist")
    assert proc2.returncode == 2


def test_suite_writes_output_file(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("suite", "--id", "ring-laws", "--seed", "1",
                   "--cases", "5", "--output", str(out))
    assert proc.returncode == 0
    data = json.loads(out.read_text())
    assert data["suite"] == "ring-laws" and data["alarms"] == []


def test_generate_is_deterministic():
    a = run_cli("generate", "--kind", "group", "--seed", "4").stdout
    b = run_cli("generate", "--kind", "group", "--seed", "4").stdout
    assert a == b


def test_missing_file_exits_three():
    proc = run_cli("spectral", "--input", "/nonexistent/x.json")
    assert proc.returncode == 3


def test_usage_error_exits_two():
    proc = run_cli("check", "--kind", "bogus", "--fn", "x", "--endo", "y")
    assert proc.returncode == 2


def test_malformed_payload_exits_two(z5_files):
    fn_path, _, _ = z5_files
    proc = run_cli("spectral", "--input", "-", stdin="{}")
    assert proc.returncode == 2
