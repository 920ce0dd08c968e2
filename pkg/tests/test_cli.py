"""Exit codes, artifact emission, and byte determinism of the CLI."""

import csv

import numpy as np
import pytest

from zmcnoid import cli
from zmcnoid.meshio import read_obj, read_ply


def run_cli(argv):
    return cli.run(argv)


def run_expect_usage_error(argv):
    with pytest.raises(SystemExit) as exc:
        cli.run(argv)
    return exc.value.code


# ---------------------------------------------------------------------------
# mesh
# ---------------------------------------------------------------------------

def test_mesh_obj_export(tmp_path, capsys):
    out = str(tmp_path / "noid.obj")
    assert run_cli(["mesh", "--n", "3", "--grid", "16x24", "--out", out]) == 0
    verts, faces = read_obj(out)
    assert verts.shape == (16 * 24, 3)
    assert faces.shape[0] > 0
    assert (tmp_path / "noid.obj.causal.csv").exists()
    assert "vertices" in capsys.readouterr().out


def test_mesh_ply_from_suffix(tmp_path):
    out = str(tmp_path / "noid.ply")
    assert run_cli(["mesh", "--n", "4", "--grid", "12x16", "--out", out]) == 0
    pos, causal, faces = read_ply(out)
    assert pos.shape == (12 * 16, 3)
    assert causal.shape == (12 * 16,)
    assert faces.shape[0] > 0


def test_mesh_explicit_format_overrides_suffix(tmp_path):
    out = str(tmp_path / "mesh.dat")
    assert run_cli(["mesh", "--n", "3", "--grid", "12x16", "--out", out,
                    "--format", "obj"]) == 0
    verts, _ = read_obj(out)
    assert verts.shape[0] == 12 * 16


def test_mesh_large_order(tmp_path):
    out = str(tmp_path / "noid17.ply")
    assert run_cli(["mesh", "--n", "17", "--grid", "10x40", "--out", out]) == 0
    pos, _, _ = read_ply(out)
    assert np.all(np.isfinite(pos))


def test_mesh_byte_determinism(tmp_path):
    a, b = str(tmp_path / "a.ply"), str(tmp_path / "b.ply")
    run_cli(["mesh", "--n", "3", "--grid", "12x16", "--out", a])
    run_cli(["mesh", "--n", "3", "--grid", "12x16", "--out", b])
    assert open(a, "rb").read() == open(b, "rb").read()


def test_mesh_usage_errors(tmp_path):
    out = str(tmp_path / "x.obj")
    assert run_expect_usage_error(["mesh", "--out", out]) == 2
    assert run_expect_usage_error(["mesh", "--n", "1", "--out", out]) == 2
    assert run_expect_usage_error(["mesh", "--n", "3", "--grid", "64", "--out", out]) == 2
    assert run_expect_usage_error(["mesh", "--n", "3", "--grid", "4x8", "--out", out]) == 2
    assert run_expect_usage_error(["mesh", "--n", "3", "--eps", "-1", "--out", out]) == 2
    assert run_expect_usage_error(
        ["mesh", "--n", "3", "--u-max", "0.5", "--out", out]) == 2
    assert run_expect_usage_error(
        ["mesh", "--n", "3", "--out", str(tmp_path / "noext")]) == 2


def test_mesh_io_error(tmp_path):
    out = str(tmp_path / "missing" / "deep" / "x.obj")
    assert run_cli(["mesh", "--n", "3", "--grid", "12x16", "--out", out]) == 3


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_stdout_json(capsys):
    code = run_cli(["verify", "--n", "3", "--seed", "42"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith('{"suite": "verify", "prng": "numpy-pcg64", "seed": 42,')
    assert out.rstrip("\n").endswith('"pass": true}')


def test_verify_stdout_byte_identical(capsys):
    run_cli(["verify", "--n", "4", "--seed", "42"])
    first = capsys.readouterr().out
    run_cli(["verify", "--n", "4", "--seed", "42"])
    second = capsys.readouterr().out
    assert first == second


def test_verify_out_file(tmp_path, capsys):
    out = str(tmp_path / "report.json")
    assert run_cli(["verify", "--n", "3", "--seed", "1", "--out", out]) == 0
    blob = open(out, "rb").read()
    assert blob.startswith(b'{"suite": "verify"')
    assert not blob.endswith(b"\n")
    assert "checks passed" in capsys.readouterr().out


def test_verify_failure_exit_code(capsys):
    code = run_cli(["verify", "--n", "3", "--seed", "0",
                    "--tol", "weierstrass.null_form=1e-30"])
    assert code == 1
    assert '"pass": false' in capsys.readouterr().out


def test_verify_tol_validation():
    assert run_expect_usage_error(["verify", "--tol", "nosuch.check=1e-3"]) == 2
    assert run_expect_usage_error(["verify", "--tol", "chebyshev.positivity=1e-3"]) == 2
    assert run_expect_usage_error(["verify", "--tol", "badformat"]) == 2
    assert run_expect_usage_error(["verify", "--tol", "weierstrass.null_form=-1"]) == 2
    assert run_expect_usage_error(["verify", "--n", "0"]) == 2


def test_verify_io_error(tmp_path):
    out = str(tmp_path / "nodir" / "report.json")
    assert run_cli(["verify", "--n", "3", "--out", out]) == 3


# ---------------------------------------------------------------------------
# levels
# ---------------------------------------------------------------------------

def test_levels_copy_count(tmp_path):
    out = str(tmp_path / "levels.csv")
    assert run_cli(["levels", "--n", "6", "--h", "0.01", "--out", out]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["h", "copy_index", "param", "x", "y", "t"]
    copies = {r[1] for r in rows[1:]}
    assert copies == {str(k) for k in range(6)}
    assert len(rows) == 1 + 6 * 512


def test_levels_rays_and_dedup(tmp_path, capsys):
    out = str(tmp_path / "rays.csv")
    code = run_cli(["levels", "--n", "6", "--h", "0", "--h", "0", "--out", out])
    assert code == 0
    assert "12 curves" in capsys.readouterr().out
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 12 * 512


def test_levels_mixed_heights(tmp_path):
    out = str(tmp_path / "mix.csv")
    assert run_cli(["levels", "--n", "3", "--h", "0.5", "--h", "-0.5",
                    "--out", out]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    hs = sorted({float(r[0]) for r in rows[1:]})
    assert hs == [-0.5, 0.5]


def test_levels_usage_errors(tmp_path):
    out = str(tmp_path / "x.csv")
    assert run_expect_usage_error(["levels", "--n", "2", "--h", "1", "--out", out]) == 2
    assert run_expect_usage_error(["levels", "--n", "3", "--out", out]) == 2
    assert run_expect_usage_error(
        ["levels", "--n", "3", "--h", "1", "--u-max", "0.5", "--out", out]) == 2


def test_levels_io_error(tmp_path):
    out = str(tmp_path / "nope" / "x.csv")
    assert run_cli(["levels", "--n", "3", "--h", "1", "--out", out]) == 3


# ---------------------------------------------------------------------------
# report, parser plumbing
# ---------------------------------------------------------------------------

def test_report_stdout(capsys):
    assert run_cli(["report", "--n", "4"]) == 0
    text = capsys.readouterr().out
    assert "zmcnoid mesh --n 4" in text
    assert "zmcnoid verify" in text
    assert "8 straight rays" in text


def test_report_to_file(tmp_path):
    out = str(tmp_path / "recipes.md")
    assert run_cli(["report", "--out", out]) == 0
    text = open(out).read()
    assert text.startswith("# Surface artifact recipes (n = 3)")


def test_unknown_subcommand():
    assert run_expect_usage_error(["frobnicate"]) == 2
    assert run_expect_usage_error([]) == 2


def test_main_exits_with_run_code(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr("sys.argv", ["zmcnoid", "report"])
    with pytest.raises(SystemExit) as exc:
        cli.main()
    assert exc.value.code == 0
    assert "recipes" in capsys.readouterr().out
