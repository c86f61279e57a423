import csv
import io
import math
import subprocess
import sys

import pytest

import ekfrac.cli as cli
from ekfrac.errors import ConvergenceError


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(out):
    return list(csv.reader(io.StringIO(out)))


def test_weights(capsys):
    code, out, _ = run_cli(capsys, "weights", "--alpha", "0.5", "--beta", "0.5", "--n", "5", "--with-d")
    rows = parse(out)
    assert code == 0 and rows[0] == ["i", "c", "d"] and len(rows) == 6
    total = math.fsum(float(r[1]) for r in rows[1:])
    assert total == pytest.approx(1 / math.gamma(1.5), rel=1e-14)
    code, out, _ = run_cli(capsys, "weights", "--alpha", "0.5", "--beta", "0.5", "--n", "3")
    assert parse(out)[0] == ["i", "c"]


def test_op_order(capsys):
    code, out, _ = run_cli(
        capsys, "op-order", "--alpha", "0.25", "--beta", "0.65", "--fn", "pow2", "--grid", "100,200,400"
    )
    rows = parse(out)
    assert code == 0
    assert rows[0] == ["n", "err_L", "err_K", "err_G", "p_L", "p_K", "p_G"]
    assert 0.9 < float(rows[1][6]) < 1.1


def test_op_order_large_gate(capsys):
    code, _, err = run_cli(
        capsys, "op-order", "--alpha", "0.25", "--beta", "0.65", "--fn", "exp", "--grid", "100000"
    )
    assert code == 2 and "--large" in err


def test_solve(capsys, tmp_path):
    out_file = tmp_path / "run.csv"
    code, out, _ = run_cli(
        capsys, "solve", "--alpha", "0.7", "--beta", "0.15", "--N", "6", "--steps", "10",
        "--T", "1", "--ic", "gauss", "--out", str(out_file),
    )
    assert code == 0 and out == ""
    data = out_file.read_bytes()
    assert b"\r" not in data
    rows = parse(data.decode())
    assert rows[0] == ["step", "t", "norm", "stable"] and len(rows) == 12
    assert all(r[3] == "true" for r in rows[1:])


def test_solver_order(capsys):
    code, out, _ = run_cli(
        capsys, "solver-order", "--alpha", "0.7", "--beta", "0.15", "--N", "5",
        "--ic", "gauss", "--grid", "20,40,80",
    )
    rows = parse(out)
    assert code == 0 and rows[0] == ["steps", "err", "p"] and rows[-1][2] == "nan"


def test_spectral_order(capsys):
    code, out, _ = run_cli(
        capsys, "spectral-order", "--alpha", "0.6", "--beta", "1", "--steps", "20",
        "--grid", "2,4,8", "--reference-N", "8",
    )
    rows = parse(out)
    assert code == 0 and rows[0] == ["N", "err"] and rows[-1] == ["8", "0"]
    code, out, _ = run_cli(
        capsys, "spectral-order", "--alpha", "0.6", "--beta", "1", "--steps", "20", "--grid", "2,4", "--exact"
    )
    assert code == 0 and len(parse(out)) == 3


def test_stability_sweep(capsys):
    code, out, _ = run_cli(
        capsys, "stability-sweep", "--grid-alpha", "0.15,0.9", "--grid-beta", "0.35,0.7", "--steps", "40"
    )
    rows = parse(out)
    assert code == 0 and rows[0] == ["alpha", "beta", "ratio", "pass"] and len(rows) == 5
    assert all(r[3] == "true" for r in rows[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["weights", "--alpha", "3", "--beta", "0.5", "--n", "4"],
        ["weights", "--alpha", "0.5", "--beta", "0.5", "--n", "0"],
        ["weights", "--alpha", "0.5"],
        ["bogus"],
        ["op-order", "--alpha", "0.5", "--beta", "0.5", "--fn", "one", "--grid", "4"],
        ["op-order", "--alpha", "0.5", "--beta", "0.5", "--fn", "exp", "--grid", "8,4"],
        ["solver-order", "--alpha", "0.5", "--beta", "0.5", "--N", "4", "--grid", "a,b"],
    ],
)
def test_invalid_arguments(capsys, argv):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 2 and out == ""


def test_numerical_failure(capsys, monkeypatch):
    def boom(*a, **k):
        raise ConvergenceError("no convergence")

    monkeypatch.setattr(cli, "weights_table", boom)
    code, _, err = run_cli(capsys, "weights", "--alpha", "0.5", "--beta", "0.5", "--n", "4")
    assert code == 3 and "no convergence" in err


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "ekfrac", "weights", "--alpha", "0.5", "--beta", "0.5", "--n", "2"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout.startswith("i,c\n")
