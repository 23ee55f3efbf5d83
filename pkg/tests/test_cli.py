import json
import subprocess
import sys

import pytest

from zslice import cli, knotio
from zslice import laurent as lp


@pytest.fixture
def knot_file(tmp_path):
    path = tmp_path / "knots.txt"
    path.write_text(knotio.format_knots([knotio.UNKNOT, knotio.TREFOIL, knotio.GRANNY]))
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_args():
    args = cli.parse_args(["obstruct", "knots.txt"])
    assert args.command == "obstruct" and args.file == "knots.txt"
    args = cli.parse_args("criterion --a1 1 --q1 3 --a2 1 --q2 3 --u -1".split())
    assert (args.a1, args.q1, args.a2, args.q2, args.u) == (1, 3, 1, 3, -1)


@pytest.mark.parametrize("argv", [["bogus"], ["obstruct"], ["bounds", "f", "--frobnicate"],
                                  ["criterion", "--a1", "1"]])
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.parse_args(argv)
    assert exc.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_criterion_output(capsys):
    code, out, _ = run("criterion --a1 1 --q1 3 --a2 1 --q2 3 --u -1".split(), capsys)
    assert code == 0
    assert out.strip() == "B: false; Cor5.3(iv): g_Z >= 2"
    code, out, _ = run("criterion --a1 2 --q1 5 --a2 2 --q2 5 --u 1 --json".split(), capsys)
    data = json.loads(out)
    assert data["B"] is True and data["matrix"] == [[85, 20], [20, 5]]


def test_criterion_bad_input(capsys):
    code, _, err = run("criterion --a1 3 --q1 3 --a2 1 --q2 3 --u 1".split(), capsys)
    assert code == 1 and "error" in err


def test_verify_odd_cover(capsys):
    argv = "verify-odd-cover --p 3 --q 7 --k 1 --lambda 3+6t".split()
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out.strip() == "all pairings isometric: true; norm(3+6t) = -1 verified"
    code, out, _ = run("verify-odd-cover --p 3 --q 7".split(), capsys)
    assert code == 0 and out.startswith("all pairings isometric: true; norm(")
    code, _, _ = run("verify-odd-cover --p 3 --q 3".split(), capsys)
    assert code == 1


def test_verify_odd_cover_budget(capsys):
    code, _, err = run("verify-odd-cover --p 7 --q 13 --k 1".split(), capsys)
    assert code == 2 and "budget" in err


def test_invariants(knot_file, capsys):
    code, out, _ = run(["invariants", knot_file], capsys)
    assert code == 0
    block = out.split("knot 3_1\n")[1].split("knot")[0]
    assert "alexander: t^-1 - 1 + t" in block
    assert "determinant: 3" in block and "signature: -2" in block and "arf: 1" in block


def test_bounds_serial_and_parallel_agree(knot_file, capsys):
    code, serial, _ = run(["bounds", knot_file, "--threads", "1", "--budget", "200"], capsys)
    assert code == 0
    code, parallel, _ = run(["bounds", knot_file, "--threads", "2", "--budget", "200"], capsys)
    assert serial == parallel
    lines = serial.strip().splitlines()
    assert lines[0] == "0_1 0(ALEX1) 0(FALLBACK) 0(ALEX1) 0 g_Z=0"
    assert lines[1].endswith("g_Z=1") and lines[2].endswith("g_Z=2")


def test_obstruct_and_decompose(knot_file, capsys):
    code, out, _ = run(["obstruct", knot_file, "--max-a", "2"], capsys)
    assert code == 0
    assert "3_1#3_1 g_Z >= 2 (COR53_iv+LT_SIG); Cor5.3(iv): g_Z >= 2" in out
    code, out, _ = run(["decompose", knot_file], capsys)
    assert "3_1 lk=(1/3) ell=(2/3)" in out


def test_bad_knot_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("knot a\nseifert 3\n1 0 0\n0 1 0\n0 0 1\n")
    code, _, err = run(["invariants", str(path)], capsys)
    assert code == 1 and "line 2" in err
    code, _, err = run(["invariants", str(tmp_path / "missing.txt")], capsys)
    assert code == 1


def test_normalize_blanchfield(tmp_path, capsys):
    path = tmp_path / "h.txt"
    path.write_text(lp.format_matrix(lp.constant_matrix([[0, 1], [1, 0]])))
    code, out, _ = run(["normalize-blanchfield", str(path)], capsys)
    assert code == 0
    assert "B(1) = [[1, 0], [0, -1]]" in out
    assert "crossing changes: 1 positive, 1 negative" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "zslice", "--help"], capture_output=True,
                         text=True, check=True)
    for name in cli.COMMANDS:
        assert name in res.stdout


def test_selftest_subset(capsys):
    code, out, _ = run(["selftest", "--only", "1", "--only", "7"], capsys)
    assert code == 0
    assert out.splitlines()[0].startswith("PASS 1.")
    assert out.splitlines()[1].startswith("SKIPPED 7.")
