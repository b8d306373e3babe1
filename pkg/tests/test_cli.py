import csv
import io

import pytest

from dyckedit.cli import CSV_FIELDS, CSV_SCHEMA, main
from dyckedit.core import is_balanced
from dyckedit.encoding import parse_ascii


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_all_algos(tmp_path, capsys):
    f = tmp_path / "in.txt"
    f.write_text("([)]\n")
    for algo in ("exhaustive", "cubic", "valley", "k5", "fast"):
        code, out, err = run(capsys, ["compute", "--algo", algo, "--input", str(f), "--k", "3"])
        assert code == 0 and out.strip() == "2"
        assert f"algo={algo}" in err


def test_compute_threshold_and_tree(tmp_path, capsys):
    f = tmp_path / "in.txt"
    f.write_text("(((((((((][)))))))))")
    code, out, err = run(capsys, ["compute", "--input", str(f), "--k", "2", "--tree", "--debug",
                                  "--algo", "fast"])
    assert code == 0 and out.strip() == "2"
    assert "trapezoid" in err
    code, out, _ = run(capsys, ["compute", "--input", str(f), "--k", "0"])
    assert out.strip() == "1"


def test_compute_tokens_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("o0 o1 c0 c1"))
    code, out, _ = run(capsys, ["compute", "--format", "tokens"])
    assert code == 0 and out.strip() == "2"


def test_error_exit_codes(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("(x)")
    assert run(capsys, ["compute", "--input", str(f)])[0] == 1
    assert run(capsys, ["compute", "--input", str(tmp_path / "missing")])[0] == 1
    g = tmp_path / "long.txt"
    g.write_text("()" * 10)
    code, _, err = run(capsys, ["compute", "--algo", "exhaustive", "--input", str(g)])
    assert code == 1 and "n <= 14" in err
    assert run(capsys, ["compute", "--input", str(g), "--k", "-1"])[0] == 1
    assert run(capsys, ["compute", "--algo", "nope"])[0] == 1
    assert run(capsys, ["bench", "--algos", "nope", "--sizes", "8"])[0] == 1


def test_invariant_violation_exit_code(tmp_path, capsys, monkeypatch):
    from dyckedit import cli
    from dyckedit.valiant import InvariantViolation

    def boom(*a, **kw):
        raise InvariantViolation("forced")
    monkeypatch.setattr(cli, "solve_fast", boom)
    f = tmp_path / "in.txt"
    f.write_text("()")
    code, _, err = run(capsys, ["compute", "--algo", "fast", "--input", str(f)])
    assert code == 2 and "forced" in err


def test_gen_deterministic_and_balanced(tmp_path, capsys):
    a = run(capsys, ["gen", "--n", "40", "--seed", "7"])
    b = run(capsys, ["gen", "--n", "40", "--seed", "7"])
    assert a == b and a[0] == 0
    assert is_balanced(parse_ascii(a[1]))
    assert "upper_bound=0" in a[2]
    out = tmp_path / "g.txt"
    code, _, err = run(capsys, ["gen", "--n", "60", "--edits", "3", "--nested", "--seed", "1",
                                "--output", str(out), "--format", "tokens"])
    assert code == 0 and "upper_bound=3" in err
    code, d, _ = run(capsys, ["compute", "--input", str(out), "--format", "tokens", "--algo", "cubic"])
    assert int(d) <= 3


def test_selftest(capsys):
    code, out, _ = run(capsys, ["selftest", "--trials", "6", "--max-n", "20", "--seed", "3"])
    assert code == 0 and "0 failed" in out


def test_bench_csv(tmp_path, capsys):
    path = tmp_path / "b.csv"
    argv = ["bench", "--algos", "k5,fast", "--sizes", "64,128", "--ks", "2", "--repeats", "2",
            "--csv", str(path)]
    assert main(argv) == 0
    rows = list(csv.DictReader(path.open()))
    assert tuple(rows[0].keys()) == CSV_FIELDS
    assert len(rows) == 8 and all(r["schema"] == CSV_SCHEMA for r in rows)
    by_key = {}
    for r in rows:
        by_key.setdefault((r["n"], r["seed"]), set()).add(r["distance"])
    assert all(len(v) == 1 for v in by_key.values())
    code, out, _ = run(capsys, ["bench", "--algos", "k5", "--sizes", "32", "--ks", "1", "--workers", "2"])
    assert code == 0 and out.splitlines()[0] == ",".join(CSV_FIELDS)
