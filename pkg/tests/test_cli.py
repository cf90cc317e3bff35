import csv
import io
import os

import pytest

from pkp.cli import main
from pkp.generator import GenSpec, generate
from pkp.model import canonicalize, read_instance, write_instance


def _solve(capsys, *args):
    code = main(["solve", *map(str, args)])
    return code, capsys.readouterr()


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "worked.txt"
    path.write_text("2 7\n10 5 1\n6 4 2\n")
    return path


@pytest.mark.parametrize("algo", ["exact", "dp1", "brute"])
def test_solve_worked_instance(capsys, worked_file, algo):
    code, out = _solve(capsys, worked_file, "--algorithm", algo, "--selected")
    value, lead, status, ms, states = out.out.splitlines()[0].split()
    assert code == 0
    assert (value, lead, status) == ("9", "0", "certified")  # input line 0 is (10, 5, 1)
    assert int(ms) >= 0 and int(states) >= 0
    assert out.out.splitlines()[1] == "0"


def test_solve_approx(capsys, worked_file):
    code, out = _solve(capsys, worked_file, "--algorithm", "approx", "--case", "profit-dominates", "--epsilon", "1/2")
    assert code == 0 and out.out.split()[2] == "approx"
    assert int(out.out.split()[0]) >= 4


def test_approx_subcommand(capsys, worked_file):
    assert main(["approx", str(worked_file), "--case", "profit-floor", "--rho", "3/4", "--epsilon", "0.1"]) == 0
    assert capsys.readouterr().out.split()[0] == "9"


def test_approx_needs_case(capsys, worked_file):
    code, out = _solve(capsys, worked_file, "--algorithm", "approx")
    assert code == 1 and "case" in out.err


def test_approx_class_violation(capsys, worked_file):
    code, out = _solve(capsys, worked_file, "--algorithm", "approx", "--case", "penalty-bounded", "--C", "1")
    assert code == 1 and "violate" in out.err


def test_missing_file(capsys, tmp_path):
    code, out = _solve(capsys, tmp_path / "nope.txt")
    assert code == 1 and out.err.startswith("error:")


def test_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 10\n1 2\n")
    assert _solve(capsys, path)[0] == 1


def test_brute_force_refuses_large(capsys, tmp_path):
    path = tmp_path / "big.txt"
    write_instance(generate(GenSpec(30, 100, "a1", "pi1", "p1", seed=1)), path)
    code, out = _solve(capsys, path, "--algorithm", "brute")
    assert code == 1 and "error" in out.err


def test_time_limit_exit_code(capsys, tmp_path):
    from pkp.exact import step1
    for k in range(200):
        inst = generate(GenSpec(200, 1000, "a1", "pi3", "p3", "0.1", k))
        if not step1(inst).proven:
            break
    else:
        pytest.skip("no instance needed the second step")
    path = tmp_path / "hard.txt"
    write_instance(inst, path)
    code, out = _solve(capsys, path, "--t1", "0", "--time-limit", "1e-9")
    assert code == 2 and out.out.split()[2] == "uncertified"


def test_generate_is_deterministic(capsys, tmp_path):
    flags = ["--n", "5", "--R", "100", "--weight", "a1", "--penalty", "pi6", "--profit", "p6", "--tau", "0.5",
             "--seed", "1"]
    assert main(["generate", *flags, "--out-dir", str(tmp_path / "a")]) == 0
    assert main(["generate", *flags, "--out-dir", str(tmp_path / "b")]) == 0
    (fa,), (fb,) = os.listdir(tmp_path / "a"), os.listdir(tmp_path / "b")
    assert fa == fb
    assert (tmp_path / "a" / fa).read_bytes() == (tmp_path / "b" / fb).read_bytes()
    inst = read_instance(tmp_path / "a" / fa)
    assert inst.n == 5 and all(it.profit == it.weight == it.penalty for it in inst.items)


def test_generate_seed_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PKP_SEED", "77")
    assert main(["generate", "--n", "3", "--R", "50", "--out-dir", str(tmp_path)]) == 0
    assert "_s77_" in os.listdir(tmp_path)[0]


def test_generate_rejects_unknown_class(capsys, tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["generate", "--penalty", "pi9", "--out-dir", str(tmp_path)])
    assert err.value.code == 2


def test_generate_count(capsys, tmp_path):
    assert main(["generate", "--n", "4", "--R", "40", "--count", "3", "--seed", "5", "--out-dir", str(tmp_path)]) == 0
    assert len(os.listdir(tmp_path)) == 3


def test_suite_preset(capsys, tmp_path, monkeypatch):
    import pkp.generator as g
    monkeypatch.setitem(g.SUITES, "paper1000", (8, 100))
    assert main(["generate", "--suite", "paper1000", "--count", "1", "--out-dir", str(tmp_path)]) == 0
    assert len(os.listdir(tmp_path)) == 336


def _bench_dir(tmp_path, monkeypatch):
    import pkp.generator as g
    monkeypatch.setitem(g.SUITES, "paper1000", (12, 100))
    d = tmp_path / "suite"
    assert main(["generate", "--suite", "paper1000", "--count", "1", "--seed", "3", "--out-dir", str(d)]) == 0
    return d


def test_bench_group_by_profit_and_weight(capsys, tmp_path, monkeypatch):
    d = _bench_dir(tmp_path, monkeypatch)
    capsys.readouterr()
    out = tmp_path / "t.csv"
    per = tmp_path / "per.csv"
    assert main(["bench", str(d), "--jobs", "2", "--group-by", "profit_class,weight_type", "--out", str(out),
                 "--per-instance", str(per)]) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.DictReader(io.StringIO(raw.decode("utf-8"))))
    assert len(rows) == 14
    assert set(rows[0]) >= {"profit_class", "weight_type", "penalty_class", "tau", "avg_time_ms", "max_time_ms",
                            "n_opt", "step1_only_pct", "step1_time_pct", "step2_time_pct", "states_max_avg",
                            "states_max_max"}
    assert all(r["penalty_class"] == "all" and r["tau"] == "all" for r in rows)
    assert sum(int(r["n_opt"]) for r in rows) == 336
    assert len(list(csv.DictReader(per.open()))) == 336


def test_bench_is_deterministic_apart_from_timing(capsys, tmp_path, monkeypatch):
    d = _bench_dir(tmp_path, monkeypatch)
    timing = {"avg_time_ms", "max_time_ms", "step1_time_pct", "step2_time_pct"}
    tables = []
    for _ in range(2):
        capsys.readouterr()
        assert main(["bench", str(d), "--jobs", "1", "--group-by", "penalty_class"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        tables.append([{k: v for k, v in r.items() if k not in timing} for r in rows])
    assert tables[0] == tables[1] and len(tables[0]) == 8


def test_bench_empty_dir(capsys, tmp_path):
    assert main(["bench", str(tmp_path)]) == 1
    assert "no instance files" in capsys.readouterr().err


def test_bench_bad_group_key(capsys, tmp_path):
    write_instance(canonicalize([(1, 1, 0)], 1), tmp_path / "x.txt")
    assert main(["bench", str(tmp_path), "--group-by", "colour"]) == 1


def test_end_to_end_determinism(capsys, tmp_path):
    results = []
    for run in ("a", "b"):
        d = tmp_path / run
        main(["generate", "--n", "60", "--R", "200", "--penalty", "pi4", "--profit", "p2", "--tau", "0.1",
              "--seed", "9", "--count", "3", "--out-dir", str(d)])
        capsys.readouterr()
        lines = []
        for name in sorted(os.listdir(d)):
            main(["solve", str(d / name), "--selected"])
            first, second = capsys.readouterr().out.splitlines()
            value, lead, status = first.split()[:3]
            lines.append((name, value, lead, status, second))
        results.append(lines)
    assert results[0] == results[1]
