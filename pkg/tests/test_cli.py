"""CLI contract tests: subcommand surface, exit codes, determinism of
report files, named precondition diagnostics."""

import json
import subprocess
import sys

CLI = [sys.executable, "-m", "charsum.cli"]


def run(*args, env_extra=None, timeout=240):
    import os

    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=env, timeout=timeout
    )


def test_factor_command():
    out = run("factor", "360")
    assert out.returncode == 0
    assert out.stdout.strip() == "360 = 2^3 * 3^2 * 5"


def test_chars_list_and_conductor():
    out = run("chars", "list", "--D", "8")
    assert out.returncode == 0
    lines = [json.loads(s) for s in out.stdout.strip().split("\n")]
    assert len(lines) == 4
    assert lines[0]["principal"] is True and lines[0]["conductor"] == 1
    out2 = run("chars", "conductor", "--D", "24", "--exponents", "0,1,0")
    assert out2.returncode == 0
    assert out2.stdout.strip() == "8"


def test_sum_T_prints_quadratic_value():
    out = run("sum", "T", "--D", "3", "--l", "1", "--x", "10")
    assert out.returncode == 0
    assert "0.7985" in out.stdout


def test_sum_precondition_exit_2_names_violation():
    out = run("sum", "T", "--D", "10", "--l", "5", "--x", "100")
    assert out.returncode == 2
    assert "'l'" in out.stderr


def test_unknown_flag_exits_2():
    out = run("verify", "identities", "--bogus-flag")
    assert out.returncode == 2


def test_verify_identities_small_exit_0(tmp_path):
    out = run(
        "verify", "identities", "--max-D", "40", "--gauss-max-q", "30",
        "--hb-cases", "2", "--coprime-max", "40", "--recombination-cases", "2",
        "--output", str(tmp_path / "r.jsonl"),
    )
    assert out.returncode == 0
    lines = (tmp_path / "r.jsonl").read_text().strip().split("\n")
    head = json.loads(lines[0])
    assert head["schema"] == "charsum.report/1"
    assert all(json.loads(s)["verdict"] == "pass" for s in lines[1:])


def test_forced_assert_failure_exits_1(tmp_path):
    out = run(
        "verify", "identities", "--max-D", "20", "--gauss-max-q", "20",
        "--hb-cases", "1", "--coprime-max", "20", "--recombination-cases", "1",
        "--output", str(tmp_path / "r.jsonl"),
        env_extra={"CHARSUM_TEST_FORCE_ASSERT_FAIL": "1"},
    )
    assert out.returncode == 1
    text = (tmp_path / "r.jsonl").read_text()
    assert "SELFTEST" in text and '"fail"' in text


def test_lemma8_random_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    out1 = run("verify", "lemma8", "--random", "25", "--seed", "7", "--output", str(a))
    out2 = run("verify", "lemma8", "--random", "25", "--seed", "7", "--output", str(b))
    assert out1.returncode == 0 and out2.returncode == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.jsonl"
    out3 = run(
        "verify", "lemma8", "--random", "25", "--seed", "7", "--output", str(c),
        env_extra={"CHARSUM_THREADS": "8"},
    )
    assert out3.returncode == 0
    assert a.read_bytes() == c.read_bytes()


def test_lemma8_instances_file(tmp_path):
    path = tmp_path / "inst.jsonl"
    path.write_text(
        json.dumps({"q": 101, "d": 1, "eta": 3, "k": 5, "M": 7, "N": 5, "Y": 9}) + "\n"
    )
    out = run("verify", "lemma8", "--instances", str(path))
    assert out.returncode == 0
    assert "CONGRUENCE_CENSUS" in out.stdout


def test_lemma8_requires_source():
    out = run("verify", "lemma8")
    assert out.returncode == 2
    assert "instances" in out.stderr


def test_report_theorem_single_modulus():
    out = run("report", "theorem", "--D", "105", "--eps", "0.05")
    assert out.returncode == 0
    lines = out.stdout.strip().split("\n")
    rec = json.loads(lines[1])
    assert rec["lemma_tag"] == "THEOREM_T" and rec["mode"] == "MONITOR"
    assert rec["parameters"]["D"] == 105


def test_report_tail_flag_pairing():
    out = run("report", "tail", "--q", "30030")
    assert out.returncode == 2
    out2 = run("report", "tail", "--q", "30030", "--D", "30030")
    assert out2.returncode == 0
    rec = json.loads(out2.stdout.strip().split("\n")[1])
    assert rec["lemma_tag"] == "BIG_DIVISOR_TAIL"


def test_csv_format(tmp_path):
    out = run(
        "report", "constants", "--q-max", "100",
        "--format", "csv", "--output", str(tmp_path / "c.csv"),
    )
    assert out.returncode == 0
    lines = (tmp_path / "c.csv").read_text().strip().split("\n")
    assert lines[0] == "lemma_tag,params,lhs,rhs,ratio,mode,verdict,runtime_ms"
    assert lines[1].startswith("OMEGA_ENVELOPE,")


def test_timings_flag_populates_runtime(tmp_path):
    out = run(
        "report", "tail", "--q", "30030", "--D", "30030", "--timings",
        "--output", str(tmp_path / "t.jsonl"),
    )
    assert out.returncode == 0
    rec = json.loads((tmp_path / "t.jsonl").read_text().strip().split("\n")[1])
    assert isinstance(rec["runtime_ms"], int)
