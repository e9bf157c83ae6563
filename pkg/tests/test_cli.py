"""End-to-end command-line checks via subprocess."""

import subprocess
import sys

import pytest

EVEN_LOOP = "a :- not b.\nb :- not a.\n"

TINY_TASK = """\
q :- p.
#modeh(p).
#modeb(blocked).
#maxb(1).
#maxrules(1).
#pos(e1@3, {q}, {}, {}).
#pos(e2@3, {}, {q}, {blocked.}).
"""

TINY_CSV = """\
timestamp,rain,humidity
1,0.0,80.0
2,3.0,40.0
3,0.0,90.0
4,3.0,30.0
5,0.0,85.0
"""

TINY_TOML = """\
[rain]
levels = ["none", "high"]
thresholds = [0.5]
floor = 0.0
ceil = 8.0

[humidity]
levels = ["low", "high"]
thresholds = [70.0]
floor = 20.0
ceil = 100.0
"""


def run_cli(*args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "minilas", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


@pytest.fixture
def loop_file(tmp_path):
    path = tmp_path / "loop.lp"
    path.write_text(EVEN_LOOP)
    return str(path)


@pytest.fixture
def task_file(tmp_path):
    path = tmp_path / "tiny.task"
    path.write_text(TINY_TASK)
    return str(path)


def test_ground_prints_instantiation(tmp_path):
    path = tmp_path / "p.lp"
    path.write_text("p(a). p(b). q(X) :- p(X), not r(X).\n")
    proc = run_cli("ground", str(path))
    assert proc.returncode == 0
    assert "q(a) :- p(a), not r(a)." in proc.stdout
    assert "q(b) :- p(b), not r(b)." in proc.stdout


def test_solve_lists_models_in_order(loop_file):
    proc = run_cli("solve", loop_file)
    assert proc.returncode == 0
    assert proc.stdout == (
        "model 1: {a}\nmodel 2: {b}\nmodels: 2 (complete)\n"
    )


def test_solve_limit_marks_truncation(loop_file):
    proc = run_cli("solve", loop_file, "--limit", "1")
    assert proc.returncode == 0
    assert "models: 1 (truncated)" in proc.stdout


def test_solve_quiet_keeps_only_the_count(loop_file):
    proc = run_cli("solve", loop_file, "--quiet")
    assert proc.stdout == "models: 2 (complete)\n"


def test_solve_brave_and_cautious_lines(loop_file):
    proc = run_cli("solve", loop_file, "--brave", "a", "--cautious", "a")
    assert proc.returncode == 0
    assert "brave a: yes" in proc.stdout
    assert "cautious a: no" in proc.stdout


def test_solve_unsat_exits_10(tmp_path):
    path = tmp_path / "unsat.lp"
    path.write_text("p. :- p.\n")
    proc = run_cli("solve", str(path))
    assert proc.returncode == 10
    assert "models: 0 (complete)" in proc.stdout


def test_output_flag_writes_file_instead_of_stdout(loop_file, tmp_path):
    out = tmp_path / "models.txt"
    proc = run_cli("solve", loop_file, "-o", str(out))
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert out.read_text() == (
        "model 1: {a}\nmodel 2: {b}\nmodels: 2 (complete)\n"
    )


def test_missing_file_is_an_input_error(tmp_path):
    proc = run_cli("solve", str(tmp_path / "nope.lp"))
    assert proc.returncode == 2
    assert proc.stderr.startswith("error: cannot read")


def test_parse_error_reports_position(tmp_path):
    path = tmp_path / "bad.lp"
    path.write_text("p :- .\n")
    proc = run_cli("ground", str(path))
    assert proc.returncode == 2
    assert proc.stderr.startswith("error: 1:6:")


def test_usage_errors_exit_1(loop_file):
    assert run_cli("frobnicate").returncode == 1
    assert run_cli().returncode == 1
    assert run_cli("solve").returncode == 1
    assert run_cli("solve", loop_file, "--limit", "0").returncode == 1


def test_space_lists_indexed_costed_rules(task_file):
    proc = run_cli("space", task_file)
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert lines[-1] == "rules: 3"
    assert lines[0].split("\t") == ["0", "1", "p."]
    assert lines[1].split("\t") == ["1", "2", "p :- blocked."]
    assert lines[2].split("\t") == ["2", "2", "p :- not blocked."]


def test_learn_reports_hypothesis_and_outcomes(task_file):
    proc = run_cli("learn", task_file)
    assert proc.returncode == 0
    assert "p :- not blocked." in proc.stdout
    assert "cost: 2" in proc.stdout
    assert "e1" in proc.stdout and "e2" in proc.stdout


def test_learn_quiet_trims_to_rules_and_cost(task_file):
    proc = run_cli("learn", task_file, "--quiet")
    assert proc.returncode == 0
    assert proc.stdout == "p :- not blocked.\ncost: 2\n"


def test_explain_emits_graph_text(tmp_path):
    path = tmp_path / "chain.lp"
    path.write_text("p. q :- p, not r.\n")
    proc = run_cli("explain", str(path), "--atom", "q")
    assert proc.returncode == 0
    assert proc.stdout.startswith("digraph")
    assert '"q"' in proc.stdout
    assert "not r" in proc.stdout


def test_explain_absent_atom_uses_absence_dag(tmp_path):
    path = tmp_path / "chain.lp"
    path.write_text("p. q :- p, not r.\n")
    proc = run_cli("explain", str(path), "--atom", "r")
    assert proc.returncode == 0
    assert proc.stdout.startswith("digraph")


def test_explain_model_out_of_range(loop_file):
    proc = run_cli("explain", loop_file, "--atom", "a", "--model", "3")
    assert proc.returncode == 2
    assert "only 2 exist" in proc.stderr


def test_explain_unsat_exits_10(tmp_path):
    path = tmp_path / "unsat.lp"
    path.write_text("p. :- p.\n")
    proc = run_cli("explain", str(path), "--atom", "p")
    assert proc.returncode == 10


def test_explain_second_model(loop_file):
    proc = run_cli("explain", loop_file, "--atom", "b", "--model", "2")
    assert proc.returncode == 0
    assert '"b"' in proc.stdout


def test_taskgen_then_learn_round_trip(tmp_path):
    data = tmp_path / "series.csv"
    data.write_text(TINY_CSV)
    spec = tmp_path / "levels.toml"
    spec.write_text(TINY_TOML)
    task_path = tmp_path / "gen.task"

    gen = run_cli(
        "taskgen", "--data", str(data), "--spec", str(spec),
        "--target", "rain", "--penalty", "10", "-o", str(task_path),
    )
    assert gen.returncode == 0, gen.stderr
    text = task_path.read_text()
    assert "#modeh(level(" in text
    assert "#pos(w1@10" in text

    learned = run_cli(
        "learn", str(task_path), "--scoring", "multi-timestamp", "--quiet"
    )
    assert learned.returncode == 0, learned.stderr
    assert "level(rain,high,2) :- level(humidity,high,V1)." in learned.stdout


def test_taskgen_unknown_target_is_input_error(tmp_path):
    data = tmp_path / "series.csv"
    data.write_text(TINY_CSV)
    spec = tmp_path / "levels.toml"
    spec.write_text(TINY_TOML)
    proc = run_cli(
        "taskgen", "--data", str(data), "--spec", str(spec), "--target", "sun"
    )
    assert proc.returncode == 2
    assert "no discretization for column sun" in proc.stderr


def test_evaluate_synthetic_quiet(tmp_path):
    proc = run_cli(
        "evaluate", "--synthetic", "--rows", "24", "--noise", "0",
        "--penalty", "10", "--folds", "2", "--train-days", "1",
        "--day-length", "12", "--quiet",
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout == "mean accuracy: 1.0000\n"


def test_evaluate_baseline_table(tmp_path):
    proc = run_cli(
        "evaluate", "--synthetic", "--rows", "24", "--noise", "0",
        "--folds", "2", "--train-days", "1", "--day-length", "12",
        "--baseline",
    )
    assert proc.returncode == 0, proc.stderr
    assert "mean learner:" in proc.stdout
    assert "mean stump:" in proc.stdout


def test_evaluate_rejects_both_sources(tmp_path):
    data = tmp_path / "series.csv"
    data.write_text(TINY_CSV)
    proc = run_cli("evaluate", "--synthetic", "--data", str(data))
    assert proc.returncode == 1


def test_demo_legal_is_deterministic():
    first = run_cli("demo", "legal")
    second = run_cli("demo", "legal")
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    assert "== the vague case ==" in first.stdout
    assert "violence_on_person :- victim_resisted." in first.stdout


def test_seed_changes_synthetic_series():
    base = ["evaluate", "--synthetic", "--rows", "24", "--noise", "0.3",
            "--folds", "2", "--train-days", "1", "--day-length", "12",
            "--quiet"]
    a = run_cli(*base, "--seed", "1")
    b = run_cli(*base, "--seed", "1")
    c = run_cli(*base, "--seed", "2")
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    assert a.stdout != c.stdout
