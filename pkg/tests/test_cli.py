"""Command-line interface: outputs, round trips, determinism, exit codes.

Claims covered:
    - reference outputs for constants / probs / limits / moments
    - exact rationals survive serialization as p/q strings
    - JSON outputs parse back; identical argv (and seed) gives
      byte-identical output, also when the worker count changes
    - exit codes: 0 ok, 1 validation or usage error, 2 failed criteria
"""

import json
import math

import pytest

from treecut.cli import main


@pytest.fixture()
def capture(capsys):
    def run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


def test_constants_reference(capture):
    code, out, _ = capture("constants", "--kind", "C", "--alpha0", "1", "--alpha1", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["tau"] == 0.5
    assert payload["rho"] == 0.25
    assert payload["sigma2"] == 2.0
    assert payload["a0"] == "-1" and payload["a1"] == "2"


def test_probs_reference(capture):
    code, out, _ = capture("probs", "--kind", "A", "--alpha0", "1", "--n", "4")
    assert code == 0
    assert out == "k,p\n1,3/16\n2,1/4\n3,9/16\n"


def test_probs_symmetrized(capture):
    code, out, _ = capture("probs", "--kind", "A", "--alpha0", "1", "--n", "4", "--symmetrized")
    assert code == 0
    assert out == "k,p\n1,3/8\n2,1/4\n3,3/8\n"


def test_limits_reference(capture):
    code, out, _ = capture("limits", "--regime", "one", "--alpha", "0", "--smax", "2")
    assert code == 0
    values = json.loads(out)
    assert values[0] == 1.0
    assert values[1] == pytest.approx(math.sqrt(math.pi / 2), rel=1e-12)
    assert values[2] == pytest.approx(2.0, rel=1e-12)


def test_moments_exact_csv(capture):
    code, out, _ = capture(
        "moments", "--kind", "C", "--alpha0", "1", "--alpha1", "1",
        "--variant", "one", "--alpha", "0", "--nmax", "3", "--smax", "1", "--mode", "exact",
    )
    assert code == 0
    assert out.splitlines()[0] == "n,s,mu"
    assert "3,1,11/4" in out.splitlines()


def test_moments_edges_only_flag(capture):
    code, out, _ = capture(
        "moments", "--kind", "A", "--alpha0", "1",
        "--variant", "two", "--alpha", "0", "--nmax", "5", "--smax", "1",
        "--size-one-cost", "0",
    )
    assert code == 0
    assert "5,1,4" in out.splitlines()  # exactly n - 1


def test_counts_csv(capture):
    code, out, _ = capture("counts", "--kind", "C", "--alpha0", "1", "--alpha1", "1", "--nmax", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,t_exact,ln_t"
    assert [line.split(",")[1] for line in lines[1:]] == ["1", "1", "2", "5", "14"]


def test_family_config_file(capture, tmp_path):
    config = tmp_path / "family.cfg"
    config.write_text("kind=B\nalpha0=2\nd=2\n")
    code, out, _ = capture("constants", "--family-config", str(config))
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "B" and payload["sigma2"] == 0.5


def test_simulate_deterministic_and_exact(capture):
    argv = (
        "simulate", "--kind", "C", "--alpha0", "1", "--alpha1", "1",
        "--variant", "two", "--alpha", "0", "--n", "100",
        "--samples", "2000", "--seed", "11", "--size-one-cost", "0",
    )
    code, out1, _ = capture(*argv)
    assert code == 0
    payload = json.loads(out1)
    assert payload["moment_estimates"][0] == 99.0
    assert payload["standard_errors"][0] == 0.0
    _, out2, _ = capture(*argv)
    assert out1 == out2  # byte-identical replay
    _, out4, _ = capture(*argv, "--workers", "4")
    assert json.loads(out4)["moment_estimates"] == payload["moment_estimates"]
    assert json.loads(out4)["standard_errors"] == payload["standard_errors"]


def test_simulate_workers_byte_identical_nondegenerate(capture):
    base = (
        "simulate", "--kind", "C", "--alpha0", "1", "--alpha1", "1",
        "--variant", "one", "--alpha", "1", "--n", "60",
        "--samples", "9000", "--seed", "5",
    )
    _, out1, _ = capture(*base, "--workers", "1")
    _, out4, _ = capture(*base, "--workers", "4")
    assert json.loads(out1)["moment_estimates"] == json.loads(out4)["moment_estimates"]
    assert json.loads(out1)["standard_errors"] == json.loads(out4)["standard_errors"]


def test_out_file(capture, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = capture("limits", "--regime", "two", "--alpha", "1", "--smax", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())[2] == pytest.approx(5 / 3, rel=1e-12)


def test_verify_pass_subset(capture, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = capture("verify", "--only", "3,10", "--out-json", str(report))
    assert code == 0
    assert "[PASS] criterion  3" in out and "[PASS] criterion 10" in out
    payload = json.loads(report.read_text())
    assert [entry["criterion"] for entry in payload] == [3, 10]
    assert all(entry["passed"] for entry in payload)


def test_verify_failing_criterion_exits_2(capture):
    # criterion 5 is the documented honest failure at its stipulated n
    code, out, _ = capture("verify", "--only", "5")
    assert code == 2
    assert "[FAIL] criterion  5" in out


def test_verify_csv_rows(capture, tmp_path):
    rows = tmp_path / "rows.csv"
    code, out, _ = capture("verify", "--only", "9", "--out-csv", str(rows))
    assert code == 0
    lines = rows.read_text().splitlines()
    assert lines[0] == "criterion,family,variant,alpha,n,s,normalized,limit,rel_error"
    assert len(lines) > 4


def test_validation_errors_exit_1(capture):
    code, _, err = capture("constants", "--kind", "C", "--alpha0", "1")  # alpha1 missing
    assert code == 1 and "error" in err
    code, _, err = capture("probs", "--kind", "A", "--alpha0", "1", "--n", "1")
    assert code == 1
    code, _, err = capture(
        "moments", "--kind", "A", "--alpha0", "1", "--variant", "one",
        "--alpha", "0.5", "--nmax", "10", "--mode", "exact",
    )
    assert code == 1 and "rational" in err


def test_usage_error_exit_1():
    with pytest.raises(SystemExit) as info:
        main(["probs", "--kind", "Q", "--alpha0", "1", "--n", "4"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1
