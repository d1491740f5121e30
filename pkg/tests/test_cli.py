import csv
import io
import json
import math
import subprocess
import sys

import pytest

from qdelete import __version__, deletion, statevector
from qdelete.cli import main


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def exit_code(*argv):
    # argparse reports usage errors by raising SystemExit
    try:
        return call(*argv)[0]
    except SystemExit as exc:
        return exc.code


def parse_json(*argv):
    code, text = call("--format", "json", *argv)
    assert code == 0
    return json.loads(text)


def test_run_single_query():
    code, text = call("run", "--n", "10", "--tau", "37", "--k", "1", "--mode", "exact")
    assert code == 0
    assert "DeletedCase" in text


def test_run_json_schema():
    report = parse_json("run", "--n", "10", "--tau", "37")
    assert {"config", "case", "residual", "fidelity", "elapsed_ms", "seed", "version"} <= set(report)
    assert report["case"] == "DeletedCase"
    assert report["residual"] <= 1e-10
    assert report["fidelity"] >= 1 - 1e-10
    assert report["version"] == __version__
    assert report["config"] == {"n": 10, "tau": 37, "k": 1, "mode": "exact",
                                "normalize_global_phase": False}
    assert len(report["amplitudes"]) == 1024


def test_run_identity_case():
    report = parse_json("run", "--n", "4", "--tau", "5", "--k", "6", "--mode", "exact")
    assert report["case"] == "IdentityCase"
    amps = [complex(a["re"], a["im"]) for a in report["amplitudes"]]
    overlap = abs(sum(amps)) / 4  # <uniform|psi>
    assert overlap >= 1 - 1e-10


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
@pytest.mark.parametrize("extra", [[], ["--mode", "fixed"], ["--k", "2", "--normalize"]])
def test_amplitudes_are_normalized(fmt, extra):
    code, text = call("--format", fmt, "run", "--n", "5", "--tau", "3", *extra)
    assert code == 0
    if fmt == "json":
        amps = [(a["re"], a["im"]) for a in json.loads(text)["amplitudes"]]
    elif fmt == "csv":
        block = text.split("\n\n")[1]
        amps = [(float(r["re"]), float(r["im"])) for r in csv.DictReader(io.StringIO(block))]
    else:
        rows = text.split("\n\n")[1].splitlines()[1:]
        amps = [tuple(map(float, r.split()[1:3])) for r in rows]
    assert len(amps) == 32
    # text output is rounded to 12 digits, still far inside the tolerance
    assert abs(sum(re * re + im * im for re, im in amps) - 1) < 1e-9


def test_amplitudes_suppressed_above_twelve_qubits():
    report = parse_json("run", "--n", "13", "--tau", "1")
    assert "amplitudes" not in report
    report = parse_json("run", "--n", "13", "--tau", "1", "--dump-amps")
    assert len(report["amplitudes"]) == 1 << 13


def test_run_bad_tau(capsys):
    code, _ = call("run", "--n", "3", "--tau", "9")
    assert code == 1
    assert "tau out of range [0, 8)" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--n", "3"],
        ["run", "--n", "x", "--tau", "1"],
        ["run", "--n", "3", "--tau", "1", "--mode", "quantum"],
        ["frobnicate"],
        [],
        ["--format", "xml", "table"],
        ["--cap", "0", "table"],
        ["run", "--n", "0", "--tau", "0"],
        ["run", "--n", "3", "--tau", "1", "--k", "-2"],
        ["sweep-phi", "--n-min", "5", "--n-max", "2"],
        ["table", "--k-max", "0"],
        ["verify", "--trials", "0"],
        ["bench", "--n", "30"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    assert exit_code(*argv) == 1
    assert capsys.readouterr().err


def test_cap_flag_and_environment(monkeypatch, capsys):
    code, _ = call("--cap", "4", "run", "--n", "5", "--tau", "0")
    assert code == 1
    monkeypatch.setenv(statevector.CAP_ENV_VAR, "4")
    code, _ = call("run", "--n", "5", "--tau", "0")
    assert code == 1
    assert "cap" in capsys.readouterr().err
    code, _ = call("run", "--n", "5", "--tau", "0", "--cap", "6")
    assert code == 0


def test_global_flags_after_subcommand():
    a = parse_json("table", "--k-max", "3")
    code, text = call("table", "--k-max", "3", "--format", "json")
    assert json.loads(text) == a


def test_sweep_phi_rows():
    code, text = call("--format", "csv", "sweep-phi", "--n-min", "1", "--n-max", "20")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 20
    phis = [float(r["phi"]) for r in rows]
    assert abs(phis[0] - math.pi / 2) < 1e-12
    assert all(a > b for a, b in zip(phis, phis[1:]))
    gaps = [float(r["phi_minus_pi_over_3"]) for r in rows]
    assert all(g > 0 for g in gaps)
    assert gaps[-1] < 1e-6
    assert int(rows[-1]["N"]) == 2**20


def test_sweep_phi_underscore_alias():
    assert call("sweep-phi", "--n_max", "3")[0] == 0


def test_table_default_is_csv():
    code, text = call("table")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["k"] + [str(k) for k in range(1, 13)]
    assert [r[0] for r in rows[1:]] == ["sin(theta)", "cos(theta)", "(-1)^k sin(theta)",
                                        "(-1)^k cos(theta)"]
    cos = [float(v) for v in rows[2][1:]]
    assert cos[1] == -0.5
    assert float(rows[1][6]) == 0 and cos[5] == 1
    assert float(rows[4][9]) == 1


def test_verify_default_passes():
    code, text = call("verify")
    assert code == 0
    assert "FAIL" not in text
    assert text.count("PASS") == 20


def test_verify_smallest_database():
    assert call("verify", "--n_max", "1")[0] == 0


def test_verify_injected_fault(monkeypatch, capsys):
    real = statevector.apply_zero_phase
    monkeypatch.setattr(deletion, "apply_zero_phase", lambda s, phi: real(s, phi + 1e-3))
    code, text = call("verify", "--n-max", "4")
    assert code == 2
    err = capsys.readouterr().err
    assert "single_query_deletion" in err
    assert "seed=0" in err and "tau" in err


def test_run_fidelity_failure_exit_two(monkeypatch, capsys):
    real = statevector.apply_zero_phase
    monkeypatch.setattr(deletion, "apply_zero_phase", lambda s, phi: real(s, phi + 0.1))
    code, _ = call("run", "--n", "6", "--tau", "3")
    assert code == 2
    assert "fidelity" in capsys.readouterr().err


def test_bench_columns():
    report = parse_json("bench", "--n", "8", "10", "--repetitions", "1")
    rows = report["rows"]
    assert [r["n"] for r in rows] == [8, 10]
    for r in rows:
        assert r["quantum_queries"] == 1
        assert r["classical_avg_queries"] == (r["N"] + 1) / 2
        assert r["step_seconds"] > 0
    assert isinstance(report["loglog_slope"], float)


@pytest.mark.slow
def test_bench_twenty_qubits():
    report = parse_json("bench", "--n", "20", "--repetitions", "1")
    row = report["rows"][0]
    assert row["quantum_queries"] == 1
    assert row["classical_avg_queries"] == (2**20 + 1) / 2


def _strip_timing(fmt, text):
    if fmt == "json":
        data = json.loads(text)
        data.pop("elapsed_ms", None)
        for row in data.get("rows", []):
            row.pop("step_seconds", None)
            row.pop("amplitudes_per_second", None)
        data.pop("loglog_slope", None)
        return data
    blocks = []
    for block in text.split("\n\n"):
        rows = list(csv.DictReader(io.StringIO(block)))
        for r in rows:
            for key in ("elapsed_ms", "step_seconds", "amplitudes_per_second"):
                r.pop(key, None)
        blocks.append(rows)
    return blocks


@pytest.mark.parametrize("fmt", ["csv", "json"])
@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--n", "6", "--tau", "11", "--k", "4"],
        ["run", "--n", "6", "--tau", "11", "--mode", "fixed", "--normalize"],
        ["sweep-phi", "--n-max", "12"],
        ["table", "--k-max", "9"],
        ["verify", "--n-max", "5", "--seed", "3"],
        ["bench", "--n", "6", "7", "--repetitions", "1"],
    ],
)
def test_output_deterministic(fmt, argv):
    a = call("--format", fmt, "--seed", "5", *argv)
    b = call("--format", fmt, "--seed", "5", *argv)
    assert a[0] == b[0] == 0
    if argv[0] in ("run", "bench"):
        assert _strip_timing(fmt, a[1]) == _strip_timing(fmt, b[1])
    else:
        assert a[1] == b[1]


def test_seed_echoed():
    assert parse_json("--seed", "42", "run", "--n", "2", "--tau", "1")["seed"] == 42
    assert parse_json("verify", "--n-max", "2", "--seed", "9")["seed"] == 9


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdelete", "run", "--n", "3", "--tau", "9"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "tau out of range [0, 8)" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "qdelete", "--format", "json", "table", "--k-max", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rows"][1]["cos_theta"] == -0.5
