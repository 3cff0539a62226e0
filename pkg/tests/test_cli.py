import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from spinwork import InvalidInput
from spinwork.cli import PRESETS, RunConfig, load_config, main, optimize, run_preset, tau_grid

SMALL_BATH = ["--modes", "0.3:1,0.4:1.7", "--T", "0.2", "--ts", "2", "--eps", "1.3", "--no-trend"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=object)


def column(text, name):
    header, body = table(text)
    return body[:, header.index(name)].astype(float)


def test_csv_format(capsys):
    code, out, _ = run(capsys, "work2", "--tau-count", "5")
    assert code == 0
    assert "\r" not in out and out.endswith("\n")
    header, body = table(out)
    assert header[:4] == ["tau", "w", "W", "W1"]
    assert body.shape == (5, len(header))
    assert body[0, 0] == "4"
    assert all(c == "%.17g" % float(c) for c in body[:, 1:].ravel())


def test_kernel_table(capsys):
    code, out, _ = run(capsys, "kernels", "--tau-count", "11", "--tau-stop", "5", "--T", "0.5")
    assert code == 0
    header, body = table(out)
    assert header == ["t", "K", "xi", "xi_dot", "G", "F"]
    first = body[0].astype(float)
    assert first[0] == 0 and first[2] == first[4] == first[5] == 0


def test_discrete_kernels_follow_the_ohmic_ones(capsys):
    args = ["kernels", "--tau-count", "50", "--tau-stop", "10", "--T", "0.5", "--gamma", "0.3"]
    _, ohmic, _ = run(capsys, *args)
    _, modes, _ = run(capsys, *args, "--discrete", "400")
    for name in ("xi", "G", "F"):
        a, b = column(ohmic, name)[1:], column(modes, name)[1:]
        assert np.max(np.abs(a - b) / np.abs(a)) < 1e-4


def test_negative_times_are_a_configuration_error(capsys):
    code, _, err = run(capsys, "kernels", "--tau-start", "-1", "--tau-stop", "2")
    assert code == 2 and "configuration error" in err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.conf"
    cfg.write_text("# sweep\nT = 2.5\nts = 0.5  # spin\ntau-count = 3\ngamma=0.4\n", encoding="utf-8")
    assert load_config(cfg) == {"T": 2.5, "T_S": 0.5, "tau_count": 3, "gamma": 0.4}
    code, out, _ = run(capsys, "work2", "--config", str(cfg), "--tau-count", "4")
    assert code == 0 and len(table(out)[1]) == 4


@pytest.mark.parametrize("text", ["colour = red\n", "T 2\n", "T = warm\n"])
def test_bad_config_files(tmp_path, capsys, text):
    cfg = tmp_path / "bad.conf"
    cfg.write_text(text, encoding="utf-8")
    assert run(capsys, "work2", "--config", str(cfg))[0] == 2


def test_bad_flags_exit_with_two(capsys, tmp_path):
    assert run(capsys, "work2", "--ts", "1", "--sz0", "-0.5")[0] == 2
    assert run(capsys, "work2", "--pulse1", "rot:90:w")[0] == 2
    assert run(capsys, "work2", "--tau-count", "0")[0] == 2
    assert run(capsys, "work2", "--config", str(tmp_path / "missing.conf"))[0] == 2
    assert run(capsys, "echo3", "--disorder-var", "4", "--omega0", "2")[0] == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "work2", "--tau-count", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_bytes().count(b"\n") == 4


def test_tau_grids():
    assert np.allclose(tau_grid(RunConfig(tau_count=4, tau_stop=2)), [0.5, 1, 1.5, 2])
    assert np.allclose(tau_grid(RunConfig(tau_count=3, tau_stop=2), include_zero=True), [0, 1, 2])
    log = tau_grid(RunConfig(tau_count=3, tau_stop=100, tau_scale="log", tau_start=1))
    assert np.allclose(log, [1, 10, 100])


def test_every_row_satisfies_the_restrictions(capsys):
    code, out, _ = run(capsys, "work2", "--sz0", "-0.5", "--tau-count", "400")
    assert code == 0
    assert column(out, "slack1").min() >= -1e-12
    assert column(out, "slack2").min() >= -1e-12
    assert np.all(column(out, "eta") <= column(out, "carnot") + 1e-12)


def test_echo_table_without_disorder_matches_single_spin(capsys):
    _, out, _ = run(capsys, "echo3", "--tau-count", "20", "--eps", "0.5", "--sz0", "-0.6")
    header, _ = table(out)
    assert "W_pi" in header and "w_two_pulse" in header
    from spinwork import KernelSet, Ohmic, SystemConfig, parse_pulse, work_echo
    cfg = SystemConfig(0.5, KernelSet(Ohmic(1.0, 1.0), 10.0), -0.6)
    tau = column(out, "tau")
    ref = work_echo(cfg, parse_pulse("rot:90:y"), parse_pulse("rot:90:x"), tau)
    assert np.allclose(column(out, "W"), ref.total, rtol=1e-15, atol=0)


def test_disordered_two_pulse_column_stays_positive(capsys):
    code, out, _ = run(capsys, "echo3", "--omega0", "8", "--disorder-var", "100", "--ts", "1000",
                       "--gamma", "0.1", "--T", "10", "--pulse1", "rot:90:x", "--pulse2", "rot:-90:y",
                       "--tau-start", "1", "--tau-stop", "20", "--tau-count", "50")
    assert code == 0
    assert column(out, "w_two_pulse").min() >= -1e-10


def test_presets_are_registered():
    assert sorted(PRESETS) == [f"fig{i}" for i in range(1, 7)]
    with pytest.raises(InvalidInput):
        run_preset("fig7")


def test_preset_output_is_byte_identical_across_processes(capsys):
    _, first, _ = run(capsys, "preset", "fig3", "--tau-count", "200")
    _, again, _ = run(capsys, "preset", "fig3", "--tau-count", "200")
    proc = subprocess.run([sys.executable, "-m", "spinwork", "preset", "fig3", "--tau-count", "200"],
                          capture_output=True, check=True)
    assert first == again
    assert proc.stdout == first.encode()


def test_optimizer_beats_baseline_and_dense_grid():
    cfg = RunConfig(sz0=-0.8, restarts=1, max_iter=600)
    base, tau_only, full = optimize(cfg)
    assert full.work <= tau_only.work <= base.work
    dense = tau_grid(RunConfig(tau_count=10_000, tau_stop=20.0))
    from spinwork import KernelSet, Ohmic, SystemConfig, parse_pulse, work_two_pulse
    sys_ = SystemConfig(0.01, KernelSet(Ohmic(1.0, 1.0), 10.0), -0.8)
    grid = work_two_pulse(sys_, parse_pulse("rot:90:y"), parse_pulse("rot:90:x"), dense).total
    assert tau_only.work <= grid.min() + 1e-12
    assert tau_only.extraction


def test_optimizer_is_deterministic():
    cfg = RunConfig(sz0=-0.5, restarts=2, max_iter=300, seed=7)
    assert optimize(cfg) == optimize(cfg)


def test_no_extraction_at_equal_temperatures(capsys):
    code, out, err = run(capsys, "optimize", "--T", "1", "--ts", "1", "--eps", "0.5",
                         "--restarts", "1", "--max-iter", "300")
    assert code == 0
    assert "no extraction found" in err
    assert column(out, "extraction").max() == 0
    assert column(out, "W").min() >= -1e-12


def test_oracle_verify_small_bath(capsys):
    code, out, _ = run(capsys, "oracle-verify", *SMALL_BATH)
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") > 20


def test_oracle_verify_reports_strict_failures(capsys):
    code, out, _ = run(capsys, "oracle-verify", *SMALL_BATH, "--tol", "1e-300")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("flag", [["--modes", "0.3-1"], ["--modes", "0.3:1", "--cutoffs", "x"],
                                  ["--modes", "0.3:1", "--cutoffs", "3"]])
def test_oracle_verify_bad_input(capsys, flag):
    assert run(capsys, "oracle-verify", "--no-trend", *flag)[0] == 2
