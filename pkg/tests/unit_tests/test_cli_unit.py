import math
import pytest
from qisim.cli import EXIT_CONFIG, EXIT_OK, main
from qisim.csv_io import read_csv
from qisim.harness import TRAJECTORY_COLUMNS


def test_validate_prints_derived_quantities(capsys):
    """Tests validate on the default scenario reports K = 42"""
    assert main(["validate"]) == EXIT_OK
    output = capsys.readouterr().out
    assert "K = 42" in output
    assert "C_p = " in output
    assert "QCB = " in output


def test_validate_rejects_out_of_range_override():
    assert main(["validate", "--eta", "1.5"]) == EXIT_CONFIG


def test_config_file_error_exit_code(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("N_S = 1e-4\nbogus = 1\n", encoding="utf-8")
    assert main(["validate", "--config", str(config)]) == EXIT_CONFIG


def test_bounds_writes_table(tmp_path):
    out = tmp_path / "bounds.csv"
    assert main(["bounds", "--out", str(out)]) == EXIT_OK
    comments, rows = read_csv(out)
    assert list(rows[0]) == ["bound", "p_err", "exponent"]
    assert {row["bound"] for row in rows} == {"helstrom", "qcb", "homodyne", "opa", "kennedy"}
    assert comments == ["M=10000000"]


def test_trajectory_mode_writes_every_cycle(tmp_path):
    out = tmp_path / "trajectory.csv"
    assert main(["run", "--mode", "trajectory", "--seed", "3", "--out", str(out)]) == EXIT_OK
    _, rows = read_csv(out)
    assert tuple(rows[0]) == TRAJECTORY_COLUMNS
    assert len(rows) == 42


def test_fock_mode_writes_one_file_per_pair_count(tmp_path):
    """Tests figS1 appends the pair count to the output stem"""
    config = tmp_path / "fock.cfg"
    config.write_text(
        "mode = figS1\nfock_pairs = 1\nfock_truncations = 4\nfock_samples = 11\n",
        encoding="utf-8",
    )
    out = tmp_path / "s1.csv"
    assert main(["run", "--config", str(config), "--out", str(out)]) == EXIT_OK
    written = tmp_path / "s1_M1.csv"
    assert written.exists()
    _, rows = read_csv(written)
    assert len(rows) == 11


def test_fig2b_run(tmp_path):
    config = tmp_path / "fig2b.cfg"
    config.write_text("N_S_values = 1e-4\nreceivers = sfg\n", encoding="utf-8")
    out = tmp_path / "fig2b.csv"
    argv = ["run", "--config", str(config), "--mode", "fig2b", "--qcb", "0.1"]
    assert main([*argv, "--trials", "100", "--out", str(out)]) == EXIT_OK
    comments, rows = read_csv(out)
    assert len(rows) == 1
    assert float(rows[0]["N_S"]) == pytest.approx(1e-4)
    assert int(rows[0]["M"]) == round(20.0 * math.log(5.0) / 1e-6)
    assert "ratio_sfg" in rows[0]
    assert "trials=100" in comments
